"""
Wrapped flow on the point complex
=================================

n = 1 and K = {∅, {1}}: the skeleton is the real line together with the
upper half of the fibre over 0.  We push transversals with the flow of the
kinetic energy and count where they land.
"""

from skeleta.errors import SingularCrossing
from skeleta.flow import (FlowParams, PhasePoint, count_flow_intersections, energy_drift, flow_battery,
                          integrate_orbit, kinetic_energy, orbit_margin, point_complex)

K = point_complex()
params = FlowParams(epsilon=0.5, w=4.0)

# Energy and nearest stratum at a few points.
for x, y in [(0.3, 0.1), (0.1, 0.8), (-2.0, 0.0)]:
    print((x, y), kinetic_energy(PhasePoint([x], [y]), K))

# A transversal through (1, 0) never meets the singular locus.
orb = integrate_orbit(PhasePoint([1.0], [0.3]), K, params, 50.0, record=100)
print("margin", orbit_margin(orb, K), "drift", energy_drift(orb, K))

# Starting above the fibre, the orbit runs into Sing at t = 0.8 / (w * 0.2) = 1.
try:
    integrate_orbit(PhasePoint([0.2], [1.0]), K, params, 5.0, method="exact")
except SingularCrossing as exc:
    print("singular crossing at", exc.time)

# One intersection in the forward order, none in the reverse order.
fwd = count_flow_intersections(PhasePoint([1.0], [0.0]), PhasePoint([-1.0], [0.0]), K, params)
rev = count_flow_intersections(PhasePoint([-1.0], [0.0]), PhasePoint([1.0], [0.0]), K, params)
print("counts", fwd, rev)

print(flow_battery(params).to_tsv())

# first rows of the sampled orbit as CSV
print("\n".join(orb.to_csv().splitlines()[:5]))
