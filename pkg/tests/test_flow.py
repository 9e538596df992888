import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeleta.errors import InputError, OnSingularLocus, SingularCrossing
from skeleta.flow import (FlowParams, PhasePoint, count_flow_intersections, distance_sq_stratum,
                          energy_drift, field_on_stratum, flow_battery, hamiltonian_field, integrate_orbit,
                          is_singular, kinetic_energy, lperp, nearest_strata, orbit_margin, point_complex,
                          project_to_stratum, singular_margin)
from skeleta.simplicial import Face, SimplicialComplex, full_simplex

K1 = point_complex()
P = FlowParams()
coords = st.floats(-3, 3, allow_nan=False)


def pt(x, y):
    return PhasePoint(np.atleast_1d(x), np.atleast_1d(y))


def test_params_validated():
    with pytest.raises(InputError):
        FlowParams(epsilon=0)
    with pytest.raises(InputError):
        PhasePoint([1.0], [1.0, 2.0])
    with pytest.raises(InputError):
        PhasePoint([np.nan], [0.0])


@pytest.mark.parametrize("p,sigma,d", [
    (pt(1, 1), Face.of(1), 1.0),
    (pt(1, 1), Face(), 1.0),
    (pt(0, -2), Face.of(1), 4.0),
    (pt(0, 3), Face.of(1), 0.0),
    (pt(-2, 0), Face(), 0.0),
])
def test_distances(p, sigma, d):
    assert distance_sq_stratum(p, sigma) == pytest.approx(d)


def test_kinetic_energy_and_ties():
    assert kinetic_energy(pt(0.3, 0.1), K1) == (pytest.approx(0.005), Face())
    assert nearest_strata(pt(1, 1), K1) == [Face(), Face.of(1)]
    assert is_singular(pt(1, 1), K1)
    with pytest.raises(OnSingularLocus):
        hamiltonian_field(pt(1, 1), K1)


def test_tie_at_origin_is_not_singular():
    # both strata pass through the origin: nearest points coincide
    assert singular_margin(pt(0, 0), K1) == np.inf
    assert not is_singular(pt(0, 0.5), K1)


@given(coords, coords)
@settings(max_examples=100, deadline=None)
def test_projection_is_nearest(x, y):
    p = pt(x, y)
    for sigma in K1.faces:
        q = project_to_stratum(p, sigma)
        assert distance_sq_stratum(q, sigma) == 0
        assert np.sum((p.vector() - q.vector()) ** 2) == pytest.approx(distance_sq_stratum(p, sigma))


@given(st.lists(coords, min_size=4, max_size=4))
@settings(max_examples=100, deadline=None)
def test_field_is_symplectic_gradient(v):
    # away from the singular locus and with y >= 0 on the nearest face,
    # the field equals (dH/dy, -dH/dx) for H = kinetic energy
    K = full_simplex(2)
    p = PhasePoint(v[:2], v[2:])
    H, sigma = kinetic_energy(p, K)
    if singular_margin(p, K) < 1e-3 or any(p.y[i - 1] < 0.05 for i in sigma):
        return
    h = 1e-6
    grad = np.zeros(4)
    for k in range(4):
        e = np.zeros(4)
        e[k] = h
        grad[k] = (kinetic_energy(p + e, K)[0] - kinetic_energy(p + (-e), K)[0]) / (2 * h)
    expect = np.concatenate([grad[2:], -grad[:2]])
    assert np.allclose(field_on_stratum(p, sigma), expect, atol=1e-5)


def test_skeleton_points_are_fixed():
    for p in [pt(2, 0), pt(-1, 0), pt(0, 1.5)]:
        assert np.allclose(hamiltonian_field(p, K1), 0)


def test_singular_crossing_time():
    # start in the {1} region at (0.2, 1): y' = -w x, tie with the zero section when y = x
    p = pt(0.2, 1.0)
    for method in ("rk4", "exact"):
        with pytest.raises(SingularCrossing) as info:
            integrate_orbit(p, K1, P, 5.0, method=method)
        assert info.value.time == pytest.approx(0.8 / (P.w * 0.2), abs=1e-6)
        orb = integrate_orbit(p, K1, P, 5.0, method=method, on_singular="continue")
        assert len(orb.crossings) == 1
        assert orb.point().x[0] == pytest.approx(0.2 + 4.0 * 0.2 * P.w)


@given(st.floats(0.1, 2), st.floats(-0.5, 0.5), st.floats(0.1, 3))
@settings(max_examples=40, deadline=None)
def test_exact_and_rk4_agree(x, y, T):
    p = pt(x, y)
    if is_singular(p, K1, 1e-3):
        return
    ea = integrate_orbit(p, K1, P, T, method="exact", on_singular="continue")
    eb = integrate_orbit(p, K1, P, T, method="rk4", on_singular="continue")
    a, b = ea.point().vector(), eb.point().vector()
    if not ea.crossings:
        assert not eb.crossings
        assert np.allclose(a, b, atol=1e-6)
    else:
        # the field jumps across Sing, so a fixed step is only first-order accurate there
        assert np.allclose(ea.crossings, eb.crossings, atol=1e-6)
        assert np.allclose(a, b, atol=10 * P.w * P.dt)


def test_energy_and_margin_on_transversal():
    orb = integrate_orbit(pt(1.0, 0.3), K1, P, 10.0)
    assert energy_drift(orb, K1) < 1e-9
    assert orbit_margin(orb, K1) > P.tol
    csv = orb.to_csv().splitlines()
    assert csv[0] == "t,x1,y1" and len(csv) == orb.t.size + 1


def test_lperp():
    sigma, free = lperp(pt(1.0, 0.0), K1)
    assert sigma == Face() and free.tolist() == [False, True]
    sigma, free = lperp(pt(0.0, 1.0), K1)
    assert sigma == Face.of(1) and free.tolist() == [True, False]


def test_counts():
    assert count_flow_intersections(pt(1, 0), pt(-1, 0), K1, P) == 1
    assert count_flow_intersections(pt(-1, 0), pt(1, 0), K1, P) == 0
    K2 = full_simplex(2)
    assert count_flow_intersections(PhasePoint([1, 1], [0, 0]), PhasePoint([-1, -1], [0, 0]), K2, P, grid=49) == 1


def test_battery_flags_small_w():
    rep = flow_battery(FlowParams(epsilon=0.5, w=1.0), grid=41, horizon=5.0)
    assert not rep.passed
    assert rep.failures()[0].key == "w >= 2/epsilon"


def test_empty_complex_flow_is_linear():
    K = SimplicialComplex.from_facets(1, [], vertex_complete=False)
    orb = integrate_orbit(pt(0.0, 1.0), K, P, 2.0)
    assert orb.point().x[0] == pytest.approx(2.0 * P.w)
