import random

import pytest
from hypothesis import strategies as st

from skeleta.simplicial import Face, SimplicialComplex, closure, enumerate_complexes


def punctured_plane() -> SimplicialComplex:
    return SimplicialComplex.from_facets(2, [[1], [2]])


@pytest.fixture
def pp():
    return punctured_plane()


@st.composite
def complexes(draw, max_n=3, vertex_complete=True):
    """Random complexes: closure of a few random faces, plus all vertices."""
    n = draw(st.integers(0, max_n))
    faces = draw(st.lists(st.sets(st.integers(1, n), max_size=n), max_size=4)) if n else []
    gens = [Face.from_iterable(f) for f in faces]
    if vertex_complete:
        gens += [Face.of(i) for i in range(1, n + 1)]
    return closure(gens, n, vertex_complete=vertex_complete)


def catalogue(nmax: int) -> list[SimplicialComplex]:
    return [K for n in range(nmax + 1) for K in enumerate_complexes(n)]


def random_complexes(n: int, count: int, seed: int = 0) -> list[SimplicialComplex]:
    rng = random.Random(seed)
    pool = enumerate_complexes(n)
    return [pool[i] for i in sorted(rng.sample(range(len(pool)), min(count, len(pool))))]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
