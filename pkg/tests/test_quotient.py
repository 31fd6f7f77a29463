import pytest
from hypothesis import given, settings, strategies as st

from canonlat import linalg as la
from canonlat.errors import MixedSigns, NotBlockTriangular, NotDecomposable
from canonlat.group import MatrixElem, reflection, roots_up_to_depth
from canonlat.lattice import build_lattice
from canonlat.quotient import (NEGATIVE, POSITIVE, build_quotient, decompose_root, project,
                               projection_formula_holds, quotient_reflection, quotient_root_sign,
                               to_dot)
from canonlat.symbol import Symbol

LATS = [build_lattice(Symbol.make(p)) for p in [(2,), (2, 2, 2, 2), (3, 3)]]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LATS), st.data())
def test_projection_is_a_homomorphism(lat, data):
    q = build_quotient(lat)
    refl = [reflection(lat, v) for v in lat.simple_roots()]
    g = data.draw(st.sampled_from(refl)) * data.draw(st.sampled_from(refl))
    h = data.draw(st.sampled_from(refl))
    assert project(q, g * h) == la.matmul(project(q, g), project(q, h))


def test_simple_reflections_project_to_quotient_reflections():
    for lat in LATS:
        q = build_quotient(lat)
        for k in range(q.m):
            e = tuple(1 if i == k else 0 for i in range(q.m))
            assert project(q, reflection(lat, lat.unit(k))) == quotient_reflection(q, e)
        assert project(q, reflection(lat, lat.unit(lat.i0))) == project(q, reflection(lat, lat.unit(lat.i0s)))


def test_non_block_triangular_rejected():
    lat = LATS[0]
    q = build_quotient(lat)
    with pytest.raises(NotBlockTriangular):
        project(q, MatrixElem(((0, 0, 1), (0, 1, 0), (1, 0, 0)), lat))


@pytest.mark.parametrize("lat", LATS)
def test_roots_decompose_and_formula(lat):
    q = build_quotient(lat)
    roots = list(roots_up_to_depth(lat, 3))
    for r in roots:
        dec = decompose_root(q, r.vec)
        assert dec.d == 1
    for b in roots[:15]:
        for g in roots[:15]:
            assert projection_formula_holds(q, b.vec, g.vec)


def test_decompose_rejects_non_root():
    q = build_quotient(LATS[0])
    with pytest.raises(NotDecomposable):
        decompose_root(q, (2, 0, 0))


def test_signs():
    q = build_quotient(LATS[0])
    assert quotient_root_sign(q, (1, 2)) == POSITIVE
    assert quotient_root_sign(q, (0, -1)) == NEGATIVE
    with pytest.raises(MixedSigns):
        quotient_root_sign(q, (1, -1))


def test_dot_output():
    dot = to_dot(LATS[0], quotient=True)
    assert dot.startswith("graph quotient {")
    assert 'v0 -- v1 [label="(1,1)"]' in dot
    assert dot.count("label=") == 3
