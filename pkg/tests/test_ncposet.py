import pytest

from canonlat import ncposet as nc
from canonlat.braid import apply_word, standard_factorization
from canonlat.errors import AxiomViolated, NotExceptional
from canonlat.lattice import build_lattice, coxeter_element
from canonlat.symbol import Symbol

A2 = build_lattice(Symbol.make((2,)))
A3 = build_lattice(Symbol.make((2, 2)))


def test_synthetic_passes():
    rep = nc.check_axioms(nc.synthetic_datum())
    assert rep.c2_cases > 0


def test_violator_witness():
    with pytest.raises(AxiomViolated) as exc:
        nc.check_axioms(nc.synthetic_violator())
    assert exc.value.axiom == "C2"
    assert exc.value.witness == ((1, 2), (2,), 1)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_cyclic_theta(m):
    E, F, rot_e, rot_f = nc.cyclic_datum(m)
    rep = nc.build_theta(E, F, lambda x: x + 100, rot_e, rot_f)
    assert rep.order_pairs == len(rep.target.pairs)
    assert len(set(rep.theta.values())) == len(rep.theta)
    with pytest.raises(AxiomViolated):
        nc.build_theta(E, F, lambda x: 100, rot_e, rot_f)


def test_theta_against_cox_map():
    rep = nc.lattice_theta(A2, 3)
    assert rep["passed"] and rep["cox_map_compared"] == 93


def test_cox_map_rejects_non_exceptional():
    with pytest.raises(NotExceptional):
        nc.cox_map(A2, [A2.unit(2), A2.unit(0)])
    assert nc.cox_map(A2, A2.simple_roots()) == coxeter_element(A2)


def test_enumerate_counts_and_grading():
    elems, poset = nc.nc_enumerate(standard_factorization(A2), 4)
    assert len(elems) == 35
    assert sorted({e.length for e in elems}) == [0, 1, 2, 3]
    for i, j in poset.pairs:
        assert elems[i].length <= elems[j].length


def test_prefix_change():
    f = apply_word(standard_factorization(A3), [(1, 1), (3, -1)])
    for i in range(1, 4):
        for d in (1, -1):
            assert nc.hurwitz_prefix_change(f, i, d)


def test_summary_and_exports():
    s = nc.poset_summary(A3, standard_factorization(A3), 2)
    assert s["bottom_below_all"] and s["top_above_all"] and s["grading_conflicts"] == 0
    _, poset = nc.nc_enumerate(standard_factorization(A2), 2)
    assert poset.to_dot().startswith("digraph nc {")
    assert nc.dump_json(poset.to_json()) == nc.dump_json(poset.to_json())
