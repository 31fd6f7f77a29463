import pytest
from hypothesis import given, settings, strategies as st

from canonlat import factorization_lab as fl
from canonlat.errors import IsotropicGamma, PreconditionViolated
from canonlat.group import roots_up_to_depth
from canonlat.hyperbolic import build_hyperbolic, hyp_coxeter
from canonlat.lattice import build_lattice, coxeter_element
from canonlat.symbol import Symbol

A2 = build_lattice(Symbol.make((2,)))
D4T = build_lattice(Symbol.make((2, 2, 2, 2)))
F4T = build_lattice(Symbol.make((3, 3), (1, 2), (1, 1), kappa=2))


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([A2, D4T, F4T]), st.data())
def test_radical_shift_identity(lat, data):
    pool = [r.vec for r in roots_up_to_depth(lat, 2)]
    k = data.draw(st.integers(1, 4))
    gammas = [data.draw(st.sampled_from(pool)) for _ in range(k)]
    ms = [data.draw(st.integers(-3, 3)) for _ in range(k)]
    x = tuple(data.draw(st.integers(-3, 3)) for _ in range(lat.n))
    assert fl.radical_shift_check(lat, gammas, ms, x)


def test_isotropic_gamma_rejected():
    with pytest.raises(IsotropicGamma):
        fl.radical_shift_check(A2, [A2.a], [1], (1, 0, 0))


def test_standard_tuple_gives_c():
    for lat in (A2, D4T):
        st_ = fl.ShiftedTuple.standard(lat)
        assert fl.build_t(lat, st_) == coxeter_element(lat)
        assert fl.factorization_condition(lat, st_, crosscheck=True)
    model = build_hyperbolic(D4T)
    assert fl.build_t(model, fl.ShiftedTuple.standard(D4T)) == hyp_coxeter(model)


def test_precondition_beta_in_gamma_o():
    with pytest.raises(PreconditionViolated):
        fl.build_t(A2, fl.ShiftedTuple(A2.unit(2), (0, 0, 1)))


def test_epsilon_two_requires_switch():
    lat = build_lattice(Symbol.make((2, 2), (1, 1), (1, 1), epsilon=2))
    with pytest.raises(PreconditionViolated):
        fl.build_t(lat, fl.ShiftedTuple.standard(lat))
    assert fl.working_lattice(lat).symbol.epsilon == 1


def test_grid_a2():
    g = fl.condition_grid(A2)
    assert (g.points, g.solutions, g.agree) == (375, 8, True)
    assert not g.conclusion_failures


def test_grid_tubular_model():
    g = fl.condition_grid(build_hyperbolic(D4T))
    assert g.agree and g.solutions == 64 and not g.conclusion_failures


def test_kill_arms():
    lat = build_lattice(Symbol.make((3, 3)))
    beta = (0, 0, 1, 1, 1, 0)
    word = fl.kill_arms(lat, beta)
    assert word == ((1, 1), (1, 2))
    assert fl.apply_arm_word(lat, word, beta) == lat.unit(lat.i0)
    for r in roots_up_to_depth(A2, 4):
        v = fl.kill_arms_eligible(A2, r.vec)
        if v:
            assert fl.apply_arm_word(A2, fl.kill_arms(A2, v), v) == A2.unit(A2.i0)


def test_divisibility_small():
    rep = fl.divisibility_report(F4T, roots_up_to_depth(F4T, 4), 4)
    assert rep["failures"] == [] and rep["checked"] > 0
    assert rep["class_components"] == [["(1,1)", "0", "0*"], ["(2,1)"]]


def test_sampler_is_deterministic():
    assert fl.radical_shift_samples(A2, 20, 3, seed=1) == (20, 20)
