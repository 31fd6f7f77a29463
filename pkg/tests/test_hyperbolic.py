import pytest

from canonlat import linalg as la
from canonlat.errors import NotNested, NotTubular
from canonlat.group import fix_codim
from canonlat.hyperbolic import (build_hyperbolic, central_extension_report,
                                 expected_coxeter_aprime, extend_generic, extension_mono,
                                 hyp_coxeter, length_certificate, model_as_extension,
                                 project_to_W)
from canonlat.lattice import build_lattice, coxeter_element
from canonlat.symbol import TUBULAR_EPS1, TUBULAR_EPS2, Symbol

D4T = build_lattice(Symbol.make((2, 2, 2, 2)))
E6T = build_lattice(Symbol.make((3, 3, 3)))


@pytest.mark.parametrize("lat", [D4T, E6T])
def test_model_basics(lat):
    model = build_hyperbolic(lat)
    assert len(la.nullspace(model.Btilde)) == 1
    ct = hyp_coxeter(model)
    assert ct.apply(model.aprime) == expected_coxeter_aprime(model)
    assert project_to_W(model, ct) == coxeter_element(lat)
    assert fix_codim(ct) == lat.n - 1


def test_not_tubular():
    with pytest.raises(NotTubular):
        build_hyperbolic(build_lattice(Symbol.make((2,))))


@pytest.mark.parametrize("row", TUBULAR_EPS1[:8] + TUBULAR_EPS2, ids=lambda r: r.name)
def test_central_extension_and_length(row):
    model = build_hyperbolic(build_lattice(row.symbol()))
    rep = central_extension_report(model, samples=30, seed=3)
    assert rep["passed"]
    cert = length_certificate(model)
    assert cert["fix_dim_ctilde"] == 2
    assert cert["unipotent_square_zero"]
    assert cert["ell_Ttilde_ctilde"] == cert["ell_T_c"] == model.n


def test_report_is_seeded():
    model = build_hyperbolic(D4T)
    assert central_extension_report(model, 20, 5) == central_extension_report(model, 20, 5)


def test_generic_extension_and_mono():
    model = build_hyperbolic(D4T)
    ext = model_as_extension(model)
    gen = extend_generic(D4T.B)
    assert gen.m == 2
    # the model keeps b in the radical, the generic extension kills the whole radical
    phi = extension_mono(ext, gen)
    assert len(phi) == gen.ext_dim and len(phi[0]) == ext.ext_dim
    for x in D4T.simple_roots():
        assert la.matvec(phi, ext.include(x)) == gen.include(x)
    assert la.matmul(la.matmul(la.transpose(phi), gen.B_ext), phi) == ext.B_ext
    assert la.rank(phi) == ext.ext_dim


def test_mono_needs_nesting():
    ext = model_as_extension(build_hyperbolic(D4T))
    with pytest.raises(NotNested):
        extension_mono(extend_generic(D4T.B), ext)
