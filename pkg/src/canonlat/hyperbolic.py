"""Hyperbolic extensions: the tubular model W-tilde and the generic construction."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import linalg as la
from .braid import Reflections
from .errors import (IsotropicVector, NotInRadical, NotNested, NotTubular,
                     NotVInvariant)
from .group import GroupElem, MatrixElem, fix_codim, roots_up_to_depth
from .lattice import CanonicalLattice, build_lattice, radical
from .quotient import build_quotient, is_quotient_root
from .symbol import TUBULAR, classify, epsilon_one_equivalent


class HypElem(MatrixElem):
    """Element of W-tilde, a rational matrix on the model basis (arms, alpha_0, a, a')."""

    @property
    def model(self) -> "HyperbolicModel":
        return self.owner

    def is_isometry(self) -> bool:
        Bt = self.model.Btilde
        return la.matmul(la.matmul(la.transpose(self.mat), Bt), self.mat) == Bt


@dataclass(frozen=True, eq=False)
class HyperbolicModel:
    lat: CanonicalLattice
    dim: int
    basis: tuple[str, ...]
    Btilde: la.Matrix
    P: la.Matrix       # lattice coordinates -> (Gamma_o, a) coordinates
    Pinv: la.Matrix

    @property
    def n(self) -> int:
        return self.lat.n

    @property
    def a(self) -> tuple[int, ...]:
        return tuple(1 if k == self.n - 1 else 0 for k in range(self.dim))

    @property
    def aprime(self) -> tuple[int, ...]:
        return tuple(1 if k == self.n else 0 for k in range(self.dim))

    def embed(self, x: Sequence) -> tuple:
        """iota: lattice coordinates into model coordinates."""
        return la.matvec(self.P, x) + (0,)

    def form(self, x: Sequence, y: Sequence):
        return la.bilinear(x, self.Btilde, y)

    def identity(self) -> HypElem:
        return HypElem(la.identity(self.dim), self)

    def lift(self, root: Sequence[int]) -> HypElem:
        return hyp_reflection(self, self.embed(root))

    def reflections(self) -> Reflections:
        return Reflections(self.lat, self.lift, self.identity())

    @property
    def p(self) -> int:
        return lcm(*self.lat.symbol.p)


def build_hyperbolic(lat: CanonicalLattice) -> HyperbolicModel:
    if classify(lat.symbol).klass != TUBULAR:
        raise NotTubular(f"{lat.symbol} is not tubular")
    if lat.symbol.epsilon != 1:
        lat = build_lattice(epsilon_one_equivalent(lat.symbol))
    q = build_quotient(lat)
    n = lat.n
    P, Pinv = q.change_of_basis, q.change_inverse
    top = la.matmul(la.matmul(la.transpose(Pinv), lat.B), Pinv)
    Bt = [list(row) + [0] for row in top] + [[0] * (n + 1)]
    Bt[n - 1][n] = Bt[n][n - 1] = 1
    names = tuple(b.label for b in lat.basis[:n - 1]) + ("a", "a'")
    model = HyperbolicModel(lat, n + 1, names, la.as_matrix(Bt), P, Pinv)
    rad = la.nullspace(model.Btilde)
    assert len(rad) == 1, "radical of the extended form is not one-dimensional"
    b = radical(lat).b
    assert la.rank([rad[0], model.embed(b)]) == 1, "radical is not spanned by b"
    return model


def hyp_reflection(model: HyperbolicModel, v: Sequence) -> HypElem:
    v = la.tidy_vec(v)
    q = model.form(v, v)
    if q == 0:
        raise IsotropicVector(f"{v} is isotropic")
    coeff = [Fraction(2 * x, 1) / q for x in la.matvec(model.Btilde, v)]
    d = model.dim
    mat = tuple(tuple(la._tidy((1 if r == k else 0) - coeff[k] * v[r]) for k in range(d))
                for r in range(d))
    return HypElem(mat, model)


def expected_coxeter_aprime(model: HyperbolicModel) -> tuple:
    """a' + (2/(alpha_0, alpha_0)) (alpha_0 - a + sum e_i alpha_(i,j))."""
    lat = model.lat
    x = [0] * lat.n
    x[lat.i0] = 1
    for i, _, k in lat.arm_slots():
        x[k] = lat.symbol.e[i - 1]
    v = la.vsub(model.embed(x), model.a)
    c = Fraction(2, lat.B[lat.i0][lat.i0])
    return la.vadd(model.aprime, la.vscale(c, v))


def hyp_coxeter(model: HyperbolicModel) -> HypElem:
    c = model.identity()
    for v in model.lat.simple_roots():
        c = c * model.lift(v)
    assert c.apply(model.aprime) == expected_coxeter_aprime(model), "c~(a') formula failed"
    return c


def project_to_W(model: HyperbolicModel, g: HypElem) -> GroupElem:
    n = model.n
    if any(g.mat[n][j] != 0 for j in range(n)):
        raise NotVInvariant("element does not preserve V")
    block = tuple(row[:n] for row in g.mat[:n])
    mat = la.matmul(la.matmul(model.Pinv, block), model.P)
    return GroupElem(mat, model.lat)


# -- central extension ------------------------------------------------------------

def _quotient_roots(model: HyperbolicModel, depth: int = 3) -> list[tuple[int, ...]]:
    """Real roots with no a-component, i.e. the embedded roots of W_o."""
    lat = model.lat
    q = build_quotient(lat)
    out = []
    for r in roots_up_to_depth(lat, depth):
        y = q.to_new(r.vec)
        if y[-1] == 0 and is_quotient_root(q, y[:-1]):
            out.append(r.vec)
    return out


def _as_power(model: HyperbolicModel, w: HypElem, N: la.Matrix) -> int | None:
    """k with w = I + kN (= (c~^p)^k), or None."""
    diff = la.sub(w.mat, la.identity(model.dim))
    k = None
    for r in range(model.dim):
        for c in range(model.dim):
            if N[r][c] != 0:
                cand = Fraction(diff[r][c]) / N[r][c]
                if k is None:
                    k = cand
                elif cand != k:
                    return None
            elif diff[r][c] != 0:
                return None
    if k is None or k.denominator != 1:
        return None
    return int(k)


def _element_order(g: GroupElem, bound: int = 12) -> int | None:
    x = g
    for k in range(1, bound + 1):
        if x.is_identity():
            return k
        x = x * g
    return None


def lifted_relators(model: HyperbolicModel, rng: random.Random, count: int = 24) -> list[HypElem]:
    """Elements of W~ whose image in W is trivial, built from relations of W.

    Families: c~^p itself, finite-order relators (s~_i s~_j)^m, shifted
    reflection pairs s~_b s~_(b+ka) against powers of s~_b s~_(b+a),
    commutators of such translations, and p lifted Coxeter factorizations.
    """
    from .braid import hurwitz_orbit, standard_factorization

    lat = model.lat
    ct = hyp_coxeter(model)
    p = model.p
    a = lat.a
    out = [ct ** p]
    simple = lat.simple_roots()
    for i in range(lat.n):
        for j in range(i + 1, lat.n):
            si, sj = model.lift(simple[i]), model.lift(simple[j])
            m = _element_order(project_to_W(model, si * sj))
            if m is not None:
                out.append((si * sj) ** m)
    qroots = _quotient_roots(model)
    for _ in range(count):
        b, g = rng.choice(qroots), rng.choice(qroots)
        k = rng.choice((-2, -1, 2, 3))
        tb = model.lift(b) * model.lift(la.vadd(b, a))
        tg = model.lift(g) * model.lift(la.vadd(g, a))
        shifted = model.lift(b) * model.lift(la.vadd(b, la.vscale(k, a)))
        out.append(shifted * tb ** (-k))
        out.append(tb * tg * tb.inverse() * tg.inverse())
    hyp = model.reflections()
    members, _ = hurwitz_orbit(standard_factorization(lat, hyp), 2)
    for _ in range(max(1, count // 4)):
        w = model.identity()
        for _ in range(p):
            w = w * hyp.product(rng.choice(members).refls)
        out.append(w)
    return out


def central_extension_report(model: HyperbolicModel, samples: int = 200, seed: int = 0) -> dict:
    rng = random.Random(seed)
    p = model.p
    ct = hyp_coxeter(model)
    u = ct ** p
    simples = [model.lift(v) for v in model.lat.simple_roots()]
    I = model.identity()
    N = la.sub(u.mat, I.mat)
    commutes = all(u * s == s * u for s in simples)
    nontrivial = not u.is_identity()
    projects = project_to_W(model, u).is_identity()

    relators = lifted_relators(model, rng)
    kernel_ok = True
    powers: set[int] = set()
    for _ in range(samples):
        w = I
        for _ in range(rng.randint(1, 3)):
            r = rng.choice(relators)
            if rng.random() < 0.5:
                r = r.inverse()
            conj = I
            for _ in range(rng.randrange(5)):
                conj = conj * rng.choice(simples)
            w = w * conj * r * conj.inverse()
        if not project_to_W(model, w).is_identity():
            kernel_ok = False
            continue
        k = _as_power(model, w, N)
        # matching the a'-column alone would already pin k; the full matrix is compared
        if k is None or w.apply(model.aprime) != (u ** k).apply(model.aprime):
            kernel_ok = False
        else:
            powers.add(k)
    return {
        "p": p,
        "central": commutes,
        "nontrivial": nontrivial,
        "projects_to_identity": projects,
        "kernel_samples": samples,
        "kernel_in_cyclic_subgroup": kernel_ok,
        "kernel_powers_seen": sorted(powers),
        "ctilde_p_aprime_column": [la.fmt_number(x) for x in u.apply(model.aprime)],
        "passed": commutes and nontrivial and projects and kernel_ok,
    }


def _inverse_word(model: HyperbolicModel, roots: list) -> HypElem:
    # reflections are involutions, so the inverse of s_1 s_2 is s_2 s_1
    out = model.identity()
    for r in reversed(roots):
        out = out * model.lift(r)
    return out


def length_certificate(model: HyperbolicModel, ks: Sequence[int] = range(-3, 4)) -> dict:
    """Exact certificate that the reflection length of c~ and of c equals n.

    With N = c~^p - I: N^2 = 0 and N commuting with c~ force
    Fix(c~^(1+pk)) = Fix(c~) for every integer k, so no lift of c has a
    fixed space of codimension n-2 or less.
    """
    n = model.n
    ct = hyp_coxeter(model)
    p = model.p
    u = ct ** p
    N = la.sub(u.mat, la.identity(model.dim))
    nil = la.is_zero(la.matmul(N, N)) and not la.is_zero(N)
    comm = la.matmul(N, ct.mat) == la.matmul(ct.mat, N)
    codim = fix_codim(ct)
    parity_ok = ct.det() == (-1) ** n
    samples = {k: fix_codim(ct ** (1 + p * k)) for k in ks}
    c = project_to_W(model, ct)
    c_codim = fix_codim(c)
    c_parity = c.det() == (-1) ** n
    lifts_ok = nil and comm and p >= 2 and all(v == n - 1 for v in samples.values())
    ok_tilde = codim == n - 1 and parity_ok
    ok_c = ok_tilde and lifts_ok and c_codim == n - 2 and c_parity
    return {
        "fix_dim_ctilde": model.dim - codim,
        "codim_ctilde": codim,
        "unipotent_square_zero": nil,
        "commutes": comm,
        "lift_codims": {str(k): v for k, v in samples.items()},
        "codim_c": c_codim,
        "ell_Ttilde_ctilde": n if ok_tilde else None,
        "ell_T_c": n if ok_c else None,
    }


# -- generic extensions ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GenericExtension:
    inner_dim: int
    B_in: la.Matrix
    G_basis: tuple[tuple, ...]
    H_basis: tuple[tuple, ...]
    v_basis: tuple[tuple, ...]
    ext_dim: int
    B_ext: la.Matrix
    inclusion: la.Matrix
    duals: tuple[tuple, ...]

    @property
    def m(self) -> int:
        return len(self.H_basis)

    def include(self, x: Sequence) -> tuple:
        return la.matvec(self.inclusion, x)


def _independent_extension(start: list, pool: Sequence, target: int) -> list:
    out = list(start)
    for v in pool:
        if len(out) >= target:
            break
        if la.rank(out + [v]) > len(out):
            out.append(v)
    return out


def extend_generic(B_in: Sequence[Sequence], G_basis: Sequence[Sequence] = ()) -> GenericExtension:
    """Hyperbolic extension of (V, B_in) with respect to G, built from an explicit Gram
    matrix and then recovered by the three-step basis completion.
    """
    B = la.as_matrix(B_in)
    n = len(B)
    G = [la.tidy_vec(g) for g in G_basis]
    for g in G:
        if not la.is_zero([la.matvec(B, g)]):
            raise NotInRadical(f"{g} is not in the radical")
    G = _independent_extension([], G, len(G))
    rad = la.nullspace(B, n)
    H = _independent_extension(G, rad, len(rad))[len(G):]
    m = len(H)
    Hp = list(G)
    for e in la.identity(n):
        if len(Hp) == n - m:
            break
        if la.rank(Hp + H + [e]) > len(Hp) + len(H):
            Hp.append(e)
    v_basis = [la.tidy_vec(v) for v in Hp + H]
    Vb = la.transpose(v_basis)  # columns are the v_i in standard coordinates
    gram_hp = tuple(tuple(la.bilinear(x, B, y) for y in Hp) for x in Hp)

    # explicit Gram matrix in the basis (v_1..v_n, v'_1..v'_m)
    k = n - m
    L = [[0] * (n + m) for _ in range(n + m)]
    for i in range(k):
        for j in range(k):
            L[i][j] = gram_hp[i][j]
    for j in range(m):
        L[k + j][n + j] = L[n + j][k + j] = 1
    L = la.as_matrix(L)

    # Ambient coordinates (e_1..e_n, w_1..w_m) with w_j = v'_j + offset_j, so the
    # completion below has real work to do.
    offsets = [tuple(1 if (r + j) % 2 == 0 else 0 for r in range(n)) for j in range(m)]
    S = [[0] * (n + m) for _ in range(n + m)]
    for r in range(n):
        for c in range(n):
            S[r][c] = Vb[r][c]
        for j in range(m):
            S[r][n + j] = -offsets[j][r]
    for j in range(m):
        S[n + j][n + j] = 1
    Sinv = la.inverse(S)
    BE = la.matmul(la.matmul(la.transpose(Sinv), L), Sinv)
    assert tuple(row[:n] for row in BE[:n]) == B, "ambient form does not restrict to B"

    duals = _complete_basis(BE, n, Hp, H)
    cols = [tuple(v) + (0,) * m for v in v_basis] + duals
    C = la.transpose(cols)
    assert la.matmul(la.matmul(la.transpose(C), BE), C) == L, "block form not reached"
    Cinv = la.inverse(C)
    inclusion = tuple(row[:n] for row in Cinv)
    ext = GenericExtension(n, B, tuple(G), tuple(H), tuple(v_basis), n + m, L, inclusion,
                           tuple(tuple(1 if r == n + j else 0 for r in range(n + m))
                                 for j in range(m)))
    _check_extension(ext)
    return ext


def _complete_basis(BE: la.Matrix, n: int, Hp: list, H: list) -> list[tuple]:
    """Dual vectors v'_j for the radical complement H, in ambient coordinates."""
    m = len(H)
    if m == 0:
        return []
    pad = lambda v: tuple(v) + (0,) * m  # noqa: E731
    form = lambda x, y: la.bilinear(x, BE, y)  # noqa: E731
    hp_amb = [pad(v) for v in Hp]
    h_amb = [pad(v) for v in H]
    v4 = [tuple(1 if r == n + j else 0 for r in range(n + m)) for j in range(m)]
    gram = tuple(tuple(form(x, y) for y in hp_amb) for x in hp_amb)
    d, Pc = la.congruence_diagonal(gram) if gram else ([], ())
    tilde = [la.tidy_vec(la.vecmat(row, hp_amb)) for row in Pc]
    v3 = []
    for w in v4:
        x = w
        for di, tv in zip(d, tilde):
            if di != 0:
                x = la.vsub(x, la.vscale(Fraction(form(tv, w)) / di, tv))
        v3.append(x)
    Pm = tuple(tuple(form(h, x) for x in v3) for h in h_amb)
    Pm_inv = la.inverse(Pm)
    u = [la.tidy_vec(la.vecmat(col, v3)) for col in la.transpose(Pm_inv)]
    Q = [[form(x, y) for y in u] for x in u]
    out = []
    for j in range(m):
        v = u[j]
        for l in range(m):
            v = la.vsub(v, la.vscale(Fraction(Q[l][j], 2), h_amb[l]))
        out.append(la.tidy_vec(v))
    return out


def _check_extension(ext: GenericExtension) -> None:
    incl = ext.inclusion
    back = la.matmul(la.matmul(la.transpose(incl), ext.B_ext), incl)
    assert back == ext.B_in, "extension does not restrict to B"
    rad = la.nullspace(ext.B_ext, ext.ext_dim)
    images = [ext.include(g) for g in ext.G_basis]
    assert len(rad) == len(images)
    if images:
        assert la.rank(list(rad) + images) == len(images), "radical differs from iota(G)"


def model_as_extension(model: HyperbolicModel) -> GenericExtension:
    """The tubular model viewed as an extension with G = <b> and complement <a>."""
    lat = model.lat
    n = lat.n
    b = la.primitive(radical(lat).b)
    v_basis = tuple(tuple(col) for col in la.transpose(model.Pinv))
    inclusion = tuple(model.P) + ((0,) * n,)
    ext = GenericExtension(n, lat.B, (b,), (lat.a,), v_basis, n + 1, model.Btilde,
                           inclusion, (model.aprime,))
    _check_extension(ext)
    return ext


def extension_mono(ext_G: GenericExtension, ext_H: GenericExtension) -> la.Matrix:
    """phi: V~_G -> V~_H with B~_G = B~_H(phi, phi) and phi iota_G = iota_H (needs H in G)."""
    if ext_G.B_in != ext_H.B_in:
        raise NotNested("extensions of different forms")
    G, H = list(ext_G.G_basis), list(ext_H.G_basis)
    if H and la.rank(G + H) != la.rank(G):
        raise NotNested("H is not contained in G")
    n = ext_G.inner_dim
    std = la.identity(n)
    # pairings of iota_H(V) with a candidate image y, one row per standard vector
    rows = [la.vecmat(ext_H.include(e), ext_H.B_ext) for e in std]
    partners = []
    for dv in ext_G.duals:
        rhs = [la.bilinear(ext_G.include(e), ext_G.B_ext, dv) for e in std]
        y0 = la.solve(rows, rhs)
        if y0 is None:
            raise NotNested("no dual partner available in the target")
        partners.append(y0)
    # iota_H(h_l) pairs trivially with iota_H(V) and as delta with the partners,
    # so subtracting half the Gram matrix makes the partners isotropic
    Q = [[la.bilinear(x, ext_H.B_ext, y) for y in partners] for x in partners]
    fixed = []
    for j, y in enumerate(partners):
        for l, h in enumerate(ext_G.H_basis):
            y = la.vsub(y, la.vscale(Fraction(Q[l][j], 2), ext_H.include(h)))
        fixed.append(la.tidy_vec(y))
    source = la.transpose([ext_G.include(v) for v in ext_G.v_basis] + list(ext_G.duals))
    target = la.transpose([ext_H.include(v) for v in ext_G.v_basis] + fixed)
    phi = la.matmul(target, la.inverse(source))
    assert la.rank(phi) == ext_G.ext_dim, "phi is not injective"
    assert la.matmul(la.matmul(la.transpose(phi), ext_H.B_ext), phi) == ext_G.B_ext
    assert la.matmul(phi, ext_G.inclusion) == ext_H.inclusion
    return phi
