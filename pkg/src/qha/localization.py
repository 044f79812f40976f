"""Weight supports, the categories C_w, C_{*,v}, C_{w,v}, localized classes and
the braider ``M(w lam, v lam) o N -> N o M(w lam, v lam)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .cartan import CartanDatum, Weight, WeylElement, block_swap, perm_lexmin_word
from .conv import (convolve, convolve_morphisms, extend_from_generators, nested_basis,
                   nested_generator, shuffle_character)
from .crystal import q_kernel
from .detmod import detmod_pair, gen_detmod
from .homs import GradedMorphism, hom_space
from .linalg import ONE, ZERO, Echelon, qq
from .modules import GradedModule, ModuleError, QCharacter
from .rmatrix import braider_eval, is_scalar_identity, unmixed_r


# -- weight supports ----------------------------------------------------------------

@dataclass(frozen=True)
class WeightSets:
    gW: frozenset
    gWstar: frozenset


def weight_sets(M: GradedModule) -> WeightSets:
    """``gW(M)`` and ``gW*(M)`` read off the idempotent words carried by ``M``."""
    hit = getattr(M, "_weight_sets", None)
    if hit is not None:
        return hit
    cartan = M.cartan
    left, right = set(), set()
    n = M.n
    for word in M.character.words():
        for k in range(n + 1):
            left.add(cartan.root_of_word(word[:k]))
            right.add(cartan.root_of_word(word[n - k:]))
    out = WeightSets(frozenset(left), frozenset(right))
    M._weight_sets = out
    return out


# -- roots ------------------------------------------------------------------------

def _support_connected(cartan: CartanDatum, beta: Weight) -> bool:
    supp = [cartan.labels[p] for p, a in enumerate(beta.root) if a]
    if not supp:
        return False
    seen = {supp[0]}
    stack = [supp[0]]
    while stack:
        i = stack.pop()
        for j in supp:
            if j not in seen and cartan.a(i, j) != 0:
                seen.add(j)
                stack.append(j)
    return len(seen) == len(supp)


def root_kind(cartan: CartanDatum, beta: Weight) -> str | None:
    """``"real"``, ``"imaginary"`` or ``None`` for a positive element of the root lattice.

    Positive real roots reflect down to a simple root; positive imaginary roots
    reflect into the anti-dominant elements with connected support.
    """
    if not beta.is_positive or beta.is_zero():
        return None
    while True:
        if beta.ht == 1:
            return "real"
        up = [i for i in cartan.labels if cartan.pair(i, beta) > 0]
        if not up:
            return "imaginary" if _support_connected(cartan, beta) else None
        beta = cartan.reflect(up[0], beta)
        if not beta.is_positive or beta.is_zero():
            return None


def is_root(cartan: CartanDatum, beta: Weight) -> bool:
    return root_kind(cartan, beta) is not None


def is_finite_type(cartan: CartanDatum) -> bool:
    """Positive definiteness of the symmetrized Cartan matrix (all pivots positive)."""
    n = cartan.rank
    B = [[qq(cartan.ip(i, j)) for j in cartan.labels] for i in cartan.labels]
    for k in range(n):
        if B[k][k] <= 0:
            return False
        for r in range(k + 1, n):
            f = B[r][k] / B[k][k]
            for c in range(k, n):
                B[r][c] -= f * B[k][c]
    return True


def roots_below(cartan: CartanDatum, beta: Weight) -> list[Weight]:
    """Positive roots ``gamma`` with ``gamma <= beta`` coordinatewise."""
    out = []
    bound = beta.root

    def rec(p, acc):
        if p == len(bound):
            g = Weight(tuple(acc), (0,) * len(bound))
            if is_root(cartan, g):
                out.append(g)
            return
        for a in range(bound[p] + 1):
            rec(p + 1, acc + [a])

    rec(0, [])
    return out


def finite_positive_roots(cartan: CartanDatum) -> list[Weight]:
    """All positive roots of a finite type datum, by reflecting the simple roots."""
    if not is_finite_type(cartan):
        raise ValueError("infinitely many roots")
    seen = {cartan.alpha(i) for i in cartan.labels}
    stack = list(seen)
    while stack:
        b = stack.pop()
        for i in cartan.labels:
            c = cartan.reflect(i, b)
            if c.is_positive and c not in seen:
                seen.add(c)
                stack.append(c)
    return sorted(seen, key=lambda r: (r.ht, r.root))


def in_cone(target: Weight, gens: list[Weight]) -> bool:
    """Exact membership of ``target`` in the cone spanned over the non-negative reals.

    By Caratheodory it suffices to try linearly independent subsets; their
    coefficients are rational.
    """
    if target.is_zero():
        return True
    gens = list(dict.fromkeys(gens))
    dim = len(target.root)
    for r in range(1, min(dim, len(gens)) + 1):
        for sub in combinations(gens, r):
            sol = _solve_exact(sub, target)
            if sol is not None and all(c >= 0 for c in sol):
                return True
    return False


def _solve_exact(vectors, target: Weight):
    """Unique solution of ``sum c_k v_k = target`` for independent ``v_k``, else ``None``."""
    n = len(target.root)
    r = len(vectors)
    rows = [[qq(v.root[p]) for v in vectors] + [qq(target.root[p])] for p in range(n)]
    piv_rows = []
    row = 0
    for col in range(r):
        sel = next((k for k in range(row, n) if rows[k][col] != 0), None)
        if sel is None:
            return None
        rows[row], rows[sel] = rows[sel], rows[row]
        inv = ONE / rows[row][col]
        rows[row] = [a * inv for a in rows[row]]
        for k in range(n):
            if k != row and rows[k][col] != 0:
                f = rows[k][col]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[row])]
        piv_rows.append(row)
        row += 1
    if any(rows[k][r] != 0 for k in range(row, n)):
        return None
    return [rows[k][r] for k in piv_rows]


# -- category membership --------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    in_Cw: bool
    in_Cstar_v: bool
    in_Cwv: bool


class MembershipError(RuntimeError):
    """Root criterion and cone test disagree."""


def in_Cw(M: GradedModule, w: WeylElement) -> bool:
    """``gW(M) cap Delta_+ subset w Delta_-``, cross-checked by exact cone membership
    over the inversion roots of ``w``."""
    cartan = M.cartan
    winv = w.inverse()
    ws = weight_sets(M).gW
    crit = all(not winv.act(g).is_positive for g in ws if is_root(cartan, g))
    gens = w.inversion_roots()
    cone = all(in_cone(g, gens) for g in ws)
    if crit != cone:
        raise MembershipError(f"C_w tests disagree for {w}: roots={crit}, cone={cone}")
    return crit


def in_Cstar_v(M: GradedModule, v: WeylElement) -> bool:
    """``gW*(M) cap Delta_+ subset v Delta_+``.

    The cone over ``Delta_+ cap v Delta_+`` uses every positive root in finite
    type; otherwise only the roots below ``beta``, so it can only confirm.
    """
    cartan = M.cartan
    vinv = v.inverse()
    ws = weight_sets(M).gWstar
    crit = all(vinv.act(g).is_positive for g in ws if is_root(cartan, g))
    finite = is_finite_type(cartan)
    pool = finite_positive_roots(cartan) if finite else roots_below(cartan, M.beta)
    gens = [g for g in pool if vinv.act(g).is_positive]
    cone = all(in_cone(g, gens) for g in ws)
    if cone and not crit or (crit and not cone and finite):
        raise MembershipError(f"C_*,v tests disagree for {v}: roots={crit}, cone={cone}")
    return crit


def category_membership(M: GradedModule, w: WeylElement, v: WeylElement) -> Membership:
    a = in_Cw(M, w)
    b = in_Cstar_v(M, v)
    return Membership(a, b, a and b)


# -- localized classes ------------------------------------------------------------------

def _fund_vector(cartan: CartanDatum, alpha) -> Weight:
    if isinstance(alpha, Weight):
        return alpha
    return cartan.weight(fund=dict(alpha))


@dataclass(frozen=True)
class LocalizationData:
    """The tables attached to the family ``C_i = M(w Lambda_i, v Lambda_i)``."""

    w: WeylElement
    v: WeylElement

    @property
    def cartan(self) -> CartanDatum:
        return self.w.cartan

    def H(self, a: Weight, b: Weight) -> int:
        """``H(Lambda, Lambda') = (v Lambda, w Lambda' - v Lambda')``."""
        return self.cartan.form(self.v.act(a), self.w.act(b) - self.v.act(b))

    def lam(self, a: Weight) -> Weight:
        """The braider weight ``w Lambda - v Lambda``."""
        return self.w.act(a) - self.v.act(a)

    def phi(self, a: Weight, mu: Weight) -> int:
        """Braider shift ``phi_a(mu) = (w Lambda + v Lambda, mu)`` at a root-lattice weight ``mu``."""
        return self.cartan.form(self.w.act(a) + self.v.act(a), mu)

    def H_table(self) -> dict:
        c = self.cartan
        return {(i, j): self.H(c.fundamental(i), c.fundamental(j)) for i in c.labels for j in c.labels}

    def phi_table(self) -> dict:
        """``phi_i(lam_j)``."""
        c = self.cartan
        return {(i, j): self.phi(c.fundamental(i), self.lam(c.fundamental(j)))
                for i in c.labels for j in c.labels}


@dataclass(frozen=True)
class LocalizedClass:
    """``q^shift (X, exponent)`` with ``X`` a simple of weight ``wt``."""

    character: QCharacter
    wt: Weight
    exponent: Weight
    shift: int
    data: LocalizationData = field(compare=False)

    def weight(self) -> Weight:
        return self.wt + self.data.lam(self.exponent)


def loc_class(M: GradedModule, alpha, w: WeylElement, v: WeylElement | None = None, shift: int = 0) -> LocalizedClass:
    cartan = M.cartan
    v = v or cartan.weyl()
    return LocalizedClass(M.character, M.wt, _fund_vector(cartan, alpha), shift, LocalizationData(w, v))


def loc_tensor(a: LocalizedClass, b: LocalizedClass) -> LocalizedClass:
    """``(X, al) (x) (Y, be) = q^{-phi(be, wt X) + H(al, be)} (X o Y, al + be)``."""
    d = a.data
    s = a.shift + b.shift - d.phi(b.exponent, a.wt) + d.H(a.exponent, b.exponent)
    ch = shuffle_character(d.cartan, a.character, b.character)
    return LocalizedClass(ch, a.wt + b.wt, a.exponent + b.exponent, s, d)


def loc_unit(qtable, alpha, w: WeylElement, v: WeylElement | None = None) -> LocalizedClass:
    from .modules import unit_module
    return loc_class(unit_module(qtable), alpha, w, v)


def _dominant_shift(cartan: CartanDatum, *exps: Weight) -> Weight:
    lo = [min(0, *(e.fund[p] for e in exps)) for p in range(cartan.rank)]
    return cartan.weight(fund={cartan.labels[p]: -lo[p] for p in range(cartan.rank)})


def _C(qtable, data: LocalizationData, Lam: Weight) -> GradedModule:
    if data.v.length == 0:
        return gen_detmod(qtable, data.w, Lam)
    return detmod_pair(qtable, data.w, data.v, Lam)


def loc_equal(a: LocalizedClass, b: LocalizedClass, qtable) -> bool:
    """``q^{H(Lam, mu)} C_{Lam+mu} o S`` against ``q^{H(Lam', mu)} C_{Lam'+mu} o S'``,
    compared as exact q-characters for a ``mu`` making both exponents dominant."""
    d = a.data
    if a.weight() != b.weight():
        return False
    mu = _dominant_shift(d.cartan, a.exponent, b.exponent)

    def side(c: LocalizedClass) -> QCharacter:
        Cm = _C(qtable, d, c.exponent + mu)
        ch = shuffle_character(d.cartan, Cm.character, c.character)
        return ch.shift(c.shift + d.H(c.exponent, mu))

    return side(a) == side(b)


# -- the braider M(w lam, v lam) o N -> N o M(w lam, v lam) ------------------------------

@dataclass
class BraiderWV:
    morphism: GradedMorphism
    expected_degree: int
    R: GradedMorphism
    parts: dict = field(default_factory=dict, repr=False)


class BraiderError(RuntimeError):
    """The tensor factor ``M(v lam, lam)`` could not be split off."""


_PI_CACHE: dict = {}


def _projection(A: GradedModule, B: GradedModule, C: GradedModule) -> tuple[GradedModule, GradedMorphism]:
    """The surjection ``A o B -> C``."""
    key = (id(A), id(B), id(C))
    hit = _PI_CACHE.get(key)
    if hit is not None:
        return hit[0], hit[1]
    AB = convolve(A, B)
    pis = [f for f in hom_space(AB, C) if f.rank() == C.dim]
    if len(pis) != 1:
        raise BraiderError(f"{len(pis)} surjections onto M(w lam, lam)")
    pi = pis[0].normalized()
    _PI_CACHE[key] = (AB, pi, A, B, C)
    return AB, pi


def _acc(out: dict, c, vec: dict):
    for i, d in vec.items():
        s = out.get(i, ZERO) + c * d
        if s:
            out[i] = s
        else:
            out.pop(i, None)


def braider_wv(N: GradedModule, w: WeylElement, v: WeylElement, lam: Weight, check: bool = True) -> BraiderWV:
    """``M(w lam, v lam) o N -> q^{-(w lam + v lam, gamma)} N o M(w lam, v lam)`` for
    a simple ``N`` of weight ``-gamma`` in ``C_{*,v}``.

    ``R_{M(w lam, lam)}(N)`` is restricted to the sector where the last
    ``ht(lam - v lam)`` strands carry ``M(v lam, lam)``, and that tensor factor is
    split off by solving a linear system.
    """
    q = N.q
    cartan = N.cartan
    if check and not in_Cstar_v(N, v):
        raise ModuleError("N is not in C_{*,v}")
    C = gen_detmod(q, w, lam)
    A = detmod_pair(q, w, v, lam)
    B = gen_detmod(q, v, lam)
    gamma = N.beta
    expected = cartan.form(w.act(lam) + v.act(lam), gamma)
    R = braider_eval(C, N) if C.n == 0 else braider_eval(C, N, phi=-cartan.form(w.act(lam) + lam, gamma))
    if A.n == 0:
        # M(w lam, w lam) is the unit: identity, with the shift recorded in meta only
        AN, NA = convolve(A, N), convolve(N, A)
        psi = GradedMorphism(AN, NA, {j: {j: ONE} for j in range(AN.dim)}, 0)
        psi.meta["phi"] = -expected
        return BraiderWV(psi, expected, R, {"A": A, "B": B, "C": C})
    AN, NA = convolve(A, N), convolve(N, A)
    CN, NC = R.source, R.target
    AB, pi = _projection(A, B, C)

    def pi_vec(iA, iB):
        return pi.matrix.get(nested_generator(AB, 2, (iA, iB)), {})

    # (a o n) (x) b -> tau_{shifted w[., .]} (pi(a (x) b) (x) n) in C o N
    sh = tuple(("t", l + A.n) for l in perm_lexmin_word(block_swap(B.n, N.n)))

    def phi1(j, iB):
        letters, (iA, iN) = an_basis[j]
        out: dict = {}
        for p, c in pi_vec(iA, iB).items():
            _acc(out, c, {nested_generator(CN, 2, (p, iN)): ONE})
        return CN.act_word(letters + sh, out) if out else {}

    def phi2(j, iB):
        letters, (iN, iA) = na_basis[j]
        out: dict = {}
        for p, c in pi_vec(iA, iB).items():
            _acc(out, c, {nested_generator(NC, 2, (iN, p)): ONE})
        return NC.act_word(letters, out) if out else {}

    an_basis, na_basis = nested_basis(AN, 2), nested_basis(NA, 2)
    ech: dict = {}
    for j in range(NA.dim):
        for iB in range(B.dim):
            img = phi2(j, iB)
            if not img:
                raise BraiderError("the restriction to N o M(w lam, lam) is not injective")
            e = ech.setdefault(NC.basis[next(iter(img))], Echelon(track=True))
            if not e.add(img, tag=(j, iB)):
                raise BraiderError("the restriction to N o M(w lam, lam) is not injective")

    def solve(z: dict) -> dict:
        if not z:
            return {}
        e = ech.get(NC.basis[next(iter(z))])
        res, combo = e.reduce(z) if e is not None else (z, {})
        if res:
            raise BraiderError("R does not preserve the M(v lam, lam) sector")
        return combo

    mat: dict = {}
    for j in range(AN.dim):
        for iB in range(B.dim):
            combo = solve(R.apply(phi1(j, iB)))
            col: dict = {}
            for (jy, b), c in combo.items():
                if b != iB:
                    raise BraiderError("the solution is not of the form psi (x) id")
                col[jy] = c
            if iB == 0:
                if col:
                    mat[j] = col
            elif col != mat.get(j, {}):
                raise BraiderError("the solution depends on the M(v lam, lam) factor")
    psi = GradedMorphism(AN, NA, mat, expected)
    psi.meta["phi"] = -expected
    if not psi.is_zero():
        if not psi.is_homogeneous():
            raise BraiderError(f"the solution is not homogeneous of degree {expected}")
        if not psi.commutes():
            raise BraiderError("the solution is not a module map")
    return BraiderWV(psi, expected, R, {"A": A, "B": B, "C": C, "pi": pi, "AB": AB})


def diagram_commutes(res: BraiderWV, N: GradedModule) -> bool:
    """Both routes ``(M(w lam, v lam) o N) o M(v lam, lam) -> N o M(w lam, lam)`` agree:
    ``R o (pi o N) o (A o r_{N,B})`` against ``(N o pi) o (psi o B)``."""
    from .rmatrix import swap_step
    A, B, C, pi, AB = (res.parts[k] for k in ("A", "B", "C", "pi", "AB"))
    P = convolve(convolve(A, N), B)
    mods = [A, N, B]
    g1, T1, order = swap_step(P, [0, 1, 2], 1, mods, rXY=unmixed_r(N, B))
    idN = GradedMorphism(N, N, {j: {j: ONE} for j in range(N.dim)}, 0)
    g2 = convolve_morphisms(pi, idN)
    # T1 = (A o B) o N has the basis of g2's source
    g2 = GradedMorphism(T1, g2.target, g2.matrix, g2.degree)
    route1 = res.R.compose(g2.compose(g1))
    idB = GradedMorphism(B, B, {j: {j: ONE} for j in range(B.dim)}, 0)
    h1 = convolve_morphisms(res.morphism, idB)
    h1 = GradedMorphism(P, h1.target, h1.matrix, h1.degree)
    NC = res.R.target

    def images(gens):
        iN, iA, iB = gens
        out: dict = {}
        for p, c in pi.matrix.get(nested_generator(AB, 2, (iA, iB)), {}).items():
            _acc(out, c, {nested_generator(NC, 2, (iN, p)): ONE})
        return out

    h2 = extend_from_generators(h1.target, 3, NC, images, pi.degree)
    route2 = h2.compose(h1)
    return _same_matrix(route1.matrix, route2.matrix)


def _same_matrix(a: dict, b: dict) -> bool:
    clean = lambda m: {j: {i: c for i, c in col.items() if c} for j, col in m.items() if any(col.values())}
    return clean(a) == clean(b)


# -- real commuting family --------------------------------------------------------------

@dataclass
class FamilyReport:
    w: WeylElement
    v: WeylElement
    self_scalar: dict
    pair_scalar: dict
    phi_conditions: dict

    @property
    def ok(self) -> bool:
        return all(self.self_scalar.values()) and all(self.pair_scalar.values()) and all(self.phi_conditions.values())


def commuting_family(qtable, w: WeylElement, v: WeylElement, labels=None) -> FamilyReport:
    """The axioms of a real commuting family of graded braiders for
    ``C_i = M(w Lambda_i, v Lambda_i)`` with the braiders built by :func:`braider_wv`."""
    cartan = qtable.cartan
    labels = list(labels) if labels is not None else list(cartan.labels)
    data = LocalizationData(w, v)
    Cs = {i: detmod_pair(qtable, w, v, cartan.fundamental(i)) for i in labels}
    psis = {}
    for i in labels:
        for j in labels:
            psis[i, j] = braider_wv(Cs[j], w, v, cartan.fundamental(i))
    self_scalar = {i: is_scalar_identity(psis[i, i].morphism) for i in labels}
    pair_scalar = {}
    for i in labels:
        for j in labels:
            # R_{C_j}(C_i) o R_{C_i}(C_j) on C_i o C_j
            comp = psis[j, i].morphism.compose(psis[i, j].morphism)
            comp = GradedMorphism(psis[i, j].morphism.source, psis[j, i].morphism.target,
                                  comp.matrix, comp.degree)
            pair_scalar[i, j] = is_scalar_identity(comp)
    phi = {}
    for i in labels:
        Li = cartan.fundamental(i)
        phi[i, i] = data.phi(Li, data.lam(Li)) == 0
        for j in labels:
            Lj = cartan.fundamental(j)
            phi[i, j] = data.phi(Li, data.lam(Lj)) + data.phi(Lj, data.lam(Li)) == 0
    return FamilyReport(w, v, self_scalar, pair_scalar, phi)


# -- kernel coherence ----------------------------------------------------------------------

def braider_vanishes(X: GradedModule, w: WeylElement, lams) -> bool | None:
    """Whether ``R_{C_lam}(X) = 0`` for some ``lam`` among ``lams``; ``None`` if none vanish."""
    cartan = X.cartan
    for lam in lams:
        C = gen_detmod(X.q, w, lam)
        R = braider_eval(C, X, phi=-cartan.form(w.act(lam) + lam, X.beta))
        if R.is_zero():
            return True
    return None


def kernel_coherent(X: GradedModule, w: WeylElement, lams) -> str:
    """``"agree"``, ``"contradiction"`` or ``"inconclusive"`` for the vanishing of some
    ``R_{C_lam}(X)`` against :func:`q_kernel`."""
    van = braider_vanishes(X, w, lams)
    ker = q_kernel(X, w)
    if van:
        return "agree" if ker else "contradiction"
    return "inconclusive" if ker else "agree"


__all__ = ["WeightSets", "weight_sets", "root_kind", "is_root", "is_finite_type", "roots_below", "finite_positive_roots",
           "in_cone", "Membership", "MembershipError", "in_Cw", "in_Cstar_v", "category_membership",
           "LocalizationData", "LocalizedClass", "loc_class", "loc_tensor", "loc_unit", "loc_equal",
           "BraiderWV", "BraiderError", "braider_wv", "diagram_commutes", "FamilyReport",
           "commuting_family", "braider_vanishes", "kernel_coherent"]
