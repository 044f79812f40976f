"""Convolution products, heads, socles and simplicity."""
from __future__ import annotations

from itertools import combinations
from math import comb

from .cartan import act_on_word, coset_reps, coset_split, perm_lexmin_word
from .homs import GradedMorphism, Presentation, hom_space, presentation
from .linalg import ONE, Echelon, matvec
from .modules import (GradedModule, ModuleError, ResourceError, default_ht_cap, direct_sum,
                      dual, eps, normalize, one_dim_module, quotient, submodule, unit_module)
from .rewrite import straightener


def _tensor_apply(M: GradedModule, N: GradedModule, m: int, vword, a, iM: int, iN: int) -> dict:
    """``tau_v x^a`` (a block element) applied to ``e_iM (x) e_iN``."""
    vm: dict = {iM: ONE}
    vn: dict = {iN: ONE}
    for k, e in enumerate(a, 1):
        for _ in range(e):
            if k <= m:
                vm = matvec(M.x[k - 1], vm)
            else:
                vn = matvec(N.x[k - m - 1], vn)
    for j in reversed(vword):
        if j < m:
            vm = matvec(M.tau[j - 1], vm)
        else:
            vn = matvec(N.tau[j - m - 1], vn)
        if not vm or not vn:
            return {}
    if not vm or not vn:
        return {}
    return {(p, r): c * d for p, c in vm.items() for r, d in vn.items()}


_CONV_CACHE: dict = {}
_CONV_CACHE_LIMIT = 4096


def convolve(M: GradedModule, N: GradedModule, ht_cap: int | None = None) -> GradedModule:
    """``M o N`` on the shuffle basis ``tau_w (b_M (x) b_N)``, ``w`` in ``S_{m,n}``.

    Results are memoized on the identity of the factors.
    """
    cap = default_ht_cap() if ht_cap is None else ht_cap
    if M.n + N.n > cap:
        raise ResourceError(f"height {M.n + N.n} exceeds cap {cap}")
    key = (id(M), id(N))
    hit = _CONV_CACHE.get(key)
    if hit is not None and hit[1] is M and hit[2] is N:
        return hit[0]
    V = _convolve(M, N, cap)
    if len(_CONV_CACHE) >= _CONV_CACHE_LIMIT:
        _CONV_CACHE.clear()
    # factors are kept alive so ids stay unique
    _CONV_CACHE[key] = (V, M, N)
    return V


def _convolve(M: GradedModule, N: GradedModule, cap: int) -> GradedModule:
    if M.q != N.q:
        raise ModuleError("factors use different Q-tables")
    m, n = M.n, N.n
    reps = [c.perm for c in coset_reps(m, n)]
    rep_index = {w: t for t, w in enumerate(reps)}
    dM, dN = M.dim, N.dim
    size = len(reps) * dM * dN
    from .modules import DIM_CAP
    if size > DIM_CAP:
        raise ResourceError(f"dimension {size} exceeds cap {DIM_CAP}")
    st = straightener(M.q, m + n, m)

    def index(t, iM, iN):
        return (t * dM + iM) * dN + iN

    basis = []
    for w in reps:
        deg_w = {}
        for iM, (wm, dm) in enumerate(M.basis):
            for iN, (wn, dn) in enumerate(N.basis):
                nu = wm + wn
                dw = deg_w.get(nu)
                if dw is None:
                    dw = deg_w[nu] = st.tau_degree(st.target(w), nu)
                basis.append((act_on_word(w, nu), dw + dm + dn))
    zero = (0,) * (m + n)
    mats = {}
    for kind, k in [("x", k) for k in range(1, m + n + 1)] + [("t", l) for l in range(1, m + n)]:
        mat = {}
        for t, w in enumerate(reps):
            for iM, (wm, _) in enumerate(M.basis):
                for iN, (wn, _) in enumerate(N.basis):
                    nu = wm + wn
                    el = st.left_x(k, w, zero, nu) if kind == "x" else st.left_tau(k, w, zero, nu)
                    col: dict = {}
                    for (u, a), c in el.items():
                        cw, cv = coset_split(u, m)
                        img = _tensor_apply(M, N, m, perm_lexmin_word(cv), a, iM, iN)
                        base = rep_index[cw]
                        for (p, r), d in img.items():
                            key = index(base, p, r)
                            s = col.get(key, 0) + c * d
                            if s:
                                col[key] = s
                            else:
                                col.pop(key, None)
                    if col:
                        mat[index(t, iM, iN)] = col
        mats[(kind, k)] = mat
    x = [mats[("x", k)] for k in range(1, m + n + 1)]
    tau = [mats[("t", l)] for l in range(1, m + n)]
    name = f"({M.name})*({N.name})" if M.name and N.name else ""
    V = GradedModule(M.q, basis, x, tau, name=name)
    V.factors = (M, N)
    V.shuffle = (m, n)
    V.reps = reps
    # M (x) N is simple over R(beta) (x) R(gamma) for simple factors, so any vector generates
    if _known_simple(M) and _known_simple(N):
        V.generators = [{0: ONE}]
    return V


def shuffle_index(V: GradedModule, w: tuple, iM: int, iN: int) -> int:
    """Index of ``tau_w (b_iM (x) b_iN)`` in ``V = M o N``."""
    M, N = V.factors
    t = V.reps.index(w)
    return (t * M.dim + iM) * N.dim + iN


def nested_basis(P: GradedModule, depth: int) -> list[tuple[tuple, tuple]]:
    """For a left-nested product of ``depth`` factors, write each basis vector as
    ``tau-letters applied to b_{i_1} (x) ... (x) b_{i_depth}``."""
    if depth == 1:
        return [((), (j,)) for j in range(P.dim)]
    M, N = P.factors
    inner = nested_basis(M, depth - 1)
    out = []
    for w in P.reps:
        word = tuple(("t", l) for l in perm_lexmin_word(w))
        for letters, gens in inner:
            for iN in range(N.dim):
                out.append((word + letters, gens + (iN,)))
    return out


def nested_generator(P: GradedModule, depth: int, gens) -> int:
    """Index of ``b_{i_1} (x) ... (x) b_{i_depth}`` in a left-nested product."""
    if depth == 1:
        return gens[0]
    M, N = P.factors
    inner = nested_generator(M, depth - 1, gens[:-1])
    return inner * N.dim + gens[-1]


def nested_factors(P: GradedModule, depth: int) -> list[GradedModule]:
    if depth == 1:
        return [P]
    M, N = P.factors
    return nested_factors(M, depth - 1) + [N]


def extend_from_generators(P: GradedModule, depth: int, target: GradedModule, images, degree: int):
    """The module map ``P -> target`` with ``b_{i_1} (x) ... -> images(gens)``.

    Valid when ``images`` is linear over the tensor product of the factor algebras.
    """
    from .homs import GradedMorphism
    mat = {}
    for j, (letters, gens) in enumerate(nested_basis(P, depth)):
        v = images(gens)
        if v:
            v = target.act_word(letters, v)
        if v:
            mat[j] = v
    return GradedMorphism(P, target, mat, degree)


def convolve_morphisms(f, g) -> "GradedMorphism":
    """``f o g`` acting factorwise on ``M o N``."""
    from .homs import GradedMorphism
    P, T = convolve(f.source, g.source), convolve(f.target, g.target)
    Nt = g.target.dim

    def images(gens):
        a, b = f.matrix.get(gens[0], {}), g.matrix.get(gens[1], {})
        return {p * Nt + r: c * d for p, c in a.items() for r, d in b.items()}

    return extend_from_generators(P, 2, T, images, f.degree + g.degree)


def convolve_all(mods) -> GradedModule:
    out = mods[0]
    for X in mods[1:]:
        out = convolve(out, X)
    return out


def shuffle_character(cartan, chM, chN):
    """Character of ``M o N`` from the characters alone: each shuffle of the two
    words contributes ``q^{dM + dN + deg tau_w}``."""
    from collections import Counter

    from .modules import QCharacter
    out = Counter()
    cM, cN = chM.counter(), chN.counter()
    if not cM or not cN:
        return QCharacter.from_counter(out)
    m = len(next(iter(cM))[0])
    n = len(next(iter(cN))[0])
    for pos in combinations(range(m + n), m):
        rest = [k for k in range(m + n) if k not in pos]
        for (wm, dm), a in cM.items():
            for (wn, dn), b in cN.items():
                word = [None] * (m + n)
                for k, c in zip(pos, wm):
                    word[k] = c
                for k, c in zip(rest, wn):
                    word[k] = c
                # every (M-letter, N-letter) pair that crosses costs -(alpha, alpha')
                deg = dm + dn
                for a_idx, p in enumerate(pos):
                    for b_idx, r in enumerate(rest):
                        if r < p:
                            deg -= cartan.ip(wm[a_idx], wn[b_idx])
                out[(tuple(word), deg)] += a * b
    return QCharacter.from_counter(out)


def shuffle_dimension(m: int, n: int, dM: int, dN: int) -> int:
    return comb(m + n, m) * dM * dN


# -- simplicity bookkeeping ------------------------------------------------------

def _known_simple(M: GradedModule) -> bool:
    return getattr(M, "simple", None) is True


def mark_simple(M: GradedModule, real: bool | None = None) -> GradedModule:
    M.simple = True
    if real is not None:
        M.real = real
    return M


def simple_Ln(qtable, i: int, n: int) -> GradedModule:
    """``L(i^n) = q_i^{n(n-1)/2} L(i)^{o n}``, simple of dimension ``n!``."""
    if n == 0:
        return mark_simple(unit_module(qtable), real=True)
    L = mark_simple(one_dim_module(qtable, (i,)), real=True)
    V = L
    for _ in range(n - 1):
        V = convolve(V, L)
    d = qtable.cartan.sym[qtable.cartan.pos[i]]
    V = V.shift(d * n * (n - 1) // 2)
    V.name = f"L({i}^{n})" if n > 1 else f"L({i})"
    V.generators = [{0: ONE}]
    return mark_simple(V, real=True)


# -- r-matrices as heads ---------------------------------------------------------

def r_matrix(M: GradedModule, N: GradedModule) -> list[GradedMorphism]:
    """Basis of ``HOM(M o N, N o M)``."""
    V, W = convolve(M, N), convolve(N, M)
    return hom_space(V, W)


def image_module(f: GradedMorphism, name: str = "") -> GradedModule:
    vecs = f.image_vectors()
    if not vecs:
        raise ModuleError("zero morphism has no image")
    return submodule(f.target, vecs, name=name).shift(-f.degree)


def head_via_r(L: GradedModule, M: GradedModule, name: str = "") -> GradedModule:
    """``L nabla M`` as the image of the unique r-matrix (one factor real)."""
    if L.n == 0 or M.n == 0:
        return M if L.n == 0 else L
    rs = r_matrix(L, M)
    if len(rs) != 1:
        raise ModuleError(f"HOM(L o M, M o L) has dimension {len(rs)}")
    H = image_module(rs[0], name=name)
    H = normalize(H)
    H.generators = [{0: ONE}]
    return mark_simple(H)


def hconv(M: GradedModule, N: GradedModule) -> GradedModule:
    """``M nabla N`` for simple ``M``, ``N``."""
    if getattr(M, "real", None) or getattr(N, "real", None):
        return head_via_r(M, N)
    return head(convolve(M, N))


def is_real(M: GradedModule) -> bool:
    r = getattr(M, "real", None)
    if r is None:
        r = is_simple(convolve(M, M))
        M.real = r
    return r


# -- simplicity -------------------------------------------------------------------

def extremal_part(V: GradedModule, i: int, k: int, side: str = "left") -> GradedModule | None:
    """Joint kernel of the ``x``'s on the ``i^k`` end of ``e(i^k, *) V`` (or ``e(*, i^k) V``).

    On a simple module with ``eps_i = k`` this is ``E_i^{(k)}`` (resp. the
    starred version), the ``L(i^k)`` factor contributing its one-dimensional
    socle over the polynomial generators.
    """
    n = V.n
    if side == "left":
        idx = [j for j, (w, _) in enumerate(V.basis) if w[:k] == (i,) * k]
        xs = range(1, k + 1)
        lo, hi = k, n
    else:
        idx = [j for j, (w, _) in enumerate(V.basis) if w[n - k:] == (i,) * k]
        xs = range(n - k + 1, n + 1)
        lo, hi = 0, n - k
    if not idx:
        return None
    comps: dict = {}
    for j in idx:
        comps.setdefault(V.basis[j], []).append(j)
    from .linalg import rref_nullspace
    vecs = []
    for key, cols in comps.items():
        rows: dict = {}
        for kk in xs:
            for j in cols:
                for r, c in V.x[kk - 1].get(j, {}).items():
                    rows.setdefault((kk, r), {})[j] = c
        vecs.extend(rref_nullspace(list(rows.values()), cols))
    if not vecs:
        return None
    # the kernel is stable under the generators of the complementary block
    spaces: dict = {}
    keep = []
    for v in vecs:
        key = V.basis[next(iter(v))]
        if spaces.setdefault(key, Echelon(track=True)).add(v, tag=len(keep)):
            keep.append(v)
    letters = [("x", kk) for kk in range(lo + 1, hi + 1)] + [("t", l) for l in range(lo + 1, hi)]
    x, tau = [], []
    for kind, kk in letters:
        mat = {}
        for t, v in enumerate(keep):
            img = V.act(kind, kk, v)
            if not img:
                continue
            key = V.basis[next(iter(img))]
            res, combo = spaces[key].reduce(img) if key in spaces else (img, {})
            if res:
                raise ModuleError("extremal part is not stable")
            mat[t] = combo
        (x if kind == "x" else tau).append(mat)
    basis = []
    for v in keep:
        w, d = V.basis[next(iter(v))]
        basis.append((w[lo:hi], d))
    return GradedModule(V.q, basis, x, tau)


def is_simple(V: GradedModule, certify: bool = True) -> bool:
    """Recursive test: ``V`` is simple iff its extremal part ``Y`` is simple and
    ``V`` matches ``L(i^k) nabla Y`` (with an explicit isomorphism if ``certify``)."""
    flag = getattr(V, "simple", None)
    if flag is not None:
        return flag
    res = _is_simple(V, certify)
    V.simple = res
    return res


def _is_simple(V: GradedModule, certify: bool) -> bool:
    if V.n == 0:
        return V.dim == 1
    if V.n == 1:
        return V.dim == 1
    pres = Presentation(V, max_gens=1)
    if not pres.complete:
        return False
    V._presentation = pres
    i = V.basis[0][0][0]
    k = eps(V, i)
    Y = extremal_part(V, i, k)
    if Y is None or not is_simple(Y, certify):
        return False
    # e(i^k, *) V = L(i^k) (x) Y on a simple V
    sector = sum(1 for w, _ in V.basis if w[:k] == (i,) * k)
    if sector != _fact(k) * Y.dim:
        return False
    S = head_via_r(simple_Ln(V.q, i, k), Y) if Y.n else simple_Ln(V.q, i, k)
    a = S.character.shift_to(V.character)
    if a is None:
        return False
    if not certify:
        return True
    maps = hom_space(S, V, degrees=[a])
    return any(f.is_iso() for f in maps)


def _fact(k: int) -> int:
    out = 1
    for t in range(2, k + 1):
        out *= t
    return out


def strongly_commute(M: GradedModule, N: GradedModule) -> bool:
    return is_simple(convolve(M, N))


# -- heads and socles ---------------------------------------------------------------

def canonical_shift(M: GradedModule) -> GradedModule:
    from .modules import self_dual_shift
    s = self_dual_shift(M)
    if s is None:
        s = -min(d for _, d in M.basis)
    return M.shift(s)


def head(V: GradedModule) -> GradedModule:
    """``V / rad V``, in canonical shift."""
    if is_simple(V):
        return canonical_shift(V)
    fac = getattr(V, "factors", None)
    if fac is not None and all(_known_simple(X) for X in fac):
        if any(getattr(X, "real", None) for X in fac):
            return head_via_r(*fac)
    return canonical_shift(head_via_catalog(V))


def head_via_catalog(V: GradedModule) -> GradedModule:
    from .crystal import simples_of_weight
    pres = presentation(V)
    maps = []
    for S in simples_of_weight(V.q, V.beta):
        maps.extend(hom_space(V, S, pres=pres))
    if not maps:
        raise ModuleError("no simple quotient found")
    kernel = _common_kernel(V, maps)
    if not kernel:
        return V
    return quotient(V, kernel)


def simple_quotients(V: GradedModule) -> list[GradedModule]:
    """Distinct simple quotients of ``V`` (self-dual shifts)."""
    from .crystal import simples_of_weight
    pres = presentation(V)
    out = []
    for S in simples_of_weight(V.q, V.beta):
        if hom_space(V, S, pres=pres, stop_after=1):
            out.append(S)
    return out


def simple_submodules(V: GradedModule) -> list[GradedModule]:
    from .crystal import simples_of_weight
    out = []
    for S in simples_of_weight(V.q, V.beta):
        if hom_space(S, V, stop_after=1):
            out.append(S)
    return out


def _common_kernel(V: GradedModule, maps) -> list[dict]:
    from .linalg import rref_nullspace
    out = []
    for key, idx in V.components.items():
        rows = []
        for t, f in enumerate(maps):
            per: dict = {}
            for j in idx:
                for i, c in f.matrix.get(j, {}).items():
                    per.setdefault((t, i), {})[j] = c
            rows.extend(per.values())
        out.extend(rref_nullspace(rows, idx))
    return out


def socle(V: GradedModule) -> GradedModule:
    """Sum of the simple submodules of ``V``, as a submodule."""
    from .crystal import simples_of_weight
    vecs = []
    for S in simples_of_weight(V.q, V.beta):
        for f in hom_space(S, V):
            vecs.extend(f.image_vectors())
    if not vecs:
        raise ModuleError("empty socle")
    return submodule(V, vecs)


# -- the trace-form radical (small modules) --------------------------------------------

def action_algebra(V: GradedModule, cap: int = 4000) -> list[dict]:
    """Spanning set of the image of ``R(beta)`` in ``End(V)``, closed under products."""
    from .linalg import identity, matmul
    gens = [V.gen(kind, k) for kind, k in V.letters()]
    idem = {}
    for key, idx in V.components.items():
        idem.setdefault(key[0], []).extend(idx)
    start = [identity(idx) for idx in idem.values()]
    basis: list = []
    ech = Echelon()

    def flat(A):
        return {j * V.dim + i: c for j, col in A.items() for i, c in col.items()}

    queue = []
    for A in start:
        if ech.add(flat(A)):
            basis.append(A)
            queue.append(A)
    while queue:
        A = queue.pop()
        for g in gens:
            B = matmul(g, A)
            if B and ech.add(flat(B)):
                basis.append(B)
                queue.append(B)
                if len(basis) > cap:
                    raise ResourceError("action algebra too large for the trace-form radical")
    return basis


def trace_radical_module(V: GradedModule) -> list[dict]:
    """``rad(A) V`` via ``rad A = {a : tr(ab) = 0 for all b}`` (characteristic 0)."""
    from .linalg import matmul, rref_nullspace
    A = action_algebra(V)

    def tr(X):
        return sum((col.get(j, 0) for j, col in X.items()), 0)

    rows = []
    for b in A:
        rows.append({t: tr(matmul(a, b)) for t, a in enumerate(A)})
    rows = [{t: c for t, c in r.items() if c} for r in rows]
    coeffs = rref_nullspace(rows, list(range(len(A))))
    rad_vecs = []
    ech: dict = {}
    for z in coeffs:
        R: dict = {}
        for t, c in z.items():
            for j, col in A[t].items():
                tgt = R.setdefault(j, {})
                for i, d in col.items():
                    tgt[i] = tgt.get(i, 0) + c * d
        for j, col in R.items():
            v = {i: c for i, c in col.items() if c}
            if v:
                key = V.basis[next(iter(v))]
                if ech.setdefault(key, Echelon()).add(v):
                    rad_vecs.append(v)
    return rad_vecs


def is_simple_trace(V: GradedModule) -> bool:
    """``rad(A) V = 0`` and every basis vector generates ``V``."""
    if trace_radical_module(V):
        return False
    for j in range(V.dim):
        if not Presentation(V, gens=[{j: ONE}], max_gens=1).complete:
            return False
    return True


__all__ = [
    "convolve", "convolve_all", "simple_Ln", "head", "hconv", "socle", "is_simple", "is_real",
    "strongly_commute", "head_via_r", "r_matrix", "image_module", "mark_simple", "extremal_part",
    "is_simple_trace", "trace_radical_module", "simple_quotients", "simple_submodules",
    "shuffle_dimension", "shuffle_character", "canonical_shift", "shuffle_index", "nested_basis",
    "nested_generator", "nested_factors", "extend_from_generators", "convolve_morphisms", "dual", "direct_sum",
]
