"""R-matrices, the invariants Lambda, tilde-Lambda and d, and braiders on simples."""
from __future__ import annotations

from dataclasses import dataclass

from .cartan import block_swap, perm_lexmin_word
from .conv import (convolve, convolve_all, extend_from_generators, head, image_module,
                   is_simple, nested_generator, r_matrix, shuffle_index)
from .homs import GradedMorphism, hom_space
from .linalg import ONE
from .modules import GradedModule, ModuleError


class HomDimensionError(ModuleError):
    """The relevant Hom space is not one-dimensional."""

    def __init__(self, what: str, dim: int):
        super().__init__(f"{what} has dimension {dim}")
        self.dim = dim


_R_CACHE: dict = {}


def r_unique(M: GradedModule, N: GradedModule) -> GradedMorphism:
    """The normalized generator of a one-dimensional ``HOM(M o N, N o M)``."""
    key = (id(M), id(N))
    hit = _R_CACHE.get(key)
    if hit is not None:
        return hit[0]
    rs = r_matrix(M, N)
    if len(rs) != 1:
        raise HomDimensionError(f"HOM({M.name or 'M'} o {N.name or 'N'}, reversed)", len(rs))
    f = rs[0].normalized()
    _R_CACHE[key] = (f, M, N)  # keep the modules alive so ids stay unique
    return f


@dataclass(frozen=True)
class LambdaData:
    lam: int
    lam_tilde: int
    d: int | None
    lam_reverse: int | None = None


def lambda_(M: GradedModule, N: GradedModule, both: bool = True) -> LambdaData:
    """``Lambda(M, N)`` as the degree of the r-matrix, with ``tilde-Lambda`` and ``d``."""
    lam = r_unique(M, N).degree
    form = M.cartan.form(M.wt, N.wt)
    if (lam + form) % 2:
        raise ModuleError(f"Lambda + (wt M, wt N) = {lam + form} is odd")
    rev = d = None
    if both:
        rev = r_unique(N, M).degree
        if (lam + rev) % 2:
            raise ModuleError("Lambda(M,N) + Lambda(N,M) is odd")
        d = (lam + rev) // 2
    return LambdaData(lam, (lam + form) // 2, d, rev)


def Lambda(M: GradedModule, N: GradedModule) -> int:
    return r_unique(M, N).degree


def lambda_tilde(M: GradedModule, N: GradedModule) -> int:
    return lambda_(M, N, both=False).lam_tilde


def is_unmixed(M: GradedModule, N: GradedModule) -> bool:
    from .localization import weight_sets
    sg = weight_sets(M).gWstar
    g = weight_sets(N).gW
    return all(x.is_zero() for x in sg & g)


def unmixed_r(M: GradedModule, N: GradedModule) -> GradedMorphism:
    """``u (x) v -> tau_{w[n,m]} (v (x) u)`` for an unmixed pair, of degree ``-(beta, gamma)``."""
    if not is_unmixed(M, N):
        raise ModuleError("pair is not unmixed")
    P, T = convolve(M, N), convolve(N, M)
    swap = block_swap(N.n, M.n)

    def images(gens):
        return {shuffle_index(T, swap, gens[1], gens[0]): ONE}

    deg = -M.cartan.form(M.beta, N.beta)
    f = extend_from_generators(P, 2, T, images, deg)
    f.meta["kind"] = "unmixed"
    return f


# -- normal sequences ------------------------------------------------------------

def swap_step(P: GradedModule, order: list, p: int, mods: list, rXY: GradedMorphism | None = None):
    """``id o r_{X,Y} o id`` at positions ``p, p+1`` of a left-nested product.

    Returns the morphism, its target and the new factor order.
    """
    r = len(order)
    X, Y = mods[order[p]], mods[order[p + 1]]
    if rXY is None:
        rXY = r_unique(X, Y)
    XY = rXY.source
    new_order = order[:p] + [order[p + 1], order[p]] + order[p + 2:]
    T = convolve_all([mods[k] for k in new_order])
    offset = sum(mods[k].n for k in order[:p])
    YX = rXY.target
    cols = rXY.matrix
    lab = []
    for w in YX.reps:
        word = tuple(("t", l + offset) for l in perm_lexmin_word(w))
        for iY in range(Y.dim):
            for iX in range(X.dim):
                lab.append((word, iY, iX))

    def images(gens):
        j = nested_generator(XY, 2, (gens[p], gens[p + 1]))
        out: dict = {}
        for b, c in cols.get(j, {}).items():
            word, iY, iX = lab[b]
            g = list(gens)
            g[p], g[p + 1] = iY, iX
            vec = T.act_word(word, {nested_generator(T, r, g): ONE})
            for i, d in vec.items():
                s = out.get(i, 0) + c * d
                if s:
                    out[i] = s
                else:
                    out.pop(i, None)
        return out

    f = extend_from_generators(P, r, T, images, rXY.degree)
    return f, T, new_order


def composite_r(mods: list) -> GradedMorphism:
    """``L_1 o ... o L_r -> L_r o ... o L_1`` composed of pairwise r-matrices,
    moving ``L_s`` to the front for ``s = 2, ..., r``."""
    r = len(mods)
    P = convolve_all(mods)
    order = list(range(r))
    total = None
    cur = P
    for s in range(1, r):
        for p in range(s - 1, -1, -1):
            f, cur, order = swap_step(cur, order, p, mods)
            total = f if total is None else f.compose(total)
    if total is None:
        total = GradedMorphism(P, P, {j: {j: ONE} for j in range(P.dim)}, 0)
    return total


def normal_sequence(mods: list, check_head: bool = True) -> bool:
    """Non-vanishing of the composed r-matrix; when nonzero, its image is checked
    against ``hd(L_1 o ... o L_r)``."""
    f = composite_r(mods)
    if f.is_zero():
        return False
    if check_head:
        im = image_module(f)
        if not is_simple(im):
            raise ModuleError("image of a nonzero composite r-matrix is not simple")
        hd = head(convolve_all(mods))
        if hd.character.shift_to(im.character) is None:
            raise ModuleError("image of the composite r-matrix differs from the head")
    return True


def normal_by_lambda(mods: list) -> bool:
    """``Lambda(L_1, hd(L_2 o ... o L_r)) = sum_j Lambda(L_1, L_j)``."""
    L1, rest = mods[0], mods[1:]
    hd = head(convolve_all(rest)) if len(rest) > 1 else rest[0]
    return Lambda(L1, hd) == sum(Lambda(L1, X) for X in rest)


# -- braiders -----------------------------------------------------------------------

def braider_eval(C: GradedModule, X: GradedModule, phi: int | None = None) -> GradedMorphism:
    """``R_C(X): C o X -> q^phi X o C``.

    Without ``phi`` the unique r-matrix is returned. With ``phi`` (the braider's
    grading shift) the morphism has degree ``-phi``; it is the r-matrix when
    ``Lambda(C, X) = -phi`` and zero when the r-matrix sits elsewhere.
    """
    if C.n == 0 or X.n == 0:
        P, T = convolve(C, X), convolve(X, C)
        f = GradedMorphism(P, T, {j: {j: ONE} for j in range(P.dim)}, 0)
    else:
        f = r_unique(C, X)
    if phi is not None and f.degree != -phi:
        f = GradedMorphism(f.source, f.target, {}, -phi)
    f.meta["phi"] = -f.degree
    return f


def is_scalar_identity(f: GradedMorphism) -> bool:
    """``f`` is a nonzero multiple of the identity (same basis on both sides)."""
    if f.source.basis != f.target.basis or f.degree != 0:
        return False
    c = None
    for j in range(f.source.dim):
        col = f.matrix.get(j, {})
        if set(col) != {j}:
            return False
        if c is None:
            c = col[j]
        elif col[j] != c:
            return False
    return c is not None and c != 0


__all__ = ["hom_space", "LambdaData", "lambda_", "Lambda", "lambda_tilde", "unmixed_r", "is_unmixed",
           "normal_sequence", "normal_by_lambda", "composite_r", "braider_eval", "r_unique",
           "HomDimensionError", "is_scalar_identity", "swap_step"]
