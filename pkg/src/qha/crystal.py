"""Crystal operators on self-dual simple modules, ``B_w(infinity)`` membership and
the localization kernel."""
from __future__ import annotations

from .cartan import Weight, WeylElement
from .conv import extremal_part, head_via_r, mark_simple, simple_Ln
from .modules import GradedModule, ModuleError, eps, normalize, simple_L, unit_module


class CrystalError(RuntimeError):
    """The two membership criteria disagree."""


def _simple(M: GradedModule) -> GradedModule:
    M.simple = True
    return M


def ftilde(M: GradedModule, i: int) -> GradedModule:
    """``L(i) nabla M``."""
    return head_via_r(mark_simple(simple_L(M.q, i), real=True), M)


def etilde_max(M: GradedModule, i: int) -> tuple[GradedModule, int]:
    """``(E_i^{(n)} M, n)`` for ``n = eps_i(M)``, self-dual."""
    n = eps(M, i)
    if n == 0:
        return M, 0
    Y = extremal_part(M, i, n, side="left")
    if Y is None:
        raise ModuleError("empty divided-power restriction")
    if Y.n == 0:
        Y = unit_module(M.q)
    return _simple(normalize(Y)), n


def etilde(M: GradedModule, i: int) -> GradedModule | None:
    """``L(i^{n-1}) nabla E_i^{(n)} M`` with ``n = eps_i(M)``, or ``None`` when ``n = 0``."""
    Y, n = etilde_max(M, i)
    if n == 0:
        return None
    if n == 1:
        return Y
    return head_via_r(simple_Ln(M.q, i, n - 1), Y)


def crystal_label(M: GradedModule) -> tuple:
    """A word ``(i_1, ..., i_r)`` with ``M ~ ftilde_{i_1} ... ftilde_{i_r} 1``."""
    out = []
    while M.n:
        i = M.basis[0][0][0]
        out.append(i)
        M = etilde(M, i)
    return tuple(out)


def from_label(qtable, label) -> GradedModule:
    M = _simple(unit_module(qtable))
    for i in reversed(tuple(label)):
        M = ftilde(M, i)
    return M


def _matches_blocks(word, seq) -> bool:
    """``word = seq_1^{a_1} ... seq_l^{a_l}`` for some ``a_k >= 0``."""
    k = 0
    for c in word:
        while k < len(seq) and seq[k] != c:
            k += 1
        if k == len(seq):
            return False
    return True


def block_sector_nonzero(X: GradedModule, seq) -> bool:
    return any(_matches_blocks(w, seq) for w in X.character.words())


def ee_max_chain(M: GradedModule, seq) -> GradedModule:
    for i in seq:
        M, _ = etilde_max(M, i)
    return M


def in_Bw(M: GradedModule, w: WeylElement, word=None) -> bool:
    """Membership of a self-dual simple ``M`` in ``B_w(infinity)``, by two criteria."""
    seq = tuple(word) if word is not None else w.word
    chain = ee_max_chain(M, seq).n == 0
    sector = block_sector_nonzero(M, seq)
    if chain != sector:
        raise CrystalError(f"criteria disagree on {M!r} for {w}: chain={chain}, sector={sector}")
    return chain


def q_kernel(X: GradedModule, w: WeylElement, word=None) -> bool:
    """``True`` iff every block sector ``e(i_1^{a_1}, ..., i_l^{a_l}) X`` vanishes."""
    seq = tuple(word) if word is not None else w.word
    return not block_sector_nonzero(X, seq)


# -- catalog of simples ------------------------------------------------------------

_CATALOG: dict = {}


def _below(a: Weight, b: Weight) -> bool:
    return all(x <= y for x, y in zip(a.root, b.root))


def simples_of_weight(qtable, beta: Weight) -> list[GradedModule]:
    """All self-dual simple ``R(beta)``-modules, grown from ``1`` by ``ftilde``."""
    key = (id(qtable), beta)
    hit = _CATALOG.get(key)
    if hit is not None:
        return hit
    cartan = qtable.cartan
    if beta.ht == 0:
        out = [_simple(unit_module(qtable))]
    else:
        out = []
        seen = []
        for i in cartan.labels:
            a = cartan.alpha(i)
            rest = beta - a
            if not _below(a, beta):
                continue
            for S in simples_of_weight(qtable, rest):
                T = ftilde(S, i)
                ch = T.character
                if any(ch.shift_to(c) is not None for c in seen):
                    continue
                seen.append(ch)
                out.append(T)
    _CATALOG[key] = out
    return out


__all__ = ["CrystalError", "ftilde", "etilde", "etilde_max", "crystal_label", "from_label",
           "in_Bw", "q_kernel", "block_sector_nonzero", "ee_max_chain", "simples_of_weight"]
