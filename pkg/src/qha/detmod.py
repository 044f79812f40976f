"""Determinantial and generalized determinantial modules."""
from __future__ import annotations

from dataclasses import dataclass, field

from .cartan import Weight, WeylElement, bruhat_le, is_w_dominant
from .conv import extremal_part, head_via_r, mark_simple, simple_Ln, strongly_commute
from .modules import GradedModule, ModuleError, eps_star, normalize, unit_module

_CACHE: dict = {}


@dataclass
class DetModSpec:
    w: WeylElement
    lam: Weight
    module: GradedModule
    words: list = field(default_factory=list)


def _key(qtable, word, lam):
    return (id(qtable), tuple(word), lam)


def gen_detmod_word(qtable, word, lam: Weight) -> GradedModule:
    """``M_w(w lam, lam)`` by the head recursion along ``word`` (a reduced word of ``w``)."""
    cartan = qtable.cartan
    word = tuple(word)
    key = _key(qtable, word, lam)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    if not word:
        M = mark_simple(unit_module(qtable), real=True)
    else:
        i, rest = word[0], word[1:]
        inner = gen_detmod_word(qtable, rest, lam)
        mu = WeylElement.from_word(cartan, rest).act(lam)
        m = cartan.pair(i, mu)
        if m < 0:
            raise ModuleError(f"weight is not dominant along the word (letter {i})")
        if m == 0:
            M = inner
        elif inner.n == 0:
            M = simple_Ln(qtable, i, m)
        else:
            M = head_via_r(simple_Ln(qtable, i, m), inner)
    M = normalize(M)
    M.name = M.name or f"M_{'s[' + ','.join(map(str, word)) + ']'}({cartan.format_weight(lam)})"
    _CACHE[key] = M
    return M


def gen_detmod(qtable, w: WeylElement, lam: Weight) -> GradedModule:
    """``M_w(w lam, lam)`` for a ``w``-dominant ``lam``, self-dual."""
    if not is_w_dominant(lam, w):
        raise ModuleError(f"{w.cartan.format_weight(lam)} is not {w}-dominant")
    return gen_detmod_word(qtable, w.word, lam)


def e_star_max(M: GradedModule, i: int) -> tuple[GradedModule, int]:
    """``(E_i^{*(n)} M, n)`` with ``n = eps_i^*(M)``, the first entry self-dual."""
    n = eps_star(M, i)
    if n == 0:
        return M, 0
    Y = extremal_part(M, i, n, side="right")
    if Y is None:
        raise ModuleError("empty divided-power restriction")
    if Y.n == 0:
        Y = unit_module(M.q)
    Y = normalize(Y)
    Y.simple = True if getattr(M, "simple", None) else None
    return Y, n


def detmod_pair(qtable, w: WeylElement, v: WeylElement, Lam: Weight) -> GradedModule:
    """``M(w Lam, v Lam)`` for ``v <= w`` and dominant ``Lam``."""
    cartan = qtable.cartan
    if not cartan.is_dominant(Lam):
        raise ModuleError(f"{cartan.format_weight(Lam)} is not dominant")
    if not bruhat_le(v, w):
        raise ModuleError(f"{v} is not below {w} in Bruhat order")
    key = ("pair", id(qtable), w.word, v.word, Lam)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    M = gen_detmod(qtable, w, Lam)
    mu = Lam
    for j in reversed(v.word):
        n = cartan.pair(j, mu)
        M2, got = e_star_max(M, j)
        if got != n:
            raise ModuleError(f"eps*_{j} is {got}, expected {n}")
        M = M2
        mu = cartan.reflect(j, mu)
    M.simple = True
    M.name = f"M({w}{cartan.format_weight(Lam)}, {v}{cartan.format_weight(Lam)})"
    _CACHE[key] = M
    return M


def second_reduced_word(w: WeylElement):
    """A reduced word other than the canonical one, if there is one."""
    cartan = w.cartan
    # lex-maximal word: repeatedly peel the largest left descent
    word = []
    lam = w.image_of_rho
    while True:
        desc = [i for i in cartan.labels if cartan.pair(i, lam) < 0]
        if not desc:
            break
        i = max(desc)
        word.append(i)
        lam = cartan.reflect(i, lam)
    word = tuple(word)
    return None if word == w.word else word


def chamber_conjecture(qtable, w: WeylElement, lam: Weight, mu: Weight) -> dict:
    """Exploratory: do ``M_w(w lam, lam)`` and ``M_w(w mu, mu)`` commute, and do
    ``lam``, ``mu`` pair with the same sign against the inversion roots of ``w^{-1}``?

    Only the roots in ``Delta_+ cap w^{-1} Delta_-`` are inspected, so the chamber
    flag is a necessary condition. Never asserted.
    """
    cartan = qtable.cartan
    roots = w.inverse().inversion_roots()
    same = all(cartan.form(b, lam) * cartan.form(b, mu) >= 0 for b in roots)
    A = gen_detmod(qtable, w, lam)
    B = gen_detmod(qtable, w, mu)
    return {"same_side": same, "commute": strongly_commute(A, B)}


__all__ = ["DetModSpec", "gen_detmod", "gen_detmod_word", "e_star_max", "detmod_pair",
           "second_reduced_word", "chamber_conjecture"]
