"""Q-polynomial tables and straightening in the quiver Hecke algebra.

An element of ``R(beta) e(nu)`` is a dict ``{(u, a): c}`` standing for
``sum c * tau_{T(u)} x^a e(nu)``, where ``u`` is a permutation in one-line
form, ``a`` an exponent tuple and ``T(u)`` the block-adapted reduced word
``can(w) + can(v)`` for ``u = w v`` with ``w`` a minimal coset
representative for the blocks ``(m, n - m)``.  With ``m = n`` this is the
lexicographically minimal reduced word of ``u``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .cartan import (CartanDatum, act_on_word, coset_split, perm_id, perm_inv,
                     perm_lexmin_word, perm_mul, perm_of_word, transposition)
from .linalg import ONE, QQ, qq, qstr


class RewriteError(ValueError):
    pass


# -- Q-polynomials ----------------------------------------------------------

def admissible_exponents(cartan: CartanDatum, i: int, j: int) -> list[tuple[int, int]]:
    """``(p, q)`` with ``p (a_i,a_i) + q (a_j,a_j) = -2 (a_i,a_j)``."""
    target = -2 * cartan.ip(i, j)
    ni, nj = cartan.norm(i), cartan.norm(j)
    out = []
    for p in range(target // ni + 1):
        r = target - p * ni
        if r % nj == 0:
            out.append((p, r // nj))
    return out


@dataclass(frozen=True)
class QTable:
    """``Q_{i,j}(u,v) = sum t_{i,j;p,q} u^p v^q`` for ordered pairs ``i != j``."""

    cartan: CartanDatum
    coeffs: tuple  # sorted ((i, j), ((p, q), t), ...) over ordered pairs

    @classmethod
    def build(cls, cartan: CartanDatum, override: dict | None = None) -> QTable:
        table: dict[tuple[int, int], dict[tuple[int, int], QQ]] = {}
        for i in cartan.labels:
            for j in cartan.labels:
                if i < j:
                    table[(i, j)] = {pq: ONE for pq in admissible_exponents(cartan, i, j)}
        for (i, j), poly in (override or {}).items():
            if i == j:
                raise RewriteError("Q_{i,i} is fixed to 0")
            adm = set(admissible_exponents(cartan, i, j))
            poly = {tuple(pq): qq(t) for pq, t in poly.items()}
            if not set(poly) <= adm:
                raise RewriteError(f"exponents {sorted(set(poly) - adm)} not admissible for Q_{i},{j}")
            if i > j:
                i, j = j, i
                poly = {(q, p): t for (p, q), t in poly.items()}
            table[(i, j)] = {pq: t for pq, t in poly.items() if t}
        for (i, j), poly in table.items():
            if not poly.get((-cartan.a(i, j), 0)) or not poly.get((0, -cartan.a(j, i))):
                raise RewriteError(f"leading coefficients of Q_{i},{j} must be nonzero")
        flat = tuple(sorted((k, tuple(sorted(v.items()))) for k, v in table.items()))
        return cls(cartan, flat)

    @property
    def polys(self) -> dict:
        return _unpack(self)

    def Q(self, i: int, j: int) -> dict[tuple[int, int], QQ]:
        if i == j:
            return {}
        if i < j:
            return self.polys[(i, j)]
        return {(q, p): t for (p, q), t in self.polys[(j, i)].items()}

    def Qbar(self, i: int, j: int) -> dict[tuple[int, int, int], QQ]:
        """``(Q(u,v) - Q(w,v)) / (u - w)`` as exponents of ``(u, v, w)``."""
        out: dict = {}
        for (p, q), t in self.Q(i, j).items():
            for r in range(p):
                key = (r, q, p - 1 - r)
                out[key] = out.get(key, 0) + t
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> str:
        data = {f"{i},{j}": {f"{p},{q}": qstr(t) for (p, q), t in poly}
                for (i, j), poly in self.coeffs}
        return json.dumps(data, sort_keys=True)

    @classmethod
    def from_json(cls, cartan: CartanDatum, text: str) -> QTable:
        raw = json.loads(text)
        override = {}
        for key, poly in raw.items():
            i, j = (int(x) for x in key.split(","))
            override[(i, j)] = {tuple(int(x) for x in pq.split(",")): t for pq, t in poly.items()}
        return cls.build(cartan, override)


@lru_cache(maxsize=None)
def _unpack(table: QTable) -> dict:
    return {k: dict(v) for k, v in table.coeffs}


def default_q_table(cartan: CartanDatum, override: dict | None = None) -> QTable:
    return QTable.build(cartan, override)


# -- elements -----------------------------------------------------------------

def el_add(acc: dict, other: dict, c=ONE) -> dict:
    for key, v in other.items():
        t = acc.get(key, 0) + c * v
        if t:
            acc[key] = t
        else:
            acc.pop(key, None)
    return acc


def _swap_index(k: int, j: int) -> int:
    return j + 1 if k == j else j if k == j + 1 else k


def _commute_or_braid(word: list, p: int, kind: str):
    if kind == "c":
        word[p], word[p + 1] = word[p + 1], word[p]
    else:
        a, b = word[p], word[p + 1]
        word[p:p + 3] = [b, a, b]


def to_front(word: tuple, k: int) -> tuple[list, tuple]:
    """Moves turning a reduced word with left descent ``s_k`` into one starting with ``k``."""
    if word[0] == k:
        return [], word
    a = word[0]
    st1, r2 = to_front(word[1:], k)
    steps = [(p + 1, kind) for p, kind in st1]
    if abs(a - k) > 1:
        steps.append((0, "c"))
        return steps, (k, a) + r2[1:]
    st2, r3 = to_front(r2[1:], a)
    steps += [(p + 2, kind) for p, kind in st2]
    steps.append((0, "b"))
    return steps, (k, a, k) + r3[1:]


def transform(word: tuple, target: tuple) -> list:
    """Commutation and braid moves relating two reduced words of one permutation."""
    steps = []
    cur = tuple(word)
    for idx in range(len(target)):
        if cur[idx] == target[idx]:
            continue
        st, tail = to_front(cur[idx:], target[idx])
        steps += [(p + idx, kind) for p, kind in st]
        cur = cur[:idx] + tail
    if cur != tuple(target):
        raise RewriteError("words do not represent the same permutation")
    return steps


class Straightener:
    """Normal forms in ``R(beta) e(nu)`` relative to a block split ``m``."""

    def __init__(self, qtable: QTable, n: int, m: int | None = None):
        self.q = qtable
        self.cartan = qtable.cartan
        self.n = n
        self.m = n if m is None else m
        self.ident = perm_id(n)
        self._words: dict = {}
        self._lx: dict = {}
        self._lt: dict = {}

    # words
    def target(self, u: tuple) -> tuple:
        w = self._words.get(u)
        if w is None:
            if self.m in (0, self.n):
                w = perm_lexmin_word(u)
            else:
                cw, cv = coset_split(u, self.m)
                w = perm_lexmin_word(cw) + perm_lexmin_word(cv)
            self._words[u] = w
        return w

    def tau_degree(self, word, nu: tuple) -> int:
        """Degree of ``tau_word e(nu)``."""
        deg = 0
        mu = nu
        for j in reversed(word):
            deg -= self.cartan.ip(mu[j - 1], mu[j])
            mu = act_on_word(transposition(self.n, j), mu)
        return deg

    def term_degree(self, u: tuple, a: tuple, nu: tuple) -> int:
        return self.tau_degree(self.target(u), nu) + sum(
            e * self.cartan.norm(nu[k]) for k, e in enumerate(a))

    # left multiplication
    def left_x(self, k: int, u: tuple, a: tuple, nu: tuple) -> dict:
        key = (k, u, a, nu)
        res = self._lx.get(key)
        if res is not None:
            return res
        if u == self.ident:
            b = list(a)
            b[k - 1] += 1
            res = {(u, tuple(b)): ONE}
        else:
            j = self.target(u)[0]
            u1 = perm_mul(transposition(self.n, j), u)
            res = self.left_tau_el(j, self.left_x(_swap_index(k, j), u1, a, nu), nu)
            mu = act_on_word(u1, nu)
            if mu[j - 1] == mu[j]:
                d = (k == j + 1) - (k == j)
                if d:
                    res = el_add(dict(res), {(u1, a): ONE}, QQ(d))
        self._lx[key] = res
        return res

    def left_x_el(self, k: int, el: dict, nu: tuple) -> dict:
        out: dict = {}
        for (u, a), c in el.items():
            el_add(out, self.left_x(k, u, a, nu), c)
        return out

    def left_monomial_el(self, exps: dict, el: dict, nu: tuple) -> dict:
        for k, e in exps.items():
            for _ in range(e):
                el = self.left_x_el(k, el, nu)
        return el

    def left_tau(self, k: int, u: tuple, a: tuple, nu: tuple) -> dict:
        key = (k, u, a, nu)
        res = self._lt.get(key)
        if res is not None:
            return res
        su = perm_mul(transposition(self.n, k), u)
        inv = perm_inv(u)
        if inv[k - 1] < inv[k]:  # s_k u > u
            res = {(su, a): ONE}
            el_add(res, self._corrections((k,) + self.target(u), self.target(su), a, nu))
        else:
            corr = self._corrections(self.target(u), (k,) + self.target(su), a, nu)
            mu = act_on_word(su, nu)
            res = {}
            base = {(su, a): ONE}
            for (p, q), t in self.q.Q(mu[k - 1], mu[k]).items():
                el_add(res, self.left_monomial_el({k: p, k + 1: q}, base, nu), t)
            el_add(res, self.left_tau_el(k, corr, nu))
        self._lt[key] = res
        return res

    def left_tau_el(self, k: int, el: dict, nu: tuple) -> dict:
        out: dict = {}
        for (u, a), c in el.items():
            el_add(out, self.left_tau(k, u, a, nu), c)
        return out

    def tau_word_el(self, word, a: tuple, nu: tuple) -> dict:
        """Normal form of ``tau_word x^a e(nu)`` for an arbitrary word."""
        el = {(self.ident, a): ONE}
        for k in reversed(word):
            el = self.left_tau_el(k, el, nu)
        return el

    def _corrections(self, src: tuple, tgt: tuple, a: tuple, nu: tuple) -> dict:
        """``D`` with ``tau_src x^a e(nu) = tau_tgt x^a e(nu) + D`` (both reduced)."""
        out: dict = {}
        cur = list(src)
        for p, kind in transform(src, tgt):
            if kind == "b":
                P, S = tuple(cur[:p]), tuple(cur[p + 3:])
                kk = min(cur[p], cur[p + 1])
                mu = act_on_word(perm_of_word(self.n, S), nu)
                if mu[kk - 1] == mu[kk + 1]:
                    sign = ONE if cur[p] == kk + 1 else -ONE
                    inner = self.tau_word_el(S, a, nu)
                    term: dict = {}
                    for (r, q, s), t in self.q.Qbar(mu[kk - 1], mu[kk]).items():
                        el_add(term, self.left_monomial_el({kk: r, kk + 1: q, kk + 2: s}, inner, nu), t)
                    for j in reversed(P):
                        term = self.left_tau_el(j, term, nu)
                    el_add(out, term, sign)
            _commute_or_braid(cur, p, kind)
        return out

    # generic products
    def apply(self, letters, el: dict, nu: tuple) -> dict:
        """Left-multiply ``el`` by a product of generators (leftmost outermost)."""
        for kind, k in reversed(list(letters)):
            if kind == "x":
                el = self.left_x_el(k, el, nu)
            elif kind == "t":
                el = self.left_tau_el(k, el, nu)
            else:
                raise RewriteError(f"unknown generator {kind!r}")
        return el

    def one(self) -> dict:
        return {(self.ident, (0,) * self.n): ONE}


_STRAIGHTENERS: dict = {}


def straightener(qtable: QTable, n: int, m: int | None = None) -> Straightener:
    key = (qtable, n, n if m is None else m)
    s = _STRAIGHTENERS.get(key)
    if s is None:
        s = _STRAIGHTENERS[key] = Straightener(qtable, n, m)
    return s


@dataclass
class StraightenedElement:
    """``sum c * tau_{T(u)} x^a e(nu)`` with its block split and sector."""

    terms: dict
    nu: tuple
    m: int
    degree: int | None

    def block_terms(self):
        """Yield ``(w, v_word, a, c)`` with ``tau_{T(u)} = tau_{can w} tau_{can v}``."""
        n = len(self.nu)
        for (u, a), c in sorted(self.terms.items()):
            w, v = coset_split(u, self.m) if 0 < self.m < n else (perm_id(n), u)
            yield w, perm_lexmin_word(v), a, c

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for w, vword, a, c in self.block_terms():
            tau = "".join(f"t{j}" for j in perm_lexmin_word(w) + vword)
            mono = "".join(f"x{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(a) if e)
            out.append(f"{qstr(c)}*{tau}{mono}" if (tau or mono) else qstr(c))
        return " + ".join(out) + f" e{self.nu}"


def straighten(qtable: QTable, terms, nu, m: int | None = None) -> StraightenedElement:
    """Normal form of ``sum c * g_1 ... g_r e(nu)``.

    ``terms`` is a list of ``(c, letters)`` with letters ``('x', k)`` or
    ``('t', k)``; a bare letter list is taken with coefficient 1.
    """
    nu = tuple(nu)
    n = len(nu)
    if terms and isinstance(terms[0], tuple) and isinstance(terms[0][0], str):
        terms = [(ONE, terms)]
    st = straightener(qtable, n, m)
    out: dict = {}
    degrees = set()
    for c, letters in terms:
        degrees.add(word_degree(qtable.cartan, letters, nu))
        el_add(out, st.apply(letters, st.one(), nu), qq(c))
    if len(degrees) > 1:
        raise RewriteError("inhomogeneous input")
    for (u, a) in out:
        d = st.term_degree(u, a, nu)
        if degrees and d not in degrees:
            raise RewriteError("straightening broke homogeneity")
    return StraightenedElement(out, nu, st.m, degrees.pop() if degrees else None)


def word_degree(cartan: CartanDatum, letters, nu) -> int:
    """Degree of ``g_1 ... g_r e(nu)``."""
    n = len(nu)
    deg = 0
    mu = tuple(nu)
    for kind, k in reversed(list(letters)):
        if kind == "x":
            deg += cartan.norm(mu[k - 1])
        else:
            deg -= cartan.ip(mu[k - 1], mu[k])
            mu = act_on_word(transposition(n, k), mu)
    return deg


def intertwiner(qtable: QTable, word, nu) -> dict:
    """``phi_{k_1} ... phi_{k_r} e(nu)`` in normal form (``m = n``)."""
    nu = tuple(nu)
    n = len(nu)
    word = tuple(word)
    if len(perm_lexmin_word(perm_of_word(n, word))) != len(word):
        raise RewriteError("intertwiners need a reduced word")
    st = straightener(qtable, n)
    el = st.one()
    mu = nu
    for k in reversed(word):
        if mu[k - 1] == mu[k]:
            new = st.left_tau_el(k, st.left_x_el(k, el, nu), nu)
            el_add(new, st.left_tau_el(k, st.left_x_el(k + 1, el, nu), nu), -ONE)
            el_add(new, el)
            el = new
        else:
            el = st.left_tau_el(k, el, nu)
        mu = act_on_word(transposition(n, k), mu)
    return el
