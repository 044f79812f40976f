"""Cartan data, weights, Weyl group elements and shuffle coset combinatorics."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import comb


class CartanError(ValueError):
    pass


@dataclass(frozen=True)
class Weight:
    """Integer vector in the free lattice with basis ``{alpha_i} + {Lambda_i}``.

    ``root[p]`` and ``fund[p]`` are coordinates at index position ``p``.
    """

    root: tuple[int, ...]
    fund: tuple[int, ...]

    def __add__(self, other: Weight) -> Weight:
        return Weight(tuple(a + b for a, b in zip(self.root, other.root)),
                      tuple(a + b for a, b in zip(self.fund, other.fund)))

    def __sub__(self, other: Weight) -> Weight:
        return self + (-other)

    def __neg__(self) -> Weight:
        return Weight(tuple(-a for a in self.root), tuple(-a for a in self.fund))

    def __rmul__(self, k: int) -> Weight:
        return Weight(tuple(k * a for a in self.root), tuple(k * a for a in self.fund))

    @property
    def is_root(self) -> bool:
        return not any(self.fund)

    @property
    def ht(self) -> int:
        if not self.is_root:
            raise CartanError("height is defined on the root lattice only")
        return sum(self.root)

    @property
    def is_positive(self) -> bool:
        """True on Q_+ (including zero)."""
        return self.is_root and all(a >= 0 for a in self.root)

    def is_zero(self) -> bool:
        return not any(self.root) and not any(self.fund)


@dataclass(frozen=True)
class CartanDatum:
    labels: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]
    sym: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        n = len(self.labels)
        A, d = self.matrix, self.sym
        if len(set(self.labels)) != n or len(A) != n or any(len(r) != n for r in A):
            raise CartanError("matrix must be square and match the index set")
        if len(d) != n or any(x <= 0 for x in d):
            raise CartanError("symmetrizer must be positive")
        for i in range(n):
            if A[i][i] != 2:
                raise CartanError("diagonal entries must be 2")
            for j in range(n):
                if i != j:
                    if A[i][j] > 0:
                        raise CartanError("off-diagonal entries must be <= 0")
                    if (A[i][j] == 0) != (A[j][i] == 0):
                        raise CartanError("a_ij = 0 iff a_ji = 0")
                if d[i] * A[i][j] != d[j] * A[j][i]:
                    raise CartanError("symmetrizer does not make D*A symmetric")

    # -- indices ---------------------------------------------------------
    @cached_property
    def pos(self) -> dict[int, int]:
        return {lab: p for p, lab in enumerate(self.labels)}

    @property
    def rank(self) -> int:
        return len(self.labels)

    def a(self, i: int, j: int) -> int:
        """``<h_i, alpha_j>``."""
        return self.matrix[self.pos[i]][self.pos[j]]

    # -- bilinear form ---------------------------------------------------
    def ip(self, i: int, j: int) -> int:
        """``(alpha_i, alpha_j)``."""
        return self.sym[self.pos[i]] * self.a(i, j)

    def norm(self, i: int) -> int:
        """``(alpha_i, alpha_i) = 2 d_i``."""
        return 2 * self.sym[self.pos[i]]

    def form(self, lam: Weight, mu: Weight) -> int:
        """Symmetric form with ``(alpha_i, Lambda_j) = d_i delta_ij``.

        ``(Lambda_i, Lambda_j)`` is set to 0; every pairing used downstream
        has at least one argument in the root lattice, where this is exact.
        """
        n, A, d = self.rank, self.matrix, self.sym
        s = 0
        for p in range(n):
            rp = lam.root[p]
            if rp:
                s += rp * sum(d[p] * A[p][q] * mu.root[q] for q in range(n))
                s += rp * d[p] * mu.fund[p]
        for p in range(n):
            if lam.fund[p]:
                s += lam.fund[p] * d[p] * mu.root[p]
        return s

    def pair(self, i: int, lam: Weight) -> int:
        """``<h_i, lam>``."""
        p = self.pos[i]
        return sum(self.matrix[p][q] * lam.root[q] for q in range(self.rank)) + lam.fund[p]

    # -- weights ---------------------------------------------------------
    def zero(self) -> Weight:
        z = (0,) * self.rank
        return Weight(z, z)

    def alpha(self, i: int) -> Weight:
        r = [0] * self.rank
        r[self.pos[i]] = 1
        return Weight(tuple(r), (0,) * self.rank)

    def fundamental(self, i: int) -> Weight:
        f = [0] * self.rank
        f[self.pos[i]] = 1
        return Weight((0,) * self.rank, tuple(f))

    def root_of_word(self, word) -> Weight:
        r = [0] * self.rank
        for i in word:
            r[self.pos[i]] += 1
        return Weight(tuple(r), (0,) * self.rank)

    def root(self, coeffs: dict[int, int]) -> Weight:
        r = [0] * self.rank
        for i, c in coeffs.items():
            r[self.pos[i]] += c
        return Weight(tuple(r), (0,) * self.rank)

    def weight(self, fund: dict[int, int] | None = None, root: dict[int, int] | None = None) -> Weight:
        f = [0] * self.rank
        for i, c in (fund or {}).items():
            f[self.pos[i]] += c
        w = Weight((0,) * self.rank, tuple(f))
        return w + self.root(root or {})

    def rho(self) -> Weight:
        return Weight((0,) * self.rank, (1,) * self.rank)

    def is_dominant(self, lam: Weight) -> bool:
        return all(self.pair(i, lam) >= 0 for i in self.labels)

    def reflect(self, i: int, lam: Weight) -> Weight:
        """``s_i(lam) = lam - <h_i, lam> alpha_i``."""
        return lam - self.pair(i, lam) * self.alpha(i)

    def format_weight(self, lam: Weight) -> str:
        parts = []
        for tag, coords in (("L", lam.fund), ("a", lam.root)):
            for p, c in enumerate(coords):
                if c:
                    lab = f"{tag}{self.labels[p]}"
                    parts.append(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else f'{abs(c)}*'}{lab}")
        s = "".join(parts).lstrip("+")
        return s or "0"

    # -- Weyl group ------------------------------------------------------
    def weyl(self, word=()) -> WeylElement:
        return WeylElement.from_word(self, word)


def build_cartan(matrix, symmetrizer, labels=None, name: str = "") -> CartanDatum:
    """Validate a symmetrizable generalized Cartan matrix."""
    n = len(matrix)
    labels = tuple(labels) if labels is not None else tuple(range(1, n + 1))
    return CartanDatum(labels, tuple(tuple(int(x) for x in row) for row in matrix),
                       tuple(int(x) for x in symmetrizer), name)


PRESETS = {
    "A1": (((2,),), (1,), (1,)),
    "A2": (((2, -1), (-1, 2)), (1, 1), (1, 2)),
    "A3": (((2, -1, 0), (-1, 2, -1), (0, -1, 2)), (1, 1, 1), (1, 2, 3)),
    "A1^(1)": (((2, -2), (-2, 2)), (1, 1), (0, 1)),
    "A2^(1)": (((2, -1, -1), (-1, 2, -1), (-1, -1, 2)), (1, 1, 1), (0, 1, 2)),
}


def preset(name: str) -> CartanDatum:
    key = name.replace(" ", "")
    if key not in PRESETS:
        raise CartanError(f"unknown Cartan preset {name!r}")
    m, d, labels = PRESETS[key]
    return build_cartan(m, d, labels, key)


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)\s*\*?\s*)?([LaA])(\d+)\s*")


def parse_weight(cartan: CartanDatum, text: str) -> Weight:
    """Parse integer combinations like ``"L1+L2-2*L0"`` or ``"a1+a2"``."""
    text = text.strip()
    if text in ("", "0"):
        return cartan.zero()
    out = cartan.zero()
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise CartanError(f"cannot parse weight {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        if pos and not m.group(1):
            raise CartanError(f"missing sign in weight {text!r} at position {pos}")
        k = sign * int(m.group(2) or 1)
        lab = int(m.group(4))
        if lab not in cartan.pos:
            raise CartanError(f"index {lab} not in the index set")
        base = cartan.fundamental(lab) if m.group(3) == "L" else cartan.alpha(lab)
        out = out + k * base
        pos = m.end()
    return out


@dataclass(frozen=True)
class WeylElement:
    """Weyl group element, determined by its action on ``rho``.

    ``word`` is the lexicographically minimal reduced word.
    """

    cartan: CartanDatum = field(compare=False, repr=False)
    word: tuple[int, ...]
    image_of_rho: Weight = field(repr=False)

    @classmethod
    def from_word(cls, cartan: CartanDatum, word) -> WeylElement:
        lam = cartan.rho()
        for i in reversed(tuple(word)):
            if i not in cartan.pos:
                raise CartanError(f"index {i} not in the index set")
            lam = cartan.reflect(i, lam)
        return cls.from_rho_image(cartan, lam)

    @classmethod
    def from_rho_image(cls, cartan: CartanDatum, lam: Weight) -> WeylElement:
        # the smallest left descent {i : <h_i, w rho> < 0} is the first letter
        # of the lex-minimal reduced word
        img = lam
        word = []
        while True:
            desc = [i for i in cartan.labels if cartan.pair(i, lam) < 0]
            if not desc:
                break
            i = min(desc)
            word.append(i)
            lam = cartan.reflect(i, lam)
        if lam != cartan.rho():
            raise CartanError("weight is not in the Weyl orbit of rho")
        return cls(cartan, tuple(word), img)

    def __len__(self) -> int:
        return len(self.word)

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, lam: Weight) -> Weight:
        for i in reversed(self.word):
            lam = self.cartan.reflect(i, lam)
        return lam

    def __mul__(self, other: WeylElement) -> WeylElement:
        return WeylElement.from_word(self.cartan, self.word + other.word)

    def inverse(self) -> WeylElement:
        return WeylElement.from_word(self.cartan, tuple(reversed(self.word)))

    def left_descents(self) -> list[int]:
        return [i for i in self.cartan.labels if self.cartan.pair(i, self.image_of_rho) < 0]

    def is_left_descent(self, i: int) -> bool:
        return self.cartan.pair(i, self.image_of_rho) < 0

    def s(self, i: int) -> WeylElement:
        """``s_i * self``."""
        return WeylElement.from_word(self.cartan, (i,) + self.word)

    def inversion_roots(self) -> list[Weight]:
        """``Delta_+ cap w Delta_-``, one root per letter of the reduced word."""
        out = []
        for k, i in enumerate(self.word):
            out.append(WeylElement.from_word(self.cartan, self.word[:k]).act(self.cartan.alpha(i)))
        return out

    def __str__(self) -> str:
        return "s[" + ",".join(map(str, self.word)) + "]"


def weyl_reduce(cartan: CartanDatum, word) -> WeylElement:
    return WeylElement.from_word(cartan, word)


def bruhat_le(v: WeylElement, w: WeylElement) -> bool:
    """Subword criterion, via the lifting property along the reduced word of ``w``."""
    if len(v) > len(w):
        return False
    if len(w) == 0:
        return len(v) == 0
    s = w.word[0]
    rest = WeylElement.from_word(w.cartan, w.word[1:])
    if v.is_left_descent(s):
        return bruhat_le(v.s(s), rest)
    return bruhat_le(v, rest)


def is_w_dominant(lam: Weight, w: WeylElement) -> bool:
    cartan = w.cartan
    mu = lam
    for i in reversed(w.word):
        if cartan.pair(i, mu) < 0:
            return False
        mu = cartan.reflect(i, mu)
    return True


# -- permutations ---------------------------------------------------------
# One-line tuples: p[k-1] = p(k).  Products compose as functions, (ab)(k) = a(b(k)).

def perm_mul(a: tuple, b: tuple) -> tuple:
    return tuple(a[x - 1] for x in b)


def perm_inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for k, x in enumerate(a, 1):
        out[x - 1] = k
    return tuple(out)


def perm_id(n: int) -> tuple:
    return tuple(range(1, n + 1))


def transposition(n: int, k: int) -> tuple:
    p = list(range(1, n + 1))
    p[k - 1], p[k] = p[k], p[k - 1]
    return tuple(p)


def perm_of_word(n: int, word) -> tuple:
    p = perm_id(n)
    for k in word:
        p = perm_mul(p, transposition(n, k))
    return p


def perm_length(p: tuple) -> int:
    return sum(1 for a, b in itertools.combinations(p, 2) if a > b)


def perm_left_descent(p: tuple, k: int) -> bool:
    """``s_k p < p``."""
    q = perm_inv(p)
    return q[k - 1] > q[k]


def perm_right_descent(p: tuple, k: int) -> bool:
    return p[k - 1] > p[k]


@lru_cache(maxsize=1 << 18)
def perm_lexmin_word(p: tuple) -> tuple:
    word = []
    n = len(p)
    while True:
        q = perm_inv(p)
        ks = [k for k in range(1, n) if q[k - 1] > q[k]]
        if not ks:
            return tuple(word)
        k = ks[0]
        word.append(k)
        p = perm_mul(transposition(n, k), p)


def act_on_word(p: tuple, nu: tuple) -> tuple:
    """Place permutation: ``(p nu)_{p(k)} = nu_k``."""
    out = [None] * len(nu)
    for k, x in enumerate(nu):
        out[p[k] - 1] = x
    return tuple(out)


def block_swap(m: int, n: int) -> tuple:
    """``w[m,n]``: ``k -> k+n`` for ``k <= m``, ``k -> k-m`` otherwise."""
    return tuple(k + n if k <= m else k - m for k in range(1, m + n + 1))


def in_shuffle_set(p: tuple, m: int) -> bool:
    return all(p[k] < p[k + 1] for k in range(m - 1)) and \
        all(p[k] < p[k + 1] for k in range(m, len(p) - 1))


@dataclass(frozen=True)
class CosetRep:
    perm: tuple
    m: int
    ell: int

    @property
    def in_shuffle_set(self) -> bool:
        return in_shuffle_set(self.perm, self.m)


@lru_cache(maxsize=None)
def coset_reps(m: int, ell: int) -> tuple[CosetRep, ...]:
    """Minimal length left coset representatives ``S_{m,ell}``, sorted by length then lex."""
    n = m + ell
    out = []
    for first in itertools.combinations(range(1, n + 1), m):
        rest = [x for x in range(1, n + 1) if x not in first]
        out.append(CosetRep(tuple(first) + tuple(rest), m, ell))
    out.sort(key=lambda c: (perm_length(c.perm), c.perm))
    assert len(out) == comb(n, m)
    return tuple(out)


@lru_cache(maxsize=1 << 18)
def coset_split(p: tuple, m: int) -> tuple[tuple, tuple]:
    """Write ``p = w v`` with ``w`` in ``S_{m,n}`` and ``v`` in ``S_m x S_n``."""
    w = tuple(sorted(p[:m])) + tuple(sorted(p[m:]))
    v = perm_mul(perm_inv(w), p)
    return w, v
