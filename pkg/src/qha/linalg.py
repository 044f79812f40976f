"""Exact sparse linear algebra over the rationals.

Vectors are ``dict[int, QQ]`` with no stored zeros.  Matrices are stored
column-wise: ``M[j]`` is the sparse image of the ``j``-th basis vector.
"""
from __future__ import annotations

from fractions import Fraction

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    QQ = Fraction

from . import _kernels

ZERO = QQ(0)
ONE = QQ(1)

axpy = _kernels.axpy
matvec = _kernels.matvec
reduce_by = _kernels.reduce_by


def qq(x) -> QQ:
    """Coerce ints, Fractions and ``"p/q"`` strings to the scalar type."""
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ(x)


def qstr(x) -> str:
    x = qq(x)
    n, d = int(x.numerator), int(x.denominator)
    return str(n) if d == 1 else f"{n}/{d}"


def scale(v: dict, a) -> dict:
    if not a:
        return {}
    return {k: a * c for k, c in v.items()}


def add(u: dict, v: dict, a=ONE) -> dict:
    out = dict(u)
    axpy(out, a, v)
    return out


def matmul(A: dict, B: dict) -> dict:
    """Column-sparse product ``A @ B``."""
    out = {}
    for j, col in B.items():
        w = matvec(A, col)
        if w:
            out[j] = w
    return out


def mat_sub(A: dict, B: dict) -> dict:
    out = {j: dict(c) for j, c in A.items()}
    for j, col in B.items():
        tgt = out.setdefault(j, {})
        axpy(tgt, -ONE, col)
        if not tgt:
            del out[j]
    return out


def mat_add_scaled(A: dict, B: dict, a) -> dict:
    out = {j: dict(c) for j, c in A.items()}
    for j, col in B.items():
        tgt = out.setdefault(j, {})
        axpy(tgt, a, col)
        if not tgt:
            del out[j]
    return out


def mat_is_zero(A: dict) -> bool:
    return all(not c for c in A.values())


def transpose(A: dict) -> dict:
    out: dict = {}
    for j, col in A.items():
        for i, c in col.items():
            out.setdefault(i, {})[j] = c
    return out


def identity(indices) -> dict:
    return {i: {i: ONE} for i in indices}


class Echelon:
    """Incremental row echelon form with optional provenance tracking.

    Each stored row has its smallest index as pivot, normalised to 1.
    With ``track=True`` every row also records the combination of inserted
    vectors (by tag) that produced it.
    """

    def __init__(self, track: bool = False):
        self.rows: dict[int, dict] = {}
        self.combos: dict[int, dict] = {}
        self.track = track

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict):
        """Return ``(residue, combo)`` with ``v = residue + sum combo[t] * vec_t``."""
        res = dict(v)
        combo: dict = {}
        reduce_by(res, self.rows, combo if self.track else None, self.combos)
        return res, combo

    def add(self, v: dict, tag=None):
        """Insert ``v``; return True if it enlarged the span."""
        res, combo = self.reduce(v)
        if not res:
            return False
        p = min(res)
        inv = ONE / res[p]
        row = {k: c * inv for k, c in res.items()}
        self.rows[p] = row
        if self.track:
            c = {t: -a * inv for t, a in combo.items()}
            c[tag] = c.get(tag, ZERO) + inv
            self.combos[p] = {t: a for t, a in c.items() if a}
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]

    def basis(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]


def rref_nullspace(rows: list[dict], columns: list) -> list[dict]:
    """Nullspace of the system ``rows`` (dicts keyed by column labels)."""
    pos = {c: n for n, c in enumerate(columns)}
    piv: dict[int, dict] = {}
    for r in rows:
        v = {pos[c]: a for c, a in r.items() if a}
        reduce_by(v, piv, None, None)
        if not v:
            continue
        p = min(v)
        inv = ONE / v[p]
        v = {k: a * inv for k, a in v.items()}
        for q, other in piv.items():
            c = other.get(p)
            if c:
                axpy(other, -c, v)
        piv[p] = v
        if len(piv) == len(columns):
            return []
    free = [n for n in range(len(columns)) if n not in piv]
    out = []
    for f in free:
        vec = {columns[f]: ONE}
        for p, row in piv.items():
            c = row.get(f)
            if c:
                vec[columns[p]] = -c
        out.append(vec)
    return out


def rank(vectors) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return len(e)
