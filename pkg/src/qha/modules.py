"""Finite-dimensional graded modules with exact generator matrices."""
from __future__ import annotations

import os
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property

from .cartan import CartanDatum, Weight, act_on_word, transposition
from .linalg import ONE, ZERO, Echelon, axpy, matvec
from .rewrite import QTable


class ModuleError(ValueError):
    pass


class ResourceError(RuntimeError):
    """A configured size cap was exceeded."""


def default_ht_cap() -> int:
    return int(os.environ.get("QHA_HT_MAX", "7"))


DIM_CAP = int(os.environ.get("QHA_DIM_MAX", "5000"))

class ModuleRegistry:
    """Every registered module is eventually checked against the defining relations.

    At most ``limit`` modules are held; beyond that the oldest are checked and
    released, keeping a tally. The newest ``keep`` stay pending because their
    builders may still be filling them in.
    """

    def __init__(self, limit: int = 20000, keep: int = 200):
        self.limit = limit
        self.keep = keep
        self.pending: list = []
        self.checked = 0
        self.failed = 0
        self.failures: list[str] = []  # first few only

    def add(self, M: "GradedModule") -> None:
        self.pending.append(M)
        if len(self.pending) >= self.limit:
            self.flush(self.keep)

    def flush(self, keep: int = 0) -> None:
        cut = max(len(self.pending) - keep, 0)
        batch, self.pending = self.pending[:cut], self.pending[cut:]
        for M in batch:
            bad = check_relations(M)
            self.checked += 1
            if bad:
                self.failed += 1
                if len(self.failures) < 50:
                    self.failures.append(f"{M.name or '<unnamed>'} dim={M.dim}: " + "; ".join(bad[:3]))

    def __len__(self) -> int:
        return self.checked + len(self.pending)


# consumed by the relation suite
REGISTRY = ModuleRegistry()


class GradedModule:
    """Graded ``R(beta)``-module on a basis of ``(word, degree)`` labels.

    ``x[k-1]`` and ``tau[l-1]`` are column-sparse matrices.
    """

    def __init__(self, qtable: QTable, basis, x, tau, name: str = "", verify: bool = False,
                 register: bool = True):
        self.q = qtable
        self.cartan: CartanDatum = qtable.cartan
        self.basis = [(tuple(w), int(d)) for w, d in basis]
        if not self.basis:
            raise ModuleError("zero module")
        self.n = len(self.basis[0][0])
        if any(len(w) != self.n for w, _ in self.basis):
            raise ModuleError("basis words have different lengths")
        if len(self.basis) > DIM_CAP:
            raise ResourceError(f"dimension {len(self.basis)} exceeds cap {DIM_CAP}")
        self.x = [dict(m) for m in x]
        self.tau = [dict(m) for m in tau]
        if len(self.x) != self.n or len(self.tau) != max(self.n - 1, 0):
            raise ModuleError("wrong number of generator matrices")
        self.name = name
        if verify:
            bad = self.relation_failures()
            if bad:
                raise ModuleError("relations fail: " + "; ".join(bad[:5]))
        if register:
            REGISTRY.add(self)

    # -- basic data ------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    @cached_property
    def beta(self) -> Weight:
        return self.cartan.root_of_word(self.basis[0][0])

    @property
    def wt(self) -> Weight:
        return -self.beta

    @cached_property
    def components(self) -> dict:
        comp = defaultdict(list)
        for j, key in enumerate(self.basis):
            comp[key].append(j)
        return dict(comp)

    def gen(self, kind: str, k: int) -> dict:
        return self.x[k - 1] if kind == "x" else self.tau[k - 1]

    def act(self, kind: str, k: int, v: dict) -> dict:
        return matvec(self.gen(kind, k), v)

    def act_word(self, letters, v: dict) -> dict:
        for kind, k in reversed(list(letters)):
            v = self.act(kind, k, v)
            if not v:
                break
        return v

    def letters(self):
        return [("x", k) for k in range(1, self.n + 1)] + [("t", l) for l in range(1, self.n)]

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<GradedModule{label} ht={self.n} dim={self.dim}>"

    # -- characters ------------------------------------------------------
    @cached_property
    def character(self) -> QCharacter:
        return QCharacter.of(self)

    def qcharacter(self) -> QCharacter:
        return self.character

    # -- relations -------------------------------------------------------
    def relation_failures(self) -> list[str]:
        return check_relations(self)

    # -- derived modules -------------------------------------------------
    def shift(self, s: int) -> GradedModule:
        if s == 0:
            return self
        out = GradedModule(self.q, [(w, d + s) for w, d in self.basis], self.x, self.tau,
                           self.name)
        for attr in ("simple", "real", "generators"):
            if hasattr(self, attr):
                setattr(out, attr, getattr(self, attr))
        return out


@dataclass(frozen=True)
class QCharacter:
    """``{word: {degree: multiplicity}}`` frozen as a sorted tuple."""

    data: tuple

    @classmethod
    def of(cls, M: GradedModule) -> QCharacter:
        c = Counter(M.basis)
        return cls.from_counter(c)

    @classmethod
    def from_counter(cls, c) -> QCharacter:
        per: dict = defaultdict(dict)
        for (w, d), m in c.items():
            if m:
                per[w][d] = per[w].get(d, 0) + m
        return cls(tuple(sorted((w, tuple(sorted(v.items()))) for w, v in per.items())))

    def counter(self) -> Counter:
        c = Counter()
        for w, terms in self.data:
            for d, m in terms:
                c[(w, d)] += m
        return c

    def shift(self, s: int) -> QCharacter:
        return QCharacter(tuple((w, tuple((d + s, m) for d, m in t)) for w, t in self.data))

    def bar(self) -> QCharacter:
        return QCharacter(tuple((w, tuple(sorted((-d, m) for d, m in t))) for w, t in self.data))

    def dim(self) -> int:
        return sum(m for _, t in self.data for _, m in t)

    def words(self) -> set:
        return {w for w, _ in self.data}

    def shift_to(self, other: QCharacter) -> int | None:
        """``a`` with ``other = q^a self``, or None."""
        if not self.data or not other.data or len(self.data) != len(other.data):
            return None
        (w0, t0), (w1, t1) = self.data[0], other.data[0]
        if w0 != w1:
            return None
        a = t1[0][0] - t0[0][0]
        return a if self.shift(a) == other else None

    def __add__(self, other: QCharacter) -> QCharacter:
        return QCharacter.from_counter(self.counter() + other.counter())

    def to_text(self) -> str:
        parts = []
        for w, t in self.data:
            poly = "+".join(f"{m if m > 1 else ''}q^{d}" if d else str(m) for d, m in t)
            parts.append(f"({poly})[{','.join(map(str, w))}]")
        return " + ".join(parts) if parts else "0"


def iso_simple(M: GradedModule, N: GradedModule) -> int | None:
    """Shift ``a`` with ``N = q^a M`` as simples, compared on characters."""
    return M.character.shift_to(N.character)


# -- relation checking ------------------------------------------------------

def _e(j: int) -> dict:
    return {j: ONE}


def check_relations(M: GradedModule) -> list[str]:
    """Every defining relation as an exact matrix identity; returns failures."""
    cartan, q = M.cartan, M.q
    n = M.n
    bad: list[str] = []
    beta = M.beta
    # e(nu) e(nu') = delta e(nu), sum e(nu) = 1: every basis vector lies in one sector of I^beta
    for w, _ in M.basis:
        if cartan.root_of_word(w) != beta:
            bad.append(f"word {w} not in I^beta")
            break
    # x_k e(nu) = e(nu) x_k and grading
    for k in range(1, n + 1):
        for j, col in M.x[k - 1].items():
            w, d = M.basis[j]
            for i in col:
                if M.basis[i] != (w, d + cartan.norm(w[k - 1])):
                    bad.append(f"x{k} breaks sector/degree at {j}")
                    break
    # tau_l e(nu) = e(s_l nu) tau_l and grading
    for l in range(1, n):
        s = transposition(n, l)
        for j, col in M.tau[l - 1].items():
            w, d = M.basis[j]
            tgt = (act_on_word(s, w), d - cartan.ip(w[l - 1], w[l]))
            for i in col:
                if M.basis[i] != tgt:
                    bad.append(f"tau{l} breaks sector/degree at {j}")
                    break
    cols = range(M.dim)
    X = lambda k, v: matvec(M.x[k - 1], v)  # noqa: E731
    T = lambda k, v: matvec(M.tau[k - 1], v)  # noqa: E731
    for j in cols:
        ej = _e(j)
        w = M.basis[j][0]
        xs = [X(k, ej) for k in range(1, n + 1)]
        # x_k x_l = x_l x_k
        for k in range(1, n + 1):
            for l in range(k + 1, n + 1):
                if X(k, xs[l - 1]) != X(l, xs[k - 1]):
                    bad.append(f"x{k}x{l} != x{l}x{k} on {j}")
        ts = [T(k, ej) for k in range(1, n)]
        for k in range(1, n):
            # far commutativity
            for l in range(k + 2, n):
                if T(k, ts[l - 1]) != T(l, ts[k - 1]):
                    bad.append(f"tau{k}tau{l} != tau{l}tau{k} on {j}")
            # tau_k^2 = Q(x_k, x_{k+1})
            rhs: dict = {}
            for (p, r), t in q.Q(w[k - 1], w[k]).items():
                v = ej
                for _ in range(p):
                    v = X(k, v)
                for _ in range(r):
                    v = X(k + 1, v)
                axpy(rhs, t, v)
            if T(k, ts[k - 1]) != rhs:
                bad.append(f"tau{k}^2 != Q on {j}")
            # tau_k x_l - x_{s_k l} tau_k
            eq = w[k - 1] == w[k]
            for l in range(1, n + 1):
                sl = k + 1 if l == k else k if l == k + 1 else l
                lhs = T(k, xs[l - 1])
                axpy(lhs, -ONE, X(sl, ts[k - 1]))
                exp = {}
                if eq and l == k:
                    exp = {j: -ONE}
                elif eq and l == k + 1:
                    exp = {j: ONE}
                if lhs != exp:
                    bad.append(f"tau{k}x{l} relation fails on {j}")
            # braid
            if k + 1 < n:
                lhs = T(k + 1, T(k, ts[k]))
                axpy(lhs, -ONE, T(k, T(k + 1, ts[k - 1])))
                exp = {}
                if w[k - 1] == w[k + 1]:
                    for (a, b, c), t in q.Qbar(w[k - 1], w[k]).items():
                        v = ej
                        for kk, e in ((k, a), (k + 1, b), (k + 2, c)):
                            for _ in range(e):
                                v = X(kk, v)
                        axpy(exp, t, v)
                if lhs != exp:
                    bad.append(f"braid relation fails at tau{k} on {j}")
        if len(bad) > 20:
            break
    return bad


# -- constructors -------------------------------------------------------------

def unit_module(qtable: QTable) -> GradedModule:
    return GradedModule(qtable, [((), 0)], [], [], name="1")


def one_dim_module(qtable: QTable, word, strict: bool = True) -> GradedModule:
    """``<nu>``: one-dimensional, every generator acting by zero.

    ``strict`` enforces the sufficient condition on adjacent letters; without
    it only the defining relations are checked.
    """
    cartan = qtable.cartan
    word = tuple(word)
    if not word:
        return unit_module(qtable)
    for i in word:
        if i not in cartan.pos:
            raise ModuleError(f"index {i} not in the index set")
    n = len(word)
    for k in range(n - 1 if strict else 0):
        if cartan.ip(word[k], word[k + 1]) >= 0:
            raise ModuleError(f"<{word}>: adjacent letters must pair negatively")
    for k in range(n - 2 if strict else 0):
        if word[k] == word[k + 2]:
            raise ModuleError(f"<{word}>: letters two apart must differ")
    M = GradedModule(qtable, [(word, 0)], [{} for _ in range(n)], [{} for _ in range(n - 1)],
                     name="<" + ",".join(map(str, word)) + ">")
    bad = M.relation_failures()
    if bad:
        raise ModuleError("relations fail: " + "; ".join(bad))
    return M


def simple_L(qtable: QTable, i: int) -> GradedModule:
    return one_dim_module(qtable, (i,))


def dual(M: GradedModule) -> GradedModule:
    from .linalg import transpose
    return GradedModule(M.q, [(w, -d) for w, d in M.basis],
                        [transpose(m) for m in M.x], [transpose(m) for m in M.tau],
                        name=f"dual({M.name})" if M.name else "")


def psi_star(M: GradedModule) -> GradedModule:
    """Twist by ``e(nu) -> e(rev nu)``, ``x_k -> x_{n+1-k}``, ``tau_k -> -tau_{n-k}``."""
    n = M.n
    x = [M.x[n - k] for k in range(1, n + 1)]
    tau = [{j: {i: -c for i, c in col.items()} for j, col in M.tau[n - k - 1].items()}
           for k in range(1, n)]
    return GradedModule(M.q, [(tuple(reversed(w)), d) for w, d in M.basis], x, tau,
                        name=f"psi({M.name})" if M.name else "")


def direct_sum(mods: list[GradedModule]) -> GradedModule:
    basis, off = [], []
    for M in mods:
        off.append(len(basis))
        basis.extend(M.basis)
    n = mods[0].n

    def glue(get):
        out = {}
        for M, o in zip(mods, off):
            for j, col in get(M).items():
                out[j + o] = {i + o: c for i, c in col.items()}
        return out

    x = [glue(lambda M, k=k: M.x[k]) for k in range(n)]
    tau = [glue(lambda M, k=k: M.tau[k]) for k in range(n - 1)]
    return GradedModule(mods[0].q, basis, x, tau)


def _express(M: GradedModule, spaces: dict, vectors: dict):
    """Generator matrices of the span of ``vectors`` (closed under the action).

    ``spaces[key]`` is a tracked Echelon of the subspace in component ``key``;
    ``vectors[t]`` gives the new basis vector with tag ``t``.
    """
    x, tau = [], []
    for kind, k in M.letters():
        mat = {}
        for t, v in vectors.items():
            img = M.act(kind, k, v)
            if not img:
                continue
            key = M.basis[next(iter(img))]
            ech = spaces.get(key)
            if ech is None:
                raise ModuleError("subspace is not a submodule")
            res, combo = ech.reduce(img)
            if res:
                raise ModuleError("subspace is not a submodule")
            mat[t] = combo
        (x if kind == "x" else tau).append(mat)
    return x, tau


def submodule(M: GradedModule, vectors, name: str = "") -> GradedModule:
    """Module on the span of homogeneous ``vectors`` (must be a submodule)."""
    spaces: dict = {}
    keep: list = []
    for v in vectors:
        if not v:
            continue
        key = M.basis[next(iter(v))]
        e = spaces.setdefault(key, Echelon(track=True))
        if e.add(v, tag=len(keep)):
            keep.append((key, v))
    # rebuild with tags indexing kept vectors
    spaces = {}
    for t, (key, v) in enumerate(keep):
        spaces.setdefault(key, Echelon(track=True)).add(v, tag=t)
    vecs = {t: v for t, (_, v) in enumerate(keep)}
    x, tau = _express(M, spaces, vecs)
    sub = GradedModule(M.q, [key for key, _ in keep], x, tau, name=name)
    sub.embedding = [v for _, v in keep]
    return sub


def quotient(M: GradedModule, vectors, name: str = "") -> GradedModule:
    """``M / U`` for ``U`` the span of homogeneous ``vectors`` (a submodule)."""
    spaces: dict = {}
    for v in vectors:
        if v:
            key = M.basis[next(iter(v))]
            spaces.setdefault(key, Echelon()).add(v)
    pivots = set()
    for e in spaces.values():
        pivots.update(e.rows)
    keep = [j for j in range(M.dim) if j not in pivots]
    if not keep:
        raise ModuleError("quotient is zero")
    new = {j: t for t, j in enumerate(keep)}
    x, tau = [], []
    for kind, k in M.letters():
        mat = {}
        for j in keep:
            img = M.act(kind, k, {j: ONE})
            if img:
                key = M.basis[next(iter(img))]
                if key in spaces:
                    img, _ = spaces[key].reduce(img)
            if img:
                mat[new[j]] = {new[i]: c for i, c in img.items()}
        (x if kind == "x" else tau).append(mat)
    Q = GradedModule(M.q, [M.basis[j] for j in keep], x, tau, name=name)
    Q.lift = keep
    return Q


def self_dual_shift(M: GradedModule) -> int | None:
    """``s`` with ``q^s M`` having a bar-invariant character, if any."""
    ch = M.character
    c = ch.shift_to(ch.bar())
    if c is None or c % 2:
        return None
    return c // 2


def normalize(M: GradedModule) -> GradedModule:
    s = self_dual_shift(M)
    return M if s is None else M.shift(s)


# -- restriction ----------------------------------------------------------------

@dataclass
class Restriction:
    """``e(alpha, beta) M`` with its commuting ``R(alpha)`` and ``R(beta)`` actions."""

    module: GradedModule
    a: int
    indices: list

    @property
    def is_zero(self) -> bool:
        return not self.indices

    def part(self, side: str) -> GradedModule:
        M, a = self.module, self.a
        if not self.indices:
            raise ModuleError("restriction is zero")
        lo, hi = (0, a) if side == "left" else (a, M.n)
        new = {j: t for t, j in enumerate(self.indices)}
        basis = [(M.basis[j][0][lo:hi], M.basis[j][1]) for j in self.indices]
        x = [{new[j]: {new[i]: c for i, c in M.x[k].get(j, {}).items()} for j in self.indices
              if M.x[k].get(j)} for k in range(lo, hi)]
        tau = [{new[j]: {new[i]: c for i, c in M.tau[k].get(j, {}).items()} for j in self.indices
                if M.tau[k].get(j)} for k in range(lo, hi - 1)]
        return GradedModule(M.q, basis, x, tau)

    def left(self) -> GradedModule:
        return self.part("left")

    def right(self) -> GradedModule:
        return self.part("right")

    @property
    def dim(self) -> int:
        return len(self.indices)


def restrict(M: GradedModule, alpha: Weight, beta: Weight) -> Restriction:
    if alpha + beta != M.beta or not alpha.is_positive or not beta.is_positive:
        raise ModuleError("restriction weights must be in Q_+ and add up to the module weight")
    a = alpha.ht
    cartan = M.cartan
    idx = [j for j, (w, _) in enumerate(M.basis) if cartan.root_of_word(w[:a]) == alpha]
    return Restriction(M, a, idx)


def E(M: GradedModule, i: int) -> GradedModule | None:
    """``E_i M = e(alpha_i, beta - alpha_i) M`` as an ``R(beta - alpha_i)``-module."""
    if M.n == 0:
        return None
    cartan = M.cartan
    r = restrict(M, cartan.alpha(i), M.beta - cartan.alpha(i)) if M.beta.root[cartan.pos[i]] else None
    return None if r is None or r.is_zero else r.right()


def E_star(M: GradedModule, i: int) -> GradedModule | None:
    if M.n == 0:
        return None
    cartan = M.cartan
    if not M.beta.root[cartan.pos[i]]:
        return None
    r = restrict(M, M.beta - cartan.alpha(i), cartan.alpha(i))
    return None if r.is_zero else r.left()


# -- statistics -----------------------------------------------------------------

@dataclass(frozen=True)
class ModuleStats:
    eps: int
    eps_star: int
    wt: int
    delta: int


def eps(M: GradedModule, i: int) -> int:
    best = 0
    for w in M.character.words():
        k = 0
        while k < len(w) and w[k] == i:
            k += 1
        best = max(best, k)
    return best


def eps_star(M: GradedModule, i: int) -> int:
    best = 0
    for w in M.character.words():
        k = 0
        while k < len(w) and w[len(w) - 1 - k] == i:
            k += 1
        best = max(best, k)
    return best


def stats(M: GradedModule, i: int) -> ModuleStats:
    e, es = eps(M, i), eps_star(M, i)
    wt = M.cartan.pair(i, M.wt)
    return ModuleStats(e, es, wt, e + es + wt)


__all__ = [
    "GradedModule", "QCharacter", "ModuleError", "ResourceError", "ModuleStats", "Restriction",
    "unit_module", "one_dim_module", "simple_L", "dual", "psi_star", "direct_sum", "submodule",
    "quotient", "normalize", "self_dual_shift", "restrict", "E", "E_star", "eps", "eps_star",
    "stats", "iso_simple", "check_relations", "ZERO",
]
