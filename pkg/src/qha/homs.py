"""Graded Hom spaces by spinning a generating set.

A homomorphism out of ``V`` is fixed by the images of generators of ``V``;
the relations met while spinning those generators become linear
constraints on the images.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import ONE, ZERO, Echelon, axpy, matvec, rref_nullspace
from .modules import GradedModule


class Presentation:
    """Spanning tree of ``V`` grown from homogeneous generator vectors."""

    def __init__(self, V: GradedModule, gens=None, max_gens: int | None = None):
        self.V = V
        self.nodes: list = []  # ("gen", g) or (parent, letter)
        self.vecs: list = []
        self.gens: list = []  # node index of each generator
        self.ech: dict = {}
        self.relations: list = []
        self.complete = True
        letters = V.letters()
        queue: list = []

        def key_of(v):
            return V.basis[next(iter(v))]

        def new_node(v, origin) -> bool:
            e = self.ech.setdefault(key_of(v), Echelon(track=True))
            if e.add(v, tag=len(self.nodes)):
                self.nodes.append(origin)
                self.vecs.append(v)
                queue.append(len(self.nodes) - 1)
                return True
            return False

        def spin():
            while queue:
                j = queue.pop(0)
                for letter in letters:
                    img = V.act(*letter, self.vecs[j])
                    if not img:
                        self.relations.append((j, letter, {}))
                        continue
                    e = self.ech.get(key_of(img))
                    res, combo = e.reduce(img) if e is not None else (img, {})
                    if res:
                        new_node(img, (j, letter))
                        self.relations.append((j, letter, {len(self.nodes) - 1: ONE}))
                    else:
                        self.relations.append((j, letter, combo))

        candidates = gens if gens is not None else ({j: ONE} for j in range(V.dim))
        for v in candidates:
            if len(self.vecs) == V.dim:
                break
            e = self.ech.get(key_of(v))
            if e is not None and e.contains(v):
                continue
            if max_gens is not None and len(self.gens) >= max_gens:
                self.complete = False
                break
            new_node(v, ("gen", len(self.gens)))
            self.gens.append(len(self.nodes) - 1)
            spin()
        if len(self.vecs) < V.dim:
            self.complete = False

    @property
    def cyclic(self) -> bool:
        return self.complete and len(self.gens) == 1

    def coords(self, v: dict) -> dict:
        """Coordinates of a homogeneous vector in terms of tree nodes."""
        if not v:
            return {}
        e = self.ech.get(self.V.basis[next(iter(v))])
        res, combo = e.reduce(v) if e is not None else (v, {})
        if res:
            raise ValueError("vector outside the spanned subspace")
        return combo


@dataclass
class GradedMorphism:
    """Homogeneous intertwiner raising degrees by ``degree``."""

    source: GradedModule
    target: GradedModule
    matrix: dict  # column-sparse
    degree: int
    meta: dict = field(default_factory=dict)

    def apply(self, v: dict) -> dict:
        return matvec(self.matrix, v)

    def is_zero(self) -> bool:
        return not any(self.matrix.values())

    def normalized(self) -> GradedMorphism:
        """Scale so the first nonzero entry in row-major order is 1."""
        best = None
        for j, col in self.matrix.items():
            for i, c in col.items():
                if c and (best is None or (i, j) < best[0]):
                    best = ((i, j), c)
        if best is None:
            return self
        inv = ONE / best[1]
        return GradedMorphism(self.source, self.target,
                              {j: {i: c * inv for i, c in col.items()} for j, col in self.matrix.items()},
                              self.degree, dict(self.meta))

    def scaled(self, a) -> GradedMorphism:
        return GradedMorphism(self.source, self.target,
                              {j: {i: c * a for i, c in col.items()} for j, col in self.matrix.items() if a},
                              self.degree, dict(self.meta))

    def compose(self, first: GradedMorphism) -> GradedMorphism:
        """``self o first``."""
        mat = {}
        for j, col in first.matrix.items():
            img = matvec(self.matrix, col)
            if img:
                mat[j] = img
        return GradedMorphism(first.source, self.target, mat, first.degree + self.degree)

    def image_vectors(self) -> list[dict]:
        ech: dict = {}
        out = []
        for j in range(self.source.dim):
            v = self.matrix.get(j)
            if not v:
                continue
            key = self.target.basis[next(iter(v))]
            e = ech.setdefault(key, Echelon())
            if e.add(v):
                out.append(v)
        return out

    def rank(self) -> int:
        return len(self.image_vectors())

    def kernel_vectors(self) -> list[dict]:
        out = []
        for key, idx in self.source.components.items():
            rows: dict = {}
            for j in idx:
                for i, c in self.matrix.get(j, {}).items():
                    rows.setdefault(i, {})[j] = c
            out.extend(rref_nullspace(list(rows.values()), idx))
        return out

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def commutes(self) -> bool:
        """Check ``f g = g f`` for every generator."""
        S, T = self.source, self.target
        if S.n != T.n:
            return False
        for kind, k in S.letters():
            for j in range(S.dim):
                a = matvec(self.matrix, S.act(kind, k, {j: ONE}))
                b = T.act(kind, k, self.matrix.get(j, {}))
                if a != b:
                    return False
        return True

    def is_homogeneous(self) -> bool:
        for j, col in self.matrix.items():
            w, d = self.source.basis[j]
            for i in col:
                if self.target.basis[i] != (w, d + self.degree):
                    return False
        return True


def candidate_degrees(pres: Presentation, W: GradedModule) -> list[int]:
    degs = set()
    wkeys = W.components
    for g in pres.gens:
        w, d = pres.V.basis[next(iter(pres.vecs[g]))]
        for (w2, d2) in wkeys:
            if w2 == w:
                degs.add(d2 - d)
    return sorted(degs)


def hom_degree(pres: Presentation, W: GradedModule, s: int, limit: int | None = None) -> list[GradedMorphism]:
    """Basis of degree-``s`` homomorphisms ``V -> W``."""
    V = pres.V
    if V.n != W.n or V.beta != W.beta:
        return []
    params = []
    for g, node in enumerate(pres.gens):
        w, d = V.basis[next(iter(pres.vecs[node]))]
        for i in W.components.get((w, d + s), []):
            params.append((g, i))
    if not params:
        return []
    # F[j][p]: image of node j as a function of the parameters
    F: list = [None] * len(pres.nodes)
    for j, origin in enumerate(pres.nodes):
        if origin[0] == "gen":
            F[j] = {p: {p[1]: ONE} for p in params if p[0] == origin[1]}
        else:
            parent, (kind, k) = origin
            F[j] = {}
            for p, v in F[parent].items():
                img = W.act(kind, k, v)
                if img:
                    F[j][p] = img
    pidx = {p: n for n, p in enumerate(params)}
    rows: list = []
    ech = Echelon()
    full = len(params)
    for j, (kind, k), combo in pres.relations:
        # W.act(letter, F_j) - sum combo_l F_l = 0
        acc: dict = {}
        for p, v in F[j].items():
            img = W.act(kind, k, v)
            for i, c in img.items():
                acc.setdefault(i, {})
                t = acc[i].get(p, ZERO) + c
                acc[i][p] = t
        for l, a in combo.items():
            for p, v in F[l].items():
                for i, c in v.items():
                    acc.setdefault(i, {})
                    acc[i][p] = acc[i].get(p, ZERO) - a * c
        for i, row in acc.items():
            row = {p: c for p, c in row.items() if c}
            if row:
                vec = {pidx[p]: c for p, c in row.items()}
                if ech.add(vec):
                    rows.append(row)
                    if len(ech) == full:
                        return []
    sols = rref_nullspace(rows, params)
    out = []
    for z in sols[: limit if limit else None]:
        node_img = []
        for j in range(len(pres.nodes)):
            v: dict = {}
            for p, c in z.items():
                if p in F[j]:
                    axpy(v, c, F[j][p])
            node_img.append(v)
        mat = {}
        for col in range(V.dim):
            combo = pres.coords({col: ONE})
            v: dict = {}
            for l, a in combo.items():
                axpy(v, a, node_img[l])
            if v:
                mat[col] = v
        out.append(GradedMorphism(V, W, mat, s))
    return out


def hom_space(V: GradedModule, W: GradedModule, degrees=None, pres: Presentation | None = None,
              stop_after: int | None = None) -> list[GradedMorphism]:
    """Basis of ``HOM(V, W)`` sorted by degree."""
    if V.n != W.n or V.beta != W.beta:
        return []
    pres = pres or presentation(V)
    out = []
    for s in (degrees if degrees is not None else candidate_degrees(pres, W)):
        out.extend(hom_degree(pres, W, s))
        if stop_after is not None and len(out) >= stop_after:
            break
    return out


def presentation(V: GradedModule) -> Presentation:
    p = getattr(V, "_presentation", None)
    if p is None:
        p = Presentation(V, gens=getattr(V, "generators", None))
        V._presentation = p
    return p
