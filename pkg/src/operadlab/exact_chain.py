"""Exact rational graded linear algebra: spaces, maps, complexes, homology.

Everything is done over Fraction.  Vectors are sparse dicts mapping basis
labels to nonzero rational coefficients.  Degrees are integer tuples; the
first component is the cohomological degree and determines Koszul parity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Scalar = Fraction
Degree = tuple  # tuple of ints
Vector = dict   # label -> Fraction


class SpaceMismatch(Exception):
    pass


class InhomogeneousRelation(Exception):
    pass


class StructuralFailure(Exception):
    """Raised when a differential fails d*d = 0."""


# ---------------------------------------------------------------------------
# vectors

def vec_add(u: Vector, v: Vector) -> Vector:
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, Fraction(0)) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vec_scale(c, u: Vector) -> Vector:
    c = Fraction(c)
    if not c:
        return {}
    return {k: c * v for k, v in u.items()}


def vec_sub(u: Vector, v: Vector) -> Vector:
    return vec_add(u, vec_scale(-1, v))


def vec_is_zero(u: Vector) -> bool:
    return not any(u.values())


def vec_clean(u: Vector) -> Vector:
    return {k: v for k, v in u.items() if v}


# ---------------------------------------------------------------------------
# spaces

def as_degree(d) -> Degree:
    if isinstance(d, int):
        return (d,)
    return tuple(int(x) for x in d)


class GradedSpace:
    """Finite free module with an ordered basis of opaque labels.

    Each label carries an integer-tuple degree.  Label order is the ambient
    order used for deterministic pivoting.
    """

    def __init__(self, labels: Iterable, degrees: Mapping):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.degrees = {l: as_degree(degrees[l]) for l in self.labels}
        self.index = {l: i for i, l in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def degree(self, label) -> Degree:
        return self.degrees[label]

    def labels_of_degree(self, d) -> list:
        d = as_degree(d)
        return [l for l in self.labels if self.degrees[l] == d]

    def labels_of_degree1(self, n: int) -> list:
        return [l for l in self.labels if self.degrees[l][0] == n]

    def degrees_present(self) -> list:
        return sorted(set(self.degrees.values()))

    def with_order(self, labels) -> "GradedSpace":
        labels = tuple(labels)
        if set(labels) != set(self.labels):
            raise ValueError("reordering must preserve the basis")
        return GradedSpace(labels, self.degrees)

    def __contains__(self, label):
        return label in self.index

    def __repr__(self):
        return f"GradedSpace(dim={self.dim})"


def degree_add(a: Degree, b: Degree) -> Degree:
    if len(a) < len(b):
        a = a + (0,) * (len(b) - len(a))
    elif len(b) < len(a):
        b = b + (0,) * (len(a) - len(b))
    return tuple(x + y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# maps

class GradedMap:
    """Sparse degree-homogeneous linear map between graded spaces.

    entries[src][tgt] holds the matrix coefficient; every entry must connect
    degrees differing exactly by `shift`.
    """

    def __init__(self, source: GradedSpace, target: GradedSpace, shift,
                 entries: Mapping, check: bool = True):
        self.source = source
        self.target = target
        self.shift = as_degree(shift)
        self.entries = {}
        for src, col in entries.items():
            col = vec_clean(col)
            if not col:
                continue
            if check and src not in source.index:
                raise SpaceMismatch(f"unknown source label {src!r}")
            self.entries[src] = col
            if check:
                want = degree_add(source.degree(src), self.shift)
                for tgt in col:
                    if tgt not in target.index:
                        raise SpaceMismatch(f"unknown target label {tgt!r}")
                    if target.degree(tgt) != want:
                        raise SpaceMismatch(
                            f"entry {src!r}->{tgt!r} violates shift "
                            f"{self.shift}")

    @classmethod
    def zero(cls, source, target, shift=(0,)):
        return cls(source, target, shift, {})

    @classmethod
    def identity(cls, space):
        return cls(space, space, (0,) * len(next(iter(space.degrees.values()), (0,))),
                   {l: {l: Fraction(1)} for l in space.labels}, check=False)

    def column(self, src) -> Vector:
        return dict(self.entries.get(src, {}))

    def apply(self, vec: Vector) -> Vector:
        out: Vector = {}
        for src, c in vec.items():
            for tgt, a in self.entries.get(src, {}).items():
                s = out.get(tgt, Fraction(0)) + c * a
                if s:
                    out[tgt] = s
                else:
                    out.pop(tgt, None)
        return out

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self after other."""
        if other.target is not self.source and \
                other.target.labels != self.source.labels:
            raise SpaceMismatch("compose: inner spaces disagree")
        entries = {src: self.apply(col) for src, col in other.entries.items()}
        return GradedMap(other.source, self.target,
                         degree_add(self.shift, other.shift), entries,
                         check=False)

    def add(self, other: "GradedMap") -> "GradedMap":
        if self.shift != other.shift:
            raise SpaceMismatch("adding maps of different shift")
        entries = dict(self.entries)
        for src, col in other.entries.items():
            entries[src] = vec_add(entries.get(src, {}), col)
        return GradedMap(self.source, self.target, self.shift, entries,
                         check=False)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, self.shift,
                         {s: vec_scale(c, col) for s, col in self.entries.items()},
                         check=False)

    def is_zero(self) -> bool:
        return all(vec_is_zero(col) for col in self.entries.values())

    def rank(self) -> int:
        ech = Echelon(self.target.index)
        n = 0
        for src in self.source.labels:
            col = self.entries.get(src)
            if col and ech.add(col) is not None:
                n += 1
        return n

    def __repr__(self):
        return f"GradedMap(shift={self.shift}, nnz_cols={len(self.entries)})"


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """Matrix product f*g (apply g first)."""
    return f.compose(g)


def tensor_space(a: GradedSpace, b: GradedSpace) -> GradedSpace:
    labels = [(x, y) for x in a.labels for y in b.labels]
    degrees = {(x, y): degree_add(a.degree(x), b.degree(y)) for x, y in labels}
    return GradedSpace(labels, degrees)


def tensor_map(f: GradedMap, g: GradedMap, source=None, target=None) -> GradedMap:
    """(f tensor g) with the Koszul sign (-1)^{|g| |a|} on each column a."""
    source = source or tensor_space(f.source, g.source)
    target = target or tensor_space(f.target, g.target)
    gpar = g.shift[0] & 1
    entries = {}
    for x in f.source.labels:
        fx = f.entries.get(x, {})
        sign = -1 if (gpar and f.source.degree(x)[0] & 1) else 1
        for y in g.source.labels:
            gy = g.entries.get(y, {})
            if not fx or not gy:
                continue
            col = {}
            for tx, cx in fx.items():
                for ty, cy in gy.items():
                    col[(tx, ty)] = sign * cx * cy
            entries[(x, y)] = col
    return GradedMap(source, target, degree_add(f.shift, g.shift), entries,
                     check=False)


# ---------------------------------------------------------------------------
# elimination

class Echelon:
    """Incremental Gaussian elimination with deterministic pivoting.

    The pivot of a vector is its nonzero label of least ambient index.
    Rows are normalized to pivot coefficient 1 and kept back-reduced.
    """

    def __init__(self, index: Mapping):
        self.index = index
        self.rows = {}  # pivot label -> normalized row

    def reduce(self, vec: Vector) -> Vector:
        vec = vec_clean(vec)
        while True:
            hit = None
            for k in vec:
                if k in self.rows:
                    if hit is None or self.index[k] < self.index[hit]:
                        hit = k
            if hit is None:
                return vec
            vec = vec_sub(vec, vec_scale(vec[hit], self.rows[hit]))

    def add(self, vec: Vector):
        """Insert vec; return the reduced remainder, or None if dependent."""
        red = self.reduce(vec)
        if not red:
            return None
        piv = min(red, key=lambda k: self.index[k])
        row = vec_scale(Fraction(1, 1) / red[piv], red)
        # back-reduce existing rows
        for p, r in list(self.rows.items()):
            if piv in r:
                self.rows[p] = vec_sub(r, vec_scale(r[piv], row))
        self.rows[piv] = row
        return red

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)


def kernel_basis(columns: Mapping, sources: list, index: Mapping) -> list:
    """Kernel of the map with the given columns, as vectors over `sources`.

    columns[s] is the image vector of source label s; index orders the
    target labels.  Deterministic: sources are processed in the given order.
    """
    ech = Echelon(index)
    # augmented elimination: track the expression of each reduced column
    combos = {}  # pivot -> combo vector over sources
    kernel = []
    for s in sources:
        vec = vec_clean(columns.get(s, {}))
        combo = {s: Fraction(1)}
        while vec:
            hit = None
            for k in vec:
                if k in ech.rows:
                    if hit is None or index[k] < index[hit]:
                        hit = k
            if hit is None:
                break
            c = vec[hit]
            vec = vec_sub(vec, vec_scale(c, ech.rows[hit]))
            combo = vec_sub(combo, vec_scale(c, combos[hit]))
        if not vec:
            kernel.append(combo)
        else:
            piv = min(vec, key=lambda k: index[k])
            inv = Fraction(1) / vec[piv]
            ech.rows[piv] = vec_scale(inv, vec)
            combos[piv] = vec_scale(inv, combo)
    return kernel


class Complex:
    """Cochain complex: one graded space and a shift-(+1) differential."""

    def __init__(self, space: GradedSpace, d: GradedMap, check: bool = True):
        if d.shift[0] != 1:
            raise ValueError("differential must have degree 1")
        self.space = space
        self.d = d
        if check and not d.compose(d).is_zero():
            raise StructuralFailure("d*d != 0")

    def homology(self, degree: int):
        """Dimension and representative cycles of H^degree.

        Representatives are cycles spanning a complement of the image of d.
        """
        labels = self.space.labels_of_degree1(degree)
        below = self.space.labels_of_degree1(degree - 1)
        cycles = kernel_basis(self.d.entries, labels, self.space.index)
        ech = Echelon(self.space.index)
        for b in below:
            col = self.d.entries.get(b)
            if col:
                ech.add(col)
        reps = []
        rep_ech = Echelon(self.space.index)
        for z in cycles:
            red = ech.reduce(z)
            if red and rep_ech.add(red) is not None:
                reps.append(z)
        return len(reps), reps

    def rank_by_degree(self) -> dict:
        """Rank of d restricted to each source degree (first component)."""
        by_deg: dict = {}
        for l in self.space.labels:
            by_deg.setdefault(self.space.degree(l)[0], []).append(l)
        ranks = {}
        for n, labels in by_deg.items():
            ech = Echelon(self.space.index)
            r = 0
            for l in labels:
                col = self.d.entries.get(l)
                if col and ech.add(col) is not None:
                    r += 1
            ranks[n] = r
        return ranks

    def homology_dims(self) -> dict:
        """Betti numbers via rank-nullity; no representatives computed."""
        ranks = self.rank_by_degree()
        by_deg: dict = {}
        for l in self.space.labels:
            d = self.space.degree(l)[0]
            by_deg[d] = by_deg.get(d, 0) + 1
        return {n: cnt - ranks.get(n, 0) - ranks.get(n - 1, 0)
                for n, cnt in by_deg.items()}

    def euler_characteristic(self) -> int:
        chi = 0
        for l in self.space.labels:
            chi += (-1) ** (self.space.degree(l)[0] % 2)
        return chi


def homology(c: Complex, degree: int):
    return c.homology(degree)


def quotient(space: GradedSpace, relations: Iterable):
    """Quotient by the span of relation vectors.

    Each relation must be homogeneous.  The quotient basis consists of the
    non-pivot labels (first-independent-pivot rule); returns the quotient
    space and the surjective projection map.
    """
    relations = list(relations)
    for rel in relations:
        degs = {space.degree(l) for l in vec_clean(rel)}
        if len(degs) > 1:
            raise InhomogeneousRelation(f"relation spans degrees {degs}")
    ech = Echelon(space.index)
    for rel in relations:
        ech.add(rel)
    pivots = set(ech.rows)
    qlabels = [l for l in space.labels if l not in pivots]
    qspace = GradedSpace(qlabels, {l: space.degree(l) for l in qlabels})
    zeros = (0,) * len(as_degree(next(iter(space.degrees.values()), (0,))))
    entries = {}
    for l in space.labels:
        if l in pivots:
            # pivot = -(free part of its fully reduced row)
            row = ech.rows[l]
            entries[l] = {k: -c for k, c in row.items() if k != l}
        else:
            entries[l] = {l: Fraction(1)}
    proj = GradedMap(space, qspace, zeros, entries, check=False)
    return qspace, proj
