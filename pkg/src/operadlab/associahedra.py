"""Inductive polyhedral decomposition of the Stasheff polytopes K(n).

K(n) is decomposed as the cone, from a center vertex, over its decomposed
boundary; boundary faces are products K(p) x K(q) glued along the insertion
maps.  A cell is stored as a planar tree whose vertices are decorated by
interior-cell generators:

  * the apex generator of K(m) (a vertex, arity m), and
  * a cone generator over a boundary cell b of K(m) (arity m,
    dimension dim b + 1).

A tree with at least two vertices is a boundary (product) cell; a
single-vertex tree is an interior cell.  A product face K(p) x K(q) embeds
by grafting trees, so a cell shared by two faces is literally the same
tree and gluing consistency is automatic.

Degrees are cohomological: a cell of dimension k sits in degree -k, and
the boundary operator has degree +1.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .exact_chain import Complex, GradedMap, GradedSpace
from .operad_core import (
    FreeDifferential, GeneratorSymbol, Leaf, Node, OperadElement, corolla,
    format_tree, graft, leaf_labels, relabel, tree_arity, tree_degree,
    tree_vertices,
)


class CellError(Exception):
    pass


# ---------------------------------------------------------------------------
# cell generators

def apex_symbol(n: int) -> GeneratorSymbol:
    """The center vertex of K(n) (for n <= 2, the unique point)."""
    if n < 0:
        raise CellError("arity must be >= 0")
    return GeneratorSymbol(f"O{n}", n, 0)


def cone_symbol(base) -> GeneratorSymbol:
    """The cone cell over a boundary cell, one dimension up."""
    n = tree_arity(base)
    return GeneratorSymbol(f"T[{format_tree(base)}]", n,
                           tree_degree(base) - 1, payload=base)


def is_cone(sym: GeneratorSymbol) -> bool:
    return sym.payload is not None


def dimension(cell) -> int:
    return -tree_degree(cell)


def vertex_count(cell) -> int:
    return len(tree_vertices(cell))


def point_cell(n: int):
    if n == 1:
        return Leaf(1)
    if n in (0, 2):
        return corolla(apex_symbol(n))
    raise CellError("point cells exist only for n <= 2")


def _el(tree, c=1) -> OperadElement:
    return OperadElement.from_tree(tree, c)


# ---------------------------------------------------------------------------
# chain-level helpers

def augmentation(e: OperadElement) -> Fraction:
    """Sum of coefficients of dimension-0 cells."""
    total = Fraction(0)
    for t, c in e.terms.items():
        if tree_degree(t) == 0:
            total += c
    return total


def cone_chain(e: OperadElement) -> OperadElement:
    """Cone a chain of boundary cells; single-vertex terms are interior and
    may not be coned."""
    def one(t):
        if vertex_count(t) < 2:
            raise CellError("cone base must be a boundary cell")
        return _el(corolla(cone_symbol(t)))
    return e.map_trees(one)


def cone_chain_or_collapse(e: OperadElement) -> OperadElement:
    """Cone multi-vertex terms, drop interior terms (the boundary component
    of a map into a cone is all that the coned map keeps)."""
    out = OperadElement.zero(e.arity)
    for t, c in e.terms.items():
        if vertex_count(t) >= 2:
            out = out.add(_el(corolla(cone_symbol(t)), c))
    return out


# ---------------------------------------------------------------------------
# decomposition

_cells: dict = {}            # n -> tuple of cell trees
_assignments: dict = {}      # cone generator -> boundary OperadElement
_complexes: dict = {}        # n -> CellComplex


class _LiveDifferential(FreeDifferential):
    """Differential reading the shared assignment table without copying."""

    def __init__(self, table):
        self.assignments = table


_diff = _LiveDifferential(_assignments)


def boundary(cell_or_chain) -> OperadElement:
    """Signed cellular boundary (degree +1 cohomologically)."""
    if isinstance(cell_or_chain, OperadElement):
        return _diff(cell_or_chain)
    return _diff(_el(cell_or_chain))


class CellComplex:
    """Cells of decomposed K(n) with their boundary operator."""

    def __init__(self, n: int, cells):
        self.n = n
        self.cells = tuple(cells)
        degrees = {t: (tree_degree(t),) for t in self.cells}
        order = sorted(self.cells, key=lambda t: (-tree_degree(t), t.sort_key()))
        self.space = GradedSpace(order, degrees)
        entries = {}
        for t in order:
            col = boundary(t)
            if not col.is_zero():
                entries[t] = dict(col.terms)
        self.d = GradedMap(self.space, self.space, (1,), entries)
        self.complex = Complex(self.space, self.d)  # checks d*d = 0

    def cells_of_dimension(self, k: int):
        return [t for t in self.space.labels if tree_degree(t) == -k]

    def counts(self) -> dict:
        out: dict = {}
        for t in self.cells:
            out[dimension(t)] = out.get(dimension(t), 0) + 1
        return out

    def euler_characteristic(self) -> int:
        return self.complex.euler_characteristic()

    def homology_dims(self) -> dict:
        return {-k: v for k, v in self.complex.homology_dims().items()}

    def top_dimension(self) -> int:
        return max((dimension(t) for t in self.cells), default=0)


def _boundary_cells(n: int):
    found = set()
    for q in range(2, n - 1 + 1):
        p = n + 1 - q
        if p < 2:
            continue
        for l in range(1, p + 1):
            for a in _cells[p]:
                for b in _cells[q]:
                    g = graft(_el(a), _el(b), l)
                    (t, _), = g.terms.items()
                    found.add(t)
    return sorted(found, key=lambda t: t.sort_key())


def decompose(n: int) -> CellComplex:
    if n < 0:
        raise CellError("arity must be >= 0")
    if n in _complexes:
        return _complexes[n]
    if n <= 2:
        _cells[n] = (point_cell(n),)
        cx = CellComplex(n, _cells[n])
        _complexes[n] = cx
        return cx
    for k in range(2, n):
        decompose(k)
    border = _boundary_cells(n)
    cells = list(border)
    # register cone differentials: d(T b) = b - T(db) - aug(b) * apex
    apex = corolla(apex_symbol(n))
    for b in border:
        db = boundary(b)
        val = _el(b).sub(cone_chain(db))
        eps = augmentation(_el(b))
        if eps:
            val = val.sub(_el(apex, eps))
        _assignments[cone_symbol(b)] = val
    cells.append(apex)
    cells.extend(corolla(cone_symbol(b)) for b in border)
    _cells[n] = tuple(cells)
    cx = CellComplex(n, cells)
    _complexes[n] = cx
    return cx


def facets(n: int) -> dict:
    """Coarse facets of K(n): (p, q, l) -> frozenset of decomposed cells."""
    decompose(n)
    out = {}
    for q in range(2, n - 1 + 1):
        p = n + 1 - q
        if p < 2:
            continue
        for l in range(1, p + 1):
            cells = set()
            for a in _cells[p]:
                for b in _cells[q]:
                    (t, _), = graft(_el(a), _el(b), l).terms.items()
                    cells.add(t)
            out[(p, q, l)] = frozenset(cells)
    return out


# ---------------------------------------------------------------------------
# operadic piecewise-linear maps

def _canonical(e: OperadElement) -> OperadElement:
    """Relabel every term's leaves into increasing planar order."""
    def fix(t):
        labels = leaf_labels(t)
        mapping = {l: i + 1 for i, l in enumerate(sorted(labels))}
        return _el(relabel(t, mapping))
    return e.map_trees(fix)


def _delete_leaf(t, j: int) -> OperadElement:
    """Chain image of a cell under the 0-ary insertion at slot j."""
    if isinstance(t, Leaf):
        return _el(point_cell(0))

    def go(u) -> OperadElement:
        # u is a Node whose subtree contains leaf j
        for i, child in enumerate(u.children):
            if j not in leaf_labels(child):
                continue
            if isinstance(child, Leaf):
                m = u.symbol.arity
                others = u.children[:i] + u.children[i + 1:]
                if not is_cone(u.symbol):
                    if m == 2:
                        return OperadElement(tree_arity(others[0]),
                                             {others[0]: Fraction(1)})
                    t2 = Node(apex_symbol(m - 1), others)
                    return OperadElement(tree_arity(t2), {t2: Fraction(1)})
                base = u.symbol.payload
                img = cone_chain_or_collapse(_delete_leaf(base, i + 1))
                out = OperadElement.zero(tree_arity(u) - 1)
                for s, c in img.terms.items():
                    out = out.add(OperadElement(out.arity,
                                                {Node(s.symbol, others): c}))
                return out
            sub = go(child)
            out = OperadElement.zero(tree_arity(u) - 1)
            for s, c in sub.terms.items():
                kids = u.children[:i] + (s,) + u.children[i + 1:]
                out = out.add(OperadElement(out.arity, {Node(u.symbol, kids): c}))
            return out
        raise CellError("leaf not found")

    return _canonical(go(t))


def insert_chain(p: int, q: int, l: int,
                 chain_p: OperadElement,
                 chain_q: Optional[OperadElement] = None) -> OperadElement:
    """Chain-level insertion map C(K(p)) x C(K(q)) -> C(K(p+q-1)).

    q >= 2 grafts onto a boundary face (with product-orientation Koszul
    signs); q = 1 is the identity; q = 0 deletes input slot l, collapsing
    degenerate cells to zero.
    """
    if q < 0 or p < 1:
        raise CellError("arities must be >= 0")
    if not 1 <= l <= p:
        raise CellError(f"slot {l} out of range for arity {p}")
    if chain_p.arity != p:
        raise CellError("first chain has wrong arity")
    if q == 1:
        return chain_p
    if q == 0:
        if chain_p.is_zero():
            return OperadElement.zero(p - 1)
        return chain_p.map_trees(lambda t: _delete_leaf(t, l))
    if chain_q is None or chain_q.arity != q:
        raise CellError("second chain has wrong arity")
    return graft(chain_p, chain_q, l)


def insert(p: int, q: int, l: int, cell_p, cell_q=None):
    """Cell-level insertion; returns the image cell, or None if the image
    is degenerate (q = 0 collapse)."""
    cq = None if cell_q is None else _el(cell_q)
    res = insert_chain(p, q, l, _el(cell_p), cq)
    if res.is_zero():
        return None
    (t, c), = res.terms.items()
    if c not in (1, -1):
        raise CellError("unexpected coefficient on a cell image")
    return t


# ---------------------------------------------------------------------------
# fundamental classes

_mu: dict = {}


def fundamental_class(k: int) -> OperadElement:
    """The fundamental class of K(k): the cone over the boundary cycle
    assembled from lower fundamental classes with the alternating
    insertion signs."""
    if k < 2:
        raise CellError("fundamental classes start at arity 2")
    if k in _mu:
        return _mu[k]
    decompose(k)
    if k == 2:
        mu = _el(point_cell(2))
    else:
        cyc = boundary_fundamental_cycle(k)
        mu = cone_chain(cyc)
    _mu[k] = mu
    return mu


def insertion_sign(i: int, j: int, l: int) -> int:
    """Sign of mu_i o_l mu_j inside d(mu_{i+j-1}).

    The exponent is (l-1)(j-1) + (i-1)(j-2).  The first summand is the
    position-times-dimension factor; the second is the Koszul correction
    forced by requiring the boundary cycle to be closed (equivalently, by
    d^2 = 0 on the free resolution; without it the sum fails to be a cycle
    already in arity 4).  The total is the classical homotopy-associativity
    sign (-1)^{(l-1) + j(i-l)}.
    """
    e = (l - 1) * (j - 1) + (i - 1) * (j - 2)
    return -1 if e % 2 else 1


def boundary_fundamental_cycle(k: int) -> OperadElement:
    """Sum over i of mu_i { mu_{k+1-i} }, a cycle in the boundary chains."""
    total = OperadElement.zero(k)
    for i in range(2, k):
        j = k + 1 - i
        mi = fundamental_class(i)
        mj = fundamental_class(j)
        for l in range(1, i + 1):
            total = total.add(graft(mi, mj, l).scale(insertion_sign(i, j, l)))
    return total


# ---------------------------------------------------------------------------
# export

def export_complex(n: int) -> dict:
    """Deterministic JSON-ready description of the decomposed complex."""
    cx = decompose(n)
    cells = []
    for t in cx.space.labels:
        col = boundary(t)
        cells.append({
            "id": format_tree(t),
            "dimension": dimension(t),
            "interior": vertex_count(t) == 1,
            "boundary": {format_tree(s): str(c) for s, c in col.sorted_terms()},
        })
    return {"arity": n, "cells": cells}
