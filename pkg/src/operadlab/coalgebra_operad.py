"""Dg coalgebras with counit, the cone construction, and the operad of
chain coalgebras of decomposed associahedra.

Comultiplications are stored sparsely as label -> {(label, label): coeff}
rather than as matrices into a materialized tensor-square space; the
tensor square of the arity-6 complex would have tens of millions of basis
labels while every structure map touches only a few of them.

The comultiplication on a product (multi-vertex) cell is computed
vertex-wise: choose a comultiplication component at every vertex, collect
the first components into a same-shape tree, substitute the second
components operadically, and apply the Koszul interleaving sign of
regrouping the per-vertex pairs.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Optional

from .exact_chain import (GradedMap, GradedSpace, degree_add, vec_add,
                          vec_clean, vec_scale)
from .operad_core import (Leaf, Node, OperadElement, corolla, graft,
                          replace_vertex, tree_arity, tree_degree,
                          tree_vertices)
from . import associahedra as ah


class CoalgebraError(Exception):
    pass


class DgCoalgebra:
    """Complex with coassociative counital comultiplication; d a coderivation.

    delta: label -> {(l1, l2): coeff}; counit: label -> coeff.
    """

    def __init__(self, space: GradedSpace, d: GradedMap,
                 delta: Mapping, counit: Mapping, check: bool = True):
        self.space = space
        self.d = d
        self.delta = {l: vec_clean(col) for l, col in delta.items()
                      if vec_clean(col)}
        self.counit = {l: Fraction(c) for l, c in counit.items() if c}
        if check:
            self.validate()

    def delta_of(self, label) -> dict:
        return dict(self.delta.get(label, {}))

    def eps_of(self, label) -> Fraction:
        return self.counit.get(label, Fraction(0))

    def delta_chain(self, vec: Mapping) -> dict:
        out: dict = {}
        for l, c in vec.items():
            for pair, a in self.delta.get(l, {}).items():
                out[pair] = out.get(pair, Fraction(0)) + c * a
        return vec_clean(out)

    def eps_chain(self, vec: Mapping) -> Fraction:
        return sum((c * self.counit.get(l, Fraction(0))
                    for l, c in vec.items()), Fraction(0))

    # validators ------------------------------------------------------------

    def check_coassociative(self):
        for x in self.space.labels:
            lhs: dict = {}
            rhs: dict = {}
            for (a, b), c in self.delta.get(x, {}).items():
                for (a1, a2), c2 in self.delta.get(a, {}).items():
                    k = (a1, a2, b)
                    lhs[k] = lhs.get(k, Fraction(0)) + c * c2
                for (b1, b2), c2 in self.delta.get(b, {}).items():
                    k = (a, b1, b2)
                    rhs[k] = rhs.get(k, Fraction(0)) + c * c2
            if vec_clean(lhs) != vec_clean(rhs):
                raise CoalgebraError(f"coassociativity fails at {x!r}")

    def check_counit(self):
        for x in self.space.labels:
            left: dict = {}
            right: dict = {}
            for (a, b), c in self.delta.get(x, {}).items():
                ea = self.counit.get(a, Fraction(0))
                eb = self.counit.get(b, Fraction(0))
                if ea:
                    left[b] = left.get(b, Fraction(0)) + c * ea
                if eb:
                    right[a] = right.get(a, Fraction(0)) + c * eb
            want = {x: Fraction(1)}
            if vec_clean(left) != want or vec_clean(right) != want:
                raise CoalgebraError(f"counit axiom fails at {x!r}")

    def check_coderivation(self):
        for x in self.space.labels:
            lhs = self.delta_chain(self.d.column(x))
            rhs: dict = {}
            for (a, b), c in self.delta.get(x, {}).items():
                for a2, c2 in self.d.column(a).items():
                    k = (a2, b)
                    rhs[k] = rhs.get(k, Fraction(0)) + c * c2
                sa = -1 if self.space.degree(a)[0] % 2 else 1
                for b2, c2 in self.d.column(b).items():
                    k = (a, b2)
                    rhs[k] = rhs.get(k, Fraction(0)) + sa * c * c2
            if vec_clean(lhs) != vec_clean(rhs):
                raise CoalgebraError(f"coderivation fails at {x!r}")

    def check_counit_chain_map(self):
        # the counit kills every exact chain (it is a chain map to the
        # ground field in degree 0)
        for x in self.space.labels:
            if self.eps_chain(self.d.column(x)):
                raise CoalgebraError(f"counit not a chain map at {x!r}")

    def validate(self):
        self.check_coassociative()
        self.check_counit()
        self.check_coderivation()
        self.check_counit_chain_map()


def check_morphism(f: Mapping, source: DgCoalgebra, target: DgCoalgebra):
    """Raise unless the degree-0 map given by columns f is a dg coalgebra
    morphism."""
    for x in source.space.labels:
        fx = vec_clean(f.get(x, {}))
        # chain map
        lhs = {}
        for y, c in source.d.column(x).items():
            lhs = vec_add(lhs, vec_scale(c, f.get(y, {})))
        rhs = {}
        for y, c in fx.items():
            rhs = vec_add(rhs, vec_scale(c, target.d.column(y)))
        if vec_clean(lhs) != vec_clean(rhs):
            raise CoalgebraError(f"not a chain map at {x!r}")
        # comultiplication
        lhs2: dict = {}
        for (a, b), c in source.delta.get(x, {}).items():
            for a2, ca in f.get(a, {}).items():
                for b2, cb in f.get(b, {}).items():
                    k = (a2, b2)
                    lhs2[k] = lhs2.get(k, Fraction(0)) + c * ca * cb
        rhs2: dict = {}
        for y, c in fx.items():
            for pair, c2 in target.delta.get(y, {}).items():
                rhs2[pair] = rhs2.get(pair, Fraction(0)) + c * c2
        if vec_clean(lhs2) != vec_clean(rhs2):
            raise CoalgebraError(f"comultiplication not respected at {x!r}")
        # counit
        if source.eps_of(x) != target.eps_chain(fx):
            raise CoalgebraError(f"counit not respected at {x!r}")


def ground_coalgebra(label="1", width: int = 1) -> DgCoalgebra:
    """The ground field as a coalgebra on one grouplike generator."""
    sp = GradedSpace((label,), {label: (0,) * width})
    d = GradedMap.zero(sp, sp, (1,) + (0,) * (width - 1))
    return DgCoalgebra(sp, d, {label: {(label, label): Fraction(1)}},
                       {label: Fraction(1)})


# ---------------------------------------------------------------------------
# cone

APEX = ("apex",)


def _t(label):
    return ("T", label)


def cone(a: DgCoalgebra) -> DgCoalgebra:
    """Cone over a counital dg coalgebra.

    Basis: the labels of a, a degree-shifted copy T(label), and the apex.
    d(Tu) = u - T(du) - eps(u) apex;  Delta(Tu) = (T ox id)Delta(u)
    + apex ox Tu;  the apex is grouplike.
    """
    width = len(next(iter(a.space.degrees.values()), (0,)))
    shift = (-1,) + (0,) * (width - 1)
    labels = list(a.space.labels)
    for l in a.space.labels:
        if _t(l) in a.space.index or l == APEX:
            raise CoalgebraError("label clash while building the cone")
        labels.append(_t(l))
    labels.append(APEX)
    degrees = dict(a.space.degrees)
    for l in a.space.labels:
        degrees[_t(l)] = degree_add(a.space.degree(l), shift)
    degrees[APEX] = (0,) * width
    sp = GradedSpace(labels, degrees)

    entries = {l: a.d.column(l) for l in a.space.labels}
    for l in a.space.labels:
        col = {l: Fraction(1)}
        for m, c in a.d.column(l).items():
            col = vec_add(col, {_t(m): -c})
        e = a.eps_of(l)
        if e:
            col = vec_add(col, {APEX: -e})
        entries[_t(l)] = col
    d = GradedMap(sp, sp, a.d.shift, entries)

    delta = {l: a.delta_of(l) for l in a.space.labels}
    for l in a.space.labels:
        col = {(_t(x), y): c for (x, y), c in a.delta_of(l).items()}
        col[(APEX, _t(l))] = col.get((APEX, _t(l)), Fraction(0)) + 1
        delta[_t(l)] = col
    delta[APEX] = {(APEX, APEX): Fraction(1)}

    counit = dict(a.counit)
    counit[APEX] = Fraction(1)
    return DgCoalgebra(sp, d, delta, counit)


def cone_map(phi: Mapping, a: DgCoalgebra, cone_b: DgCoalgebra,
             check: bool = True) -> dict:
    """Extend a coalgebra morphism phi: a -> cone(b) over the cone of a.

    Columns of the result: on a it is phi; on T(u) it is T applied to the
    component of phi(u) lying in b; the apex goes to the apex.
    """
    if check:
        check_morphism(phi, a, cone_b)
    # the base labels of cone_b are those whose T-copy is also present
    base = {l for l in cone_b.space.labels
            if l != APEX and _t(l) in cone_b.space.index}
    out = {l: dict(phi.get(l, {})) for l in a.space.labels}
    for l in a.space.labels:
        out[_t(l)] = {_t(m): c for m, c in phi.get(l, {}).items() if m in base}
    out[APEX] = {APEX: Fraction(1)}
    return out


# ---------------------------------------------------------------------------
# the operad of chain coalgebras of associahedra

_delta_gen_cache: dict = {}
_delta_cell_cache: dict = {}


def _delta_gen(sym):
    """Comultiplication components of an interior-cell generator, as a list
    of (coeff, first-component generator, second-component element)."""
    val = _delta_gen_cache.get(sym)
    if val is not None:
        return val
    n = sym.arity
    if not ah.is_cone(sym):
        out = [(Fraction(1), sym, OperadElement.from_tree(corolla(sym)))]
    else:
        b = sym.payload
        out = []
        for (x, y), c in delta_cell(b).items():
            out.append((c, ah.cone_symbol(x), OperadElement.from_tree(y)))
        out.append((Fraction(1), ah.apex_symbol(n),
                    OperadElement.from_tree(corolla(sym))))
    _delta_gen_cache[sym] = out
    return out


def delta_cell(t) -> dict:
    """Comultiplication of a cell, as {(cell, cell): coeff}."""
    val = _delta_cell_cache.get(t)
    if val is not None:
        return val
    if isinstance(t, Leaf):
        out = {(t, t): Fraction(1)}
        _delta_cell_cache[t] = out
        return out
    verts = tree_vertices(t)
    choice_lists = [_delta_gen(sym) for _, sym in verts]
    pos_by_path = {path: k for k, (path, _) in enumerate(verts)}
    out: dict = {}

    def emit(coeff, firsts, seconds):
        # Koszul sign of regrouping ox_i (g'_i ox e''_i) into
        # (ox_i g'_i) ox (ox_i e''_i): each odd e''_i passes every later
        # odd g'_j
        sign = 1
        for a in range(len(verts)):
            if seconds[a].degree() % 2:
                later_odd = sum(1 for b in range(a + 1, len(verts))
                                if firsts[b].degree % 2)
                if later_odd % 2:
                    sign = -sign

        def rebuild(u, path):
            if isinstance(u, Leaf):
                return u
            return Node(firsts[pos_by_path[path]],
                        tuple(rebuild(c, path + (k,))
                              for k, c in enumerate(u.children)))
        t1 = rebuild(t, ())
        # second component: operadic substitution, later vertices first so
        # that earlier paths stay valid
        acc = OperadElement.from_tree(t)
        for k in range(len(verts) - 1, -1, -1):
            path = verts[k][0]
            acc = acc.map_trees(
                lambda tr, p=path, v=seconds[k]: replace_vertex(tr, p, v))
        for t2, c2 in acc.terms.items():
            key = (t1, t2)
            out[key] = out.get(key, Fraction(0)) + coeff * sign * c2

    def walk(i, coeff, firsts, seconds):
        if i == len(verts):
            emit(coeff, firsts, seconds)
            return
        for c, g1, e2 in choice_lists[i]:
            walk(i + 1, coeff * c, firsts + [g1], seconds + [e2])

    walk(0, Fraction(1), [], [])
    out = vec_clean(out)
    _delta_cell_cache[t] = out
    return out


def delta_chain(e: OperadElement) -> dict:
    out: dict = {}
    for t, c in e.terms.items():
        for pair, a in delta_cell(t).items():
            out[pair] = out.get(pair, Fraction(0)) + c * a
    return vec_clean(out)


class CoalgebraOperad:
    """Arity-indexed dg coalgebras with insertion maps."""

    def __init__(self, arities: dict, compose_fn, name: str):
        self.arities = dict(arities)
        self._compose = compose_fn
        self.name = name

    def coalgebra(self, n: int) -> DgCoalgebra:
        return self.arities[n]

    def max_arity(self) -> int:
        return max(self.arities)

    def compose(self, p, q, l, x, y):
        return self._compose(p, q, l, x, y)


def build_A(max_arity: int) -> CoalgebraOperad:
    """The operad of chain coalgebras of the decomposed associahedra."""
    if max_arity > 8:
        raise CoalgebraError("arity capped at 8")
    arities = {}
    for n in range(0, max_arity + 1):
        cx = ah.decompose(n)
        delta = {t: delta_cell(t) for t in cx.space.labels}
        counit = {t: Fraction(1) for t in cx.space.labels
                  if tree_degree(t) == 0}
        arities[n] = DgCoalgebra(cx.space, cx.d, delta, counit, check=False)

    def compose_fn(p, q, l, x, y):
        return ah.insert_chain(p, q, l, x, y)

    return CoalgebraOperad(arities, compose_fn, "A")


def as_operad(max_arity: int = 8) -> CoalgebraOperad:
    """The terminal coalgebra operad: the ground field in every arity."""
    arities = {n: ground_coalgebra(("one", n)) for n in range(0, max_arity + 1)}

    def compose_fn(p, q, l, x, y):
        cx = x.get(("one", p), Fraction(0))
        cy = Fraction(1) if y is None else y.get(("one", q), Fraction(0))
        return {("one", p + q - 1): cx * cy}

    return CoalgebraOperad(arities, compose_fn, "As")


def counit_morphism(e) -> Fraction:
    """The operad morphism to the terminal operad: a chain goes to the sum
    of its vertex-cell coefficients."""
    if isinstance(e, OperadElement):
        return ah.augmentation(e)
    return ah.augmentation(OperadElement.from_tree(e))


# ---------------------------------------------------------------------------
# cross-module identifications

def coalgebra_of_boundary(n: int) -> DgCoalgebra:
    """The chain coalgebra of the decomposed boundary of K(n)."""
    cx = ah.decompose(n)
    labels = [t for t in cx.space.labels if ah.vertex_count(t) >= 2]
    sp = GradedSpace(labels, {t: cx.space.degree(t) for t in labels})
    d = GradedMap(sp, sp, (1,),
                  {t: {s: c for s, c in ah.boundary(t).terms.items()}
                   for t in labels})
    delta = {t: delta_cell(t) for t in labels}
    counit = {t: Fraction(1) for t in labels if tree_degree(t) == 0}
    return DgCoalgebra(sp, d, delta, counit, check=False)


def export_arity(n: int) -> dict:
    """Deterministic JSON-ready dump of d, Delta and the counit of A(n)."""
    cx = ah.decompose(n)
    from .operad_core import format_tree
    cells = []
    for t in cx.space.labels:
        cells.append({
            "id": format_tree(t),
            "degree": tree_degree(t),
            "d": {format_tree(s): str(c)
                  for s, c in sorted(ah.boundary(t).terms.items(),
                                     key=lambda kv: kv[0].sort_key())},
            "delta": {f"{format_tree(a)} | {format_tree(b)}": str(c)
                      for (a, b), c in sorted(
                          delta_cell(t).items(),
                          key=lambda kv: (kv[0][0].sort_key(),
                                          kv[0][1].sort_key()))},
            "counit": str(Fraction(1) if tree_degree(t) == 0 else Fraction(0)),
        })
    return {"arity": n, "cells": cells}
