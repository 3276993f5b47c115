"""Planar trees, free dg operads with 0-ary operations, and Koszul signs.

Trees are immutable.  A tree with n inputs has its leaves labeled by the
input slots 1..n; in the asymmetric case the labels appear in planar order,
and a permuted labeling records an explicit symmetric-group translate.

Sign conventions.  A decorated tree stands for the tensor of its vertex
decorations in depth-first (preorder) order.  Grafting and vertex
replacement therefore carry the Koszul signs of reordering that tensor, and
a permuted leaf labeling contributes its sign only upon evaluation on graded
arguments.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional


class CompositionError(Exception):
    pass


class GeneratorSymbol:
    """Interned operation symbol; equal data yields the identical object,
    so equality and hashing are by identity."""

    __slots__ = ("name", "arity", "degree", "payload")
    _cache: dict = {}

    def __new__(cls, name, arity, degree, payload=None):
        key = (name, arity, degree, payload)
        obj = cls._cache.get(key)
        if obj is None:
            if arity < 0:
                raise ValueError("arity must be >= 0")
            obj = super().__new__(cls)
            obj.name, obj.arity, obj.degree, obj.payload = name, arity, degree, payload
            cls._cache[key] = obj
        return obj

    def sort_key(self):
        return (self.name, self.arity, self.degree)

    def __repr__(self):
        return f"GeneratorSymbol({self.name!r}, {self.arity}, {self.degree})"


class Leaf:
    __slots__ = ("label",)
    _cache: dict = {}

    def __new__(cls, label):
        obj = cls._cache.get(label)
        if obj is None:
            obj = super().__new__(cls)
            obj.label = label
            cls._cache[label] = obj
        return obj

    def sort_key(self):
        return (0, self.label)

    def __repr__(self):
        return f"Leaf({self.label})"


class Node:
    """Interned planar tree node; carries cached arity and degree."""

    __slots__ = ("symbol", "children", "nleaves", "total_degree", "_key")
    _cache: dict = {}

    def __new__(cls, symbol, children):
        children = tuple(children)
        key = (symbol, children)
        obj = cls._cache.get(key)
        if obj is None:
            obj = super().__new__(cls)
            obj.symbol = symbol
            obj.children = children
            obj.nleaves = sum(
                1 if isinstance(c, Leaf) else c.nleaves for c in children)
            obj.total_degree = symbol.degree + sum(
                c.total_degree for c in children if isinstance(c, Node))
            obj._key = None
            cls._cache[key] = obj
        return obj

    def sort_key(self):
        if self._key is None:
            self._key = (1, self.symbol.sort_key(),
                         tuple(c.sort_key() for c in self.children))
        return self._key

    def __repr__(self):
        return f"Tree[{format_tree(self)}]"


Tree = object  # Leaf | Node

IDENTITY_TREE = Leaf(1)


def corolla(symbol: GeneratorSymbol, labels: Optional[Iterable] = None) -> Node:
    labels = tuple(labels) if labels is not None else tuple(range(1, symbol.arity + 1))
    if len(labels) != symbol.arity:
        raise CompositionError("corolla label count must match arity")
    return Node(symbol, tuple(Leaf(l) for l in labels))


def leaf_labels(t: Tree) -> list:
    if isinstance(t, Leaf):
        return [t.label]
    out = []
    for c in t.children:
        out.extend(leaf_labels(c))
    return out


def tree_arity(t: Tree) -> int:
    return 1 if isinstance(t, Leaf) else t.nleaves


def tree_degree(t: Tree) -> int:
    return 0 if isinstance(t, Leaf) else t.total_degree


def tree_vertices(t: Tree) -> list:
    """Vertices in preorder, as (path, symbol) pairs."""
    out = []

    def walk(u, path):
        if isinstance(u, Node):
            out.append((path, u.symbol))
            for i, c in enumerate(u.children):
                walk(c, path + (i,))

    walk(t, ())
    return out


def relabel(t: Tree, mapping: Mapping) -> Tree:
    if isinstance(t, Leaf):
        return Leaf(mapping[t.label])
    return Node(t.symbol, tuple(relabel(c, mapping) for c in t.children))


def _check_labels(t: Tree):
    labels = leaf_labels(t)
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise CompositionError(f"leaf labels {labels} are not a permutation of 1..n")


def _graft_tree(outer: Tree, inner: Tree, i: int):
    """Plug inner into the leaf of outer labeled i.

    Returns (sign, tree).  The Koszul sign moves the inner tensor block past
    the outer vertices that occur after leaf i in preorder.
    """
    n = tree_arity(inner)
    m = tree_arity(outer)
    if not 1 <= i <= m:
        raise CompositionError(f"position {i} out of range for arity {m}")
    d_inner = tree_degree(inner)

    # degree of outer vertices strictly after leaf i in preorder
    after = 0
    seen = [False]

    def deg_after(u):
        nonlocal after
        if isinstance(u, Leaf):
            if u.label == i:
                seen[0] = True
            return
        if seen[0]:
            after += u.symbol.degree
        for c in u.children:
            deg_after(c)

    deg_after(outer)
    sign = -1 if (d_inner % 2) and (after % 2) else 1

    inner_rel = relabel(inner, {l: i + l - 1 for l in leaf_labels(inner)})

    def mapping_outer(l):
        return l if l < i else l + n - 1

    def build(u):
        if isinstance(u, Leaf):
            if u.label == i:
                return inner_rel
            return Leaf(mapping_outer(u.label))
        return Node(u.symbol, tuple(build(c) for c in u.children))

    return sign, build(outer)


class OperadElement:
    """Formal rational combination of same-arity trees of homogeneous degree."""

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Optional[Mapping] = None):
        self.arity = arity
        self.terms = {}
        if terms:
            for t, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[t] = self.terms.get(t, Fraction(0)) + c
            self.terms = {t: c for t, c in self.terms.items() if c}

    @classmethod
    def from_tree(cls, t: Tree, coeff=1) -> "OperadElement":
        _check_labels(t)
        return cls(tree_arity(t), {t: Fraction(coeff)})

    @classmethod
    def zero(cls, arity: int) -> "OperadElement":
        return cls(arity, {})

    @classmethod
    def identity(cls) -> "OperadElement":
        return cls(1, {IDENTITY_TREE: Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> Optional[int]:
        degs = {tree_degree(t) for t in self.terms}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element, degrees {degs}")
        return degs.pop() if degs else None

    def add(self, other: "OperadElement") -> "OperadElement":
        if self.arity != other.arity:
            raise CompositionError("adding elements of different arity")
        merged = dict(self.terms)
        for t, c in other.terms.items():
            merged[t] = merged.get(t, Fraction(0)) + c
        return OperadElement(self.arity, merged)

    def scale(self, c) -> "OperadElement":
        return OperadElement(self.arity, {t: Fraction(c) * v for t, v in self.terms.items()})

    def sub(self, other):
        return self.add(other.scale(-1))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def map_trees(self, fn) -> "OperadElement":
        """fn(tree) -> OperadElement; extended linearly."""
        out = None
        for t, c in self.terms.items():
            piece = fn(t).scale(c)
            out = piece if out is None else out.add(piece)
        return out if out is not None else OperadElement.zero(self.arity)

    def permute(self, perm: Mapping) -> "OperadElement":
        """Relabel inputs: leaf labeled l becomes perm[l] (no sign; the sign
        of the permutation appears on evaluation)."""
        return OperadElement(self.arity,
                             {relabel(t, perm): c for t, c in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, OperadElement) and self.arity == other.arity \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for t, c in self.sorted_terms():
            bits.append(f"{c}*{format_tree(t)}")
        return " + ".join(bits)


def format_tree(t: Tree) -> str:
    if isinstance(t, Leaf):
        return str(t.label)
    args = ",".join(format_tree(c) for c in t.children)
    return f"{t.symbol.name}({args})"


def graft(outer: OperadElement, inner: OperadElement, i: int) -> OperadElement:
    """Operadic insertion of inner at slot i of outer (unit-compatible)."""
    if not 1 <= i <= outer.arity:
        raise CompositionError(f"position {i} out of range")
    out = OperadElement.zero(outer.arity + inner.arity - 1)
    for to, co in outer.terms.items():
        for ti, ci in inner.terms.items():
            s, t = _graft_tree(to, ti, i)
            out = out.add(OperadElement(out.arity, {t: s * co * ci}))
    return out


def replace_vertex(tree: Tree, path: tuple, value: OperadElement) -> OperadElement:
    """Replace the vertex at `path` by an equal-arity element.

    Koszul signs: the value's tensor block replaces the vertex symbol in
    preorder position; each child subtree block then moves to the position
    of the corresponding leaf inside the replacement tree.
    """
    def subtree(u, p):
        for i in p:
            u = u.children[i]
        return u

    target = subtree(tree, path)
    if not isinstance(target, Node):
        raise CompositionError("path does not point at a vertex")
    r = len(target.children)
    child_degs = [tree_degree(c) for c in target.children]

    out = OperadElement.zero(tree_arity(tree))
    for s, c in value.terms.items():
        if tree_arity(s) != r:
            raise CompositionError("replacement arity mismatch")
        # interleaving sign: child block j moves past replacement vertices
        # occurring after leaf j in s's preorder
        sign = 1
        for j in range(1, r + 1):
            after = 0
            seen = [False]

            def walk(u):
                nonlocal after
                if isinstance(u, Leaf):
                    if u.label == j:
                        seen[0] = True
                    return
                if seen[0]:
                    after += u.symbol.degree
                for ch in u.children:
                    walk(ch)

            walk(s)
            if (child_degs[j - 1] % 2) and (after % 2):
                sign = -sign

        def build_repl(u):
            if isinstance(u, Leaf):
                return target.children[u.label - 1]
            return Node(u.symbol, tuple(build_repl(ch) for ch in u.children))

        replaced = build_repl(s)

        def rebuild(u, p):
            if p == path:
                return replaced
            if isinstance(u, Leaf):
                return u
            return Node(u.symbol, tuple(rebuild(ch, p + (i,))
                                        for i, ch in enumerate(u.children)))

        out = out.add(OperadElement(out.arity, {rebuild(tree, ()): sign * c}))
    return out


class FreeDifferential:
    """The derivation extending assigned generator differentials."""

    def __init__(self, assignments: Mapping):
        """assignments: GeneratorSymbol -> OperadElement (degree +1) or None."""
        self.assignments = dict(assignments)
        for g, val in self.assignments.items():
            if val is None or val.is_zero():
                continue
            if val.degree() != g.degree + 1:
                raise ValueError(f"differential of {g.name} must raise degree by 1")
            if val.arity != g.arity:
                raise ValueError(f"differential of {g.name} must preserve arity")

    def value(self, g: GeneratorSymbol) -> OperadElement:
        v = self.assignments.get(g)
        return v if v is not None else OperadElement.zero(g.arity)

    def __call__(self, e: OperadElement) -> OperadElement:
        out = OperadElement.zero(e.arity)
        for t, c in e.terms.items():
            before = 0
            for path, sym in tree_vertices(t):
                dval = self.value(sym)
                if not dval.is_zero():
                    sign = -1 if (before % 2) else 1
                    out = out.add(replace_vertex(t, path, dval).scale(sign * c))
                before += sym.degree
        return out


# ---------------------------------------------------------------------------
# Koszul parity sign of a permutation

def parity_sign(perm, degrees) -> int:
    """Sign of rearranging (x_1..x_n) into (x_{perm[0]}, x_{perm[1]}, ...).

    perm is a tuple of 1-based indices; degrees[k] is the degree of x_{k+1}.
    """
    perm = tuple(perm)
    if len(perm) != len(degrees):
        raise ValueError("length mismatch")
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                if (degrees[perm[a] - 1] % 2) and (degrees[perm[b] - 1] % 2):
                    sign = -sign
    return sign


def perm_sgn(perm) -> int:
    """Ordinary sign of a permutation given as a tuple of 1-based images."""
    n = len(perm)
    sign = 1
    for a in range(n):
        for b in range(a + 1, n):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# operad shift O{m}

def _choose2(n: int) -> int:
    return n * (n - 1) // 2


def shift_degree(degree: int, arity: int, m: int) -> int:
    """Degree of an n-ary operation after the O{m} shift."""
    return degree - (arity - 1) * m


def suspension_sign(p: int, q: int, i: int, deg_f: int, deg_g: int, m: int) -> int:
    """Sign relating composition in O{m} to composition in O.

    (f x 1_p) o_i (g x 1_q) = sign * (f o_i g) x 1_{p+q-1}, normalized so
    that o_1(1_p, 1_q) = 1_{p+q-1} in Comm{m}; derived from the one-shift
    model and iterated for |m| steps.
    """
    sign = 1
    direction = 1 if m > 0 else -1
    dg = deg_g
    for _ in range(abs(m)):
        e = (p - i) * (dg + 1 - q) + (i - 1) * dg \
            + _choose2(p) + _choose2(q) + _choose2(p + q - 1)
        if e % 2:
            sign = -sign
        # degree of g in the operad reached after this step
        dg -= direction * (q - 1)
    return sign


class ShiftedElement:
    """An element of O{m}: a wrapped element with shifted degree bookkeeping."""

    __slots__ = ("element", "m")

    def __init__(self, element: OperadElement, m: int):
        self.element = element
        self.m = m

    @property
    def arity(self):
        return self.element.arity

    def degree(self):
        d = self.element.degree()
        return None if d is None else shift_degree(d, self.arity, self.m)

    def add(self, other):
        if self.m != other.m:
            raise CompositionError("mixing different shifts")
        return ShiftedElement(self.element.add(other.element), self.m)

    def scale(self, c):
        return ShiftedElement(self.element.scale(c), self.m)

    def graft(self, other: "ShiftedElement", i: int) -> "ShiftedElement":
        if self.m != other.m:
            raise CompositionError("mixing different shifts")
        s = suspension_sign(self.arity, other.arity, i,
                            self.element.degree() or 0,
                            other.element.degree() or 0, self.m)
        return ShiftedElement(graft(self.element, other.element, i).scale(s), self.m)

    def permute(self, perm: Mapping) -> "ShiftedElement":
        """Input relabeling twisted by the m-th power of the sign character."""
        n = self.arity
        images = tuple(perm[k] for k in range(1, n + 1))
        tw = perm_sgn(images) if self.m % 2 else 1
        return ShiftedElement(self.element.permute(perm).scale(tw), self.m)

    def __eq__(self, other):
        return isinstance(other, ShiftedElement) and self.m == other.m \
            and self.element == other.element

    def __repr__(self):
        return f"Shift{{{self.m}}}[{self.element!r}]"


def shift_operad(e, m: int):
    """Shift an element into O{m} (or back: shifting a ShiftedElement by -m
    unwraps it)."""
    if isinstance(e, ShiftedElement):
        total = e.m + m
        if total == 0:
            return e.element
        return ShiftedElement(e.element, total)
    if m == 0:
        return e
    return ShiftedElement(e, m)
