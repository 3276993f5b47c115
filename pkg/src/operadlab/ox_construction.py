"""Operads of operations on tensor coalgebras built from a coalgebra operad.

Given a dg operad X of coalgebras (here: the one-dimensional associative
operad As, or the cellular operad A of decomposed associahedra), each basis
element x of X(n) together with a block profile (k_1..k_n) determines an
operation phi(x)^1 on tensor words: it eats n blocks of k_i tensor factors
and returns a single factor.  Together with corestriction symbols D_l (the
components of the induced coderivation) these generate a dg operad O(X):

  * O(As) is written B here: generators m_k = D_k of degree 1 and
    m_{k,l} = phi(product)^1_{k,l} of degree 0.  Its degree-0 binary part
    carries the product and, in homology, the antisymmetrized bracket.
  * O(A) is written G: generators phi(v)^1 over the cells v of the
    decomposed associahedra, plus the D_k.

Two layers of calculus live side by side:

  * operad elements: trees over `GeneratorSymbol`s (preorder-tensor sign
    conventions of `operad_core`), used for differentials and homology;
  * tensor expressions: interned `App` applications of the same symbols to
    numbered letters, used to evaluate elements on formal graded inputs and
    to expand corestrictions of any rank.

The two are intertwined by `lift` (expressions with even letters have the
same coefficients as their trees) and `evaluate` (which reinstates the
Koszul signs for arbitrary letter parities).

Sign conventions that the source identities leave open are fixed once by
requiring d^2 = 0 and the coderivation/coproduct compatibility rules, and
are exported through `signs_report` / `write_signs`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import associahedra as ah
from .coalgebra_operad import counit_morphism, delta_cell
from .exact_chain import Complex, Echelon, GradedMap, GradedSpace
from .operad_core import (
    GeneratorSymbol, Leaf, Node, OperadElement, ShiftedElement, corolla,
    format_tree, graft, leaf_labels, parity_sign, perm_sgn, relabel,
    tree_arity, tree_degree, tree_vertices, FreeDifferential,
)

F = Fraction
F1 = Fraction(1)


class OXError(Exception):
    pass


# ---------------------------------------------------------------------------
# generator symbols

_PHI = "phi"
_D = "D"

#: the single binary product cell of the associative operad
AS2 = GeneratorSymbol("as2", 2, 0, payload=("as", 2))


def d_symbol(l: int) -> GeneratorSymbol:
    """The corestriction component D_l (arity l, degree 1)."""
    if l < 2:
        raise OXError("D symbols start at arity 2")
    return GeneratorSymbol(f"D{l}", l, 1, payload=(_D, l))


def phi_symbol(ctx_name: str, cell, profile) -> GeneratorSymbol:
    """phi(cell)^1 with the given block profile (all entries >= 1)."""
    profile = tuple(profile)
    if not profile or any(k < 1 for k in profile):
        raise OXError("profile entries must be >= 1")
    if len(profile) != tree_arity(cell):
        raise OXError("profile length must equal the cell arity")
    name = f"phi[{ctx_name};{format_tree(cell)};{','.join(map(str, profile))}]"
    return GeneratorSymbol(name, sum(profile), tree_degree(cell),
                           payload=(_PHI, ctx_name, cell, profile))


def m_symbol(k: int) -> GeneratorSymbol:
    """m_k in B: the arity-k corestriction component, degree 1."""
    return d_symbol(k)


def mm_symbol(k: int, l: int) -> GeneratorSymbol:
    """m_{k,l} in B: the binary product read through blocks of sizes k, l."""
    return phi_symbol("As", corolla(AS2), (k, l))


def _el(tree, c=1) -> OperadElement:
    return OperadElement.from_tree(tree, c)


# ---------------------------------------------------------------------------
# coalgebra-operad contexts

class _AsContext:
    """The associative operad: one basis element per arity, represented by
    planar binary trees over `AS2` (any two shapes of the same arity are
    identified only in the quotient; expansion keeps the literal shape)."""

    name = "As"

    def boundary(self, t) -> dict:
        return {}

    def delta(self, t) -> dict:
        return {(t, t): F1}

    def eps(self, t) -> Fraction:
        return F1

    def insert0(self, t, i: int) -> dict:
        """Delete input slot i of a binary tree and splice its parent."""
        def go(u):
            a, b = u.children
            if isinstance(a, Leaf) and a.label == i:
                return b
            if isinstance(b, Leaf) and b.label == i:
                return a
            if i in leaf_labels(a):
                return Node(u.symbol, (go(a), b))
            return Node(u.symbol, (a, go(b)))

        res = go(t)
        mapping = {l: (l if l < i else l - 1) for l in leaf_labels(res)}
        return {relabel(res, mapping): F1}


class _AContext:
    """The cellular operad of decomposed associahedra."""

    name = "A"

    def boundary(self, t) -> dict:
        ah.decompose(tree_arity(t))
        return dict(ah.boundary(t).terms)

    def delta(self, t) -> dict:
        ah.decompose(tree_arity(t))
        return delta_cell(t)

    def eps(self, t) -> Fraction:
        ah.decompose(tree_arity(t))
        return counit_morphism(t)

    def insert0(self, t, i: int) -> dict:
        n = tree_arity(t)
        ah.decompose(n)
        return dict(ah.insert_chain(n, 0, i, _el(t)).terms)


AS_CONTEXT = _AsContext()
A_CONTEXT = _AContext()
_CONTEXTS = {"As": AS_CONTEXT, "A": A_CONTEXT}


def context(name: str):
    try:
        return _CONTEXTS[name]
    except KeyError:
        raise OXError(f"unknown coalgebra-operad context {name!r}")


def one_tree(n: int):
    """Canonical representative of the arity-n associative multiplication:
    the left comb of binary products (n = 1 is the identity)."""
    if n < 1:
        raise OXError("arity must be >= 1")
    if n == 1:
        return Leaf(1)
    t = corolla(AS2, (1, 2))
    for i in range(3, n + 1):
        t = Node(AS2, (t, Leaf(i)))
    return t


# ---------------------------------------------------------------------------
# tensor expressions

class App:
    """Interned application of a generator symbol to argument expressions
    (arguments are integer letters or nested App nodes)."""

    __slots__ = ("symbol", "args", "opdeg", "letters", "nops")
    _cache: dict = {}

    def __new__(cls, symbol, args):
        args = tuple(args)
        key = (symbol, args)
        obj = cls._cache.get(key)
        if obj is None:
            if len(args) != symbol.arity:
                raise OXError("argument count must match the symbol arity")
            obj = super().__new__(cls)
            obj.symbol = symbol
            obj.args = args
            obj.opdeg = symbol.degree + sum(
                a.opdeg for a in args if isinstance(a, App))
            letters = []
            for a in args:
                letters.extend(expr_letters(a))
            obj.letters = tuple(letters)
            obj.nops = 1 + sum(a.nops for a in args if isinstance(a, App))
            cls._cache[key] = obj
        return obj

    def __repr__(self):
        return format_expr(self)


def format_expr(x) -> str:
    if isinstance(x, int):
        return f"x{x}"
    return f"{x.symbol.name}({','.join(format_expr(a) for a in x.args)})"


def expr_letters(x):
    return (x,) if isinstance(x, int) else x.letters


def expr_opdeg(x) -> int:
    return 0 if isinstance(x, int) else x.opdeg


def expr_nops(x) -> int:
    return 0 if isinstance(x, int) else x.nops


def expr_parity(x, par) -> int:
    return (expr_opdeg(x) + sum(par[l] for l in expr_letters(x))) % 2


def word_parity(w, par) -> int:
    return sum(expr_parity(x, par) for x in w) % 2


def word_nops(w) -> int:
    return sum(expr_nops(x) for x in w)


def _acc(out: dict, key, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _scaled_merge(out: dict, other: dict, c=1):
    for k, v in other.items():
        _acc(out, k, c * v)


def truncate_words(ws: dict, max_weight: int) -> dict:
    return {w: c for w, c in ws.items() if word_nops(w) <= max_weight}


def truncate_exprs(es: dict, max_weight: int) -> dict:
    return {e: c for e, c in es.items() if expr_nops(e) <= max_weight}


def _splits(word, r: int):
    """Ordered deconcatenations of a word into r (possibly empty) pieces."""
    n = len(word)
    for cuts in itertools.combinations_with_replacement(range(n + 1), r - 1):
        pieces = []
        prev = 0
        for c in cuts:
            pieces.append(word[prev:c])
            prev = c
        pieces.append(word[prev:])
        yield tuple(pieces)


def _three_splits(word):
    n = len(word)
    for i in range(n + 1):
        for j in range(i, n + 1):
            yield word[:i], word[i:j], word[j:]


def _delta_iter(ctx, t, r: int) -> dict:
    """Iterated coproduct of a cell: r components, as (Delta x id..) o .."""
    if r == 1:
        return {(t,): F1}
    out = {}
    for comps, c in _delta_iter(ctx, t, r - 1).items():
        for (a, b), c2 in ctx.delta(comps[0]).items():
            _acc(out, (a, b) + comps[1:], c * c2)
    return out


# ---------------------------------------------------------------------------
# corestriction expansion engine

_phi1_cache: dict = {}
_rank_cache: dict = {}


def _par_key(blocks, par):
    return tuple(par[l] for b in blocks for x in b for l in expr_letters(x))


def phi1_tree(ctx, t, blocks, par) -> dict:
    """Memoized front end of `_phi1_tree`; treat the result as read-only."""
    blocks = tuple(tuple(b) for b in blocks)
    key = (ctx.name, t, blocks, _par_key(blocks, par))
    hit = _phi1_cache.get(key)
    if hit is None:
        hit = _phi1_tree(ctx, t, blocks, par)
        _phi1_cache[key] = hit
    return hit


def _phi1_tree(ctx, t, blocks, par) -> dict:
    """Rank-1 corestriction of phi(t) applied to the given blocks.

    `t` is a cell tree of the context (possibly multi-vertex: a composite
    in the cell operad), `blocks` a tuple of words (one per input slot of
    t), `par` a mapping letter -> parity.  Returns expression -> coeff.

    Composites expand multiplicatively: phi of a grafting is phi of the
    root applied to the full corestrictions of the children, each child's
    operator picking up a Koszul sign against the letters of the blocks of
    the children before it.  Empty blocks are resolved by deleting the
    corresponding input slot of the cell.
    """
    blocks = tuple(tuple(b) for b in blocks)
    if isinstance(t, Leaf):
        if len(blocks) != 1:
            raise OXError("identity cell takes one block")
        return {blocks[0][0]: F1} if len(blocks[0]) == 1 else {}
    if len(blocks) != tree_arity(t):
        raise OXError("block count must match the cell arity")

    for i, b in enumerate(blocks):
        if not b:
            nb = blocks[:i] + blocks[i + 1:]
            out = {}
            for s, c in ctx.insert0(t, i + 1).items():
                _scaled_merge(out, phi1_tree(ctx, s, nb, par), c)
            return out

    if len(tree_vertices(t)) == 1:
        labels = leaf_labels(t)
        if labels != sorted(labels):
            raise OXError("cell leaf labels must be in planar order")
        profile = tuple(len(b) for b in blocks)
        sym = phi_symbol(ctx.name, t, profile)
        args = tuple(x for b in blocks for x in b)
        return {App(sym, args): F1}

    # composite cell: recurse into the children
    children = t.children
    infos = []
    prefs = []
    pos = 0
    acc = 0
    for ch in children:
        a = tree_arity(ch)
        chblocks = blocks[pos:pos + a]
        prefs.append(acc)
        acc += sum(word_parity(b, par) for b in chblocks) % 2
        acc %= 2
        if isinstance(ch, Leaf):
            infos.append([(tuple(chblocks[0]), F1)])
        else:
            local = relabel(ch, {l: l - pos for l in leaf_labels(ch)})
            total = sum(len(b) for b in chblocks)
            opts = {}
            for s in range(0, total + 1):
                _scaled_merge(opts, phi_rank(ctx, local, chblocks, s, par))
            infos.append(list(opts.items()))
        pos += a

    out = {}
    for combo in itertools.product(*infos):
        sign = 1
        coeff = F1
        for j, ch in enumerate(children):
            if isinstance(ch, Node) and (tree_degree(ch) % 2) and prefs[j]:
                sign = -sign
            coeff *= combo[j][1]
        words = tuple(w for (w, _) in combo)
        sub = phi1_tree(ctx, corolla(t.symbol), words, par)
        _scaled_merge(out, sub, sign * coeff)
    return out


def phi_rank(ctx, t, blocks, r: int, par) -> dict:
    """Memoized front end of `_phi_rank`; treat the result as read-only."""
    blocks = tuple(tuple(b) for b in blocks)
    key = (ctx.name, t, blocks, r, _par_key(blocks, par))
    hit = _rank_cache.get(key)
    if hit is None:
        hit = _phi_rank(ctx, t, blocks, r, par)
        _rank_cache[key] = hit
    return hit


def _phi_rank(ctx, t, blocks, r: int, par) -> dict:
    """Rank-r corestriction of phi(t): word (length r) -> coefficient.

    Rank r factors as r rank-1 pieces against the iterated coproduct of the
    cell and ordered deconcatenations of every block; the Koszul sign of
    regrouping (cell components to their rows, pieces from block-major to
    row-major order) is explicit.
    """
    blocks = tuple(tuple(b) for b in blocks)
    n = len(blocks)
    if r == 0:
        if any(blocks):
            return {}
        e = ctx.eps(t)
        return {(): F(e)} if e else {}
    if r == 1:
        return {(e,): c for e, c in phi1_tree(ctx, t, blocks, par).items()}
    if r > sum(len(b) for b in blocks):
        return {}

    out = {}
    for comps, c0 in _delta_iter(ctx, t, r).items():
        comp_degs = [tree_degree(c) % 2 for c in comps]
        for choice in itertools.product(*[_splits(b, r) for b in blocks]):
            # choice[b][i] = the piece of block b handed to row i
            piece_par = [[word_parity(choice[b][i], par) for i in range(r)]
                         for b in range(n)]
            sign = 1
            # cell component i moves right past the pieces of rows < i
            for i in range(1, r):
                if comp_degs[i]:
                    p = sum(piece_par[b][i2]
                            for i2 in range(i) for b in range(n))
                    if p % 2:
                        sign = -sign
            # pieces reorder from block-major to row-major
            for b in range(n):
                for b2 in range(b + 1, n):
                    for i in range(1, r):
                        if not piece_par[b][i]:
                            continue
                        p = sum(piece_par[b2][i2] for i2 in range(i))
                        if p % 2:
                            sign = -sign
            rows = []
            dead = False
            for i in range(r):
                row = phi1_tree(ctx, comps[i],
                                tuple(choice[b][i] for b in range(n)), par)
                if not row:
                    dead = True
                    break
                rows.append(list(row.items()))
            if dead:
                continue
            for picks in itertools.product(*rows):
                word = tuple(e for (e, _) in picks)
                c = c0 * sign
                for (_, ci) in picks:
                    c *= ci
                _acc(out, word, c)
    return out


def phi_full(ctx, t, blocks, par) -> dict:
    """All corestriction ranks at once: word -> coefficient."""
    out = {}
    total = sum(len(b) for b in blocks)
    for r in range(0, total + 1):
        _scaled_merge(out, phi_rank(ctx, t, blocks, r, par))
    return out


def expand_corestriction(x, profile, rank: int = 1, ctx_name: str = "A",
                         parities=None) -> dict:
    """Rank-`rank` corestriction of phi(x) with the given block profile.

    `x` is a cell tree or a chain (OperadElement) of the context; letters
    1..sum(profile) are split into consecutive blocks.  Returns a mapping
    word (tuple of expressions, length = rank) -> coefficient.
    """
    ctx = context(ctx_name)
    profile = tuple(profile)
    blocks = _letter_blocks(profile)
    par = dict(parities) if parities else {
        l: 0 for l in range(1, sum(profile) + 1)}
    chain = x if isinstance(x, OperadElement) else _el(x)
    out = {}
    for t, c in chain.terms.items():
        _scaled_merge(out, phi_rank(ctx, t, blocks, rank, par), c)
    return out


def _letter_blocks(profile):
    blocks = []
    nxt = 1
    for k in profile:
        blocks.append(tuple(range(nxt, nxt + k)))
        nxt += k
    return tuple(blocks)


def _even_par(n: int) -> dict:
    return {l: 0 for l in range(1, n + 1)}


# ---------------------------------------------------------------------------
# lifting expressions to operad elements, and evaluating elements back

def _lift_expr(x):
    if isinstance(x, int):
        return Leaf(x)
    return Node(x.symbol, tuple(_lift_expr(a) for a in x.args))


def lift(exprs: dict, arity: int) -> OperadElement:
    """Read an expression sum (with all letters declared even) as an operad
    element: the preorder-tensor coefficients agree because even letters
    never produce interleaving signs."""
    terms = {}
    for e, c in exprs.items():
        t = _lift_expr(e)
        terms[t] = terms.get(t, F(0)) + c
    return OperadElement(arity, terms)


def _eval_tree(t, par):
    if isinstance(t, Leaf):
        return 1, t.label
    sign = 1
    before = 0
    parts = []
    for ch in t.children:
        s2, ex = _eval_tree(ch, par)
        if (tree_degree(ch) % 2) and (before % 2):
            sign = -sign
        sign *= s2
        parts.append(ex)
        before += sum(par[l] for l in leaf_labels(ch))
    return sign, App(t.symbol, tuple(parts))


def evaluate(e, parities) -> dict:
    """Evaluate an operad element on formal graded letters.

    `parities[i]` is the parity of the input in slot i+1.  Returns
    expression -> coefficient; the Koszul signs are the permutation sign of
    the leaf labeling plus the interleaving of each subtree's operators
    past the letters of its left siblings.
    """
    if isinstance(e, ShiftedElement):
        raise OXError("evaluate acts on unshifted elements")
    par = {i + 1: p % 2 for i, p in enumerate(parities)}
    if len(par) != e.arity:
        raise OXError("one parity per input slot is required")
    out = {}
    degs = [par[i] for i in range(1, e.arity + 1)]
    for t, c in e.terms.items():
        s0 = parity_sign(tuple(leaf_labels(t)), degs)
        sgn, ex = _eval_tree(t, par)
        _acc(out, ex, c * s0 * sgn)
    return out


# ---------------------------------------------------------------------------
# the differential

def _coderivation_words(word, par) -> dict:
    """Apply the coderivation assembled from all D_j to a tensor word:
    sum over consecutive segments, with the parity of the prefix as sign."""
    out = {}
    n = len(word)
    for j in range(2, n + 1):
        for a in range(0, n - j + 1):
            p = word_parity(word[:a], par)
            neww = word[:a] + (App(d_symbol(j), word[a:a + j]),) + word[a + j:]
            _acc(out, neww, -1 if p else 1)
    return out


def ox_differential(sym: GeneratorSymbol) -> OperadElement:
    """Differential of a generator of O(X), as an operad element.

    For D_k: minus the sum of all ways to substitute one D into another.
    For phi(cell)^1: phi of the cell boundary, minus D applied to every
    higher corestriction rank, plus (sign of |cell|) the insertion of a D
    into each block of arguments.
    """
    p = sym.payload
    if not (isinstance(p, tuple) and p and p[0] in (_PHI, _D)):
        raise OXError("not an O(X) generator")
    if p[0] == _D:
        k = p[1]
        out = OperadElement.zero(k)
        for r in range(2, k):
            j = k - r + 1
            outer = _el(corolla(d_symbol(r)))
            inner = _el(corolla(d_symbol(j)))
            for a in range(1, r + 1):
                out = out.sub(graft(outer, inner, a))
        return out

    _, ctx_name, cell, profile = p
    ctx = context(ctx_name)
    n = sum(profile)
    blocks = _letter_blocks(profile)
    par = _even_par(n)

    total = {}
    # phi of the cell boundary
    for t, c in ctx.boundary(cell).items():
        _scaled_merge(total, phi1_tree(ctx, t, blocks, par), c)
    # minus D applied to the higher corestriction ranks
    for s in range(2, n + 1):
        for w, c in phi_rank(ctx, cell, blocks, s, par).items():
            _acc(total, App(d_symbol(s), w), -c)
    # plus (sign |cell|) a D inserted into each block
    csign = -1 if tree_degree(cell) % 2 else 1
    for l, k in enumerate(profile):
        for j in range(2, k + 1):
            newprofile = profile[:l] + (k - j + 1,) + profile[l + 1:]
            nsym = phi_symbol(ctx_name, cell, newprofile)
            for pstart in range(0, k - j + 1):
                seg = blocks[l][pstart:pstart + j]
                args = []
                for b in range(len(profile)):
                    if b != l:
                        args.extend(blocks[b])
                    else:
                        args.extend(blocks[l][:pstart])
                        args.append(App(d_symbol(j), seg))
                        args.extend(blocks[l][pstart + j:])
                _acc(total, App(nsym, tuple(args)), csign)
    return lift(total, n)


class _OXDifferential(FreeDifferential):
    """Lazy derivation: generator differentials are computed on demand."""

    def __init__(self):
        self.assignments = {}

    def value(self, g):
        if g not in self.assignments:
            p = g.payload
            if isinstance(p, tuple) and p and p[0] in (_PHI, _D):
                self.assignments[g] = ox_differential(g)
            else:
                self.assignments[g] = None
        return super().value(g)


diff = _OXDifferential()


# ---------------------------------------------------------------------------
# equality in O(As): the relation quotient at arity <= 3

def associativity_defect(profile=(1, 1, 1)) -> OperadElement:
    """A defining relation of O(As): the difference between the expansions
    of the triple product through its two binary-tree shapes, read at the
    given three-block profile."""
    if len(profile) != 3:
        raise OXError("the defect takes a three-block profile")
    n = sum(profile)
    blocks = _letter_blocks(profile)
    par = _even_par(n)
    left = lift(phi1_tree(AS_CONTEXT, one_tree(3), blocks, par), n)
    t = Node(AS2, (Leaf(1), Node(AS2, (Leaf(2), Leaf(3)))))
    right = lift(phi1_tree(AS_CONTEXT, t, blocks, par), n)
    return left.sub(right)


_b_relations: dict = {}


def _b_relation_basis(arity: int) -> list:
    """Spanning set of the relation ideal of O(As) in one arity (3 or 4):
    the associativity defect composed with generators, closed under input
    relabeling and the differential."""
    if arity in _b_relations:
        return _b_relations[arity]
    r = associativity_defect()
    if arity == 3:
        seeds = [r]
    elif arity == 4:
        seeds = [associativity_defect((2, 1, 1)),
                 associativity_defect((1, 2, 1)),
                 associativity_defect((1, 1, 2))]
        for gt in (corolla(mm_symbol(1, 1)), corolla(d_symbol(2))):
            g = _el(gt)
            for i in range(1, 4):
                seeds.append(graft(r, g, i))
            for i in range(1, 3):
                seeds.append(graft(g, r, i))
    else:
        raise OXError("relation basis available for arity 3 and 4 only")
    out = []
    for seed in seeds:
        for images in itertools.permutations(range(1, arity + 1)):
            perm = {i + 1: images[i] for i in range(arity)}
            rp = seed.permute(perm)
            out.append(rp)
            dr = diff(rp)
            if not dr.is_zero():
                out.append(dr)
    _b_relations[arity] = out
    return out


def equal_in_O(e1: OperadElement, e2: OperadElement, operad: str = "B") -> bool:
    """Equality of elements in O(X).

    O(A) is free on its generators, so equality is syntactic.  O(As) has
    the associativity relation among its binary generators; at arities 3
    and 4 the difference is reduced against the (differential-closed) span
    of the composed and relabeled relation.  Larger arities are not
    decided.
    """
    if e1.arity != e2.arity:
        raise OXError("arity mismatch")
    d = e1.sub(e2)
    if d.is_zero():
        return True
    if operad == "G":
        return False
    if operad != "B":
        raise OXError(f"unknown operad {operad!r}")
    if d.arity <= 2:
        return False
    if d.arity > 4:
        raise OXError("equality in O(As) is decided only up to arity 4")
    deg = d.degree()
    rels = [v for v in _b_relation_basis(d.arity) if v.degree() == deg]
    trees = set(d.terms)
    for v in rels:
        trees.update(v.terms)
    index = {t: i for i, t in enumerate(sorted(trees, key=lambda u: u.sort_key()))}
    ech = Echelon(index)
    for v in rels:
        ech.add(dict(v.terms))
    return ech.contains(dict(d.terms))


def bracket() -> OperadElement:
    """The binary degree-0 bracket: the antisymmetrized product."""
    s = mm_symbol(1, 1)
    return _el(corolla(s, (1, 2))).sub(_el(corolla(s, (2, 1))))


def jacobiator() -> OperadElement:
    """Sum of the cyclic relabelings of bracket-of-bracket; zero in the
    quotient iff the graded Jacobi identity holds."""
    b = bracket()
    g = graft(b, b, 1)
    cyc = {1: 2, 2: 3, 3: 1}
    cyc2 = {1: 3, 2: 1, 3: 2}
    return g.add(g.permute(cyc)).add(g.permute(cyc2))


# ---------------------------------------------------------------------------
# arity-2 homology

def _arity2_complex(operad: str):
    if operad == "B":
        g0 = mm_symbol(1, 1)
    elif operad == "G":
        ah.decompose(2)
        g0 = phi_symbol("A", ah.point_cell(2), (1, 1))
    else:
        raise OXError(f"unknown operad {operad!r}")
    g1 = d_symbol(2)
    basis = [corolla(g0, (1, 2)), corolla(g0, (2, 1)),
             corolla(g1, (1, 2)), corolla(g1, (2, 1))]
    space = GradedSpace(basis, {t: (tree_degree(t),) for t in basis})
    columns = {}
    for t in basis:
        img = diff(_el(t))
        for u in img.terms:
            if u not in space.index:
                raise OXError("differential leaves the arity-2 span")
        columns[t] = dict(img.terms)
    d = GradedMap(space, space, (1,), columns)
    return basis, Complex(space, d)


def arity2_homology(operad: str = "B") -> dict:
    """Homology of the arity-2 part, with representative cycles.

    Returns {"dims": degree -> dimension, "reps": degree -> element}.  For
    the shifted operad ("Binfty") the representatives are wrapped shifted
    elements and the degrees drop by one.
    """
    base = "B" if operad == "Binfty" else operad
    _, cx = _arity2_complex(base)
    dims = {}
    reps = {}
    for deg in (0, 1):
        dim, cycles = cx.homology(deg)
        if dim:
            dims[deg] = dim
            reps[deg] = OperadElement(2, cycles[0])
    if operad == "Binfty":
        dims = {d - 1: v for d, v in dims.items()}
        reps = {d - 1: ShiftedElement(e, 1) for d, e in reps.items()}
    return {"dims": dims, "reps": reps}


# ---------------------------------------------------------------------------
# filtration

def filtration_weight(e) -> int:
    """Minimum number of generator vertices over the terms of an element
    (every generator has at least one argument beyond the trivial, so each
    vertex sits in filtration level one)."""
    if isinstance(e, ShiftedElement):
        e = e.element
    if e.is_zero():
        raise OXError("the zero element has no finite filtration weight")
    return min(len(tree_vertices(t)) for t in e.terms)


# ---------------------------------------------------------------------------
# tensor-word operators: shuffles and the three-split extension

def shuffle_words(w1, w2, par) -> dict:
    """Signed shuffle product of two tensor words."""
    w1, w2 = tuple(w1), tuple(w2)
    out = {}
    n, m = len(w1), len(w2)
    for positions in itertools.combinations(range(n + m), n):
        posset = set(positions)
        word = []
        i1 = i2 = 0
        sign = 1
        for p in range(n + m):
            if p in posset:
                word.append(w1[i1])
                i1 += 1
            else:
                if expr_parity(w2[i2], par) and word_parity(w1[i1:], par):
                    sign = -sign
                word.append(w2[i2])
                i2 += 1
        _acc(out, tuple(word), sign)
    return out


def shuffle_many(words, par) -> dict:
    out = {(): F1}
    for w in words:
        nxt = {}
        for acc_w, c in out.items():
            _scaled_merge(nxt, shuffle_words(acc_w, w, par), c)
        out = nxt
    return out


def t_chi(chi, chi_opdeg: int, words, par) -> dict:
    """Extend an operator chi on middle blocks over tensor words.

    Every word is split into first/middle/last; chi (of operator degree
    `chi_opdeg`) eats the middles, the firsts and lasts are shuffled on the
    two sides, with the Koszul signs of the regrouping and of moving chi
    past the firsts.  chi maps a tuple of words to expression -> coeff.
    """
    words = tuple(tuple(w) for w in words)
    n = len(words)
    out = {}
    for splits in itertools.product(*[list(_three_splits(w)) for w in words]):
        firsts = [s[0] for s in splits]
        mids = tuple(s[1] for s in splits)
        lasts = [s[2] for s in splits]
        fpar = [word_parity(f, par) for f in firsts]
        mpar = [word_parity(m, par) for m in mids]
        lpar = [word_parity(l, par) for l in lasts]
        sign = 1
        # regroup (f1 m1 l1 f2 m2 l2 ...) -> (f1..fn m1..mn l1..ln)
        for b in range(n):
            for b2 in range(b + 1, n):
                if mpar[b] and fpar[b2]:
                    sign = -sign
                if lpar[b] and (fpar[b2] ^ mpar[b2]):
                    sign = -sign
        midval = chi(mids)
        if not midval:
            continue
        if (chi_opdeg % 2) and (sum(fpar) % 2):
            sign = -sign
        fsh = shuffle_many(firsts, par)
        lsh = shuffle_many(lasts, par)
        for fw, fc in fsh.items():
            for e, mc in midval.items():
                for lw, lc in lsh.items():
                    _acc(out, fw + (e,) + lw, sign * fc * mc * lc)
    return out


# ---------------------------------------------------------------------------
# resolved sign conventions (see signs_report)

#: the unary operation on words of length >= 2 entering the identities
#: below is minus the corestriction component D.
UNARY_D_SIGN = -1
#: global sign of the chi-term in the coproduct compatibility rule
RULE_CHI_SIGN = 1
#: global sign of the counit/shuffle term in the same rule
RULE_EPS_SIGN = 1
#: global sign of the composition terms in the differential identity
TRI_COMP_SIGN = 1
#: global sign of the neighbor-shuffle terms in the differential identity
TRI_CUP_SIGN = 1


def _phi_lower(i: int, blocks, par) -> dict:
    """The arity-i operation of the top-cell family, rank 1, applied to
    blocks of tensor factors; i = 1 is the (signed) corestriction D."""
    blocks = tuple(tuple(b) for b in blocks)
    if i == 1:
        (w,) = blocks
        if len(w) < 2:
            return {}
        return {App(d_symbol(len(w)), w): F(UNARY_D_SIGN)}
    if i == 2 and not all(blocks):
        return {}
    out = {}
    for t, c in ah.fundamental_class(i).terms.items():
        _scaled_merge(out, phi1_tree(A_CONTEXT, t, blocks, par), c)
    return out


def holie_gen(k: int) -> OperadElement:
    """phi of the fundamental class of the k-th associahedron, with unit
    blocks: the arity-k generator chain of the bracket family."""
    out = OperadElement.zero(k)
    for t, c in ah.fundamental_class(k).terms.items():
        out = out.add(_el(corolla(phi_symbol("A", t, (1,) * k)), c))
    return out


def check_coproduct_rule(cell, profile, parities) -> bool:
    """phi(cell) as a full coalgebra map equals, modulo weight-2 words, the
    three-split extension of its rank-1 part plus counit times shuffle."""
    par = {i + 1: p % 2 for i, p in enumerate(parities)}
    blocks = _letter_blocks(profile)
    lhs = truncate_words(phi_full(A_CONTEXT, cell, blocks, par), 1)

    def chi(mids):
        if sum(len(m) for m in mids) < 2:
            return {}
        return phi1_tree(A_CONTEXT, cell, mids, par)

    rhs = {}
    _scaled_merge(rhs, t_chi(chi, tree_degree(cell), blocks, par),
                  RULE_CHI_SIGN)
    e = A_CONTEXT.eps(cell)
    if e:
        _scaled_merge(rhs, shuffle_many(blocks, par), RULE_EPS_SIGN * e)
    rhs = truncate_words(rhs, 1)
    return lhs == rhs


def check_differential_rule(k: int, parities) -> bool:
    """The differential of the arity-k top-cell generator, evaluated on
    letters, equals composition terms plus neighbor-shuffle terms modulo
    weight-3 expressions."""
    par = {i + 1: p % 2 for i, p in enumerate(parities)}
    lhs = truncate_exprs(evaluate(diff(holie_gen(k)), parities), 2)

    rhs = {}
    # neighbor shuffles through the arity-(k-1) operation
    for r in range(1, k):
        sign = TRI_CUP_SIGN * (-1 if (r - 1) % 2 else 1)
        cup = shuffle_words((r,), (r + 1,), par)
        for w, c in cup.items():
            blocks = ([(i,) for i in range(1, r)] + [w]
                      + [(i,) for i in range(r + 2, k + 1)])
            _scaled_merge(rhs, _phi_lower(k - 1, blocks, par), sign * c)
    # compositions through the three-split extension
    for i in range(1, k + 1):
        j = k + 1 - i

        def chi(mids, j=j):
            return _phi_lower(j, mids, par)

        for l in range(1, i + 1):
            # the solved insertion sign (-1)^((l-1)(j-1)+(i-1)(j-2)); its
            # first factor is the stated position sign (-1)^((l-1)(k-i)),
            # the second the Koszul correction already forced by d^2 = 0
            # on the fundamental cells
            ext = TRI_COMP_SIGN * ah.insertion_sign(i, j, l)
            if (j % 2) and (sum(par[x] for x in range(1, l)) % 2):
                ext = -ext
            tw = [(x,) for x in range(l, l + j)]
            tval = t_chi(chi, j % 2, tw, par)
            for w, c in tval.items():
                blocks = ([(x,) for x in range(1, l)] + [w]
                          + [(x,) for x in range(l + j, k + 1)])
                _scaled_merge(rhs, _phi_lower(i, blocks, par), ext * c)
    rhs = truncate_exprs(rhs, 2)
    return lhs == rhs


def check_Gg_and_tri(k: int) -> dict:
    """Verify both filtration-truncated identities at arity k for every
    parity assignment of the inputs; returns a report dict."""
    if not 2 <= k <= 4:
        raise OXError("checked for 2 <= k <= 4")
    ah.decompose(k)
    coproduct_ok = True
    for cell in ah.decompose(k).cells:
        for parities in itertools.product((0, 1), repeat=k):
            if not check_coproduct_rule(cell, (1,) * k, parities):
                coproduct_ok = False
    differential_ok = all(
        check_differential_rule(k, parities)
        for parities in itertools.product((0, 1), repeat=k))
    return {"arity": k, "coproduct_rule": coproduct_ok,
            "differential_rule": differential_ok}


# ---------------------------------------------------------------------------
# the antisymmetrized family and its image in O(As)

def holie_map(k: int) -> OperadElement:
    """Antisymmetrization of the arity-k top-cell generator over all input
    relabelings, signed by the permutation (Koszul factors reappear on
    evaluation)."""
    base = holie_gen(k)
    out = OperadElement.zero(k)
    for images in itertools.permutations(range(1, k + 1)):
        perm = {i + 1: images[i] for i in range(k)}
        out = out.add(base.permute(perm).scale(perm_sgn(images)))
    return out


def _to_B_image(sym: GeneratorSymbol) -> OperadElement:
    p = sym.payload
    if not (isinstance(p, tuple) and p and p[0] in (_PHI, _D)):
        raise OXError("not an O(X) generator")
    if p[0] == _D:
        return _el(corolla(sym))
    _, ctx_name, cell, profile = p
    if ctx_name == "As":
        return _el(corolla(sym))
    e = A_CONTEXT.eps(cell)
    if not e:
        return OperadElement.zero(sym.arity)
    n = tree_arity(cell)
    blocks = _letter_blocks(profile)
    img = lift(phi1_tree(AS_CONTEXT, one_tree(n), blocks,
                         _even_par(sum(profile))), sum(profile))
    return img.scale(e)


def to_B(e: OperadElement) -> OperadElement:
    """The counit-induced morphism O(A) -> O(As): each cell generator goes
    to its counit value times the comb expansion of the multiplication."""
    out = OperadElement.zero(e.arity)
    for t, c in e.terms.items():
        out = out.add(_subst_tree(t, _to_B_image).scale(c))
    return out


def _subst_tree(t, img) -> OperadElement:
    labels = leaf_labels(t)

    def go(u):
        if isinstance(u, Leaf):
            return OperadElement.identity()
        res = img(u.symbol)
        for i in range(len(u.children) - 1, -1, -1):
            res = graft(res, go(u.children[i]), i + 1)
        return res

    res = go(t)
    perm = {p + 1: labels[p] for p in range(len(labels))}
    return res.permute(perm)


def holie_vanishing(k: int, rank: int, parities) -> dict:
    """Rank-`rank` corestriction of the top-cell family on single-letter
    blocks; empty for rank >= 2, k >= 3."""
    par = {i + 1: p % 2 for i, p in enumerate(parities)}
    blocks = _letter_blocks((1,) * k)
    out = {}
    for t, c in ah.fundamental_class(k).terms.items():
        _scaled_merge(out, phi_rank(A_CONTEXT, t, blocks, rank, par), c)
    return out


# ---------------------------------------------------------------------------
# resolved-sign report

def signs_report() -> str:
    """Deterministic text recording every sign convention that the machine
    checks pinned down (each is verified by the test suite)."""
    lines = [
        "# Resolved sign conventions",
        "",
        "All conventions below are forced (up to generator renormalization)",
        "by d^2 = 0, the coderivation property, and the coproduct",
        "compatibility rules; each is machine-verified by the test suite.",
        "",
        "* Orientation of composite cells: preorder tensor of vertex",
        "  orientations; grafting moves the inner block past the outer",
        "  vertices that follow the insertion slot.",
        "* Insertion sign in the boundary of the arity-k fundamental cell:",
        "  mu_i o_l mu_j enters d(mu_{i+j-1}) with (-1)^((l-1)(j-1)+(i-1)(j-2)),",
        "  the classical homotopy-associativity sign.",
        "* Coderivation: D applied to a tensor word acts on each consecutive",
        "  segment with the sign (-1)^(parity of the prefix).",
        "* d(D_k) = - sum over substitutions D_r o_a D_(k-r+1)  (all signs",
        "  equal on even letters; odd-letter signs follow from the preorder",
        "  convention).",
        "* d(phi(cell)^1) = phi(d cell)^1 - sum_s D_s phi^s",
        "  + (-1)^|cell| sum (phi with a D inserted into one block),",
        "  the inner D carrying the prefix-parity sign inside its block.",
        f"  In particular d m_(1,1) = -(m_2(x1,x2) + m_2(x2,x1)).",
        "* Rank-r corestriction: phi^r = (phi^1)^(tensor r) against the",
        "  iterated cell coproduct and ordered deconcatenations; the",
        "  regrouping Koszul sign (components past earlier rows' pieces,",
        "  pieces from block-major to row-major order) is explicit.",
        "* Three-split extension T(chi): chi eats the middles and passes the",
        "  shuffled firsts with the sign (-1)^(|chi| * parity of firsts).",
        "",
        "Global signs of the truncated identities:",
        "",
        f"* unary operation on long words = {UNARY_D_SIGN:+d} * D,",
        f"* coproduct rule: chi-term {RULE_CHI_SIGN:+d}, counit/shuffle term "
        f"{RULE_EPS_SIGN:+d},",
        f"* differential rule: composition terms {TRI_COMP_SIGN:+d} times the",
        "  insertion sign (-1)^((l-1)(j-1)+(i-1)(j-2)) (the bare position",
        "  factor (-1)^((l-1)(k-i)) alone fails first at arity 4 on the",
        "  (i,j) = (2,3) terms, exactly as for the fundamental-cell",
        f"  boundaries), neighbor-shuffle terms {TRI_CUP_SIGN:+d}.",
        "",
        "The global choices above are the unique assignment consistent at",
        "arities 2 and 3; arity 4 is then an over-determined confirmation.",
        "",
    ]
    return "\n".join(lines)


def write_signs(path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(signs_report())
