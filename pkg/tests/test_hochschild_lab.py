"""Tests for the Hochschild/Harrison/obstruction workbench."""
import itertools
import json
import random
from fractions import Fraction as F

import pytest

from operadlab.hochschild_lab import (
    Algebra, Cochain, HochschildError,
    truncated_polynomial_algebra, zero_cochain, identity_cochain,
    multiplication_cochain, basis_cochain, hochschild_d, cup, brace,
    gerstenhaber_bracket, hochschild_complex, hh_dimensions,
    hh_representatives, is_coboundary, binfty_on_cochains,
    harrison, harrison_weight_complex, harrison_boundary_descends,
    SchoutenTruncation, SchoutenDualModel,
    schouten_d_product, schouten_d_bracket,
    extension_report, hom_commutator_report,
    obstruction_E1, obstruction_bracket_action, obstruction_vanishing,
    schouten_comparison, hh_gerstenhaber_report,
)
from operadlab import ox_construction as ox


# ---------------------------------------------------------------------------
# Part A: Hochschild cochains
# ---------------------------------------------------------------------------

def dual_numbers():
    return truncated_polynomial_algebra(2)


def random_cochain(alg, arity, rng):
    vals = {}
    for args in itertools.product(range(alg.dim), repeat=arity):
        col = {k: F(rng.randint(-2, 2)) for k in range(alg.dim)}
        col = {k: c for k, c in col.items() if c}
        if col:
            vals[args] = col
    return Cochain(alg, arity, vals)


def test_algebra_json_round_trip():
    alg = truncated_polynomial_algebra(3)
    doc = alg.to_json()
    again = Algebra.from_json(json.loads(doc))
    assert again.to_json() == doc


def test_algebra_validation_errors():
    with pytest.raises(HochschildError):
        Algebra(["a"], [0], {(0, 0): {0: F(2)}}, {0: F(1)})  # not unital
    with pytest.raises(HochschildError):
        # non-associative structure constants: (x x) y != x (x y)
        Algebra(["1", "x", "y"], [0, 0, 0],
                {(0, 0): {0: F(1)}, (0, 1): {1: F(1)}, (1, 0): {1: F(1)},
                 (0, 2): {2: F(1)}, (2, 0): {2: F(1)},
                 (1, 1): {2: F(1)}, (1, 2): {0: F(1)}, (2, 1): {},
                 (2, 2): {}},
                {0: F(1)})


def test_mu_brace_mu_is_zero():
    for n in (2, 3):
        mu = multiplication_cochain(truncated_polynomial_algebra(n))
        assert brace(mu, [mu]).is_zero()


def test_d_squared_zero_on_random_cochains():
    rng = random.Random(7)
    alg = truncated_polynomial_algebra(3)
    for arity in (0, 1, 2):
        c = random_cochain(alg, arity, rng)
        assert hochschild_d(hochschild_d(c)).is_zero()


def test_d_of_identity_is_multiplication():
    # (d id)(a, b) = a id(b) - id(ab) + id(a) b = ab: the coboundary of the
    # identity 1-cochain is the multiplication, not zero.
    alg = dual_numbers()
    d_id = hochschild_d(identity_cochain(alg))
    assert d_id.sub(multiplication_cochain(alg)).is_zero()
    assert not d_id.is_zero()


def test_d_of_0_cochain_is_commutator():
    alg = truncated_polynomial_algebra(3)
    a = Cochain(alg, 0, {(): {1: F(1)}})
    da = hochschild_d(a)
    # commutative algebra: x b - b x = 0 for every b
    assert da.is_zero()


def test_brace_empty_is_identity_and_pre_lie():
    rng = random.Random(1)
    alg = dual_numbers()
    x = random_cochain(alg, 2, rng)
    assert brace(x, []).sub(x).is_zero()
    # graded pre-Lie: the associator of x{y} is symmetric in y, z
    y = random_cochain(alg, 2, rng)
    z = random_cochain(alg, 1, rng)
    assoc1 = brace(brace(x, [y]), [z]).sub(brace(x, [brace(y, [z])]))
    # note x{y}{z} - x{y{z}} = x{y,z} + (-1)^{|y||z|} x{z,y}
    expect = brace(x, [y, z]).add(
        brace(x, [z, y]).scale(F((-1) ** (y.sdeg * z.sdeg))))
    assert assoc1.sub(expect).is_zero()


def test_gerstenhaber_jacobi_exact_on_cochains():
    rng = random.Random(3)
    alg = truncated_polynomial_algebra(3)
    x = random_cochain(alg, 2, rng)
    y = random_cochain(alg, 1, rng)
    z = random_cochain(alg, 2, rng)
    sx, sy, sz = x.sdeg, y.sdeg, z.sdeg
    j = gerstenhaber_bracket(gerstenhaber_bracket(x, y), z) \
        .scale(F((-1) ** (sx * sz)))
    j = j.add(gerstenhaber_bracket(gerstenhaber_bracket(y, z), x)
              .scale(F((-1) ** (sy * sx))))
    j = j.add(gerstenhaber_bracket(gerstenhaber_bracket(z, x), y)
              .scale(F((-1) ** (sz * sy))))
    assert j.is_zero()


def test_hh_dimensions_dual_numbers():
    dims = hh_dimensions(dual_numbers(), 4)
    assert {k: v for k, v in dims.items()
            if v and k <= 3} == {0: 2, 1: 1, 2: 1, 3: 1}


def test_hh0_is_center():
    alg = truncated_polynomial_algebra(3)
    assert hh_dimensions(alg, 1)[0] == 3


def test_cup_associative_and_commutative_on_classes():
    rng = random.Random(5)
    alg = dual_numbers()
    x = random_cochain(alg, 1, rng)
    y = random_cochain(alg, 1, rng)
    z = random_cochain(alg, 2, rng)
    assert cup(cup(x, y), z).sub(cup(x, cup(y, z))).is_zero()
    reps1 = hh_representatives(alg, 1)
    reps2 = hh_representatives(alg, 2)
    for a in reps1:
        for b in reps2:
            comm = cup(a, b).sub(cup(b, a).scale(F((-1) ** (1 * 2))))
            assert is_coboundary(comm, nmax=4)


def test_binfty_report_and_gerstenhaber_on_hh():
    rep = binfty_on_cochains(dual_numbers(), max_length=4, seed=0)
    assert "D_squared" in rep["checks"]
    g = hh_gerstenhaber_report()
    assert g["all_ok"]


def test_schouten_comparison():
    rep = schouten_comparison(3)
    assert rep["all_ok"]
    assert rep["hh0_dim"] == 4


def test_bracket_convention_matches_operadic_generator():
    """The brace-model bracket equals the evaluated antisymmetrized
    operadic product generator, including Koszul signs."""
    rng = random.Random(11)
    alg = truncated_polynomial_algebra(3)
    for ax, ay in [(1, 1), (1, 2), (2, 1), (2, 2)]:
        x = random_cochain(alg, ax, rng)
        y = random_cochain(alg, ay, rng)
        letters = {1: x, 2: y}
        parities = [x.sdeg % 2, y.sdeg % 2]
        total = zero_cochain(alg, ax + ay - 1)
        for expr, coeff in ox.evaluate(ox.bracket(), parities).items():
            outer, inner = (letters[a] for a in expr.args)
            total = total.add(brace(outer, [inner]).scale(F(coeff)))
        assert total.sub(gerstenhaber_bracket(x, y)).is_zero()


# ---------------------------------------------------------------------------
# Part B: Harrison-type complex
# ---------------------------------------------------------------------------

def test_harrison_boundary_squares_to_zero():
    for w in range(1, 5):
        cx, _ = harrison_weight_complex(w)  # Complex validates d^2 = 0
        assert cx is not None


def test_harrison_boundary_descends():
    assert harrison_boundary_descends(4)


def test_harrison_homology_matches_model():
    rep = harrison(4)
    assert rep["all_match"]
    for w, entry in rep["weights"].items():
        assert entry["homology_dims"] == {1: 1}


def test_harrison_monotone_consistent():
    r3 = harrison(3)
    r4 = harrison(4)
    for w in r3["weights"]:
        assert (r3["weights"][w]["homology_dims"]
                == r4["weights"][w]["homology_dims"])


def test_harrison_budget_error():
    with pytest.raises(HochschildError):
        harrison(12, max_dim=10)
    with pytest.raises(HochschildError):
        harrison(0)


# ---------------------------------------------------------------------------
# Part C: coderivation bicomplex
# ---------------------------------------------------------------------------

def test_schouten_truncation_gradings():
    ctx = SchoutenTruncation(3, 3)
    for z in ctx.p_basis():
        assert ctx.gr2(z) == ctx.z_letters(z) - len(z)
        assert ctx.gr3(z) == len(z) - 1


def test_coderivations_square_and_anticommute():
    rep = extension_report(3, 3)
    assert rep["d_product_squares_to_zero"]
    assert rep["d_bracket_squares_to_zero"]
    assert rep["anticommute"]


def test_coderivations_determined_by_corestriction():
    rep = extension_report(3, 3)
    assert rep["extension_reproduces_product"]
    assert rep["extension_reproduces_bracket"]
    assert rep["all_ok"]


def test_dual_model_left_normed_spanning():
    # construction raises if left-normed bracket monomials fail to span
    ctx = SchoutenTruncation(3, 3)
    SchoutenDualModel(ctx)


def test_coderivations_lower_gradings():
    ctx = SchoutenTruncation(3, 3)
    for z in ctx.p_basis():
        for z2 in schouten_d_product(ctx, z):
            assert ctx.gr2(z2) == ctx.gr2(z) - 1
            assert ctx.gr3(z2) == ctx.gr3(z)
        for z2 in schouten_d_bracket(ctx, z):
            assert ctx.gr3(z2) == ctx.gr3(z) - 1
            assert ctx.gr2(z2) == ctx.gr2(z)


def test_hom_commutators_exact_in_interior():
    rep = hom_commutator_report(3, 3)
    assert rep["product_square_zero"]
    assert rep["residuals_at_boundary_only"]
    assert rep["all_ok"]


def test_obstruction_E1_matches_model():
    rep = obstruction_E1(2)
    assert rep["all_match"]
    # the safe column-1 slots carry dim V-monomials x 2 classes
    col1 = rep["columns"][1]
    safe = {s: slot["dim"] for s, slot in col1.items() if slot["safe"]}
    assert safe == {-1: 2, 0: 4, 1: 4}


def test_obstruction_E1_interior_rows_vanish():
    rep = obstruction_E1(2)
    for entry in rep["interior_row_column1"].values():
        assert entry["cohomology"] == 0


def test_obstruction_E1_degenerate_W_zero():
    rep = obstruction_E1(2, generators=0)
    assert rep["all_match"]
    for col in rep["columns"].values():
        for slot in col.values():
            if slot["safe"]:
                assert slot["dim"] == 0


def test_bracket_acts_as_de_rham():
    rep = obstruction_bracket_action(2)
    assert rep["all_ok"]
    assert any(c["matches_de_rham"] and c["window_nonempty"]
               for c in rep["cases"])


def test_obstruction_vanishing():
    rep = obstruction_vanishing(4)
    assert rep["all_vanish_except_survivor"]
    assert rep["weights"][0]["cohomology_by_column"] == {0: 1}


def test_obstruction_vanishing_degenerate():
    rep = obstruction_vanishing(3, generators=0)
    assert rep["all_vanish_except_survivor"]
