"""Edge formulas: grid truth tables, oracle agreement, traces, budgets."""

import itertools
import random

import pytest

from mekler.formulas import (
    BudgetError,
    FormulaTrace,
    down_edge_formula,
    full_coset_oracle,
    power_separated,
    up_edge_formula,
)
from mekler.graphs import Gadget, Natural, all_pairs, build_fragment, pair_swap_automorphism
from mekler.group import (
    GroupContext,
    InducedAutomorphism,
    central_generator,
    commutator_vector,
    generator,
    identity,
    mul,
    pow_,
    random_central,
)
from mekler.interpret import build_down_fragment
from mekler.subgroup import EdgeFunctional

R_SUBSETS = [
    tuple(r)
    for k in range(4)
    for r in itertools.combinations(((0, 1), (0, 2), (1, 2)), k)
]


def test_power_separated():
    ctx = GroupContext(build_fragment([0, 1], [(0, 1)]), 3, warn_not_nice=False)
    x0, x1 = generator(ctx, Natural(0)), generator(ctx, Natural(1))
    assert power_separated(ctx, x0, x1)
    assert not power_separated(ctx, x0, x0)
    assert not power_separated(ctx, x0, pow_(ctx, x0, 2))
    # central translates never matter
    z = central_generator(ctx, Natural(0), Natural(1))
    assert not power_separated(ctx, x0, mul(ctx, pow_(ctx, x0, 2), z))
    # both central: the zero coset is a multiple of itself
    assert not power_separated(ctx, z, identity(ctx))
    assert power_separated(ctx, z, x0)


def test_up_formula_truth_table():
    g = build_fragment([0, 1, 2], all_pairs([0, 1, 2]))
    ctx = GroupContext(g, 3)
    rng = random.Random(1)
    for r_edges in R_SUBSETS:
        aut = InducedAutomorphism(ctx, pair_swap_automorphism(g, r_edges))
        rset = set(r_edges)
        for i, j in itertools.permutations((0, 1, 2), 2):
            for gamma, delta in itertools.product((1, 2), repeat=2):
                x = mul(ctx, pow_(ctx, generator(ctx, Natural(i)), gamma), random_central(ctx, rng))
                y = mul(ctx, pow_(ctx, generator(ctx, Natural(j)), delta), random_central(ctx, rng))
                tr = up_edge_formula(ctx, aut, x, y)
                assert tr.verdict == ((min(i, j), max(i, j)) in rset), (r_edges, i, j)


def test_up_formula_trace_and_witnesses():
    g = build_fragment([0, 1], [(0, 1)])
    ctx = GroupContext(g, 3, warn_not_nice=False)
    aut = InducedAutomorphism(ctx, pair_swap_automorphism(g, [(0, 1)]))
    x, y = generator(ctx, Natural(0)), generator(ctx, Natural(1))
    tr = up_edge_formula(ctx, aut, x, y)
    assert isinstance(tr, FormulaTrace)
    assert tr.verdict and bool(tr)
    assert tr.method == "VertexLikeEnumeration"
    u, v = tr.witnesses
    assert commutator_vector(ctx, u.gen, x.gen).is_zero()
    assert commutator_vector(ctx, u.gen, y.gen).is_zero()
    assert commutator_vector(ctx, u.gen, v.gen).is_zero()
    assert aut.moves_coset(v.gen)
    # same vertex twice: blocked by power separation before any search
    tr2 = up_edge_formula(ctx, aut, x, pow_(ctx, x, 2))
    assert not tr2.verdict
    assert tr2.note == "power-related inputs"


def test_down_formula_truth_table():
    g = build_down_fragment([0, 1, 2])
    ctx = GroupContext(g, 3)
    for r_edges in R_SUBSETS:
        ell = EdgeFunctional.from_edges(r_edges)
        rset = set(r_edges)
        for i, j in itertools.combinations((0, 1, 2), 2):
            for gamma, delta in itertools.product((1, 2), repeat=2):
                x = pow_(ctx, generator(ctx, Natural(i)), gamma)
                y = pow_(ctx, generator(ctx, Natural(j)), delta)
                tr = down_edge_formula(ctx, ell, x, y)
                assert tr.verdict == ((i, j) in rset), (r_edges, i, j)
                if tr.verdict:
                    assert tr.method == "KernelIntersection"
                    assert "kernel dim" in tr.note
                    (wit,) = tr.witnesses
                    assert not wit.gen.is_zero()
    # a tested-helper pair is never in R, so never an edge
    ell = EdgeFunctional.from_edges([(0, 1)])
    tr = down_edge_formula(ctx, ell, generator(ctx, Natural(0)), generator(ctx, Natural(3)))
    assert not tr.verdict


def test_down_formula_requires_membership():
    g = build_fragment([0, 1], [(0, 1)])
    ctx = GroupContext(g, 3, warn_not_nice=False)
    ell = EdgeFunctional.from_edges([])
    pent = generator(ctx, Gadget(0, 1, "1"))
    with pytest.raises(ValueError, match="x is not"):
        down_edge_formula(ctx, ell, pent, generator(ctx, Natural(1)))
    with pytest.raises(ValueError, match="y is not"):
        down_edge_formula(ctx, ell, generator(ctx, Natural(0)), pent)


def test_formulas_agree_with_full_coset_oracle():
    g = build_fragment([0, 1], [(0, 1)])
    ctx = GroupContext(g, 3, warn_not_nice=False)
    rng = random.Random(2)
    for r_edges in ([], [(0, 1)]):
        aut = InducedAutomorphism(ctx, pair_swap_automorphism(g, r_edges))
        ell = EdgeFunctional.from_edges(r_edges)
        for gamma, delta in itertools.product((1, 2), repeat=2):
            x = mul(ctx, pow_(ctx, generator(ctx, Natural(0)), gamma), random_central(ctx, rng))
            y = mul(ctx, pow_(ctx, generator(ctx, Natural(1)), delta), random_central(ctx, rng))
            up = up_edge_formula(ctx, aut, x, y).verdict
            assert up == full_coset_oracle(ctx, "up", x, y, aut=aut)
            down = down_edge_formula(ctx, ell, x, y).verdict
            assert down == full_coset_oracle(ctx, "down", x, y, ell=ell)
            assert up == down == (len(r_edges) == 1)
        # power-related inputs are false everywhere, oracle included
        x = generator(ctx, Natural(0))
        assert not full_coset_oracle(ctx, "up", x, pow_(ctx, x, 2), aut=aut)
        assert not full_coset_oracle(ctx, "down", x, pow_(ctx, x, 2), ell=ell)


def test_verdicts_are_translate_invariant():
    g = build_fragment([0, 1, 2], all_pairs([0, 1, 2]))
    ctx = GroupContext(g, 3)
    aut = InducedAutomorphism(ctx, pair_swap_automorphism(g, [(0, 1)]))
    ell = EdgeFunctional.from_edges([(0, 1)])
    gd = GroupContext(build_down_fragment([0, 1, 2]), 3)
    rng = random.Random(3)
    for i, j in itertools.combinations((0, 1, 2), 2):
        base_up = up_edge_formula(ctx, aut, generator(ctx, Natural(i)), generator(ctx, Natural(j))).verdict
        base_down = down_edge_formula(gd, ell, generator(gd, Natural(i)), generator(gd, Natural(j))).verdict
        for _ in range(5):
            gamma, delta = rng.randint(1, 2), rng.randint(1, 2)
            xu = mul(ctx, pow_(ctx, generator(ctx, Natural(i)), gamma), random_central(ctx, rng))
            yu = mul(ctx, pow_(ctx, generator(ctx, Natural(j)), delta), random_central(ctx, rng))
            assert up_edge_formula(ctx, aut, xu, yu).verdict == base_up
            xd = mul(gd, pow_(gd, generator(gd, Natural(i)), gamma), random_central(gd, rng))
            yd = mul(gd, pow_(gd, generator(gd, Natural(j)), delta), random_central(gd, rng))
            assert down_edge_formula(gd, ell, xd, yd).verdict == base_down


def test_oracle_budget_and_validation():
    g = build_fragment([0, 1, 2], all_pairs([0, 1, 2]))
    ctx = GroupContext(g, 3)
    aut = InducedAutomorphism(ctx, pair_swap_automorphism(g, [(0, 1)]))
    x, y = generator(ctx, Natural(0)), generator(ctx, Natural(1))
    with pytest.raises(BudgetError):
        full_coset_oracle(ctx, "up", x, y, aut=aut, budget=10)
    with pytest.raises(BudgetError):
        # 3^18 cosets overrun the default budget of 3^12
        full_coset_oracle(ctx, "up", x, y, aut=aut)
    small = GroupContext(build_fragment([0, 1], [(0, 1)]), 3, warn_not_nice=False)
    xs, ys = generator(small, Natural(0)), generator(small, Natural(1))
    with pytest.raises(ValueError):
        full_coset_oracle(small, "sideways", xs, ys)
    with pytest.raises(ValueError):
        full_coset_oracle(small, "up", xs, ys)  # no automorphism given
    with pytest.raises(ValueError):
        full_coset_oracle(small, "down", xs, ys)  # no functional given
