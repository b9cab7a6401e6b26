"""Randomized property suite.

Terms come from the seeded generator wrapped as a hypothesis strategy,
so every property runs against a wide spread of shapes while staying
reproducible.
"""

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from plam.bigstep import eval_fuel
from plam.gen import random_term
from plam.prob import Distr, Dyadic, ONE, ZERO
from plam.smallstep import commute_witness, head_step, spine_step, step_n
from plam.syntax import (
    App,
    Choice,
    HnfView,
    Lam,
    Var,
    classify,
    is_hnf,
    parse,
    pretty,
    shift,
)
from plam.trees import Different, Equal, prob_tree, tree_eq

SETTINGS = dict(deadline=None)


def _term(seed, size, free=None):
    return random_term(random.Random(seed), size, free_names=free)


closed_terms = st.builds(_term, st.integers(0, 2**32 - 1), st.integers(1, 10))
open_terms = st.builds(
    _term,
    st.integers(0, 2**32 - 1),
    st.integers(1, 10),
    st.just(["a", "b", "y"]),
)
any_terms = st.one_of(closed_terms, open_terms)

dyadics = st.builds(Dyadic, st.integers(0, 1 << 10), st.integers(0, 10))


@settings(max_examples=200, **SETTINGS)
@given(any_terms)
def test_parse_print_round_trip(t):
    assert parse(pretty(t)) == t


@settings(max_examples=200, **SETTINGS)
@given(dyadics, dyadics)
def test_dyadic_arithmetic_matches_fractions(a, b):
    assert (a + b).as_fraction() == a.as_fraction() + b.as_fraction()
    assert (a * b).as_fraction() == a.as_fraction() * b.as_fraction()
    assert (a <= b) == (a.as_fraction() <= b.as_fraction())
    if a >= b:
        assert (a - b).as_fraction() == a.as_fraction() - b.as_fraction()


@settings(max_examples=100, **SETTINGS)
@given(dyadics)
def test_dyadic_string_round_trip(d):
    assert Dyadic.parse(str(d)) == d
    assert Dyadic.from_fraction(d.as_fraction()) == d


@settings(max_examples=150, **SETTINGS)
@given(any_terms, st.integers(0, 4))
def test_fuel_monotonicity(t, f):
    assert eval_fuel(t, f).distr.leq(eval_fuel(t, f + 1).distr)


@settings(max_examples=200, **SETTINGS)
@given(any_terms)
def test_step_outcomes_are_stochastic(t):
    for step in (head_step, spine_step):
        out = step(t)
        total = sum((p for p, _ in out), ZERO)
        assert total == ONE
        assert all(p > ZERO for p, _ in out)


@settings(max_examples=200, **SETTINGS)
@given(any_terms)
def test_classify_is_total_and_reassembles(t):
    view = classify(t)
    if isinstance(view, HnfView):
        assert is_hnf(t)
        assert view.assemble() == t
    else:
        ctx, redex = view
        assert not is_hnf(t)
        if hasattr(redex, "contract"):
            assert ctx.plug(App(redex.fun, redex.arg)) == t
        else:
            assert ctx.plug(Choice(redex.left, redex.right)) == t


@settings(max_examples=150, **SETTINGS)
@given(any_terms, any_terms, st.integers(0, 3))
def test_choice_identity(m, n, f):
    half = Dyadic(1, 1)
    lhs = eval_fuel(Choice(m, n), f).distr
    rhs = eval_fuel(m, f).distr.scale(half) + eval_fuel(n, f).distr.scale(half)
    assert lhs == rhs


@settings(max_examples=150, **SETTINGS)
@given(any_terms, st.integers(0, 3))
def test_abstraction_identity(t, f):
    lhs = eval_fuel(Lam(shift(t, 1)), f).distr
    rhs = eval_fuel(t, f).distr.map_support(lambda h: Lam(shift(h, 1)))
    assert lhs == rhs


@settings(max_examples=100, **SETTINGS)
@given(closed_terms, st.integers(0, 5))
def test_strategy_agreement(t, n):
    assert step_n(t, n, "head") == step_n(t, n, "spine")


@settings(max_examples=100, **SETTINGS)
@given(closed_terms, st.integers(0, 6))
def test_step_rows_are_cumulative(t, n):
    assert step_n(t, n).leq(step_n(t, n + 1))


@settings(max_examples=100, **SETTINGS)
@given(closed_terms, st.integers(1, 8))
def test_step_table_below_eval_limit(t, n):
    assert step_n(t, n).leq(eval_fuel(t, n).distr)


@settings(max_examples=100, **SETTINGS)
@given(any_terms, st.integers(1, 3), st.integers(0, 4))
def test_eta_expansion_never_certified_different(t, level, fuel):
    expanded = Lam(App(shift(t, 1), Var(0)))
    a = prob_tree(t, level, fuel)
    b = prob_tree(expanded, level, fuel)
    assert not isinstance(tree_eq(a, b), Different)


@settings(max_examples=100, **SETTINGS)
@given(any_terms, st.integers(0, 4))
def test_eta_expansion_equal_when_mass_complete(t, fuel):
    a = prob_tree(t, 2, fuel)
    expanded = Lam(App(shift(t, 1), Var(0)))
    verdict = tree_eq(a, prob_tree(expanded, 2, fuel))
    if isinstance(verdict, Equal):
        # equality at level 2 implies equality at level 1
        assert isinstance(
            tree_eq(prob_tree(t, 1, fuel), prob_tree(expanded, 1, fuel)), Equal
        )


@settings(max_examples=100, **SETTINGS)
@given(closed_terms)
def test_commute_witnesses_replay(t):
    for p, m2, witness in commute_witness(t, bound=6):
        if witness is None:
            continue
        n0, target = witness
        cur = m2
        for _ in range(n0):
            out = head_step(cur)
            assert len(out) == 1 and out[0][0] == ONE
            cur = out[0][1]
        assert cur == target
        paths = {(ONE, t)}
        for _ in range(n0 + 1):
            paths = {(q * pq, s2) for q, s in paths for pq, s2 in head_step(s)}
        assert any(s == target and q == p for q, s in paths)


@settings(max_examples=100, **SETTINGS)
@given(any_terms, st.integers(0, 3))
def test_distr_scale_add_consistency(t, f):
    d = eval_fuel(t, f).distr
    half = Dyadic(1, 1)
    assert (d.scale(half) + d.scale(half)) == d
    assert d.scale(half).mass == d.mass * half


@settings(max_examples=100, **SETTINGS)
@given(any_terms, st.integers(0, 3))
def test_eval_support_is_hnf(t, f):
    for h, w in eval_fuel(t, f).distr.items():
        assert is_hnf(h)
        assert ZERO < w <= ONE
