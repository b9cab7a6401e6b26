import pytest

from plam.bigstep import UNKNOWN, check_derivable, eval_fuel, eval_mass
from plam.prob import Distr, Dyadic, ONE, ZERO, point
from plam.syntax import App, Choice, Lam, OMEGA, parse

D = Dyadic.parse


def test_variable_is_immediate():
    res = eval_fuel(parse("y"), 0)
    assert res.distr == point(parse("y"))
    assert res.deficit == ZERO


def test_abstraction_wraps_body():
    res = eval_fuel(parse(r"\x.I I"), 1)
    assert res.distr == point(parse(r"\x.I"))


def test_choice_is_fair_and_fuel_free():
    res = eval_fuel(parse("a (+) b"), 0)
    assert res.distr == Distr([(parse("a"), D("1/2")), (parse("b"), D("1/2"))])


def test_choice_of_equal_branches_keeps_full_mass():
    res = eval_fuel(parse("a (+) a"), 0)
    assert res.distr == point(parse("a"))


def test_beta_costs_one_fuel():
    t = parse("I a")
    assert eval_fuel(t, 0).distr == Distr()
    assert eval_fuel(t, 1).distr == point(parse("a"))


def test_neutral_head_passes_arguments_through():
    res = eval_fuel(parse("y (I a)"), 8)
    # the argument is not evaluated under a neutral head
    assert res.distr == point(parse("y (I a)"))


def test_duplicator_example():
    expected = Distr(
        [(parse(r"\y.T"), D("1/4")), (parse(r"\y.F"), D("1/4")), (parse("I"), D("1/2"))]
    )
    for fuel in (2, 3, 8):
        assert eval_fuel(parse("Delta (T (+) F)"), fuel).distr == expected


def test_omega_diverges():
    for fuel in (0, 1, 5, 32):
        res = eval_fuel(OMEGA, fuel)
        assert not res.distr and res.deficit == ONE


def test_hidden_half():
    assert eval_fuel(parse("Omega (+) I"), 4).distr == Distr([(parse("I"), D("1/2"))])


def test_self_application_mass():
    m = parse(r"\x.y (+) x x")
    mm = App(m, m)
    for n in range(0, 13):
        assert eval_mass(mm, n) == ONE - Dyadic(1, n)


def test_fuel_monotone_on_examples():
    for src in ("Delta (T (+) F)", "Omega (+) I", r"(\x.y (+) x x) (\x.y (+) x x)"):
        t = parse(src)
        for f in range(6):
            assert eval_fuel(t, f).distr.leq(eval_fuel(t, f + 1).distr)


def test_negative_fuel_rejected():
    with pytest.raises(ValueError):
        eval_fuel(parse("I"), -1)


def test_check_derivable_true():
    t = parse("Delta (T (+) F)")
    d = eval_fuel(t, 2).distr
    assert check_derivable(t, d, 8) is True
    # any sub-distribution is also derivable
    assert check_derivable(t, d.scale(D("1/2")), 8) is True


def test_check_derivable_unknown():
    res = check_derivable(OMEGA, point(parse("I")), 16)
    assert res is UNKNOWN
    assert not res  # the sentinel is falsy but is not False
    assert res is not False


def test_hnf_fixed_point():
    for src in (r"\x.x", "y", r"\x y.x (I I)", "y Omega"):
        h = parse(src)
        for f in (0, 1, 4):
            assert eval_fuel(h, f).distr == point(h)


def test_beta_invariance_for_hnf_bodies():
    # evaluating (\x.H) N at fuel f+1 dominates evaluating H[N/x] at fuel f
    cases = [
        (r"\x.x x", "I"),
        (r"\x.x (+) y", "T (+) F"),
        (r"\x.y x", "Omega"),
    ]
    for fun_src, arg_src in cases:
        fun, arg = parse(fun_src), parse(arg_src)
        from plam.syntax import substitute

        for f in range(4):
            lhs = eval_fuel(App(fun, arg), f + 1).distr
            rhs = eval_fuel(substitute(fun.body, arg), f).distr
            assert rhs.leq(lhs)
