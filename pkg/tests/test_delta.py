import random

import pytest
import sympy

from distinct_powers.delta import alpha_max, delta_constant, expand_delta
from distinct_powers.params import derive_params

x = sympy.Symbol("x")


def symbolic_delta(k: int, n: int) -> sympy.Expr:
    """Apply g(x) -> g(4x+2) - g(4x) k times to x**n, symbolically."""
    g = x**n
    for _ in range(k):
        g = sympy.expand(g.subs(x, 4 * x + 2) - g.subs(x, 4 * x))
    return g


def test_paper_offsets():
    assert (expand_delta(1).positives, expand_delta(1).negatives) == ((2,), (0,))
    assert (set(expand_delta(2).positives), set(expand_delta(2).negatives)) == ({10, 0}, {8, 2})
    d3 = expand_delta(3)
    assert set(d3.positives) == {42, 32, 8, 2}
    assert set(d3.negatives) == {40, 34, 10, 0}


@pytest.mark.parametrize("k,value", [(1, 2), (2, 10), (3, 42)])
def test_alpha_max(k, value):
    assert alpha_max(k) == value == expand_delta(k).positives[0]


@pytest.mark.parametrize("k", range(1, 13))
def test_offset_invariants(k):
    s = expand_delta(k)
    s.check()
    assert s.scale == 4**k
    assert list(s.positives) == sorted(s.positives, reverse=True)


@pytest.mark.parametrize("k,n", [(1, 3), (2, 3), (2, 4), (3, 5), (4, 4)])
def test_expansion_matches_symbolic(k, n):
    s = expand_delta(k)
    expansion = sum((4**k * x + o) ** n for o in s.positives) - sum((4**k * x + o) ** n for o in s.negatives)
    assert sympy.expand(expansion - symbolic_delta(k, n)) == 0


@pytest.mark.parametrize("n", range(2, 7))
def test_symbolic_nth_difference_is_a(n):
    assert symbolic_delta(n, n) == derive_params(n).a


def test_examples():
    assert delta_constant(2, 0) == 100 + 0 - 64 - 4 == 32
    assert delta_constant(3, 1) == 3072
    assert delta_constant(2, 128) == 32


@pytest.mark.parametrize("n", range(2, 7))
def test_constant_for_random_shifts(n):
    rng = random.Random(n)
    a = derive_params(n).a
    for _ in range(100):
        assert delta_constant(n, rng.randint(0, 2**64)) == a


@pytest.mark.parametrize("n", range(2, 6))
def test_degree_drop(n):
    for k in range(1, n + 1):
        s = expand_delta(k)
        varies = s.evaluate(n, 5) != s.evaluate(n, 6)
        assert varies == (k < n)


def test_cap_and_domain():
    with pytest.raises(ValueError):
        expand_delta(0)
    with pytest.raises(ValueError):
        expand_delta(17)
    with pytest.raises(ValueError):
        delta_constant(2, -1)
