import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from distinct_powers.params import (
    bound_inner_base,
    bound_report,
    derive_params,
    theorem_bound,
    two_thirds_span,
)

KNOWN_THETA = {2: 128, 3: 12758, 4: 5134240, 5: 67898771, 6: 11146309947}


def sympy_bound(n: int) -> int:
    """Independent evaluation with sympy rationals, 2/3 kept as a fraction."""
    n = sympy.Integer(n)
    a = sympy.factorial(n) * 2 ** (n**2)
    b = 2 ** (n**3) * a ** (n - 1)
    r = 2 ** (n**2 - n) * a
    inner = r + sympy.Rational(2, 3) * (b - 1) * (2 ** (2 * n) - 1) + 2 * (b - 2)
    value = (b - 1) * 2 ** (n - 1) * inner**n - 2 * a + a * b
    assert value.is_integer
    return int(value)


def test_n2_constants():
    p = derive_params(2)
    assert (p.a, p.r, p.b, p.alpha) == (32, 128, 8192, 10)


def test_n3_constants():
    p = derive_params(3)
    assert (p.a, p.r, p.b, p.alpha) == (3072, 196608, 1266637395197952, 42)
    assert p.b == 9 * 2**47


@pytest.mark.parametrize("n", range(2, 9))
def test_invariants(n):
    p = derive_params(n)
    assert p.a == math.factorial(n) * 2 ** (n * n)
    assert p.r == 2 ** (n * n - n) * p.a
    assert p.b == 2 ** (n**3) * p.a ** (n - 1)
    assert 3 * p.alpha == 2 * (4**n - 1)
    assert p.r // p.a == 2 ** (n * n - n) and p.r % p.a == 0
    assert (2**n + 1) ** n < p.a


@pytest.mark.parametrize("n", [1, 0, -3])
def test_rejects_small_n(n):
    with pytest.raises(ValueError):
        derive_params(n)


def test_rejects_non_int():
    with pytest.raises(TypeError):
        derive_params(2.0)


def test_bound_n2():
    p = derive_params(2)
    assert bound_inner_base(p) == 128 + 81910 + 16380 == 98418
    assert theorem_bound(p) == sympy_bound(2) == 158677735086648


@pytest.mark.parametrize("n", range(2, 7))
def test_bound_matches_sympy(n):
    assert theorem_bound(derive_params(n)) == sympy_bound(n)


@pytest.mark.parametrize("n,theta", sorted(KNOWN_THETA.items()))
def test_bound_exceeds_known_theta(n, theta):
    assert theorem_bound(derive_params(n)) > theta


@pytest.mark.parametrize("n", range(2, 8))
def test_bound_exceeds_r_power(n):
    p = derive_params(n)
    assert theorem_bound(p) > p.r**n


def test_bound_report():
    rows = bound_report(6)
    assert rows[0] == (2, 48)
    assert [n for n, _ in rows] == list(range(2, 7))
    bits = [b for _, b in rows]
    assert all(x < y for x, y in zip(bits, bits[1:]))
    with pytest.raises(ValueError):
        bound_report(1)
    with pytest.raises(ValueError):
        bound_report(9)


@given(st.integers(min_value=1, max_value=200))
def test_two_thirds_span_exact(k):
    assert (4**k - 1) % 3 == 0
    assert two_thirds_span(k) * 3 == 2 * (4**k - 1)


@settings(max_examples=7, deadline=None)
@given(st.integers(min_value=2, max_value=8))
def test_bound_other_evaluation_order(n):
    # expand (b-1) 2^(n-1) X^n - 2a + ab with X built up term by term in a
    # different order, and a via a running product instead of factorial
    a = 1
    for i in range(1, n + 1):
        a *= i
    a *= 2 ** (n * n)
    b = a ** (n - 1) * 2 ** (n**3)
    r = a * 2 ** (n * n - n)
    x = 2 * (b - 2) + r + ((b - 1) * (2 ** (2 * n) - 1) * 2) // 3
    value = a * (b - 2) + 2 ** (n - 1) * (b - 1) * x**n
    assert value == theorem_bound(derive_params(n))
