"""Constants of the completeness construction and the explicit upper bound.

Everything here is exact integer arithmetic.  The only fraction that appears,
2/3 * (4**n - 1), is divided out after asserting divisibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_N_CAP = 8


def exact_div(num: int, den: int) -> int:
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"{den} does not divide {num}")
    return q


def two_thirds_span(k: int) -> int:
    """(2/3) * (4**k - 1): the widest offset of the k-fold difference operator."""
    span = 4**k - 1
    assert span % 3 == 0
    return 2 * exact_div(span, 3)


@dataclass(frozen=True)
class Params:
    n: int
    a: int
    b: int
    r: int
    alpha: int

    @property
    def two_n(self) -> int:
        """2**n, the width of the B1 columns."""
        return 1 << self.n

    @property
    def columns(self) -> int:
        """2**(n*n - n): number of residue blocks below r (r == columns * a)."""
        return 1 << (self.n * self.n - self.n)

    def power(self, m: int) -> int:
        return m**self.n


def derive_params(n: int) -> Params:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"n must be an int, got {type(n).__name__}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    a = math.factorial(n) << (n * n)
    r = a << (n * n - n)
    b = (a ** (n - 1)) << (n**3)
    p = Params(n=n, a=a, b=b, r=r, alpha=two_thirds_span(n))
    assert (2**n + 1) ** n < a
    return p


def theorem_bound(p: Params) -> int:
    """Exact value of (b-1) 2^(n-1) (r + (b-1)alpha + 2(b-2))^n - 2a + ab."""
    n, a, b, r = p.n, p.a, p.b, p.r
    inner = r + (b - 1) * p.alpha + 2 * (b - 2)
    return (b - 1) * 2 ** (n - 1) * inner**n - 2 * a + a * b


def bound_inner_base(p: Params) -> int:
    return p.r + (p.b - 1) * p.alpha + 2 * (p.b - 2)


def bound_report(n_max: int, n_cap: int = DEFAULT_N_CAP) -> list[tuple[int, int]]:
    """Rows of (n, bit length of the bound) for n = 2 .. n_max."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if n_max > n_cap:
        raise ValueError(f"n_max={n_max} exceeds the configured cap {n_cap}")
    return [(n, theorem_bound(derive_params(n)).bit_length()) for n in range(2, n_max + 1)]
