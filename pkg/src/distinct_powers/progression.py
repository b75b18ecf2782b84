"""Arithmetic progression with difference a inside the subset sums of T.

Block j covers the even bases anchor_j, anchor_j + 2, ..., anchor_j + alpha
with anchor_j = r + (j-1)(alpha + 2).  The difference expansion of x**n splits
each block into two subsets A_j, B_j with sum(A_j) - sum(B_j) = a, so

    C_j = A_1 + ... + A_{j-1} + B_j + ... + B_{t-1} = c + j*a,
    c   = B_1 + ... + B_{t-1} - a.

For huge t (t = b is ~10**15 at n = 3) block sums are evaluated in closed
form through power sums instead of a loop.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator, Sequence

from .delta import SignedOffsetSet, expand_delta
from .params import Params

ITERATE_CAP = 1 << 24
POWER_SUM_P_CAP = 64


def power_sums(big_n: int, p: int) -> list[int]:
    """[S_0(N), ..., S_p(N)] with S_q(N) = 1**q + ... + N**q (S_0(N) = N)."""
    if big_n < 0:
        raise ValueError("N must be >= 0")
    if not 0 <= p <= POWER_SUM_P_CAP:
        raise ValueError(f"p must be in [0, {POWER_SUM_P_CAP}]")
    sums: list[int] = []
    for q in range(p + 1):
        # (N+1)^(q+1) - 1 = sum_{i<=q} C(q+1, i) S_i(N), solved for S_q
        num = (big_n + 1) ** (q + 1) - 1 - sum(comb(q + 1, i) * sums[i] for i in range(q))
        s, rem = divmod(num, q + 1)
        assert rem == 0, f"power-sum recurrence not divisible at q={q}"
        sums.append(s)
    return sums


def power_sum(big_n: int, p: int) -> int:
    return power_sums(big_n, p)[p]


def _range_power_sums(lo: int, hi: int, p: int) -> list[int]:
    """[sum_{i=lo}^{hi} i**q for q in 0..p] for 0 <= lo <= hi, with 0**0 = 1."""
    upper = power_sums(hi, p)
    if lo == 0:
        return [upper[0] + 1] + upper[1:]
    lower = power_sums(lo - 1, p)
    return [u - v for u, v in zip(upper, lower)]


@lru_cache(maxsize=None)
def _offsets(n: int) -> SignedOffsetSet:
    return expand_delta(n)


def anchor(j: int, p: Params) -> int:
    return p.r + (j - 1) * (p.alpha + 2)


def blocks_sum(offsets: Sequence[int], lo: int, hi: int, p: Params) -> int:
    """sum over blocks j = lo..hi of sum over o of (anchor_j + o)**n, closed form."""
    if hi < lo:
        return 0
    n, step = p.n, p.alpha + 2
    # (r + o + i*step)**n expanded in i = j - 1
    moments = [sum((p.r + o) ** e for o in offsets) for e in range(n + 1)]
    ranges = _range_power_sums(lo - 1, hi - 1, n)
    return sum(comb(n, q) * step**q * moments[n - q] * ranges[q] for q in range(n + 1))


@dataclass(frozen=True)
class ProgressionBlock:
    j: int
    anchor: int
    a_bases: tuple[int, ...]
    b_bases: tuple[int, ...]
    a_value: int
    b_value: int

    def as_dict(self) -> dict:
        return {
            "j": str(self.j), "anchor": str(self.anchor),
            "A_bases": [str(m) for m in self.a_bases], "B_bases": [str(m) for m in self.b_bases],
            "A_value": str(self.a_value), "B_value": str(self.b_value),
        }


def block(j: int, p: Params) -> ProgressionBlock:
    if j < 1:
        raise ValueError("block index must be >= 1")
    offs = _offsets(p.n)
    start = anchor(j, p)
    a_bases = tuple(start + o for o in offs.positives)
    b_bases = tuple(start + o for o in offs.negatives)
    a_value = sum(m**p.n for m in a_bases)
    b_value = sum(m**p.n for m in b_bases)
    assert a_value - b_value == p.a
    return ProgressionBlock(j, start, a_bases, b_bases, a_value, b_value)


def iter_c(p: Params, t_max: int) -> Iterator[tuple[int, int]]:
    """(t, c(t)) for t = 2..t_max by direct accumulation of block values."""
    total = 0
    for t in range(2, t_max + 1):
        total += block(t - 1, p).b_value
        yield t, total - p.a


def progression_c(t: int, p: Params, mode: str = "closed_form") -> int:
    if t < 2:
        raise ValueError("t must be >= 2")
    if mode == "iterate":
        if t > ITERATE_CAP:
            raise ValueError(f"t={t} too large to iterate (cap {ITERATE_CAP}); use closed_form")
        return sum(block(j, p).b_value for j in range(1, t)) - p.a
    if mode == "closed_form":
        return blocks_sum(_offsets(p.n).negatives, 1, t - 1, p) - p.a
    raise ValueError(f"unknown mode {mode!r}")


def lemma6_bound(t: int, p: Params) -> int:
    """(t-1) 2^(n-1) (r + (t-1)alpha + 2(t-2))^n - a; c must be strictly below it."""
    return (t - 1) * 2 ** (p.n - 1) * (p.r + (t - 1) * p.alpha + 2 * (t - 2)) ** p.n - p.a


@dataclass
class ProgressionCertificate:
    params: Params
    t: int
    c: int

    def member(self, j: int) -> int:
        """C_j summed from its block representation (closed form, not c + j*a)."""
        if not 1 <= j <= self.t:
            raise ValueError(f"j must lie in [1, {self.t}]")
        offs = _offsets(self.params.n)
        return (blocks_sum(offs.positives, 1, j - 1, self.params)
                + blocks_sum(offs.negatives, j, self.t - 1, self.params))

    def member_bases(self, j: int) -> Iterator[int]:
        """Bases of C_j's representation, generated block by block."""
        offs = _offsets(self.params.n)
        for i in range(1, self.t):
            start = anchor(i, self.params)
            for o in (offs.positives if i < j else offs.negatives):
                yield start + o

    def as_dict(self, sample_blocks: Sequence[int] = ()) -> dict:
        return {
            "lemma": "Lemma 6",
            "n": self.params.n,
            "t": str(self.t),
            "c": str(self.c),
            "bound": str(lemma6_bound(self.t, self.params)),
            "blocks": [block(j, self.params).as_dict() for j in sample_blocks],
        }


def progression(t: int, p: Params, mode: str = "closed_form") -> ProgressionCertificate:
    return ProgressionCertificate(p, t, progression_c(t, p, mode))


def sample_indices(t: int, samples: int, seed: int = 0) -> list[int]:
    rng = random.Random(seed)
    picks = {1, t} | ({2, t - 1} if t > 2 else set())
    picks |= {rng.randint(1, t) for _ in range(samples)}
    return sorted(picks)


def verify_lemma6(t: int, p: Params, mode: str = "closed_form", samples: int = 16) -> bool:
    cert = progression(t, p, mode)
    if not cert.c < lemma6_bound(t, p):
        return False
    for j in sample_indices(t, samples):
        if cert.member(j) != cert.c + j * p.a:
            return False
    # blocks are range-disjoint: each spans alpha and the next starts alpha + 2 later
    offs = _offsets(p.n)
    if len(set(offs.positives + offs.negatives)) != 1 << p.n:
        return False
    for j in sample_indices(t - 1, samples, seed=1):
        blk = block(j, p)
        lo, hi = min(blk.a_bases + blk.b_bases), max(blk.a_bases + blk.b_bases)
        if lo != blk.anchor or hi != blk.anchor + p.alpha:
            return False
        if (lo - p.r) % 2 or hi >= anchor(j + 1, p):
            return False
    return True
