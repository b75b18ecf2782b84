"""Partition of the n-th powers into B1..B4 and the sequences S, T, U, W.

Bases m < r are written m = col*a + beta with 1 <= beta <= a; the first 2**n
bases of every column go to B1, the rest to B2.  Bases m >= r alternate
between B3 (even offset from r) and B4 (odd offset).  U = B1 + B3 and
W = B2 + B4 partition all positive bases.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .params import Params


class PartitionClass(enum.Enum):
    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    B4 = "B4"


def classify(m: int, p: Params) -> PartitionClass:
    if m < 1:
        raise ValueError(f"base must be positive, got {m}")
    if m >= p.r:
        return PartitionClass.B3 if (m - p.r) % 2 == 0 else PartitionClass.B4
    beta = (m - 1) % p.a + 1
    return PartitionClass.B1 if beta <= p.two_n else PartitionClass.B2


def iter_bases(label: str, p: Params) -> Iterator[int]:
    """Bases of S, T, U or W in increasing order (S is finite, the rest are not)."""
    if label == "S":
        for col in range(p.columns):
            start = col * p.a
            yield from range(start + 1, start + p.two_n + 1)
    elif label == "T":
        yield from itertools.count(p.r, 2)
    elif label == "U":
        yield from iter_bases("S", p)
        yield from iter_bases("T", p)
    elif label == "W":
        for col in range(p.columns):
            start = col * p.a
            # the last column stops short of r itself
            yield from range(start + p.two_n + 1, min(start + p.a + 1, p.r))
        yield from itertools.count(p.r + 1, 2)
    else:
        raise ValueError(f"unknown sequence label {label!r}")


def w_count_upto(x: int, p: Params) -> int:
    """Number of W bases <= x."""
    if x < 1:
        return 0
    below = min(x, p.r - 1)
    full, part = divmod(below, p.a)
    count = full * (p.a - p.two_n) + max(0, part - p.two_n)
    if x > p.r:
        count += (x - p.r + 1) // 2
    return count


@dataclass(frozen=True)
class PowerSeq:
    label: str
    n: int
    bases: tuple[int, ...]

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(m**self.n for m in self.bases)

    def __len__(self) -> int:
        return len(self.bases)


def sequence_prefix(label: str, p: Params, count: int) -> PowerSeq:
    if count < 1:
        raise ValueError("count must be >= 1")
    if label == "S" and count > 1 << (p.n * p.n):
        raise ValueError(f"S has only {1 << (p.n * p.n)} elements, asked for {count}")
    bases = tuple(itertools.islice(iter_bases(label, p), count))
    return PowerSeq(label=label, n=p.n, bases=bases)


def verify_sigma(seq: Sequence[int], k: int) -> tuple[bool, int | None]:
    """Check the Sigma(k) property; returns (ok, 1-based index of first violation)."""
    if not seq:
        raise ValueError("sequence must be nonempty")
    if k < 1:
        raise ValueError("k must be positive")
    for prev, cur in zip(seq, seq[1:]):
        if cur <= prev:
            raise ValueError("sequence must be strictly increasing")
    total = 0
    for i, s in enumerate(seq, start=1):
        if s > k + total:
            return False, i
        total += s
    return True, None


def lemma3_comparisons(p: Params) -> list[tuple[str, int, str, int]]:
    """The three ratio inequalities, cross-multiplied into integer comparisons.

    f(r+1)/f(r-1) < f(a+2^n+1)/f(a) < f(2^n+2)/f(2^n+1) <= 2
    """
    n, a, r, q = p.n, p.a, p.r, p.two_n
    return [
        ("(r+1)^n * a^n", (r + 1) ** n * a**n, "<", (a + q + 1) ** n * (r - 1) ** n),
        ("(a+2^n+1)^n * (2^n+1)^n", (a + q + 1) ** n * (q + 1) ** n, "<", (q + 2) ** n * a**n),
        ("(2^n+2)^n", (q + 2) ** n, "<=", 2 * (q + 1) ** n),
    ]


def _holds(lhs: int, rel: str, rhs: int) -> bool:
    return lhs < rhs if rel == "<" else lhs <= rhs


def verify_lemma3(p: Params) -> bool:
    return all(_holds(lhs, rel, rhs) for _, lhs, rel, rhs in lemma3_comparisons(p))


# Default W prefix for the Corollary-1 check.  Reaching base 2r is only
# practical for n <= 3; beyond that the seams are checked directly instead.
MAX_DEFAULT_PREFIX = 2_000_000


def default_prefix_len(p: Params) -> int:
    through_seam = w_count_upto(2 * p.r, p)
    if through_seam <= MAX_DEFAULT_PREFIX:
        return max(1000, through_seam)
    return 1000


def seam_pairs(p: Params) -> list[tuple[int, int]]:
    """Adjacent W base pairs at every kind of gap in the enumeration.

    Covers the step inside a B2 column, the jump over B1 between columns
    (first and last column), the jump over r, and a step inside B4.
    """
    q, a, r = p.two_n, p.a, p.r
    pairs = [(q + 1, q + 2), (a, a + q + 1), (r - a, r - a + q + 1), (r - 1, r + 1), (r + 1, r + 3)]
    return pairs


@dataclass
class Corollary1Report:
    ok: bool
    w1: int
    a: int
    prefix_len: int
    worst_ratio_pair: tuple[int, int]
    sigma_violation: int | None
    seams: list[tuple[int, int, bool]]

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "w1": str(self.w1),
            "a": str(self.a),
            "prefix_len": self.prefix_len,
            "worst_ratio_pair": [str(v) for v in self.worst_ratio_pair],
            "sigma_violation": self.sigma_violation,
            "seams": [{"lo": str(lo), "hi": str(hi), "ratio_le_2": ok} for lo, hi, ok in self.seams],
        }


def check_corollary1(p: Params, prefix_len: int | None = None) -> Corollary1Report:
    if prefix_len is None:
        prefix_len = default_prefix_len(p)
    if prefix_len < 2:
        raise ValueError("prefix_len must be >= 2")
    n = p.n
    values = [m**n for m in itertools.islice(iter_bases("W", p), prefix_len)]
    w1 = values[0]
    ok = w1 == (p.two_n + 1) ** n and w1 < p.a

    # largest w_k / w_{k-1}, tracked by cross-multiplication
    worst = (values[0], values[1])
    ratio_ok = True
    for prev, cur in zip(values, values[1:]):
        if cur > 2 * prev:
            ratio_ok = False
        if cur * worst[0] > worst[1] * prev:
            worst = (prev, cur)

    seams = []
    for lo, hi in seam_pairs(p):
        assert classify(lo, p) in (PartitionClass.B2, PartitionClass.B4)
        assert classify(hi, p) in (PartitionClass.B2, PartitionClass.B4)
        seams.append((lo, hi, hi**n <= 2 * lo**n))

    sigma_ok, violation = verify_sigma(values, p.a)
    ok = ok and ratio_ok and sigma_ok and all(s[2] for s in seams)
    return Corollary1Report(ok, w1, p.a, prefix_len, worst, violation, seams)


def verify_corollary1(p: Params, prefix_len: int | None = None) -> bool:
    return check_corollary1(p, prefix_len).ok
