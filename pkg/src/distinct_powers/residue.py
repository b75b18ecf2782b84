"""Complete residue system modulo a inside the subset sums of S.

Every base col*a + j in B1 is congruent to j**n mod a, so the residues of S
are 2**(n*n - n) copies each of 1**n, 2**n, ..., (2**n)**n.  A greedy descent
writes any m in [1, M] as a sum of those residues; lifting the i-th copy of
j**n to the base i*a + j gives an honest subset of S whose power sum is
congruent to m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .params import Params

DEFAULT_N_CAP = 4
DP_N_CAP = 3


@dataclass(frozen=True)
class SubsetCertificate:
    bases: tuple[int, ...]
    value: int
    n: int

    @classmethod
    def from_bases(cls, bases: Iterable[int], n: int) -> "SubsetCertificate":
        bs = tuple(sorted(bases))
        return cls(bs, sum(m**n for m in bs), n)

    def verify(self) -> bool:
        return (
            len(self.bases) > 0
            and len(set(self.bases)) == len(self.bases)
            and all(m >= 1 for m in self.bases)
            and sum(m**self.n for m in self.bases) == self.value
        )

    def as_dict(self) -> dict:
        return {"n": self.n, "value": str(self.value), "bases": [str(m) for m in self.bases]}


def class_coverage(p: Params) -> list[int]:
    """cover[j] = columns * (1**n + ... + j**n); cover[0] = 0."""
    cover = [0]
    for j in range(1, p.two_n + 1):
        cover.append(cover[-1] + p.columns * j**p.n)
    return cover


def coverage_interval(p: Params) -> int:
    big_m = class_coverage(p)[-1]
    assert p.a <= big_m, "a must fit inside the covered interval"
    return big_m


def represent_residue(m: int, p: Params) -> tuple[int, ...]:
    """Multiplicities (c_1, ..., c_{2^n}) with sum c_j * j**n == m and c_j <= columns."""
    cover = class_coverage(p)
    if not 1 <= m <= cover[-1]:
        raise ValueError(f"m={m} outside [1, {cover[-1]}]")
    counts = [0] * p.two_n
    rest = m
    for j in range(p.two_n, 1, -1):
        jn = j**p.n
        # the remainder has to stay >= 1 so class 1 can finish it
        c = min(p.columns, (rest - 1) // jn)
        rest -= c * jn
        assert 1 <= rest <= cover[j - 1]
        counts[j - 1] = c
    assert rest <= p.columns
    counts[0] = rest
    return tuple(counts)


def _represent_all(targets: np.ndarray, p: Params) -> np.ndarray:
    """Vectorised represent_residue over an int64 array of targets."""
    cover = class_coverage(p)
    counts = np.zeros((len(targets), p.two_n), dtype=np.int64)
    rest = targets.astype(np.int64)
    for j in range(p.two_n, 1, -1):
        jn = j**p.n
        c = np.minimum(p.columns, (rest - 1) // jn)
        rest = rest - c * jn
        assert rest.min() >= 1 and rest.max() <= cover[j - 1]
        counts[:, j - 1] = c
    assert rest.max() <= p.columns
    counts[:, 0] = rest
    return counts


def lift_bases(counts: Iterable[int], p: Params) -> tuple[int, ...]:
    """The c_j copies of residue j**n become bases j, a+j, ..., (c_j - 1)a + j."""
    bases = []
    for j, c in enumerate(counts, start=1):
        bases.extend(col * p.a + j for col in range(c))
    return tuple(sorted(bases))


@dataclass
class ResidueSystem:
    """The a representatives k_1 < ... < k_a, stored as multiplicity rows."""

    params: Params
    targets: np.ndarray  # target m in [1, a] of each representative, sorted by value
    counts: np.ndarray  # shape (a, 2**n)
    values: list[int]
    implementation_chosen: bool = field(default=True)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def k_a(self) -> int:
        return self.values[-1]

    def certificate(self, i: int) -> SubsetCertificate:
        """Certificate of k_{i+1} (0-based index)."""
        bases = lift_bases(self.counts[i].tolist(), self.params)
        return SubsetCertificate(bases, self.values[i], self.params.n)

    def check(self, resum: int | None = None) -> bool:
        """Verify every invariant; resum limits how many certificates are re-summed."""
        p = self.params
        if len(self.values) != p.a:
            return False
        if sorted(v % p.a for v in self.values) != list(range(p.a)):
            return False
        if any(u >= v for u, v in zip(self.values, self.values[1:])):
            return False
        if self.values[0] != 1:
            return False
        if self.k_a >= p.a * p.b - p.a:
            return False
        if self.counts.min() < 0 or self.counts.max() > p.columns:
            return False
        jn = np.array([j**p.n for j in range(1, p.two_n + 1)], dtype=np.int64)
        if not np.array_equal(self.counts @ jn, self.targets):
            return False
        idx = range(len(self.values))
        if resum is not None and resum < len(self.values):
            step = max(1, len(self.values) // resum)
            idx = sorted(set(range(0, len(self.values), step)) | {len(self.values) - 1})
        for i in idx:
            cert = self.certificate(i)
            if not cert.verify() or not all(_in_b1(m, p) for m in cert.bases):
                return False
        return True

    def as_dict(self) -> dict:
        return {
            "lemma": "Lemma 4",
            "n": self.params.n,
            "a": str(self.params.a),
            "selection": "implementation-chosen: target m in [1, a], greedy descent",
            "k_a": str(self.k_a),
            "representatives": [
                {"target": int(t), "value": str(v), "counts": [int(c) for c in row]}
                for t, v, row in zip(self.targets, self.values, self.counts)
            ],
        }


def _in_b1(m: int, p: Params) -> bool:
    return m < p.r and (m - 1) % p.a < p.two_n


def residue_system(p: Params, n_cap: int = DEFAULT_N_CAP) -> ResidueSystem:
    if p.n > n_cap:
        raise ValueError(f"n={p.n} beyond the materialisation cap {n_cap}")
    coverage_interval(p)
    targets = np.arange(1, p.a + 1, dtype=np.int64)
    counts = _represent_all(targets, p)

    # prefix[j][c] = sum over the first c columns of (col*a + j)**n
    n, a = p.n, p.a
    total = np.zeros(p.a, dtype=object)
    for j in range(1, p.two_n + 1):
        acc = [0]
        for col in range(p.columns):
            acc.append(acc[-1] + (col * a + j) ** n)
        prefix = np.array(acc, dtype=object)
        total = total + prefix[counts[:, j - 1]]
    values = total.tolist()
    order = sorted(range(p.a), key=values.__getitem__)
    return ResidueSystem(
        params=p,
        targets=targets[order],
        counts=counts[order],
        values=[values[i] for i in order],
    )


def lemma4_reachable(p: Params, n_cap: int = DP_N_CAP) -> int:
    """Subset-sum bitmask of the residue multiset (bit v set iff v is reachable)."""
    if p.n > n_cap:
        raise ValueError(f"n={p.n} beyond the exhaustive-check cap {n_cap}")
    reach = 1
    for j in range(1, p.two_n + 1):
        jn = j**p.n
        for _ in range(p.columns):
            reach |= reach << jn
    return reach & ~1  # drop the empty sum


def verify_lemma4_dp(p: Params, n_cap: int = DP_N_CAP) -> bool:
    big_m = coverage_interval(p)
    return lemma4_reachable(p, n_cap) == (1 << (big_m + 1)) - 2
