"""The iterated difference g(x) -> g(4x+2) - g(4x) as a signed offset expansion.

Applying it k times to f(x) = x**n gives

    sum(f(4**k x + o) for o in positives) - sum(f(4**k x + o) for o in negatives)

with 2**(k-1) offsets of each sign.  After n applications the result no longer
depends on x and equals n! * 2**(n*n).
"""

from __future__ import annotations

from dataclasses import dataclass

from .params import two_thirds_span

DEFAULT_K_CAP = 16


@dataclass(frozen=True)
class SignedOffsetSet:
    k: int
    positives: tuple[int, ...]  # sorted descending
    negatives: tuple[int, ...]

    @property
    def scale(self) -> int:
        return 4**self.k

    def check(self) -> None:
        k = self.k
        half = 1 << (k - 1)
        assert len(self.positives) == len(self.negatives) == half
        offsets = self.positives + self.negatives
        assert len(set(offsets)) == 2 * half
        assert all(o % 2 == 0 and 0 <= o <= alpha_max(k) for o in offsets)
        assert max(offsets) == alpha_max(k) == self.positives[0]
        assert sorted(offsets)[:2] == [0, 2]

    def evaluate(self, n: int, m: int) -> int:
        return sum((m + o) ** n for o in self.positives) - sum((m + o) ** n for o in self.negatives)

    def as_dict(self) -> dict:
        return {"k": self.k, "scale": str(self.scale),
                "positives": list(self.positives), "negatives": list(self.negatives)}


def expand_delta(k: int, k_cap: int = DEFAULT_K_CAP) -> SignedOffsetSet:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > k_cap:
        raise ValueError(f"k={k} exceeds cap {k_cap} (2**k offsets)")
    pos, neg = [2], [0]
    for _ in range(k - 1):
        # g(x) -> g(4x+2) - g(4x): an offset o at scale 4**j moves to 4o+2
        # with its sign and to 4o with the opposite sign
        pos, neg = ([4 * o + 2 for o in pos] + [4 * o for o in neg],
                    [4 * o + 2 for o in neg] + [4 * o for o in pos])
    s = SignedOffsetSet(k, tuple(sorted(pos, reverse=True)), tuple(sorted(neg, reverse=True)))
    s.check()
    return s


def alpha_max(k: int) -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    return two_thirds_span(k)


def delta_constant(n: int, m: int) -> int:
    """Evaluate the n-fold difference of x**n at shift m (always n! 2**(n*n))."""
    if m < 0:
        raise ValueError("m must be non-negative")
    return expand_delta(n).evaluate(n, m)
