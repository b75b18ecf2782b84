"""Window of a consecutive integers in P(U), and full decompositions above it.

For the residue representatives k_1 < ... < k_a and the progression
C_j = c + j*a, choosing n_j = floor((k_a - k_j) / a) + 1 lands every
c + n_j*a + k_j in (c + k_a, c + k_a + a].  With d = c + k_a the window is
d+1 .. d+a.  Any x > d then peels off W elements greedily (W is a Sigma(a)
sequence) until the remainder falls inside the window.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .params import Params, theorem_bound
from .partition import PartitionClass, check_corollary1, classify, iter_bases
from .progression import ProgressionCertificate, progression
from .residue import ResidueSystem, residue_system

WINDOW_N_CAP = 3
EXPLICIT_RESUM_CAP = 2  # beyond this n the T-parts are re-summed in closed form


@dataclass
class WindowCertificate:
    params: Params
    residues: ResidueSystem
    progression: ProgressionCertificate
    n_js: list[int]
    d: int
    # offset (value - d) in 1..a -> index into residues
    slot: dict[int, int] = field(default_factory=dict)

    @property
    def c(self) -> int:
        return self.progression.c

    def combined_value(self, i: int) -> int:
        return self.c + self.n_js[i] * self.params.a + self.residues.values[i]

    def parts_for(self, offset: int) -> tuple[list[int], list[int]]:
        """(T-part bases, S-part bases) of the window element d + offset."""
        i = self.slot[offset]
        t_part = list(self.progression.member_bases(self.n_js[i]))
        s_part = list(self.residues.certificate(i).bases)
        return t_part, s_part

    def as_dict(self) -> dict:
        p = self.params
        return {
            "lemma": "Lemma 7",
            "n": p.n,
            "a": str(p.a),
            "b": str(p.b),
            "c": str(self.c),
            "k_a": str(self.residues.k_a),
            "d": str(self.d),
            "theorem_bound": str(theorem_bound(p)),
            "identification": "c + n_j*a is taken as C_{n_j} of the progression",
            "window": [
                {
                    "value": str(self.combined_value(i)),
                    "n_j": str(self.n_js[i]),
                    "k_j": str(self.residues.values[i]),
                    "s_part_counts": [int(x) for x in self.residues.counts[i]],
                }
                for i in range(len(self.n_js))
            ],
        }


def build_window(p: Params, n_cap: int = WINDOW_N_CAP) -> WindowCertificate:
    if p.n > n_cap:
        raise ValueError(f"n={p.n} beyond the window cap {n_cap}")
    rs = residue_system(p, n_cap=max(n_cap, p.n))
    prog = progression(p.b, p)
    a, k_a = p.a, rs.k_a
    n_js = [(k_a - k) // a + 1 for k in rs.values]
    if not all(1 <= nj < p.b for nj in n_js):
        raise AssertionError("some n_j falls outside [1, b)")
    d = prog.c + k_a
    w = WindowCertificate(p, rs, prog, n_js, d)

    offsets = sorted(w.combined_value(i) - d for i in range(a))
    if offsets != list(range(1, a + 1)):
        raise AssertionError("combined values are not the window d+1 .. d+a")
    w.slot = {w.combined_value(i) - d: i for i in range(a)}

    if not rs.check(resum=None if p.n <= 3 else 4096):
        raise AssertionError("residue system failed verification")
    members: dict[int, int] = {}
    for nj in n_js:
        if nj not in members:
            members[nj] = prog.member(nj)
            if members[nj] != prog.c + nj * a:
                raise AssertionError(f"C_{nj} does not equal c + n_j*a")
    if p.n <= EXPLICIT_RESUM_CAP:
        for offset in range(1, a + 1):
            t_part, s_part = w.parts_for(offset)
            if min(t_part) < p.r or max(s_part) >= p.r:
                raise AssertionError("T-part and S-part ranges overlap")
            if len(set(t_part)) != len(t_part):
                raise AssertionError("repeated base in a T-part")
            if sum(m**p.n for m in t_part) + sum(m**p.n for m in s_part) != d + offset:
                raise AssertionError(f"window element d+{offset} does not re-sum")
    if not d < theorem_bound(p):
        raise AssertionError("d is not below the theorem bound")
    return w


@dataclass(frozen=True)
class Decomposition:
    x: int
    parts: tuple[int, ...]
    n: int
    verified: bool

    def as_dict(self) -> dict:
        return {"n": self.n, "x": str(self.x), "parts": [str(m) for m in self.parts],
                "verified": self.verified}


DECOMPOSE_N = 2


def decompose(x: int, p: Params, w: WindowCertificate) -> Decomposition:
    """Write x > d as a sum of distinct n-th powers (n = 2 only)."""
    if p.n != DECOMPOSE_N:
        raise ValueError(f"decompose supports n = {DECOMPOSE_N} only")
    if x <= w.d:
        raise ValueError(f"x must exceed d = {w.d}")
    a = p.a
    t = x - w.d

    w_bases: list[int] = []
    prefix = [0]  # prefix[m] = w_1 + ... + w_m
    for base in iter_bases("W", p):
        if a + prefix[-1] >= t:
            break
        w_bases.append(base)
        prefix.append(prefix[-1] + base**p.n)

    taken = []
    for m in range(len(w_bases), 0, -1):
        if t > a + prefix[m - 1]:
            t -= w_bases[m - 1] ** p.n
            taken.append(w_bases[m - 1])
    assert 1 <= t <= a, f"greedy descent ended outside the window (t={t})"

    t_part, s_part = w.parts_for(t)
    for m in taken:
        assert classify(m, p) in (PartitionClass.B2, PartitionClass.B4)
    parts = tuple(sorted(itertools.chain(t_part, s_part, taken)))
    verified = len(set(parts)) == len(parts) and sum(m**p.n for m in parts) == x
    if not verified:
        raise AssertionError(f"decomposition of {x} failed re-summation")
    return Decomposition(x, parts, p.n, verified)


@dataclass
class TheoremReport:
    n: int
    d: int
    bound: int
    window_ok: bool
    corollary1_ok: bool

    @property
    def ok(self) -> bool:
        return self.window_ok and self.corollary1_ok and self.d < self.bound

    def as_dict(self) -> dict:
        return {"theorem": "Theorem 1", "n": self.n, "d": str(self.d), "bound": str(self.bound),
                "window_ok": self.window_ok, "corollary1_ok": self.corollary1_ok, "ok": self.ok}


def check_theorem(p: Params, n_cap: int = WINDOW_N_CAP) -> TheoremReport:
    try:
        w = build_window(p, n_cap)
        window_ok, d = True, w.d
    except AssertionError:
        window_ok, d = False, -1
    return TheoremReport(p.n, d, theorem_bound(p), window_ok, check_corollary1(p).ok)


def verify_theorem(p: Params, n_cap: int = WINDOW_N_CAP) -> bool:
    return check_theorem(p, n_cap).ok
