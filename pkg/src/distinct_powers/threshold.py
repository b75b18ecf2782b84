"""Exact threshold of completeness for the n-th powers via bitset subset sums.

The reach set after folding bases 1..m holds every sum of distinct powers
1**n .. m**n.  Once it contains a run of (m+1)**n consecutive integers
run_start+1 .. run_start+(m+1)**n, and ((m+2)/(m+1))**n <= 2, the remaining
powers (m+1)**n, (m+2)**n, ... form a Sigma((m+1)**n) sequence and every
integer above run_start is representable.  Below the run, an unset bit v is
final as soon as the next power exceeds v.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Iterator

import numpy as np

log = logging.getLogger(__name__)

WORD = 64
ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)
CHUNK_WORDS = 1 << 22
INITIAL_CAP_BITS = 1 << 16
DEFAULT_MEM_GB = 1.0
DEFAULT_BASE_CAP = 10_000
# past this capacity the search grows by 25% instead of doubling
FINE_GROWTH_FROM = 1 << 30
HEAVY_FROM_N = 5
# bytes per capacity bit: the array itself plus one chunk of temporaries
BYTES_PER_BIT = 1 / 8


class ThresholdNotFound(RuntimeError):
    """Resource limits were exhausted before a stopping certificate appeared."""


class ReachSet:
    """Bit v (0 <= v <= capacity) is set iff v is a sum of distinct j**n, j <= m_used.

    Bit 0 stands for the empty sum and stays set; it is never reported as a
    member.
    """

    def __init__(self, n: int, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.n = n
        self.capacity = capacity
        self.m_used = 0
        self.total = 0  # 1**n + ... + m_used**n
        self.words = np.zeros(capacity // WORD + 1, dtype=np.uint64)
        self.words[0] = np.uint64(1)

    @property
    def nbytes(self) -> int:
        return self.words.nbytes

    def fold(self, base: int | None = None) -> None:
        """Add the next base (bases must be folded in the order 1, 2, 3, ...)."""
        base = self.m_used + 1 if base is None else base
        if base != self.m_used + 1:
            raise ValueError(f"expected base {self.m_used + 1}, got {base}")
        shift = base**self.n
        if shift > self.capacity:
            raise ValueError(f"power {shift} exceeds capacity {self.capacity}")
        self._or_shifted(shift, hi_bit=min(self.capacity, self.total + shift))
        self.m_used = base
        self.total += shift

    def _or_shifted(self, shift: int, hi_bit: int) -> None:
        w = self.words
        q, s = divmod(shift, WORD)
        top = hi_bit // WORD + 1
        s64 = np.uint64(s)
        back = np.uint64(WORD - s)
        hi = top
        # top-down, so every source word is read before it can be overwritten
        while hi > q:
            lo = max(q, hi - CHUNK_WORDS)
            src = w[lo - q:hi - q].copy()
            if s:
                moved = src << s64
                moved[1:] |= src[:-1] >> back
                if lo - q >= 1:
                    moved[0] |= w[lo - q - 1] >> back
            else:
                moved = src
            w[lo:hi] |= moved
            hi = lo
        last_bits = self.capacity % WORD + 1
        if last_bits < WORD:
            w[-1] &= np.uint64((1 << last_bits) - 1)

    def __contains__(self, v: int) -> bool:
        if not 1 <= v <= self.capacity:
            return False
        return bool((int(self.words[v // WORD]) >> (v % WORD)) & 1)

    def members(self, lo: int = 1, hi: int | None = None) -> list[int]:
        hi = self.capacity if hi is None else min(hi, self.capacity)
        return [v for v in range(max(lo, 1), hi + 1) if v in self]

    def highest_unset(self, upto: int) -> int:
        """Largest v in [1, upto] not in the set, or 0 if there is none."""
        upto = min(upto, self.capacity)
        hi_word = upto // WORD
        # scan downwards, word-wise, for a word that is not all ones
        while hi_word >= 0:
            lo_word = max(0, hi_word - CHUNK_WORDS + 1)
            chunk = self.words[lo_word:hi_word + 1].copy()
            if hi_word == upto // WORD:
                keep = upto % WORD + 1
                if keep < WORD:
                    chunk[-1] |= ~np.uint64((1 << keep) - 1)
            if lo_word == 0:
                chunk[0] &= ~np.uint64(1)  # the empty sum is not a member
            gaps = np.flatnonzero(chunk != ALL_ONES)
            if gaps.size:
                i = int(gaps[-1])
                inverted = ~int(chunk[i]) & ((1 << WORD) - 1)
                return (lo_word + i) * WORD + inverted.bit_length() - 1
            hi_word = lo_word - 1
        return 0

    def find_run(self, length: int) -> tuple[int, int] | None:
        """Lowest run of >= length set bits; returns (start, run_length).

        start is the unset bit just below the run, so the run is
        start+1 .. start+run_length.  Runs are clipped at capacity.
        """
        limit = min(self.capacity, self.total)
        if length > limit:
            return None
        if length < 2 * WORD:
            return self._find_run_bits(length, limit)
        return self._find_run_words(length, limit)

    def _word(self, i: int) -> int:
        v = int(self.words[i])
        return v & ~1 if i == 0 else v

    def _find_run_words(self, length: int, limit: int) -> tuple[int, int] | None:
        # any run of >= 128 bits contains at least one all-ones word
        min_full = max(1, (length - 2 * (WORD - 1)) // WORD)
        last = limit // WORD
        for w0, w1 in self._full_word_runs(last + 1, min_full):
            below = self._word(w0 - 1) if w0 > 0 else 0
            hi_ones = WORD - (~below & ((1 << WORD) - 1)).bit_length()
            start = w0 * WORD - hi_ones - 1
            end = w1 * WORD - 1
            if w1 <= last:
                above = self._word(w1)
                end += ((above ^ (above + 1)) >> 1).bit_length()
            end = min(end, limit)
            if end - start >= length:
                return start, end - start
        return None

    def _full_word_runs(self, nwords: int, min_full: int) -> Iterator[tuple[int, int]]:
        """[w0, w1) ranges of consecutive all-ones words, at least min_full long."""
        open_from = None  # start of a run that reached the end of the previous chunk
        for lo in range(0, nwords, CHUNK_WORDS):
            hi = min(nwords, lo + CHUNK_WORDS)
            full = self.words[lo:hi] == ALL_ONES
            if lo == 0:
                full[0] = False
            edges = np.diff(full.astype(np.int8), prepend=np.int8(0), append=np.int8(0))
            runs = list(zip(np.flatnonzero(edges == 1).tolist(), np.flatnonzero(edges == -1).tolist()))
            if open_from is not None and (not runs or runs[0][0] != 0):
                if lo - open_from >= min_full:
                    yield open_from, lo
                open_from = None
            for s_, e_ in runs:
                s_abs, e_abs = lo + s_, lo + e_
                if s_ == 0 and open_from is not None:
                    s_abs, open_from = open_from, None
                if e_abs == hi and hi < nwords:
                    open_from = s_abs
                    continue
                if e_abs - s_abs >= min_full:
                    yield s_abs, e_abs

    def _find_run_bits(self, length: int, limit: int) -> tuple[int, int] | None:
        start, count = 0, 0
        for lo in range(0, limit // WORD + 1, CHUNK_WORDS):
            hi = min(limit // WORD + 1, lo + CHUNK_WORDS)
            bits = np.unpackbits(self.words[lo:hi].view(np.uint8), bitorder="little")
            base = lo * WORD
            for v in range(base, min(base + bits.size, limit + 1)):
                if bits[v - base] and v > 0:
                    count += 1
                    if count >= length:
                        # extend to the end of the run before reporting
                        end = v
                        while end + 1 <= limit and (end + 1) in self:
                            end += 1
                        return start, end - start
                else:
                    start, count = v, 0
        return None


@dataclass(frozen=True)
class ThresholdCertificate:
    n: int
    theta: int
    m_star: int
    run_start: int
    run_length: int
    m_final: int
    capacity: int

    def as_dict(self) -> dict:
        d = {k: str(v) if k != "n" else v for k, v in asdict(self).items()}
        d["justification"] = "Lemma 1 + Lemma 2"
        return d


def ratio_ok(m: int, n: int) -> bool:
    """(m+2)**n <= 2 (m+1)**n, i.e. the powers beyond m grow by at most 2x."""
    return (m + 2) ** n <= 2 * (m + 1) ** n


def memory_estimate_bytes(capacity: int) -> int:
    return int(capacity * BYTES_PER_BIT) + 3 * CHUNK_WORDS * 8


# final capacity (bits) the search settles on with the default growth schedule
KNOWN_CAPACITY = {2: 1 << 16, 3: 1 << 16, 4: 1 << 23, 5: 1 << 27, 6: 19_531_250_000}


def find_threshold(
    n: int,
    mem_gb: float = DEFAULT_MEM_GB,
    base_cap: int = DEFAULT_BASE_CAP,
    initial_cap: int = INITIAL_CAP_BITS,
    return_reach: bool = False,
):
    """Search for theta with a stopping certificate; never returns a wrong theta."""
    if n < 2:
        raise ValueError("n must be >= 2")
    budget = mem_gb * 1e9
    cap = initial_cap
    while True:
        if memory_estimate_bytes(cap) > budget:
            raise ThresholdNotFound(
                f"n={n}: capacity {cap} bits needs ~{memory_estimate_bytes(cap) / 1e9:.2f} GB "
                f"(budget {mem_gb} GB)")
        result = _search(n, cap, base_cap)
        if result is not None:
            cert, reach = result
            return (cert, reach) if return_reach else cert
        log.info("n=%d: no certificate within %d bits, growing", n, cap)
        cap = cap * 2 if cap < FINE_GROWTH_FROM else cap * 5 // 4


def _search(n: int, cap: int, base_cap: int):
    reach = ReachSet(n, cap)
    run = None
    while run is None:
        m = reach.m_used + 1
        if m > base_cap:
            raise ThresholdNotFound(f"n={n}: base cap {base_cap} reached")
        if (m + 1) ** n > cap:
            return None
        reach.fold(m)
        if ratio_ok(m, n):
            run = reach.find_run((m + 1) ** n)
    m_star = reach.m_used
    run_start, run_length = run
    log.info("n=%d: run of %d above %d using bases <= %d", n, run_length, run_start, m_star)

    candidate = reach.highest_unset(run_start)
    while (reach.m_used + 1) ** n <= candidate:
        reach.fold()
        candidate = reach.highest_unset(candidate)
    cert = ThresholdCertificate(n, candidate, m_star, run_start, run_length, reach.m_used, cap)
    return cert, reach


def nonrepresentable_list(n: int, up_to: int, **limits) -> list[int]:
    """All v in [1, up_to] that are not sums of distinct n-th powers."""
    cert, reach = find_threshold(n, return_reach=True, **limits)
    if up_to > reach.capacity:
        raise ValueError(f"up_to={up_to} beyond the computed range {reach.capacity}")
    while (reach.m_used + 1) ** n <= up_to:
        reach.fold()
    return [v for v in range(1, up_to + 1) if v not in reach]


def reachable_set(n: int, m_max: int, cap: int) -> ReachSet:
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if cap < m_max**n:
        raise ValueError(f"cap {cap} is smaller than the largest power {m_max ** n}")
    reach = ReachSet(n, cap)
    for _ in range(m_max):
        reach.fold()
    return reach


def replay_certificate(cert: ThresholdCertificate, witness_samples: int = 8,
                       max_bits: int = 1 << 32) -> bool:
    """Re-check a certificate with plain Python integers, independent of ReachSet."""
    n = cert.n
    if not ratio_ok(cert.m_star, n):
        return False
    if cert.run_length < (cert.m_star + 1) ** n:
        return False
    if (cert.m_final + 1) ** n <= cert.theta or cert.m_final < cert.m_star:
        return False
    run_end = cert.run_start + cert.run_length
    if run_end > max_bits:
        raise ValueError("certificate too large for the integer replay")

    def subset_sums(m: int, width: int) -> int:
        mask = (1 << (width + 1)) - 1
        bits = 1
        for j in range(1, m + 1):
            bits = (bits | (bits << j**n)) & mask
        return bits

    early = subset_sums(cert.m_star, run_end)
    run_mask = ((1 << cert.run_length) - 1) << (cert.run_start + 1)
    if early & run_mask != run_mask:
        return False
    late = subset_sums(cert.m_final, cert.run_start) & ~1
    if cert.theta:
        if (late >> cert.theta) & 1:
            return False
    above = late >> (cert.theta + 1)
    if above != (1 << (cert.run_start - cert.theta)) - 1:
        return False

    step = max(1, cert.run_length // max(1, witness_samples))
    for v in range(cert.run_start + 1, run_end + 1, step):
        w = find_witness(v, n, cert.m_star)
        if w is None or sum(x**n for x in w) != v or len(set(w)) != len(w):
            return False
    return True


def find_witness(v: int, n: int, m: int, node_limit: int = 2_000_000) -> list[int] | None:
    """Depth-first search for distinct bases <= m whose n-th powers sum to v."""
    powers = [j**n for j in range(1, m + 1)]
    suffix = [0]
    for pw in powers:
        suffix.append(suffix[-1] + pw)  # suffix[i] = sum of the i smallest powers
    nodes = 0
    chosen: list[int] = []

    def go(i: int, rest: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_limit:
            raise ThresholdNotFound("witness search exceeded its node limit")
        if rest == 0:
            return True
        if i == 0 or rest > suffix[i]:
            return False
        pw = powers[i - 1]
        if pw <= rest:
            chosen.append(i)
            if go(i - 1, rest - pw):
                return True
            chosen.pop()
        return go(i - 1, rest)

    return sorted(chosen) if go(m, v) else None
