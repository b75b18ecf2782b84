"""Exit criteria, one test each; every test records a PASS/FAIL line."""

import contextlib
import io
import random
import time
import tracemalloc

import pytest
import sympy

from conftest import ACCEPTANCE_LINES
from distinct_powers.assemble import build_window, check_theorem, decompose
from distinct_powers.cli import run
from distinct_powers.delta import delta_constant, expand_delta
from distinct_powers.params import derive_params, theorem_bound
from distinct_powers.progression import iter_c, lemma6_bound, progression_c
from distinct_powers.residue import lemma4_reachable, residue_system, verify_lemma4_dp
from distinct_powers.threshold import find_threshold, reachable_set

KNOWN_THETA = {2: 128, 3: 12758, 4: 5134240, 5: 67898771, 6: 11146309947}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f" -- {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def threshold_cli(n: int, *extra: str) -> tuple[str, float, int]:
    out = io.StringIO()
    tracemalloc.start()
    start = time.perf_counter()
    with contextlib.redirect_stdout(out):
        code, _ = run(["threshold", "--n", str(n), *extra])
    elapsed = time.perf_counter() - start
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    assert code == 0
    return out.getvalue().strip(), elapsed, peak


@pytest.mark.parametrize("n,limit_s", [(2, 5.0), (3, 5.0)])
def test_c1_threshold_small(n, limit_s):
    theta, elapsed, _ = threshold_cli(n)
    record(f"C1 threshold n={n}", theta == str(KNOWN_THETA[n]) and elapsed < limit_s,
           f"theta={theta}, {elapsed:.2f}s (limit {limit_s}s)")


def test_c1_threshold_n4():
    theta, elapsed, peak = threshold_cli(4)
    ok = theta == "5134240" and elapsed < 120 and peak < 1e9
    record("C1 threshold n=4", ok, f"theta={theta}, {elapsed:.2f}s (limit 120s), peak {peak / 1e6:.0f} MB (limit 1000 MB)")


@pytest.mark.heavy
@pytest.mark.parametrize("n,limit_s,mem", [(5, 15 * 60, None), (6, 2 * 3600, 4e9)])
def test_c1_threshold_heavy(n, limit_s, mem):
    start = time.perf_counter()
    cert = find_threshold(n, mem_gb=4.0)
    elapsed = time.perf_counter() - start
    peak = cert.capacity / 8
    ok = cert.theta == KNOWN_THETA[n] and elapsed < limit_s and (mem is None or peak < mem)
    record(f"C1 threshold n={n} (heavy)", ok, f"theta={cert.theta}, {elapsed:.0f}s, bitset {peak / 1e9:.2f} GB")


def test_c2_bound():
    n = sympy.Integer(2)
    a = sympy.factorial(n) * 2 ** (n**2)
    b = 2 ** (n**3) * a ** (n - 1)
    r = 2 ** (n**2 - n) * a
    oracle = (b - 1) * 2 ** (n - 1) * (r + sympy.Rational(2, 3) * (b - 1) * (2 ** (2 * n) - 1) + 2 * (b - 2)) ** n - 2 * a + a * b
    value = theorem_bound(derive_params(2))
    ok = value == int(oracle) == 158677735086648
    ok &= all(theorem_bound(derive_params(k)) > theta for k, theta in KNOWN_THETA.items())
    record("C2 bound evaluation", ok, f"bound(2)={value}; bound(n) > theta(n) for n=2..6")


def test_c3_lemma5():
    ok = (expand_delta(1).positives, expand_delta(1).negatives) == ((2,), (0,))
    ok &= (expand_delta(2).positives, expand_delta(2).negatives) == ((10, 0), (8, 2))
    ok &= (expand_delta(3).positives, expand_delta(3).negatives) == ((42, 32, 8, 2), (40, 34, 10, 0))
    rng = random.Random(5)
    for n in range(2, 7):
        a = derive_params(n).a
        ok &= all(delta_constant(n, rng.randint(0, 2**64)) == a for _ in range(100))
    record("C3 Lemma 5 suite", ok, "offsets k=1,2,3 verbatim; 500 random shifts exact")


def test_c4_lemma4():
    p2, p3 = derive_params(2), derive_params(3)
    ok = lemma4_reachable(p2) == (1 << 121) - 2 and verify_lemma4_dp(p2)
    ok &= lemma4_reachable(p3) == (1 << 82945) - 2 and verify_lemma4_dp(p3)
    details = []
    for n in (2, 3, 4):
        p = derive_params(n)
        rs = residue_system(p)
        complete = sorted(v % p.a for v in rs.values) == list(range(p.a))
        ok &= complete and rs.values[0] == 1 and rs.check(resum=None if n <= 3 else 2000)
        details.append(f"n={n}: {len(rs)} reps")
    record("C4 Lemma 4 suite", ok, "DP = [1,120] and [1,82944]; " + ", ".join(details))


def test_c5_lemma6():
    ok = True
    checked = 0
    for n in (2, 3):
        p = derive_params(n)
        for t, c in iter_c(p, 10**4):
            ok &= c == progression_c(t, p, "closed_form") and c < lemma6_bound(t, p)
            checked += 1
    p2 = derive_params(2)
    c_b = progression_c(p2.b, p2, "iterate")
    ok &= c_b == progression_c(p2.b, p2, "closed_form") and c_b < lemma6_bound(p2.b, p2)
    record("C5 Lemma 6 suite", ok, f"{checked} (n, t) pairs plus t=b at n=2, bit-exact")


def test_c6_theorem():
    ok = True
    for n in (2, 3):
        p = derive_params(n)
        rep = check_theorem(p)
        w = build_window(p)
        window = sorted(w.combined_value(i) for i in range(p.a)) == list(range(w.d + 1, w.d + p.a + 1))
        ok &= rep.ok and window and w.d < theorem_bound(p)
    record("C6 end-to-end theorem", ok, "n=2,3: d < bound, window of a consecutive integers")


def test_c7_decomposition():
    p = derive_params(2)
    w = build_window(p)
    rng = random.Random(7)
    failures = 0
    for _ in range(100):
        x = w.d + rng.randint(1, 10**6)
        dec = decompose(x, p, w)
        if len(set(dec.parts)) != len(dec.parts) or sum(m * m for m in dec.parts) != x:
            failures += 1
    record("C7 decomposition property", failures == 0, f"100 random x, {failures} failures")


def test_c8_oracle_equivalence():
    ok = True
    for n in (2, 3):
        for m in range(1, 21):
            sums = [0]
            for j in range(1, m + 1):
                sums += [s + j**n for s in sums]
            cap = sum(j**n for j in range(1, m + 1))
            for clamp in (cap, max(m**n, cap // 3)):
                ok &= set(reachable_set(n, m, clamp).members()) == {s for s in sums if 1 <= s <= clamp}
    record("C8 oracle equivalence", ok, "n=2,3, m=1..20, full and clamped caps")
