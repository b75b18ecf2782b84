"""Command-line entry point: bound, verify <lemma>, window, decompose, threshold, all."""

from __future__ import annotations

import argparse
import json
import logging
import random
import resource
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from . import __version__
from .assemble import build_window, check_theorem, decompose
from .delta import alpha_max, delta_constant, expand_delta
from .params import bound_inner_base, derive_params, theorem_bound
from .partition import check_corollary1, lemma3_comparisons, verify_lemma3
from .progression import progression, sample_indices, verify_lemma6
from .residue import coverage_interval, residue_system, verify_lemma4_dp
from .threshold import (
    HEAVY_FROM_N,
    KNOWN_CAPACITY,
    ThresholdNotFound,
    find_threshold,
    memory_estimate_bytes,
    replay_certificate,
)

log = logging.getLogger("distinct_powers")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    checks: list[dict] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    wall_time_s: float = 0.0
    peak_memory_bytes: int = 0

    @property
    def ok(self) -> bool:
        return all(c["status"] == "pass" for c in self.checks)

    def check(self, name: str, passed: bool, **detail) -> bool:
        self.checks.append({"name": name, "status": "pass" if passed else "fail", **detail})
        return passed

    def add_artifact(self, path: str) -> None:
        if path not in self.artifacts:
            self.artifacts.append(path)

    def as_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "checks": self.checks,
            "skipped": self.skipped,
            "status": "pass" if self.ok else "fail",
            "wall_time_s": round(self.wall_time_s, 3),
            "peak_memory_bytes": self.peak_memory_bytes,
            "artifacts": self.artifacts,
        }


def emit(doc: dict, dest: str | None, manifest: RunManifest) -> None:
    """Write a certificate to dest ('-' means stdout); no-op when dest is None."""
    if dest is None:
        return
    text = dumps(doc)
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)
        manifest.add_artifact(dest)


def _params(n: int):
    try:
        return derive_params(n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- subcommands ----------------------------------------------------------

def cmd_bound(args, man: RunManifest) -> None:
    p = _params(args.n)
    bound = theorem_bound(p)
    man.check("params", bound > p.r**p.n, bound_bits=bound.bit_length())
    doc = {"n": p.n, "a": str(p.a), "b": str(p.b), "r": str(p.r), "alpha": str(p.alpha),
           "bound": str(bound)}
    if args.json:
        emit(doc, args.json, man)
    else:
        for key in ("n", "a", "b", "r", "alpha", "bound"):
            print(f"{key:>6} = {doc[key]}")


def cmd_lemma3(args, man: RunManifest) -> None:
    p = _params(args.n)
    ok = man.check("lemma3", verify_lemma3(p))
    doc = {"lemma": "Lemma 3", "n": p.n, "ok": ok, "comparisons": [
        {"expr": name, "lhs": str(lhs), "rel": rel, "rhs": str(rhs)}
        for name, lhs, rel, rhs in lemma3_comparisons(p)]}
    _report(ok, doc, args)


def cmd_corollary1(args, man: RunManifest) -> None:
    p = _params(args.n)
    if args.prefix is not None and args.prefix < 2:
        raise UsageError("--prefix must be >= 2")
    rep = check_corollary1(p, args.prefix)
    man.check("corollary1", rep.ok, prefix_len=rep.prefix_len)
    _report(rep.ok, {"lemma": "Corollary 1", "n": p.n, **rep.as_dict()}, args)


def cmd_lemma4(args, man: RunManifest) -> None:
    p = _params(args.n)
    doc = {"lemma": "Lemma 4", "n": p.n, "coverage_M": str(coverage_interval(p))}
    ok = True
    if p.n <= 3:
        doc["dp_interval_exact"] = man.check("lemma4_dp", verify_lemma4_dp(p))
        ok = doc["dp_interval_exact"]
    if p.n > 4 and not args.heavy:
        raise UsageError(f"residue system for n={p.n} has a={p.a} representatives; pass --heavy")
    rs = residue_system(p, n_cap=p.n)
    rs_ok = man.check("lemma4_residue_system", rs.check(resum=None if p.n <= 3 else 4096))
    doc.update(residue_system_ok=rs_ok, k_1=str(rs.values[0]), k_a=str(rs.k_a))
    if args.emit_certs:
        Path(args.emit_certs).write_text(dumps(rs.as_dict()))
        man.add_artifact(args.emit_certs)
    _report(ok and rs_ok, doc, args)


def cmd_lemma5(args, man: RunManifest) -> None:
    p = _params(args.n)
    offs = expand_delta(p.n)
    rng = random.Random(0)
    shifts = [0, 1, p.r] + [rng.randrange(0, 1 << 64) for _ in range(args.samples)]
    values = {str(m): str(delta_constant(p.n, m)) for m in shifts}
    ok = all(int(v) == p.a for v in values.values()) and offs.positives[0] == alpha_max(p.n)
    man.check("lemma5", ok, samples=len(shifts))
    _report(ok, {"lemma": "Lemma 5", "n": p.n, "a": str(p.a), "offsets": offs.as_dict(),
                 "values": values, "ok": ok}, args)


def cmd_lemma6(args, man: RunManifest) -> None:
    p = _params(args.n)
    t = p.b if args.t is None else args.t
    if t < 2:
        raise UsageError("--t must be >= 2")
    try:
        ok = verify_lemma6(t, p, args.mode, samples=args.samples)
        cert = progression(t, p, args.mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    man.check("lemma6", ok, t=str(t), mode=args.mode)
    doc = cert.as_dict(sample_blocks=sample_indices(t - 1, 2) if t > 2 else [1])
    doc["ok"] = ok
    _report(ok, doc, args)


def cmd_window(args, man: RunManifest) -> None:
    p = _params(args.n)
    if p.n > 3 and not args.heavy:
        raise UsageError(f"window for n={p.n} needs --heavy")
    w = build_window(p, n_cap=p.n)
    man.check("window", True, d=str(w.d))
    print(f"d = {w.d}\nwindow = d+1 .. d+{p.a}")
    emit(w.as_dict(), args.json, man)


def cmd_decompose(args, man: RunManifest) -> None:
    if args.n != 2:
        raise UsageError("decompose supports --n 2 only")
    p = _params(args.n)
    try:
        x = int(args.x)
    except ValueError as exc:
        raise UsageError(f"--x must be a decimal integer, got {args.x!r}") from exc
    w = build_window(p)
    if x <= w.d:
        raise UsageError(f"x must exceed d = {w.d}")
    dec = decompose(x, p, w)
    man.check("decompose", dec.verified, parts=len(dec.parts))
    emit(dec.as_dict(), args.json or "-", man)


def heavy_estimate(n: int) -> str:
    cap = KNOWN_CAPACITY.get(n)
    if cap is None:
        return f"n={n}: no published threshold; resource needs unknown (grows faster than 2**(n+1) bits)"
    return f"n={n}: needs roughly {memory_estimate_bytes(cap) / 1e9:.1f} GB of bitset"


def cmd_threshold(args, man: RunManifest) -> None:
    n = args.n
    if n < 2:
        raise UsageError("--n must be >= 2")
    if n >= HEAVY_FROM_N and not args.heavy:
        raise UsageError(f"{heavy_estimate(n)}; rerun with --heavy to proceed")
    need = KNOWN_CAPACITY.get(n)
    if need is not None and memory_estimate_bytes(need) > args.mem_gb * 1e9:
        raise UsageError(f"{heavy_estimate(n)}, above --mem-gb {args.mem_gb}")
    try:
        cert = find_threshold(n, mem_gb=args.mem_gb)
    except ThresholdNotFound as exc:
        man.check("threshold", False, reason=str(exc))
        print(f"certificate not found: {exc}", file=sys.stderr)
        return
    man.check("threshold", True, theta=str(cert.theta))
    if cert.run_start + cert.run_length <= 1 << 28:
        man.check("threshold_replay", replay_certificate(cert))
    print(cert.theta)
    emit({"threshold": cert.as_dict()}, args.json, man)
    if args.bfile:
        Path(args.bfile).write_text(f"{n} {cert.theta}\n")
        man.add_artifact(args.bfile)


def cmd_all(args, man: RunManifest) -> None:
    p = _params(args.n)
    n = p.n
    bound = theorem_bound(p)
    man.check("params", bound > p.r**n and bound_inner_base(p) > p.r, bound_bits=bound.bit_length())
    man.check("partition", verify_lemma3(p) and check_corollary1(p).ok)
    rng = random.Random(0)
    man.check("delta", all(delta_constant(n, rng.randrange(1 << 64)) == p.a for _ in range(100)))
    if n <= 4:
        lemma4 = residue_system(p).check(resum=None if n <= 3 else 4096)
        if n <= 3:
            lemma4 = lemma4 and verify_lemma4_dp(p)
        man.check("residue", lemma4)
    else:
        man.skipped.append({"name": "residue", "reason": f"a={p.a} representatives"})
    small_t = min(p.b, 1000)
    man.check("progression", verify_lemma6(p.b, p) and verify_lemma6(small_t, p, "iterate"))
    if n <= 3:
        man.check("assemble", check_theorem(p).ok)
    else:
        man.skipped.append({"name": "assemble", "reason": "window beyond desk scale"})


def _report(ok: bool, doc: dict, args) -> None:
    print("PASS" if ok else "FAIL")
    if args.json:
        emit(doc, args.json, args._manifest)
    else:
        sys.stdout.write(dumps(doc))


COMMANDS: dict[str, Callable] = {
    "bound": cmd_bound, "lemma3": cmd_lemma3, "corollary1": cmd_corollary1,
    "lemma4": cmd_lemma4, "lemma5": cmd_lemma5, "lemma6": cmd_lemma6,
    "window": cmd_window, "decompose": cmd_decompose, "threshold": cmd_threshold, "all": cmd_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distinct-powers", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--manifest", metavar="PATH", help="write the run manifest here")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_n(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--json", nargs="?", const="-", metavar="PATH",
                       help="write JSON (to stdout when PATH is omitted or '-')")
        return p

    with_n(sub.add_parser("bound", help="constants and the explicit bound"))

    verify = sub.add_parser("verify", help="check one lemma")
    lemmas = verify.add_subparsers(dest="lemma", required=True)
    with_n(lemmas.add_parser("lemma3"))
    with_n(lemmas.add_parser("corollary1")).add_argument("--prefix", type=int)
    l4 = with_n(lemmas.add_parser("lemma4"))
    l4.add_argument("--emit-certs", metavar="PATH")
    l4.add_argument("--heavy", action="store_true")
    with_n(lemmas.add_parser("lemma5")).add_argument("--samples", type=int, default=100)
    l6 = with_n(lemmas.add_parser("lemma6"))
    l6.add_argument("--t", type=int)
    l6.add_argument("--mode", choices=["iterate", "closed", "closed_form"], default="closed")
    l6.add_argument("--samples", type=int, default=16)

    win = with_n(sub.add_parser("window", help="a consecutive integers in P(U)"))
    win.add_argument("--heavy", action="store_true")
    dec = with_n(sub.add_parser("decompose", help="write x as distinct squares"))
    dec.add_argument("--x", required=True)

    thr = with_n(sub.add_parser("threshold", help="exact threshold of completeness"))
    thr.add_argument("--heavy", action="store_true")
    thr.add_argument("--mem-gb", type=float, default=4.0)
    thr.add_argument("--bfile", metavar="PATH")

    with_n(sub.add_parser("all", help="every verifier feasible at this n"))
    return parser


def run(argv: list[str] | None = None) -> tuple[int, RunManifest | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), None
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    name = args.lemma if args.command == "verify" else args.command
    if getattr(args, "mode", None) == "closed":
        args.mode = "closed_form"
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "lemma", "verbose", "manifest") and v is not None}
    man = RunManifest(subcommand=name if args.command != "verify" else f"verify {name}",
                      parameters=params)
    args._manifest = man
    start = time.perf_counter()
    try:
        COMMANDS[name](args, man)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, man
    man.wall_time_s = time.perf_counter() - start
    man.peak_memory_bytes = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
    if args.manifest:
        Path(args.manifest).write_text(dumps(man.as_dict()))
    elif name == "all":
        sys.stdout.write(dumps(man.as_dict()))
    return (EXIT_OK if man.ok else EXIT_FAIL), man


def main(argv: list[str] | None = None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
