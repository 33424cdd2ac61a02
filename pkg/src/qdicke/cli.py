"""Command-line front end: ``qdicke {state,entropy,circuit,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 resource limit, 4 unsupported feature.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys

from . import circuits, entanglement, states, verify
from .qcomb import DeformationParam

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_UNSUPPORTED = 4


class UsageError(Exception):
    pass


class UnsupportedError(Exception):
    pass


def parse_k(text: str, d: int | None, n: int | None) -> tuple[int, ...]:
    try:
        k = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"-k must be comma-separated integers, got {text!r}") from None
    if any(x < 0 for x in k):
        raise UsageError("-k entries must be non-negative")
    if d is not None and len(k) != d:
        raise UsageError(f"-k has {len(k)} entries but -d is {d}")
    if n is not None and sum(k) != n:
        raise UsageError(f"-k sums to {sum(k)} but -n is {n}")
    if sum(k) < 1:
        raise UsageError("-k must sum to at least 1")
    return k


def deformation(args) -> DeformationParam:
    if not args.q > 0 or not math.isfinite(args.q):
        raise UsageError("-q must be a positive number")
    return DeformationParam(args.q, args.alpha)


def parse_range(text: str, n: int) -> list[int]:
    """``"3"``, ``"2:7"`` (inclusive) or ``"1,4,5"``."""
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            out = list(range(lo, hi + 1))
        else:
            out = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"bad l range {text!r}") from None
    if any(not 1 <= l <= n - 1 for l in out):
        raise UsageError(f"l values must lie in 1..{n - 1}")
    return out


def emit(text: str, output: str | None, default_name: str | None = None):
    if output is None:
        sys.stdout.write(text)
        return
    path = output
    if os.path.isdir(output) and default_name:
        path = os.path.join(output, default_name)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_state(args) -> int:
    k = parse_k(args.k, args.d, args.n)
    Q = deformation(args)
    st = states.dicke_state(k, Q, method=args.method)
    payload = states.state_to_dict(st, k, Q, exact=args.exact, tol=0.0)
    emit(json.dumps(payload, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_entropy(args) -> int:
    k = parse_k(args.k, args.d, args.n)
    Q = deformation(args)
    n = sum(k)
    if n < 2:
        raise UsageError("entropy needs n >= 2")
    ls = parse_range(args.l, n) if args.l else None
    base = {"d": None, "2": 2.0, "e": math.e}[args.base]
    curve = entanglement.entropy_curve(k, Q.magnitude, ls, base=base)
    emit(curve.to_csv(), args.output, curve.filename())
    return EXIT_OK


def cmd_circuit(args) -> int:
    if args.d != 2:
        raise UnsupportedError(
            "circuit synthesis is implemented for qubits (d=2) only; "
            "no construction is available for d > 2")
    n, l = args.n, args.l
    if n is None or l is None:
        raise UsageError("circuit needs -n and -l")
    if n < 2 or not 1 <= l <= n - 1:
        raise UsageError(f"need n >= 2 and 1 <= l <= n-1, got n={n}, l={l}")
    Q = deformation(args)
    c = circuits.build_U(n, Q) if args.full else circuits.build_pruned_U(n, l, Q)
    emit(circuits.export_qasm(c), args.output)
    if args.verify:
        if n > args.max_sim_n:
            raise states.ResourceLimitError(f"n={n} exceeds the simulation budget {args.max_sim_n}")
        rep = circuits.prepare_and_verify(n, l, Q)
        text = rep.to_json()
        if args.report:
            emit(text, args.report)
        else:
            sys.stderr.write(text)
        ok = min(rep.fidelity_full, rep.fidelity_pruned) >= 1 - 1e-10
        return EXIT_OK if ok else EXIT_VERIFY
    return EXIT_OK


def cmd_verify(args, overrides=None) -> int:
    b = verify.Bounds(max_n=args.max_n, max_d=args.max_d)
    results = verify.run_all(b, overrides)
    if args.sample:
        # sampled smoke run: re-check a random subset of circuit cases
        rng = random.Random(args.seed)
        extra = verify.SuiteResult("circuit fidelity (sampled)")
        for _ in range(args.sample):
            n = rng.randint(2, max(2, min(args.max_n, b.max_circuit_n)))
            l = rng.randint(1, n - 1)
            Q = DeformationParam(rng.choice(b.q_values), rng.choice(b.alphas))
            rep = circuits.prepare_and_verify(n, l, Q)
            dev = 1 - min(rep.fidelity_full, rep.fidelity_pruned)
            extra.record(dev < 1e-10, dev, f"n={n}, l={l}")
        results.append(extra)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("FAILED suites: " + ", ".join(failed))
        return EXIT_VERIFY
    print(f"all {len(results)} suites passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qdicke", description="q-deformed qudit Dicke states")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_k=True):
        sp.add_argument("-d", type=int, default=None, help="qudit dimension")
        sp.add_argument("-n", type=int, default=None, help="number of qudits")
        if need_k:
            sp.add_argument("-k", required=True, help="composition, e.g. 1,2,1")
        sp.add_argument("-q", type=float, default=1.0, help="|q| > 0")
        sp.add_argument("--alpha", type=float, default=0.0, help="phase of q in radians")
        sp.add_argument("-o", "--output", default=None, help="output file (stdout if omitted)")

    s = sub.add_parser("state", help="write a q-Dicke state as JSON")
    common(s)
    s.add_argument("--exact", action="store_true", help="include the exact normalization polynomial")
    s.add_argument("--method", choices=("sum", "recursive", "operator"), default="sum")
    s.set_defaults(func=cmd_state)

    e = sub.add_parser("entropy", help="write an entanglement-entropy curve as CSV")
    common(e)
    e.add_argument("-l", default=None, help="l values: '3', '2:7' or '1,4,5' (default 1..n-1)")
    e.add_argument("--base", choices=("d", "2", "e"), default="d", help="logarithm base")
    e.set_defaults(func=cmd_entropy)

    c = sub.add_parser("circuit", help="write a q-Dicke preparation circuit as OpenQASM 3")
    common(c, need_k=False)
    c.set_defaults(d=2)
    c.add_argument("-l", type=int, default=None, help="number of 1s in the input e(n-l, l)")
    c.add_argument("--full", action="store_true", help="emit U_n instead of the pruned circuit")
    c.add_argument("--verify", action="store_true", help="simulate and report fidelities")
    c.add_argument("--report", default=None, help="fidelity report path (stderr if omitted)")
    c.add_argument("--max-sim-n", type=int, default=20)
    c.set_defaults(func=cmd_circuit)

    v = sub.add_parser("verify", help="run the identity and cross-check suites")
    v.add_argument("--max-n", type=int, default=6)
    v.add_argument("--max-d", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--sample", type=int, default=0, help="extra randomly sampled circuit checks")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (states.ResourceLimitError, MemoryError) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
