"""``dsqc`` command-line front end.

Exit codes: 0 success, 2 usage error, 3 eavesdropping detected (abort),
4 internal consistency failure (decode mismatch, ambiguous table, rejected state).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .adversary import CLI_NAMES, AttackStrategy, detection_probability_exact, detection_probability_mc
from .analysis import CONVENTIONS, efficiency, leakage_audit
from .errors import AmbiguousTableError, DSQCError, SizeCapError
from .protocol import ProtocolConfig, build_decode_table, run_protocol
from .qcore import PermutationMap, make_stream
from .states import CATALOG_NAMES, NamedState, load_state, verify_generic_form

EXIT_OK, EXIT_USAGE, EXIT_ABORT, EXIT_INTERNAL = 0, 2, 3, 4
SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def parse_message(text: str) -> str:
    """Binary digits, or hex with a ``0x`` prefix (4 bits per digit)."""
    text = text.strip()
    if text.lower().startswith("0x"):
        digits = text[2:]
        try:
            return "".join(format(int(d, 16), "04b") for d in digits)
        except ValueError:
            raise UsageError(f"bad hex message {text!r}") from None
    if any(ch not in "01" for ch in text):
        raise UsageError(f"message must be binary or 0x-prefixed hex, got {text!r}")
    return text


def _parse_permutation(text: str | None) -> PermutationMap | None:
    if text is None:
        return None
    try:
        return PermutationMap(tuple(int(x) for x in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"bad permutation {text!r}: {exc}") from None


def _state(args) -> NamedState:
    if args.spec_file and args.state:
        raise UsageError("give either --state or --spec-file, not both")
    if args.spec_file:
        try:
            doc = json.loads(Path(args.spec_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read spec file: {exc}") from None
        return load_state(document=doc)
    if not args.state:
        raise UsageError("one of --state or --spec-file is required")
    try:
        return load_state(args.state)
    except LookupError:
        raise UsageError(f"unknown state {args.state!r}; catalog: {', '.join(CATALOG_NAMES)}") from None


def _config(args, state: NamedState, copies: int) -> ProtocolConfig:
    return ProtocolConfig(
        state, copies=copies, decoy_pairs=args.decoy_pairs,
        error_threshold=args.threshold, seed=args.seed,
    )


def _document(kind: str, body: dict) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, "command": kind, **body}, indent=2, sort_keys=True) + "\n"


def _kv_lines(rows: list[dict]) -> str:
    return "".join(" ".join(f"{k}={json.dumps(v)}" for k, v in row.items()) + "\n" for row in rows)


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------

def cmd_run(args) -> int:
    state = _state(args)
    message = parse_message(args.message)
    n = state.spec.n
    copies = args.copies if args.copies is not None else math.ceil(len(message) / n)
    cfg = _config(args, state, copies)
    transcript = run_protocol(
        cfg, message, AttackStrategy.from_name(args.attack),
        make_stream(args.seed), _parse_permutation(args.permutation),
    )
    _emit(args, transcript.to_json() if args.format == "json" else transcript.to_log())
    if transcript.aborted:
        return EXIT_ABORT
    return EXIT_OK if transcript.success else EXIT_INTERNAL


def cmd_attack_sweep(args) -> int:
    state = _state(args)
    copies = args.copies if args.copies is not None else 1
    cfg = _config(args, state, copies)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    permutation = _parse_permutation(args.permutation)
    names = [args.attack] if args.attack else list(CLI_NAMES)
    results = []
    for name in names:
        strategy = AttackStrategy.from_name(name)
        try:
            exact = detection_probability_exact(cfg, strategy, permutation)
        except SizeCapError:
            exact = None
        estimate, se = detection_probability_mc(cfg, strategy, args.trials, args.seed, permutation, args.workers)
        results.append({"attack": name, "exact": exact, "mc": estimate, "se": se, "trials": args.trials})
    if args.format == "json":
        text = _document("attack-sweep", {"config": cfg.to_dict(), "results": results})
    else:
        text = _kv_lines(results)
    _emit(args, text)
    return EXIT_OK


def cmd_table(args) -> int:
    state = _state(args)
    try:
        table = build_decode_table(state.spec)
    except AmbiguousTableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    rows = table.to_rows()
    if args.format == "json":
        text = _document("table", {"state": state.name, "rows": rows})
    else:
        text = _kv_lines(rows)
    _emit(args, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    state = _state(args)
    m, l, n = state.spec.m, state.spec.l, state.spec.n
    report = verify_generic_form(state.vector, m, l, n)
    body = {"state": state.name, "m": m, "l": l, "n": n, **report.to_dict()}
    if report.accepted:
        body["leakage"] = leakage_audit(state.spec)
    if args.format == "json":
        text = _document("verify", body)
    else:
        text = _kv_lines([{k: v for k, v in body.items() if k in ("state", "m", "l", "n", "accepted", "reason", "leakage")}])
    _emit(args, text)
    return EXIT_OK if report.accepted else EXIT_INTERNAL


def cmd_efficiency(args) -> int:
    if args.m is not None:
        if args.l is None or args.n is None:
            raise UsageError("--m needs --l and --n")
        m, l, n = args.m, args.l, args.n
    else:
        spec = _state(args).spec
        m, l, n = spec.m, spec.l, spec.n
    reports = [efficiency(m, l, n, conv).to_dict() for conv in CONVENTIONS]
    if args.format == "json":
        text = _document("efficiency", {"m": m, "l": l, "n": n, "reports": reports})
    else:
        text = _kv_lines(reports)
    _emit(args, text)
    return EXIT_OK


def cmd_qkd(args) -> int:
    state = _state(args)
    if args.bits < 0:
        raise UsageError("--bits must be >= 0")
    n = state.spec.n
    key_rng, session_rng = make_stream(args.seed).spawn(2)
    alice_key = "".join(str(b) for b in key_rng.integers(0, 2, size=args.bits))
    copies = args.copies if args.copies is not None else math.ceil(args.bits / n)
    cfg = _config(args, state, copies)
    transcript = run_protocol(cfg, alice_key, AttackStrategy.from_name(args.attack), session_rng)
    aborted = transcript.aborted
    body = {
        "alice_key": None if aborted else alice_key,
        "bob_key": None if aborted else transcript.decoded_message,
        "aborted": aborted,
        "error_rate": None if transcript.decoy_check is None else transcript.decoy_check.error_rate,
    }
    if args.format == "json":
        text = _document("qkd", {"config": cfg.to_dict(), **body})
    else:
        text = _kv_lines([body])
    _emit(args, text)
    if aborted:
        return EXIT_ABORT
    return EXIT_OK if body["alice_key"] == body["bob_key"] else EXIT_INTERNAL


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsqc", description="Orthogonal-state secure direct communication simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, session=True):
        p.add_argument("--state", help=f"catalog state: {', '.join(CATALOG_NAMES)}")
        p.add_argument("--spec-file", help="JSON document describing a custom state")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--format", choices=("log", "json"), default="log")
        if session:
            p.add_argument("--copies", type=int, help="number of resource-state copies N")
            p.add_argument("--decoy-pairs", type=int, help="decoy Bell pairs (default ceil(N*l/2))")
            p.add_argument("--threshold", type=float, default=0.0, help="tolerated decoy error rate")
            p.add_argument("--attack", choices=list(CLI_NAMES), default="none")

    p = sub.add_parser("run", help="run one session and write its transcript")
    common(p)
    p.add_argument("--message", default="", help="binary string, or hex with 0x prefix")
    p.add_argument("--permutation", help="pin the secret permutation, comma-separated")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("attack-sweep", help="exact and Monte-Carlo detection probabilities")
    common(p)
    p.set_defaults(attack=None)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--permutation", help="pin the secret permutation, comma-separated")
    p.set_defaults(func=cmd_attack_sweep)

    p = sub.add_parser("table", help="print the decode table")
    common(p, session=False)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="check a state has the required generic form")
    common(p, session=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("efficiency", help="qubit efficiency under both counting conventions")
    common(p, session=False)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_efficiency)

    p = sub.add_parser("qkd", help="distribute a random key")
    common(p)
    p.add_argument("--bits", type=int, default=16)
    p.set_defaults(func=cmd_qkd)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, LookupError) as exc:
        # ContractViolation and SpecError subclass ValueError
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DSQCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
