"""Command-line driver.

Exit codes: 0 success, 1 domain error (infeasible scheme where a feasible one
is needed, inconsistent decode, overflow), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from typing import Optional, Sequence

from . import core, decoder, known_eps, search
from .core import CostKind, InfeasibleSchemeError, InvalidSchemeError, Scheme

log = logging.getLogger("apsimon")


class UsageError(Exception):
    pass


class DomainError(Exception):
    pass


def load_scheme(path: str) -> Scheme:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read scheme file {path}: {exc}") from None
    try:
        return Scheme.from_json(data)
    except InvalidSchemeError as exc:
        raise UsageError(f"invalid scheme in {path}: {exc}") from None


def _fake_mask(text: str) -> int:
    text = text.strip()
    if not text:
        return 0
    try:
        return core.mask_from_indices(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --fake value {text!r}: {exc}") from None


def _rational(text: str):
    try:
        return decoder.parse_rational(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _pair(text: str) -> tuple[int, int]:
    try:
        c, m = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected C,M, got {text!r}") from None
    return c, m


def _render_scheme(scheme: Optional[Scheme]) -> str:
    if scheme is None:
        return "-"
    return " ".join("(" + ",".join(map(str, col)) + ")" for col in scheme.columns)


def _emit(payload: dict, fmt: str, table_lines: Sequence[str] = ()) -> None:
    if fmt == "table" and table_lines:
        print("\n".join(table_lines))
    else:
        print(json.dumps(payload))


# ---------------------------------------------------------------- commands


def cmd_verify(args) -> int:
    scheme = load_scheme(args.scheme)
    report = core.verify_scheme(scheme)
    payload = report.to_json()
    lines = [f"feasible: {report.feasible}"]
    if report.witness:
        a, b = (core.mask_to_indices(m) for m in report.witness)
        lines.append(f"collinear subsets: {a} and {b}")
    for kind in CostKind:
        lines.append(f"{kind.value}: {core.cost(scheme, kind)}")
    _emit(payload, args.format, lines)
    return 0


def _search_config(args, n: int) -> search.SearchConfig:
    return search.SearchConfig(
        n_mints=n,
        cost_kind=CostKind(args.cost),
        cap=args.cap,
        node_limit=args.node_limit,
        time_limit=args.time_limit,
        threads=args.threads,
    )


def cmd_search(args) -> int:
    config = _search_config(args, args.mints)
    result = search.search_optimal(config, checkpoint=args.checkpoint, resume=args.resume,
                                   checkpoint_interval=args.checkpoint_interval)
    lines = [
        f"status: {result.status.value}",
        f"best cost: {result.best_cost}",
        f"scheme: {_render_scheme(result.best_scheme)}",
        f"nodes: {result.stats.nodes}",
    ]
    _emit(result.to_json(), args.format, lines)
    return 0


def cmd_capacity(args) -> int:
    result = search.capacity_max_mints(args.cap, node_limit=args.node_limit, time_limit=args.time_limit)
    lines = [
        f"cap: {result.cap}",
        f"max mints: {result.max_mints} ({'proven' if result.proven else 'unproven'})",
        f"witness: {_render_scheme(result.witness)}",
    ]
    _emit(result.to_json(), args.format, lines)
    return 0


def cmd_table(args) -> int:
    rows = []
    lines = [f"{'n':>3} {'cost':>6} {'status':<10} scheme"]
    for n in range(1, args.max_mints + 1):
        result = search.search_optimal(_search_config(args, n))
        rows.append({
            "mints": n,
            "best_cost": result.best_cost,
            "status": result.status.value,
            "scheme": result.best_scheme.to_json() if result.best_scheme else None,
        })
        lines.append(f"{n:>3} {result.best_cost!s:>6} {result.status.value:<10} "
                     f"{_render_scheme(result.best_scheme)}")
    payload = {"cost": args.cost, "costs": [r["best_cost"] for r in rows], "rows": rows}
    _emit(payload, args.format, lines)
    return 0


def cmd_bounds(args) -> int:
    witness = _pair(args.capacity_witness) if args.capacity_witness else None
    try:
        lower, upper = core.bounds(args.mints, witness)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit({"mints": args.mints, "lower": lower, "upper": upper}, args.format,
          [f"{lower} <= optimum({args.mints}) <= {upper}"])
    return 0


def cmd_simulate(args) -> int:
    scheme = load_scheme(args.scheme)
    mask = _fake_mask(args.fake)
    if mask >= 1 << scheme.n_mints:
        raise UsageError(f"--fake names a mint beyond {scheme.n_mints}")
    try:
        readings = decoder.simulate_weighings(scheme, _rational(args.genuine_weight),
                                              _rational(args.epsilon), mask)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = [decoder.format_rational(x) for x in readings]
    _emit({"weighings": out}, args.format, [f"weighing {j + 1}: {x}" for j, x in enumerate(out)])
    return 0


def cmd_decode(args) -> int:
    scheme = load_scheme(args.scheme)
    observed = [_rational(x) for x in args.observed.split(",")]
    if len(observed) != 2 or scheme.n_weighings != 2:
        raise UsageError("decode needs a two-weighing scheme and exactly two observed weights")
    w = _rational(args.genuine_weight)
    if w <= 0:
        raise UsageError("genuine weight must be positive")
    outcome = decoder.decode(scheme, w, observed)
    if isinstance(outcome, decoder.FakeSet):
        line = f"fake mints: {core.mask_to_indices(outcome.mask)}"
    elif isinstance(outcome, decoder.AllGenuine):
        line = "all mints genuine"
    else:
        line = f"inconsistent: {outcome.reason}"
    _emit(outcome.to_json(), args.format, [line])
    if isinstance(outcome, decoder.Inconsistent):
        raise DomainError(outcome.reason)
    return 0


def cmd_known_eps(args) -> int:
    if args.action == "verify":
        if not args.scheme:
            raise UsageError("known-eps verify needs --scheme")
        report = known_eps.verify_injective(load_scheme(args.scheme))
        _emit(report.to_json(), args.format, [f"injective: {report.feasible}"])
        return 0
    if args.mints is None:
        raise UsageError("known-eps search needs --mints")
    try:
        result = known_eps.search_known_eps(args.mints, args.weighings, node_limit=args.node_limit,
                                            time_limit=args.time_limit)
    except search.ConfigError as exc:
        raise UsageError(str(exc)) from None
    _emit(result.to_json(), args.format, [
        f"status: {result.status.value}",
        f"best cost: {result.best_cost}",
        f"scheme rows: {result.best_scheme.rows if result.best_scheme else '-'}",
    ])
    return 0


# ---------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    limits = argparse.ArgumentParser(add_help=False)
    limits.add_argument("--node-limit", type=_positive_int)
    limits.add_argument("--time-limit", type=_positive_float, metavar="SECONDS")

    costs = [k.value for k in CostKind]
    p = argparse.ArgumentParser(prog="apsimon-mints", description="ApSimon's mints: verify, search, decode.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check a scheme")
    s.add_argument("--scheme", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common, limits], help="minimum-cost scheme for N mints")
    s.add_argument("--mints", type=_positive_int, required=True)
    s.add_argument("--cost", choices=costs, default="total-max")
    s.add_argument("--cap", type=_positive_int)
    s.add_argument("--checkpoint", metavar="FILE")
    s.add_argument("--checkpoint-interval", type=_positive_float, default=60.0, metavar="SECONDS")
    s.add_argument("--resume", metavar="FILE")
    s.add_argument("--threads", type=_positive_int, default=1)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("capacity", parents=[common, limits], help="most mints testable with counts <= C")
    s.add_argument("--cap", type=_positive_int, required=True)
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("table", parents=[common, limits], help="optimal costs for 1..N mints")
    s.add_argument("--max-mints", type=_positive_int, required=True)
    s.add_argument("--cost", choices=costs, default="total-max")
    s.add_argument("--cap", type=_positive_int)
    s.add_argument("--threads", type=_positive_int, default=1)
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("bounds", parents=[common], help="lower/upper bounds on the optimum")
    s.add_argument("--mints", type=_positive_int, required=True)
    s.add_argument("--capacity-witness", metavar="C,M")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("simulate", parents=[common], help="weighing totals for a hidden fake set")
    s.add_argument("--scheme", required=True)
    s.add_argument("--genuine-weight", required=True)
    s.add_argument("--epsilon", required=True)
    s.add_argument("--fake", required=True, help="comma-separated 1-based mint numbers ('' for none)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("decode", parents=[common], help="fake set from two weighing totals")
    s.add_argument("--scheme", required=True)
    s.add_argument("--genuine-weight", required=True)
    s.add_argument("--observed", required=True, metavar="R,R")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("known-eps", parents=[common, limits], help="variant with known deviation")
    s.add_argument("action", choices=["verify", "search"])
    s.add_argument("--scheme")
    s.add_argument("--mints", type=_positive_int)
    s.add_argument("--weighings", type=_positive_int, default=2)
    s.set_defaults(func=cmd_known_eps)
    return p


_RATIONAL_OPTS = {"--epsilon", "--genuine-weight", "--observed"}
_NEGATIVE_VALUE = re.compile(r"^-\d+(/\d+)?(,-?\d+(/\d+)?)*$")


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse takes "-1/3" for an option; glue such values to their flag
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _RATIONAL_OPTS:
            nxt = next(it, None)
            if nxt is not None and _NEGATIVE_VALUE.match(nxt):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except search.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, InfeasibleSchemeError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
