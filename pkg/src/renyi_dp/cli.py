"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 I/O failure, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Iterable, Sequence

from renyi_dp.accountant import (
    DEFAULT_GRID,
    OrdersGrid,
    RdpCurve,
    optimal_eps_for_delta,
    probability_interval,
)
from renyi_dp.experiments import (
    FIGURE2_HEADER,
    FIGURE2_N_MAX,
    FIGURE3_BASELINES,
    FIGURE3_HEADER,
    FIGURE3_N_MAX,
    figure2_mechanism,
    figure2_rows,
    figure3_rows,
    mixed_curve,
)
from renyi_dp.mechanisms import Gaussian, Laplace, PureDP, RandomizedResponse, TabulatedRdp

EXIT_INPUT = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4

_PARAMETERS = {
    "randomized_response": ("p", RandomizedResponse),
    "laplace": ("lambda", Laplace),
    "gaussian": ("sigma", Gaussian),
    "pure_dp": ("eps", PureDP),
}


class SpecError(ValueError):
    pass


class _IOFailure(Exception):
    pass


def fmt(value: float) -> str:
    """12 significant digits; infinities as ``inf``."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.12g}"


def _number(entry: dict, key: str, where: str) -> float:
    if key not in entry:
        raise SpecError(f"{where}: missing field {key!r}")
    value = entry[key]
    if value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{where}: field {key!r} must be a number, got {value!r}")
    return float(value)


def _mechanism_from_entry(entry, where: str):
    if not isinstance(entry, dict):
        raise SpecError(f"{where}: expected an object")
    kind = entry.get("mechanism")
    if kind == "rdp_table":
        allowed = {"mechanism", "orders", "eps", "count"}
        orders, eps = entry.get("orders"), entry.get("eps")
        if not isinstance(orders, list) or not isinstance(eps, list):
            raise SpecError(f"{where}: rdp_table needs list fields 'orders' and 'eps'")
        build = lambda: TabulatedRdp(
            tuple(_number({"orders": a}, "orders", where) for a in orders),
            tuple(_number({"eps": e}, "eps", where) for e in eps),
        )
        field_name = "orders"
    elif kind in _PARAMETERS:
        field_name, cls = _PARAMETERS[kind]
        allowed = {"mechanism", field_name, "count"}
        value = _number(entry, field_name, where)
        build = lambda: cls(value)
    else:
        raise SpecError(
            f"{where}: field 'mechanism' must be one of "
            f"{sorted([*_PARAMETERS, 'rdp_table'])}, got {kind!r}"
        )
    extra = set(entry) - allowed
    if extra:
        raise SpecError(f"{where}: unexpected field {sorted(extra)[0]!r}")
    count = entry.get("count", 1)
    if isinstance(count, bool) or not isinstance(count, int) or count < 1:
        raise SpecError(f"{where}: field 'count' must be a positive integer, got {count!r}")
    try:
        mechanism = build()
    except ValueError as exc:
        raise SpecError(f"{where}: field {field_name!r}: {exc}") from None
    return mechanism, count


def parse_spec(document) -> RdpCurve:
    """Builds a curve from a parsed composition document."""
    if not isinstance(document, dict) or "composition" not in document:
        raise SpecError("top level: missing field 'composition'")
    entries = document["composition"]
    if not isinstance(entries, list) or not entries:
        raise SpecError("field 'composition' must be a nonempty array")
    return RdpCurve(tuple(
        _mechanism_from_entry(entry, f"composition[{i}]") for i, entry in enumerate(entries)
    ))


def load_spec(path: str) -> RdpCurve:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _IOFailure(f"cannot read spec {path}: {exc}") from None
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: malformed JSON: {exc}") from None
    return parse_spec(document)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, int) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {out}: {exc}") from None


def cmd_curve(args) -> None:
    curve = load_spec(args.spec)
    rows = [(a, curve.evaluate(a)) for a in args.orders]
    _emit(csv_text(("alpha", "epsilon"), rows), args.out)


def cmd_convert(args) -> None:
    if not 0 < args.delta < 1:
        raise SpecError(f"--delta must be in (0, 1), got {args.delta}")
    curve = load_spec(args.spec)
    report = optimal_eps_for_delta(curve, args.delta, args.orders, args.continuous)
    print(f"({fmt(report.eps)}, {fmt(report.delta)})-DP, optimal order {fmt(report.alpha)}")
    print(f"eps={fmt(report.eps)} delta={fmt(report.delta)} alpha={fmt(report.alpha)}")


def cmd_bound(args) -> None:
    if not 0 <= args.baseline <= 1:
        raise SpecError(f"--baseline must be in [0, 1], got {args.baseline}")
    curve = load_spec(args.spec)
    r = probability_interval(curve, args.baseline, args.orders, args.continuous)
    note = " (vacuous upper bound)" if r.vacuous else ""
    print(f"Pr in [{fmt(r.lower)}, {fmt(r.upper)}] for baseline {fmt(args.baseline)}{note}")
    print(
        f"lower={fmt(r.lower)} upper={fmt(r.upper)} "
        f"alpha_lower={fmt(r.alpha_lower)} alpha_upper={fmt(r.alpha_upper)} "
        f"vacuous={str(r.vacuous).lower()}"
    )


def cmd_figure2(args) -> None:
    if not 0 < args.baseline < 1:
        raise SpecError(f"--baseline must be in (0, 1), got {args.baseline}")
    if args.n_max < 1:
        raise SpecError("--n-max must be at least 1")
    mechanism = figure2_mechanism(args.mechanism, args.param)
    rows = figure2_rows(mechanism, args.baseline, args.n_max)
    _emit(csv_text(FIGURE2_HEADER, rows), args.out)


def cmd_figure3(args) -> None:
    if any(not 0 < q < 1 for q in args.baseline):
        raise SpecError(f"--baseline values must be in (0, 1), got {args.baseline}")
    if args.n_max < 0:
        raise SpecError("--n-max must be non-negative")
    round_curve = mixed_curve(args.rr_p, args.laplace_scale, args.gaussian_sigma)
    rows = figure3_rows(args.baseline, args.n_max, round_curve)
    _emit(csv_text(FIGURE3_HEADER, rows), args.out)


def _orders(text: str) -> OrdersGrid:
    try:
        return OrdersGrid.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi-dp", description="Renyi differential privacy accounting."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def spec_command(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--spec", required=True, help="composition JSON file")
        p.add_argument("--orders", type=_orders, default=DEFAULT_GRID,
                       help="'default' or comma-separated orders, e.g. 2,4,inf")
        p.set_defaults(func=func)
        return p

    p = spec_command("curve", cmd_curve, "tabulate the budget curve as CSV")
    p.add_argument("--out", help="output CSV (stdout if omitted)")

    p = spec_command("convert", cmd_convert, "tightest (eps, delta)-DP statement")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--continuous", action="store_true", help="also search all orders")

    p = spec_command("bound", cmd_bound, "range of an event's probability on a neighbour")
    p.add_argument("--baseline", type=float, required=True, help="event probability q")
    p.add_argument("--continuous", action="store_true", help="also search all orders")

    p = sub.add_parser("figure2", help="four composition bounds for n = 1..N")
    p.add_argument("--mechanism", choices=("rr", "laplace"), required=True)
    p.add_argument("--param", type=float, default=None,
                   help="override p (rr, default 0.51) or lambda (laplace, default 20)")
    p.add_argument("--baseline", type=float, default=1e-3)
    p.add_argument("--n-max", type=int, default=FIGURE2_N_MAX)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("figure3", help="grid vs continuous orders for a mixed composition")
    p.add_argument("--baseline", type=_float_list, default=FIGURE3_BASELINES,
                   help="comma-separated event probabilities")
    p.add_argument("--n-max", type=int, default=FIGURE3_N_MAX)
    p.add_argument("--rr-p", type=float, default=0.52)
    p.add_argument("--laplace-scale", type=float, default=20.0)
    p.add_argument("--gaussian-sigma", type=float, default=10.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure3)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
