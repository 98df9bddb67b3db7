"""Command-line front end: rates, critical points, sweeps, figure datasets.

Exit codes: 0 success, 1 usage or parameter error, 2 numerical failure.
Data goes to stdout, diagnostics to stderr.  Identical command lines produce
byte-identical stdout; floats are rendered with 9 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

import numpy as np

from . import __version__
from .bounds import BOUND_KINDS, COLLECTIVE, DIRECTIONS, GENERAL_W, key_rate
from .errors import BracketError, NoPositiveRegionError, NumericalError
from .protocol import COHERENT, SQUEEZED, ChannelParams, ProtocolParams
from .solvers import analytic_constants, critical_noise, critical_transmission

_KINDS = (COHERENT, SQUEEZED)
_FORMATS = ("text", "csv", "json")
_BASES = ("nats", "bits")
_AXES = ("ra", "t", "eps")
_QUANTITIES = ("rate", "critical-loss", "critical-loss-db", "critical-noise")

# column name and valid sweep axes per quantity
_QUANTITY_COLUMNS = {
    "rate": "key_rate",
    "critical-loss": "t_c",
    "critical-loss-db": "loss_db",
    "critical-noise": "eps_c",
}
_QUANTITY_AXES = {
    "rate": ("ra", "t", "eps"),
    "critical-loss": ("ra", "eps"),
    "critical-loss-db": ("ra", "eps"),
    "critical-noise": ("ra", "t"),
}

_FIG2_HEADER = "ra,loss_db_coherent_general,loss_db_squeezed_general"
_FIG3_HEADER = "loss_db,eps_c_coh_direct,eps_c_coh_reverse,eps_c_sq_direct,eps_c_sq_reverse"


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits 1 (not 2) on usage errors."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text!r}")
    return value


def _steps(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 2:
        raise argparse.ArgumentTypeError("steps must be at least 2")
    return value


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _jnum(value: float) -> float:
    # round to the rendered precision so JSON matches the other formats
    return float(f"{value:.9g}")


def _emit(fmt: str, pairs: list[tuple[str, object]], json_obj: dict) -> None:
    if fmt == "text":
        for name, value in pairs:
            print(f"{name} = {_fmt(value)}")
    elif fmt == "csv":
        print(",".join(name for name, _ in pairs))
        print(",".join(_fmt(value) for _, value in pairs))
    else:
        print(json.dumps(json_obj, separators=(", ", ": ")))


def _check_combination(bound: str, direction: str | None, protocol: str) -> None:
    if bound == GENERAL_W and protocol != COHERENT:
        raise ValueError("general_w requires coherent")
    if bound == COLLECTIVE and direction is None:
        raise ValueError("collective bound requires --direction")
    if bound != COLLECTIVE and direction is not None:
        raise ValueError("--direction is only valid with --bound collective")


def _protocol(ns: argparse.Namespace, modulation: float | None = None) -> ProtocolParams:
    ra = ns.ra if modulation is None else modulation
    return ProtocolParams(modulation=ra, kind=ns.protocol, alice_transmittivity=ns.ta)


def _param_pairs(
    p: ProtocolParams, bound: str, direction: str | None
) -> list[tuple[str, object]]:
    return [
        ("protocol", p.kind),
        ("bound", bound),
        ("direction", direction if direction is not None else ""),
        ("ra", p.modulation),
        ("ta", p.alice_transmittivity),
    ]


def _param_json(
    p: ProtocolParams, bound: str, direction: str | None
) -> dict:
    params: dict = {"protocol": p.kind, "bound": bound}
    if direction is not None:
        params["direction"] = direction
    params["ra"] = _jnum(p.modulation)
    params["ta"] = _jnum(p.alice_transmittivity)
    return params


def _cmd_rate(ns: argparse.Namespace) -> int:
    _check_combination(ns.bound, ns.direction, ns.protocol)
    p = _protocol(ns)
    ch = ChannelParams(transmission=ns.t, excess_noise=ns.eps)
    report = key_rate(ns.bound, p, ch, ns.direction)
    if ns.base == "bits":
        report = report.in_bits()
    pairs = _param_pairs(p, ns.bound, ns.direction)
    pairs += [
        ("t", ch.transmission),
        ("eps", ch.excess_noise),
        ("base", ns.base),
        ("i_ab", report.i_ab),
        ("eve_term", report.eve_term),
        ("key_rate", report.key_rate),
        ("version", __version__),
    ]
    params = _param_json(p, ns.bound, ns.direction)
    params["t"] = _jnum(ch.transmission)
    params["eps"] = _jnum(ch.excess_noise)
    json_obj = {
        "params": params,
        "i_ab": _jnum(report.i_ab),
        "eve_term": _jnum(report.eve_term),
        "key_rate": _jnum(report.key_rate),
        "base": ns.base,
        "version": __version__,
    }
    _emit(ns.format, pairs, json_obj)
    return 0


def _cmd_critical_loss(ns: argparse.Namespace) -> int:
    _check_combination(ns.bound, ns.direction, ns.protocol)
    p = _protocol(ns)
    point = critical_transmission(ns.bound, p, ns.eps, direction=ns.direction)
    pairs = _param_pairs(p, ns.bound, ns.direction)
    pairs += [
        ("eps", ns.eps),
        ("t_c", point.value),
        ("loss_db", point.in_db),
        ("residual", point.residual),
        ("version", __version__),
    ]
    params = _param_json(p, ns.bound, ns.direction)
    params["eps"] = _jnum(ns.eps)
    json_obj = {
        "params": params,
        "critical_value": _jnum(point.value),
        "loss_db": _jnum(point.in_db),
        "residual": _jnum(point.residual),
        "version": __version__,
    }
    _emit(ns.format, pairs, json_obj)
    return 0


def _cmd_critical_noise(ns: argparse.Namespace) -> int:
    _check_combination(ns.bound, ns.direction, ns.protocol)
    p = _protocol(ns)
    point = critical_noise(ns.bound, p, ns.t, direction=ns.direction)
    pairs = _param_pairs(p, ns.bound, ns.direction)
    pairs += [
        ("t", ns.t),
        ("eps_c", point.value),
        ("residual", point.residual),
        ("version", __version__),
    ]
    params = _param_json(p, ns.bound, ns.direction)
    params["t"] = _jnum(ns.t)
    json_obj = {
        "params": params,
        "critical_value": _jnum(point.value),
        "residual": _jnum(point.residual),
        "version": __version__,
    }
    _emit(ns.format, pairs, json_obj)
    return 0


def _sweep_value(ns: argparse.Namespace, axis_value: float) -> float:
    """Evaluate the requested quantity at one grid point."""
    ra = axis_value if ns.x == "ra" else ns.ra
    t = axis_value if ns.x == "t" else ns.t
    eps = axis_value if ns.x == "eps" else ns.eps
    p = ProtocolParams(modulation=ra, kind=ns.protocol, alice_transmittivity=ns.ta)
    if ns.quantity == "rate":
        ch = ChannelParams(transmission=t, excess_noise=eps)
        report = key_rate(ns.bound, p, ch, ns.direction)
        if ns.base == "bits":
            report = report.in_bits()
        return report.key_rate
    if ns.quantity in ("critical-loss", "critical-loss-db"):
        point = critical_transmission(ns.bound, p, eps, direction=ns.direction)
        return point.value if ns.quantity == "critical-loss" else point.in_db
    point = critical_noise(ns.bound, p, t, direction=ns.direction)
    return point.value


def _cmd_sweep(ns: argparse.Namespace) -> int:
    _check_combination(ns.bound, ns.direction, ns.protocol)
    if ns.x not in _QUANTITY_AXES[ns.quantity]:
        raise ValueError(f"axis {ns.x!r} is not sweepable for quantity {ns.quantity!r}")
    if not ns.start < ns.stop:
        raise ValueError("--from must be strictly less than --to")
    if ns.x != "ra" and ns.ra is None:
        raise ValueError("--ra is required unless it is the sweep axis")
    if ns.quantity in ("rate", "critical-noise") and ns.x != "t" and ns.t is None:
        raise ValueError("--t is required unless it is the sweep axis")
    grid = [float(v) for v in np.linspace(ns.start, ns.stop, ns.steps)]
    print(f"{ns.x},{_QUANTITY_COLUMNS[ns.quantity]}")
    succeeded = 0
    for value in grid:
        try:
            result = _sweep_value(ns, value)
        except (ValueError, NoPositiveRegionError, BracketError, NumericalError) as exc:
            print(f"warning: {ns.x}={_fmt(value)}: {exc}", file=sys.stderr)
            print(f"{_fmt(value)},")
            continue
        print(f"{_fmt(value)},{_fmt(result)}")
        succeeded += 1
    return 0 if succeeded else 2


def _cmd_fig2(ns: argparse.Namespace) -> int:
    print(_FIG2_HEADER)
    succeeded = 0
    for ra in [float(v) for v in np.linspace(0.1, 5.0, 50)]:
        cells = [_fmt(ra)]
        for kind in (COHERENT, SQUEEZED):
            p = ProtocolParams(modulation=ra, kind=kind)
            try:
                point = critical_transmission("general", p, 0.0)
                cells.append(_fmt(point.in_db))
                succeeded += 1
            except (ValueError, NoPositiveRegionError, BracketError, NumericalError) as exc:
                print(f"warning: ra={_fmt(ra)} {kind}: {exc}", file=sys.stderr)
                cells.append("")
        print(",".join(cells))
    return 0 if succeeded else 2


def _cmd_fig3(ns: argparse.Namespace) -> int:
    print(_FIG3_HEADER)
    succeeded = 0
    for loss_db in [float(v) for v in np.linspace(0.0, 10.0, 50)]:
        t = 10.0 ** (-loss_db / 10.0)
        cells = [_fmt(loss_db)]
        for kind in (COHERENT, SQUEEZED):
            p = ProtocolParams(modulation=15.0, kind=kind)
            for direction in DIRECTIONS:
                try:
                    point = critical_noise(COLLECTIVE, p, t, direction=direction)
                    cells.append(_fmt(point.value))
                    succeeded += 1
                except (ValueError, NoPositiveRegionError, BracketError, NumericalError) as exc:
                    print(
                        f"warning: loss_db={_fmt(loss_db)} {kind} {direction}: {exc}",
                        file=sys.stderr,
                    )
                    cells.append("")
        print(",".join(cells))
    return 0 if succeeded else 2


def _constants_rows() -> list[tuple[str, float, float]]:
    """(name, analytic, bisected-numeric) rows for the constants command."""
    ac = analytic_constants()
    coh = ProtocolParams(modulation=15.0, kind=COHERENT)
    sq = ProtocolParams(modulation=15.0, kind=SQUEEZED)
    return [
        (
            "t_c_general_w",
            ac.t_c_general_w,
            critical_transmission("general_w", coh, 0.0).value,
        ),
        (
            "t_c_collective_direct",
            ac.t_c_collective_direct,
            critical_transmission(COLLECTIVE, coh, 0.0, direction="direct").value,
        ),
        (
            "eps_c_direct_coherent",
            ac.eps_c_direct_coherent,
            critical_noise(COLLECTIVE, coh, 0.999, direction="direct").value,
        ),
        (
            "eps_c_reverse_coherent",
            ac.eps_c_reverse_coherent,
            critical_noise(COLLECTIVE, coh, 0.999, direction="reverse").value,
        ),
        (
            "eps_c_squeezed",
            ac.eps_c_squeezed,
            critical_noise(COLLECTIVE, sq, 0.999, direction="reverse").value,
        ),
    ]


def _cmd_constants(ns: argparse.Namespace) -> int:
    rows = _constants_rows()
    if ns.format == "text":
        for name, analytic, numeric in rows:
            gap = abs(numeric - analytic)
            print(
                f"{name:<24} analytic {_fmt(analytic):<14} "
                f"numeric {_fmt(numeric):<14} gap {_fmt(gap)}"
            )
        print(f"version = {__version__}")
    elif ns.format == "csv":
        print("name,analytic,numeric,abs_gap")
        for name, analytic, numeric in rows:
            gap = abs(numeric - analytic)
            print(f"{name},{_fmt(analytic)},{_fmt(numeric)},{_fmt(gap)}")
    else:
        obj = {
            "constants": [
                {
                    "name": name,
                    "analytic": _jnum(analytic),
                    "numeric": _jnum(numeric),
                    "abs_gap": _jnum(abs(numeric - analytic)),
                }
                for name, analytic, numeric in rows
            ],
            "version": __version__,
        }
        print(json.dumps(obj, separators=(", ", ": ")))
    return 0


def _batch_pick(entry: dict, key: str, required: bool = False, default=None):
    if key in entry:
        return entry[key]
    if required:
        raise ValueError(f"missing key {key!r}")
    return default


def _batch_line(entry: dict) -> dict:
    cmd = _batch_pick(entry, "cmd", required=True)
    if cmd not in ("rate", "critical-loss", "critical-noise"):
        raise ValueError(f"unknown cmd {cmd!r}")
    protocol = _batch_pick(entry, "protocol", required=True)
    bound = _batch_pick(entry, "bound", required=True)
    direction = _batch_pick(entry, "direction")
    if protocol not in _KINDS:
        raise ValueError(f"unknown protocol {protocol!r}")
    if bound not in BOUND_KINDS:
        raise ValueError(f"unknown bound {bound!r}")
    if direction is not None and direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    _check_combination(bound, direction, protocol)
    ra = float(_batch_pick(entry, "ra", required=True))
    ta = _batch_pick(entry, "ta")
    p = ProtocolParams(
        modulation=ra,
        kind=protocol,
        alice_transmittivity=None if ta is None else float(ta),
    )
    params = _param_json(p, bound, direction)
    if cmd == "rate":
        t = float(_batch_pick(entry, "t", required=True))
        eps = float(_batch_pick(entry, "eps", default=0.0))
        base = _batch_pick(entry, "base", default="nats")
        if base not in _BASES:
            raise ValueError(f"unknown base {base!r}")
        report = key_rate(bound, p, ChannelParams(transmission=t, excess_noise=eps), direction)
        if base == "bits":
            report = report.in_bits()
        params["t"] = _jnum(t)
        params["eps"] = _jnum(eps)
        return {
            "params": params,
            "i_ab": _jnum(report.i_ab),
            "eve_term": _jnum(report.eve_term),
            "key_rate": _jnum(report.key_rate),
            "base": base,
            "version": __version__,
        }
    if cmd == "critical-loss":
        eps = float(_batch_pick(entry, "eps", default=0.0))
        point = critical_transmission(bound, p, eps, direction=direction)
        params["eps"] = _jnum(eps)
        return {
            "params": params,
            "critical_value": _jnum(point.value),
            "loss_db": _jnum(point.in_db),
            "residual": _jnum(point.residual),
            "version": __version__,
        }
    t = float(_batch_pick(entry, "t", required=True))
    point = critical_noise(bound, p, t, direction=direction)
    params["t"] = _jnum(t)
    return {
        "params": params,
        "critical_value": _jnum(point.value),
        "residual": _jnum(point.residual),
        "version": __version__,
    }


def _cmd_batch(ns: argparse.Namespace) -> int:
    try:
        with open(ns.input, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        print(f"error: cannot read {ns.input!r}: {exc}", file=sys.stderr)
        return 1
    succeeded = 0
    attempted = 0
    for number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        attempted += 1
        try:
            entry = json.loads(line)
            if not isinstance(entry, dict):
                raise ValueError("each line must be a JSON object")
            result = _batch_line(entry)
        except (ValueError, NoPositiveRegionError, BracketError, NumericalError) as exc:
            print(json.dumps({"line": number, "error": str(exc)}, separators=(", ", ": ")))
            print(f"warning: line {number}: {exc}", file=sys.stderr)
            continue
        print(json.dumps(result, separators=(", ", ": ")))
        succeeded += 1
    if attempted == 0:
        return 0
    return 0 if succeeded else 2


def _add_protocol_flags(sub: argparse.ArgumentParser, ra_required: bool = True) -> None:
    sub.add_argument("--protocol", choices=_KINDS, required=True)
    sub.add_argument("--bound", choices=BOUND_KINDS, required=True)
    sub.add_argument("--direction", choices=DIRECTIONS, default=None)
    if ra_required:
        sub.add_argument("--ra", type=_finite, required=True, help="modulation parameter")
    else:
        sub.add_argument("--ra", type=_finite, default=None, help="modulation parameter")
    sub.add_argument("--ta", type=_finite, default=None, help="key-splitter transmittivity")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvkey", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"cvkey {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    rate = subs.add_parser("rate", help="key rate at one parameter point")
    _add_protocol_flags(rate)
    rate.add_argument("--t", type=_finite, required=True, help="channel transmission")
    rate.add_argument("--eps", type=_finite, default=0.0, help="excess noise")
    rate.add_argument("--base", choices=_BASES, default="nats")
    rate.add_argument("--format", choices=_FORMATS, default="text")
    rate.set_defaults(handler=_cmd_rate)

    closs = subs.add_parser("critical-loss", help="transmission where the rate vanishes")
    _add_protocol_flags(closs)
    closs.add_argument("--eps", type=_finite, default=0.0, help="excess noise")
    closs.add_argument("--format", choices=_FORMATS, default="text")
    closs.set_defaults(handler=_cmd_critical_loss)

    cnoise = subs.add_parser("critical-noise", help="excess noise where the rate vanishes")
    _add_protocol_flags(cnoise)
    cnoise.add_argument("--t", type=_finite, required=True, help="channel transmission")
    cnoise.add_argument("--format", choices=_FORMATS, default="text")
    cnoise.set_defaults(handler=_cmd_critical_noise)

    sweep = subs.add_parser("sweep", help="CSV sweep of a quantity along one axis")
    sweep.add_argument("--x", choices=_AXES, required=True, help="sweep axis")
    sweep.add_argument("--from", dest="start", type=_finite, required=True)
    sweep.add_argument("--to", dest="stop", type=_finite, required=True)
    sweep.add_argument("--steps", type=_steps, required=True)
    sweep.add_argument("--quantity", choices=_QUANTITIES, required=True)
    sweep.add_argument("--protocol", choices=_KINDS, required=True)
    sweep.add_argument("--bound", choices=BOUND_KINDS, required=True)
    sweep.add_argument("--direction", choices=DIRECTIONS, default=None)
    sweep.add_argument("--ra", type=_finite, default=None)
    sweep.add_argument("--ta", type=_finite, default=None)
    sweep.add_argument("--t", type=_finite, default=None)
    sweep.add_argument("--eps", type=_finite, default=0.0)
    sweep.add_argument("--base", choices=_BASES, default="nats")
    sweep.set_defaults(handler=_cmd_sweep)

    fig2 = subs.add_parser("fig2", help="tolerable losses vs modulation dataset")
    fig2.set_defaults(handler=_cmd_fig2)

    fig3 = subs.add_parser("fig3", help="tolerable excess noise vs losses dataset")
    fig3.set_defaults(handler=_cmd_fig3)

    consts = subs.add_parser("constants", help="closed-form constants vs bisected values")
    consts.add_argument("--format", choices=_FORMATS, default="text")
    consts.set_defaults(handler=_cmd_constants)

    batch = subs.add_parser("batch", help="newline-delimited JSON requests")
    batch.add_argument("--input", required=True, help="NDJSON parameter file")
    batch.set_defaults(handler=_cmd_batch)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        return ns.handler(ns)
    except NoPositiveRegionError as exc:
        print(f"error: no-positive-region: {exc}", file=sys.stderr)
        return 2
    except (BracketError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
