"""Command-line front end.

Exit codes: 0 success, 2 invalid parameters, 3 numerical failure
(quadrature, truncation or oracle disagreement).
"""

import argparse
import json
import math
import sys

from . import __version__, analysis, states, verify, waveguide
from .errors import DomainError, OracleDisagreement, QuadratureError, TruncationError, UndefinedMomentError
from .serialize import FORMATS, serialize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_TAUS = {"i": 1.0, "ii": 2.32, "iii": 5.0, "iv": 20.0}
_MS = {"a": 0, "b": 1, "c": 5, "d": 10}
_XS = {"a": 1.0, "b": 5.0, "c": 10.0, "d": 20.0}


def _build_presets():
    presets = {"fig4": ("mandel", {"m": 0, "tau_max": 20.0, "steps": 400})}
    for sub, x in _XS.items():
        presets[f"fig2-{sub}"] = ("qfunc", {"recipe": "exact", "tau": x})
        presets[f"fig3-{sub}"] = ("pdist", {"recipe": "exact", "tau": x})
    for row, m in _MS.items():
        presets[f"fig7-{row}"] = ("mandel", {"m": m, "tau_max": 20.0, "steps": 400})
        for col, tau in _TAUS.items():
            presets[f"fig5-{row}-{col}"] = ("qfunc", {"recipe": "evolved", "m": m, "tau": tau})
            presets[f"fig6-{row}-{col}"] = ("pdist", {"recipe": "evolved", "m": m, "tau": tau})
    return presets


PRESETS = _build_presets()

DEFAULTS = {
    "recipe": "evolved",
    "m": 0,
    "tau": 1.0,
    "window": (-analysis.DEFAULT_HALF_WIDTH, analysis.DEFAULT_HALF_WIDTH),
    "im_window": None,
    "res": analysis.DEFAULT_RESOLUTION,
    "tau_min": None,
    "tau_max": 20.0,
    "steps": 400,
    "z": 1.0,
    "method": "closed",
    "tol": 1e-10,
    "truncation": None,
}


def _window(text):
    lo, sep, hi = text.partition(":")
    try:
        lo, hi = float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {text!r}") from None
    if not sep or hi <= lo:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI with LO < HI, got {text!r}")
    return lo, hi


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=FORMATS, help="csv or json (default: from --out suffix, else csv)")
    common.add_argument("--truncation", type=int, help="basis cutoff N (default: automatic)")
    common.add_argument("--preset", choices=sorted(PRESETS), help="named parameter set for one figure panel (fig2-a, fig5-b-iii, ...)")

    state_args = argparse.ArgumentParser(add_help=False)
    state_args.add_argument("--recipe", choices=("approx", "exact", "evolved"))
    state_args.add_argument("--m", type=int, help="initial number state (evolved recipe)")
    state_args.add_argument("--tau", "--x", dest="tau", type=float, help="tau = eta t, or displacement x")

    parser = argparse.ArgumentParser(prog="sgcoherent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("state", parents=[common, state_args], help="number-basis amplitudes")
    q = sub.add_parser("qfunc", parents=[common, state_args], help="Husimi Q on a grid")
    q.add_argument("--window", type=_window, help="LO:HI for both axes (default -8:8)")
    q.add_argument("--im-window", type=_window, help="LO:HI for the imaginary axis")
    q.add_argument("--res", type=int, help="points per axis (default 257)")
    sub.add_parser("pdist", parents=[common, state_args], help="photon-number distribution")

    mandel = sub.add_parser("mandel", parents=[common], help="Mandel Q scan over tau")
    mandel.add_argument("--m", type=int)
    mandel.add_argument("--tau-min", type=float, help="default tau_max / steps")
    mandel.add_argument("--tau-max", type=float)
    mandel.add_argument("--steps", type=int)

    wg = sub.add_parser("waveguide", parents=[common], help="semi-infinite waveguide array")
    wg.add_argument("--m", type=int, help="excited site")
    wg.add_argument("--z", type=float, help="normalised propagation distance")
    wg.add_argument("--method", choices=("closed", "ode"))
    wg.add_argument("--tol", type=float)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("--out", default="-", help="report path ('-' for stdout)")
    v.add_argument("--format", choices=FORMATS)
    return parser


def _join_negative_windows(argv):
    # "--window -6:6" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--window", "--im-window"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _resolve(args, parser):
    """Fill unset options from the preset, then from DEFAULTS."""
    params = {}
    preset = {}
    if getattr(args, "preset", None):
        command, preset = PRESETS[args.preset]
        if command != args.command:
            parser.error(f"preset {args.preset} belongs to the '{command}' command")
    for key, default in DEFAULTS.items():
        if not hasattr(args, key):
            continue
        value = getattr(args, key)
        if value is None:
            value = preset.get(key, default)
        params[key] = value
    return params


def _validate(params, parser):
    for key in ("tau", "tau_min", "tau_max", "z", "tol"):
        value = params.get(key)
        if value is not None and not math.isfinite(value):
            parser.error(f"--{key.replace('_', '-')} must be finite")
    if params.get("m", 0) < 0:
        parser.error("--m must be non-negative")
    if "res" in params and params["res"] < 2:
        parser.error("--res must be at least 2")
    if "steps" in params and params["steps"] < 2:
        parser.error("--steps must be at least 2")
    if "tol" in params and params["tol"] <= 0:
        parser.error("--tol must be positive")
    if params.get("truncation") is not None and params["truncation"] < 1:
        parser.error("--truncation must be at least 1")


def _make_state(p):
    N = p["truncation"]
    if p["recipe"] == "approx":
        return states.sg_displaced_approx(p["tau"], N)
    if p["recipe"] == "exact":
        return states.sg_vacuum_displaced(p["tau"], N)
    return states.sg_evolved(p["m"], p["tau"], N)


def _state_meta(state):
    return {"truncation": state.truncation, "tail_bound": state.tail_bound}


def _compute(command, p):
    if command == "state":
        s = _make_state(p)
        return s, _state_meta(s)
    if command == "pdist":
        s = _make_state(p)
        return analysis.photon_distribution(s), _state_meta(s)
    if command == "qfunc":
        s = _make_state(p)
        grid = analysis.husimi_grid(s, p["window"], p["im_window"], p["res"])
        return grid, _state_meta(s)
    if command == "mandel":
        tau_min = p["tau_min"] if p["tau_min"] is not None else p["tau_max"] / p["steps"]
        series = analysis.mandel_scan(tau_min, p["tau_max"], p["steps"], p["m"])
        return series, {"truncation": "auto", "tau_min": tau_min}
    if command == "waveguide":
        N = p["truncation"] if p["truncation"] is not None else waveguide.default_sites(p["m"], p["z"])
        if p["method"] == "ode":
            field = waveguide.propagate_ode(p["m"], p["z"], N, tol=p["tol"])
        else:
            field = waveguide.WaveguideField(waveguide.modal_amplitudes(p["m"], p["z"], N), p["z"], p["m"])
        return field, {"truncation": N}
    raise AssertionError(command)


def _params_meta(params):
    out = {}
    for k, v in params.items():
        out[k] = list(v) if isinstance(v, tuple) else v
    return out


def _write(data, path):
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(path, "wb") as fh:
            fh.write(data)


def _format_for(args):
    if args.format:
        return args.format
    return "json" if str(args.out).lower().endswith(".json") else "csv"


def _run_verify(args):
    results = verify.run_suite()
    fmt = _format_for(args)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name}: {r.detail} ({r.seconds:.2f}s)", file=sys.stderr)
    cols = {
        "check": [r.name for r in results],
        "passed": [int(r.passed) for r in results],
    }
    if args.out != "-" or args.format:
        if fmt == "json":
            doc = {"meta": {"command": "verify", "version": __version__},
                   "data": {**cols, "detail": [r.detail for r in results]}}
            data = (json.dumps(doc) + "\n").encode()
        else:
            lines = ['# command: "verify"', f"# version: {json.dumps(__version__)}", "check,passed"]
            lines += [f"{c},{p}" for c, p in zip(cols["check"], cols["passed"])]
            data = ("\n".join(lines) + "\n").encode()
        _write(data, args.out)
    return EXIT_OK if all(r.passed for r in results) else 1


def run(argv=None):
    """Parse ``argv``, compute, write the artifact; returns the exit status."""
    parser = build_parser()
    argv = _join_negative_windows(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command == "verify":
        return _run_verify(args)

    try:
        params = _resolve(args, parser)
        _validate(params, parser)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        result, extra = _compute(args.command, params)
    except (DomainError, UndefinedMomentError) as exc:
        print(f"sgcoherent: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, TruncationError, OracleDisagreement, ArithmeticError) as exc:
        print(f"sgcoherent: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    meta = {"command": args.command, "version": __version__,
            "preset": getattr(args, "preset", None), "params": _params_meta(params)}
    meta.update(extra)
    try:
        _write(serialize(result, _format_for(args), meta), args.out)
    except OSError as exc:
        print(f"sgcoherent: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
