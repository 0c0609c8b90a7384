"""Command-line driver.

Three data pipelines plus a figure-rendering report path:

    ostrokit integrability --equation ostrovsky
    ostrokit waves --p 1 --q 0
    ostrokit waves --scan --p -1:1 --q -2:2 --grid 41x41 --output scan.csv
    ostrokit simulate --config run.cfg --output series.csv
    ostrokit report waves --scan ... --outdir out/
    ostrokit report simulate --config run.cfg --outdir out/

Reports are deterministic: JSON bodies have stable key order and CSV bodies
contain no timestamps; the run manifest (command, arguments, version, input
hashes, timestamp) is segregated into its own block or sidecar file.

Exit codes: 0 success / no obstruction; 2 usage, parse or config errors;
10 integrability obstruction found; 11 conservation drift over budget;
12 simulation blow-up.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .equation import EquationError, parse_equation, resolve_alias
from .recursion import (
    DEFAULT_DEPTH,
    DEFAULT_MAX_ORDER,
    VERDICT_OBSTRUCTION,
    verdict,
)
from .simulator import (
    SimConfig,
    SimulatorError,
    initial_state,
    integrate,
    load_config,
    series_csv,
    variational_residual,
    write_snapshot,
)
from .waves import (
    DEFAULT_TOL,
    WaveError,
    WaveParams,
    characteristic_roots,
    classify,
    existence_flags,
    existence_label_pq,
    scan,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_OBSTRUCTION = 10
EXIT_DRIFT = 11
EXIT_BLOWUP = 12


class CliError(Exception):
    """Usage-level failure; maps to exit code 2."""


# --------------------------------------------------------------------------
# manifest and output plumbing
# --------------------------------------------------------------------------


def _manifest(command: str, args: argparse.Namespace, hashes: dict) -> dict:
    arg_items = {
        k: v for k, v in sorted(vars(args).items()) if k != "func" and v is not None
    }
    return {
        "command": command,
        "arguments": arg_items,
        "version": __version__,
        "input_hashes": hashes,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _emit_json(body: dict, manifest: dict, output: str | None) -> None:
    document = {"schema": 1, "manifest": manifest, "report": body}
    text = json.dumps(document, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(body: str, manifest: dict, output: str | None) -> None:
    if output:
        Path(output).write_text(body)
        sidecar = Path(str(output) + ".manifest.json")
        sidecar.write_text(json.dumps(manifest, indent=2) + "\n")
    else:
        sys.stdout.write(body)
        print(json.dumps(manifest), file=sys.stderr)


# --------------------------------------------------------------------------
# integrability
# --------------------------------------------------------------------------


def _load_equation_text(spec: str) -> str:
    text = resolve_alias(spec)
    if text == spec and "=" not in spec:
        path = Path(spec)
        if path.is_file():
            return path.read_text().strip()
        raise CliError(
            f"--equation {spec!r} is neither a known alias, an equation, nor a file"
        )
    return text


def cmd_integrability(args: argparse.Namespace) -> int:
    text = _load_equation_text(args.equation)
    try:
        eq = parse_equation(text, max_degree=args.max_degree,
                            n_xi=max(args.max_order, 2))
    except EquationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = verdict(eq, max_order=args.max_order, depth=args.depth,
                     exhaustive=args.exhaustive)
    body = report.to_json()
    manifest = _manifest("integrability", args, {"equation": _sha256(text)})
    if args.format == "json":
        _emit_json(body, manifest, args.output)
    else:
        lines = [
            f"equation: {body['equation']}",
            f"omega: {body['omega']}",
        ]
        for i, ak in enumerate(body["a"], start=1):
            lines.append(f"a{i}: {ak}")
        for phi in body["phi"]:
            lines.append(f"phi_{phi['m']} = {phi['value']}")
            for entry in phi["expansion"]:
                flag = "local" if entry["is_local"] else "NOT LOCAL"
                lines.append(
                    f"  eta^-{entry['n']}: {entry['coefficient']}  [{flag}]"
                )
        if body["first_obstruction"]:
            fo = body["first_obstruction"]
            lines.append(
                f"first obstruction at (m={fo['m']}, n={fo['n']}): "
                f"{fo['coefficient']}"
            )
        lines.append(f"verdict: {body['verdict']}")
        lines.append(f"note: {body['necessary_condition_disclaimer']}")
        text_out = "\n".join(lines) + "\n"
        if args.output:
            Path(args.output).write_text(text_out)
        else:
            sys.stdout.write(text_out)
    return EXIT_OBSTRUCTION if report.verdict == VERDICT_OBSTRUCTION else EXIT_OK


# --------------------------------------------------------------------------
# waves
# --------------------------------------------------------------------------


def _parse_range(text: str) -> tuple[float, float]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise CliError(f"expected lo:hi range, got {text!r}")
    return float(lo), float(hi)


def _parse_grid(text: str) -> tuple[int, int]:
    a, sep, b = text.lower().partition("x")
    if not sep:
        raise CliError(f"expected RxC grid spec, got {text!r}")
    return int(a), int(b)


def _scan_csv(rows) -> str:
    lines = ["p,q,label,eigen_structure,existence_flag"]
    for r in rows:
        lines.append(f"{r.p!r},{r.q!r},{r.label},{r.eigen_structure},{r.existence_flag}")
    return "\n".join(lines) + "\n"


def cmd_waves(args: argparse.Namespace) -> int:
    plane = args.p is not None or args.q is not None
    physical = any(v is not None for v in (args.beta, args.gamma, args.c))
    if plane and physical:
        print("error: give either --p/--q or --beta/--gamma/--c, not both",
              file=sys.stderr)
        return EXIT_USAGE

    if args.scan:
        if not (args.p and args.q):
            print("error: --scan needs --p lo:hi and --q lo:hi", file=sys.stderr)
            return EXIT_USAGE
        try:
            rows = scan(_parse_range(args.p), _parse_range(args.q),
                        _parse_grid(args.grid), tol=args.tol)
        except (CliError, WaveError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        manifest = _manifest("waves", args, {})
        _emit_csv(_scan_csv(rows), manifest, args.output)
        return EXIT_OK

    try:
        if physical:
            if None in (args.beta, args.gamma, args.c):
                raise CliError("physical mode needs all of --beta, --gamma, --c")
            params = WaveParams(args.beta, args.gamma, args.c)
            p, q = float(params.p), float(params.q)
            flags = existence_flags(params).to_json()
        elif plane:
            if args.p is None or args.q is None:
                raise CliError("plane mode needs both --p and --q")
            p, q = float(Fraction(args.p)), float(Fraction(args.q))
            flags = {"existence_flag": existence_label_pq(p, q)}
        else:
            raise CliError("give either --p/--q or --beta/--gamma/--c")
    except (CliError, WaveError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    cls = classify(p, q, tol=args.tol)
    spectrum = characteristic_roots(p, q)
    body = {
        "p": p,
        "q": q,
        **cls.to_json(),
        "lambdas": [[l.real, l.imag] for l in spectrum.lambdas],
        "mu": [[m.real, m.imag] for m in spectrum.mu],
        "max_residual": spectrum.max_residual(),
        "existence": flags,
    }
    manifest = _manifest("waves", args, {})
    if args.format == "csv":
        row = (f"p,q,label,eigen_structure,existence_flag\n"
               f"{p!r},{q!r},{cls.label},{cls.eigen_structure},"
               f"{flags.get('existence_flag', flags.get('existence_known'))}\n")
        _emit_csv(row, manifest, args.output)
    else:
        _emit_json(body, manifest, args.output)
    return EXIT_OK


# --------------------------------------------------------------------------
# simulate
# --------------------------------------------------------------------------


def _config_from_args(args: argparse.Namespace) -> SimConfig:
    if args.config:
        config = load_config(args.config)
    else:
        config = SimConfig()
    for item in args.set or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise SimulatorError(f"--set expects key=value, got {item!r}")
        from .simulator import parse_config_text

        patch = parse_config_text(f"{key} = {val}")
        default = SimConfig()
        for name in vars(patch):
            if getattr(patch, name) != getattr(default, name):
                setattr(config, name, getattr(patch, name))
    config.validate()
    return config


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = _config_from_args(args)
        if args.seed is not None:
            config.seed = args.seed
        state = initial_state(config)
    except (SimulatorError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = integrate(state, config)
    hashes = {}
    if args.config:
        hashes["config"] = _sha256(Path(args.config).read_text())
    manifest = _manifest("simulate", args, hashes)
    _emit_csv(series_csv(result.series), manifest, args.output)
    if args.snapshot:
        write_snapshot(args.snapshot, result.final)
    drift = result.drift()
    res, sign = variational_residual(state, config.beta, config.gamma,
                                     config.dealias)
    summary = {
        "blew_up": result.blew_up,
        "last_valid_time": result.last_valid_time,
        "drift": drift,
        "drift_budget": config.drift_budget,
        "variational_sign": sign,
        "variational_residual": res,
        "variational_note": (
            "the flux identity u_t = s*d_x(dH/du) holds with s = -1, the "
            "opposite of the conventional + sign"
        ),
    }
    print(json.dumps(summary), file=sys.stderr)
    if result.blew_up:
        return EXIT_BLOWUP
    if max(drift["P_rel"], drift["H_rel"]) > config.drift_budget:
        return EXIT_DRIFT
    return EXIT_OK


# --------------------------------------------------------------------------
# report (data + figures)
# --------------------------------------------------------------------------


def cmd_report(args: argparse.Namespace) -> int:
    from . import figures

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    if args.what == "waves":
        if not (args.p and args.q):
            print("error: report waves needs --p lo:hi and --q lo:hi",
                  file=sys.stderr)
            return EXIT_USAGE
        try:
            rows = scan(_parse_range(args.p), _parse_range(args.q),
                        _parse_grid(args.grid), tol=args.tol)
        except (CliError, WaveError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        manifest = _manifest("report", args, {})
        csv_path = outdir / "scan.csv"
        _emit_csv(_scan_csv(rows), manifest, str(csv_path))
        fig_path = figures.plot_region_map(rows, outdir / "region_map.png")
        print(f"wrote {csv_path} and {fig_path}")
        return EXIT_OK
    if args.what == "simulate":
        try:
            config = _config_from_args(args)
            state = initial_state(config)
        except (SimulatorError, OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        result = integrate(state, config)
        hashes = {}
        if args.config:
            hashes["config"] = _sha256(Path(args.config).read_text())
        manifest = _manifest("report", args, hashes)
        csv_path = outdir / "series.csv"
        _emit_csv(series_csv(result.series), manifest, str(csv_path))
        inv_path = figures.plot_invariants(result.series, outdir / "invariants.png")
        prof_path = figures.plot_profiles(state, result.final, outdir / "profiles.png")
        print(f"wrote {csv_path}, {inv_path} and {prof_path}")
        if result.blew_up:
            return EXIT_BLOWUP
        drift = result.drift()
        if max(drift["P_rel"], drift["H_rel"]) > config.drift_budget:
            return EXIT_DRIFT
        return EXIT_OK
    print(f"error: unknown report target {args.what!r}", file=sys.stderr)
    return EXIT_USAGE


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ostrokit",
        description="symbolic integrability tests, traveling-wave "
                    "classification and spectral simulation for "
                    "Ostrovsky/KdV-type equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text", "csv"],
                        default="json")
    common.add_argument("--output", help="write the report body to this path")
    common.add_argument("--seed", type=int, default=None,
                        help="override the RNG seed where applicable")

    p_int = sub.add_parser("integrability", parents=[common],
                           help="formal recursion-operator locality test")
    p_int.add_argument("--equation", required=True,
                       help="alias (ostrovsky, kdv), DSL text, or a file path")
    p_int.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER,
                       dest="max_order")
    p_int.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p_int.add_argument("--max-degree", type=int, default=3, dest="max_degree")
    p_int.add_argument("--exhaustive", action="store_true",
                       help="keep computing past the first obstruction")
    p_int.set_defaults(func=cmd_integrability)

    p_wav = sub.add_parser("waves", parents=[common],
                           help="traveling-wave linearization classifier")
    p_wav.add_argument("--p", help="plane coordinate, or lo:hi with --scan")
    p_wav.add_argument("--q", help="plane coordinate, or lo:hi with --scan")
    p_wav.add_argument("--beta", type=float)
    p_wav.add_argument("--gamma", type=float)
    p_wav.add_argument("--c", type=float)
    p_wav.add_argument("--scan", action="store_true")
    p_wav.add_argument("--grid", default="41x41")
    p_wav.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_wav.set_defaults(func=cmd_waves)

    p_sim = sub.add_parser("simulate", parents=[common],
                           help="periodic pseudospectral run with invariants")
    p_sim.add_argument("--config", help="key = value configuration file")
    p_sim.add_argument("--set", action="append",
                       help="override a config key, e.g. --set dt=1e-3")
    p_sim.add_argument("--snapshot", help="write the final field here (binary)")
    p_sim.set_defaults(func=cmd_simulate)

    p_rep = sub.add_parser("report", parents=[common],
                           help="run a pipeline and render figures next to "
                                "the delimited output")
    p_rep.add_argument("what", choices=["waves", "simulate"])
    p_rep.add_argument("--outdir", required=True)
    p_rep.add_argument("--scan", action="store_true",
                       help="accepted for symmetry; report waves always scans")
    p_rep.add_argument("--p")
    p_rep.add_argument("--q")
    p_rep.add_argument("--grid", default="41x41")
    p_rep.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_rep.add_argument("--config")
    p_rep.add_argument("--set", action="append")
    p_rep.set_defaults(func=cmd_report)

    return parser


_VALUE_FLAGS = {"--p", "--q", "--beta", "--gamma", "--c"}


def _join_negative_values(argv: list[str]) -> list[str]:
    """Fold ``--p -1:1`` into ``--p=-1:1`` so argparse keeps the value."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (
            tok in _VALUE_FLAGS
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
            and len(argv[i + 1]) > 1
            and (argv[i + 1][1].isdigit() or argv[i + 1][1] == ".")
        ):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    argv = _join_negative_values(list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EquationError, WaveError, SimulatorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
