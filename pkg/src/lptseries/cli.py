"""Command-line front end.

Three subcommands, all driven by a config file:

* ``expand``  -- build the energy series and print it (pretty/csv/machine);
* ``check``   -- re-derive self-consistency identities on the built table
                 and compare against a golden machine-format file if given;
* ``verify``  -- compare optimally truncated partial sums against the
                 basis-diagonalization oracle.

Exit codes: 0 success, 1 failed check/verification or internal error,
2 invalid input or an oracle basis that did not converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, parse_config
from .engine import (
    EnergySeries,
    PotentialError,
    expand,
    first_power_identity_failure,
)
from .polys import N, ZERO
from .harmonic import crosscheck_with_engine, d_sequence, hermite_ratio_check, reconstruct_polynomial
from .oracle import (
    AsymptoticBreakdown,
    BasisNotConverged,
    EigensolverError,
    OracleError,
    compare_series,
    problem_from_potential,
    report_csv,
    report_text,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lptseries",
        description=(
            "Exact semiclassical perturbation series for one-dimensional "
            "anharmonic oscillators."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, metavar="PATH",
                       help="problem configuration file")
        p.add_argument("--order", type=int, metavar="K",
                       help="override the expansion order from the config")
        p.add_argument("--format", dest="fmt", choices=("pretty", "csv", "machine"),
                       help="override the output format from the config")
        p.add_argument("--out", metavar="PATH",
                       help="write output to PATH instead of stdout")
        p.add_argument("--parity-shortcut", action="store_true",
                       help="skip odd Laurent slots for even potentials")

    p_expand = sub.add_parser("expand", help="compute energy series coefficients")
    add_common(p_expand)

    p_check = sub.add_parser("check", help="run self-consistency checks")
    add_common(p_check)
    p_check.add_argument("--golden", metavar="PATH",
                         help="machine-format file the expansion must reproduce")

    p_verify = sub.add_parser("verify", help="compare series against diagonalization")
    add_common(p_verify)
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    cfg = parse_config(text)
    if args.order is not None:
        if args.order < 1:
            raise ConfigError(f"--order must be >= 1, got {args.order}")
        cfg = RunConfig(cfg.potential, args.order, cfg.fmt, cfg.parity_shortcut, cfg.oracle)
    if args.fmt is not None:
        cfg = RunConfig(cfg.potential, cfg.order, args.fmt, cfg.parity_shortcut, cfg.oracle)
    if args.parity_shortcut:
        cfg = RunConfig(cfg.potential, cfg.order, cfg.fmt, True, cfg.oracle)
    return cfg


def _emit(text: str, args: argparse.Namespace) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def machine_document(cfg: RunConfig, series: EnergySeries) -> dict:
    """Machine format: every polynomial as exponent-sorted term records."""
    return {
        "order": series.order,
        "potential": {
            "m": str(cfg.potential.m),
            "omega": str(cfg.potential.omega),
            "f": {str(i): poly.to_records() for i, poly in cfg.potential.terms},
        },
        "energies": [
            {"k": k, "terms": series.e[k].to_records()}
            for k in range(1, series.order + 1)
        ],
    }


def render_machine(cfg: RunConfig, series: EnergySeries) -> str:
    return json.dumps(machine_document(cfg, series), indent=2, sort_keys=True) + "\n"


def render_csv(series: EnergySeries) -> str:
    lines = ["k,deg_n,deg_lam,coeff"]
    for k in range(1, series.order + 1):
        records = series.e[k].to_records()
        if not records:
            lines.append(f"{k},0,0,0")
            continue
        for r in records:
            lines.append(f"{k},{r['deg_n']},{r['deg_lam']},{r['coeff']}")
    return "\n".join(lines) + "\n"


def render_pretty(cfg: RunConfig, series: EnergySeries) -> str:
    lines = [
        f"potential: m = {cfg.potential.m}, omega = {cfg.potential.omega}"
        + "".join(
            f", f{i} = {poly}" for i, poly in cfg.potential.terms
        ),
        f"energy coefficients up to order {series.order} "
        "(E_k multiplies hbar^k):",
    ]
    width = len(f"E{series.order}")
    for k in range(1, series.order + 1):
        lines.append(f"  {f'E{k}':<{width}} = {series.e[k]}")
    return "\n".join(lines) + "\n"


def cmd_expand(cfg: RunConfig, args: argparse.Namespace) -> int:
    _, series = expand(cfg.potential, cfg.order, parity_shortcut=cfg.parity_shortcut)
    if cfg.fmt == "machine":
        _emit(render_machine(cfg, series), args)
    elif cfg.fmt == "csv":
        _emit(render_csv(series), args)
    else:
        _emit(render_pretty(cfg, series), args)
    return EXIT_OK


def _golden_mismatch(golden: dict, produced: dict) -> str | None:
    """Locate the first difference between two machine documents."""
    if golden.get("order") != produced.get("order"):
        return f"order: golden {golden.get('order')} vs computed {produced.get('order')}"
    for g_entry, p_entry in zip(golden.get("energies", ()), produced.get("energies", ())):
        k = p_entry["k"]
        if g_entry != p_entry:
            g_terms = {(r["deg_n"], r["deg_lam"]): r["coeff"] for r in g_entry["terms"]}
            p_terms = {(r["deg_n"], r["deg_lam"]): r["coeff"] for r in p_entry["terms"]}
            for key in sorted(set(g_terms) | set(p_terms)):
                if g_terms.get(key) != p_terms.get(key):
                    return (
                        f"E{k} term n^{key[0]} lam^{key[1]}: golden "
                        f"{g_terms.get(key, '0')} vs computed {p_terms.get(key, '0')}"
                    )
            return f"E{k}: structural mismatch"
    return None


def cmd_check(cfg: RunConfig, args: argparse.Namespace) -> int:
    table, series = expand(cfg.potential, cfg.order, parity_shortcut=cfg.parity_shortcut)
    lines: list[str] = []
    failed = False

    def record(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failed
        verdict = "PASS" if ok else ("FAIL " + detail).rstrip()
        lines.append(f"{name}: {verdict}")
        failed = failed or not ok

    where = first_power_identity_failure(table, series, cfg.potential)
    record("power-identity", where is None,
           f"at (k={where[0]}, i={where[1]})" if where else "")

    record(
        "residue-slots",
        all(
            table.rows[k][2 * k - 2] == (N if k == 1 else ZERO)
            for k in range(1, cfg.order + 1)
        ),
    )

    if cfg.potential.is_even:
        bad = next(
            (
                (k, i)
                for k in range(cfg.order + 1)
                for i in range(1, table.i_max + 1, 2)
                if table.rows[k][i]
            ),
            None,
        )
        record("parity-odd-slots", bad is None,
               f"at (k={bad[0]}, i={bad[1]})" if bad else "")

    if cfg.potential.is_harmonic:
        oscillator_e1 = (N + Fraction(1, 2)) * cfg.potential.omega
        record(
            "harmonic-reduction",
            series.e[1] == oscillator_e1
            and all(not series.e[k] for k in range(2, cfg.order + 1)),
        )
        record("harmonic-crosscheck", crosscheck_with_engine(cfg.order))
        ds = d_sequence(max(cfg.order, 5))
        hermite_ok, detail = True, ""
        for n in range(0, 9):
            if n // 2 + 1 > ds.order:
                break
            poly = reconstruct_polynomial(n, ds)
            if not hermite_ratio_check(n, poly):
                hermite_ok, detail = False, f"at level n={n}"
                break
        record("hermite-recurrence", hermite_ok, detail)

    if args.golden:
        try:
            golden = json.loads(Path(args.golden).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read golden file {args.golden}: {exc}") from None
        produced = machine_document(cfg, series)
        mismatch = _golden_mismatch(golden, produced)
        record("golden-comparison", mismatch is None, mismatch or "")

    _emit("\n".join(lines) + "\n", args)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(cfg: RunConfig, args: argparse.Namespace) -> int:
    if cfg.oracle is None:
        raise ConfigError("verify requires an [oracle] section in the config")
    _, series = expand(cfg.potential, cfg.order, parity_shortcut=cfg.parity_shortcut)
    problem = problem_from_potential(
        cfg.potential,
        cfg.oracle.lam,
        basis_size=cfg.oracle.basis_size,
        check_size=cfg.oracle.check_size,
        levels=cfg.oracle.levels,
    )
    try:
        report = compare_series(series, problem)
    except AsymptoticBreakdown as exc:
        _emit(f"verification rejected: {exc}\n", args)
        return EXIT_FAIL
    except (BasisNotConverged, EigensolverError) as exc:
        _emit(f"oracle not converged: {exc}\n", args)
        return EXIT_INVALID

    if cfg.fmt == "csv":
        _emit(report_csv(report), args)
    else:
        _emit(report_text(report) + "\n", args)
    return EXIT_OK if report.passed else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"expand": cmd_expand, "check": cmd_check, "verify": cmd_verify}
    try:
        cfg = _load_config(args)
        return handlers[args.command](cfg, args)
    except (ConfigError, PotentialError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OracleError as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
