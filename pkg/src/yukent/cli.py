"""Command-line driver: entropy reports, verification and alpha sweeps.

Exit codes: 0 ok, 1 configuration error, 2 numerical failure,
3 a derived-mode assertion failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from scipy import linalg

from . import config as cfgmod
from .config import ConfigError, RunConfig
from .entropy import REPORT_COLUMNS, NegativeSpectrumError, entropy_series, richardson_slope
from .matelem import ConvergenceError
from .oracle import BoundaryContaminationError, oracle_report
from .params import DomainError, beta_series
from .perturbation import TruncationError
from .rdm import default_k_grid, expand_in_alpha
from .verify import run_verification

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_ASSERTION = 3

KERNEL_COLUMNS = ("k", "rho0", "rho1", "rho2G", "rho2NG", "rho_total")
SWEEP_COLUMNS = REPORT_COLUMNS + ("S2_derived", "S2_richardson")

NUMERICAL_ERRORS = (
    ConvergenceError,
    NegativeSpectrumError,
    BoundaryContaminationError,
    TruncationError,
    FloatingPointError,
    linalg.LinAlgError,
)


class UsageError(ConfigError):
    pass


def fmt(value) -> str:
    if value is None:
        return ""
    v = float(value)
    if v == 0.0:
        v = 0.0  # drop the sign of -0.0
    return f"{v:.17g}"


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def thread_count() -> int:
    raw = os.environ.get("YUKENT_THREADS")
    if raw is None or raw.strip() == "":
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"YUKENT_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"YUKENT_THREADS must be a positive integer, got {raw!r}")
    return n


def _map(fn, items):
    items = list(items)
    workers = min(thread_count(), len(items)) or 1
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _prepare_out(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc.strerror}") from exc
    if not os.access(out, os.W_OK):
        raise ConfigError(f"output directory {out} is not writable")
    return out


def _breakdowns(cfg: RunConfig):
    p = cfg.params
    grid = default_k_grid(beta_series(p)[0], points=cfg.k_points)
    return _map(lambda a: entropy_series(p, a, grid), cfg.alpha_values)


def _report_row(b, mode: str):
    row = list(b.row())
    if mode == "paper":
        row[7] = b.S0 + b.alpha * b.S1_G + b.alpha**2 * (b.S2_G_paper + b.S2_NG_paper)
        row[3] = row[5] = None
    elif mode == "derived":
        row[4] = row[6] = None
    return row


def kernel_rows(cfg: RunConfig, alpha: float):
    ex = expand_in_alpha(cfg.params)
    k = default_k_grid(ex.beta0, points=cfg.k_points)
    cols = (ex.rho0(k), ex.rho1(k), ex.rho2_G(k), ex.rho2_NG(k), ex.series(alpha)(k))
    return np.column_stack((k,) + cols)


def kernel_filename(alpha: float) -> str:
    return f"kernel_alpha_{alpha:.17g}.csv"


def cmd_compute(cfg: RunConfig) -> int:
    out = _prepare_out(cfg)
    rows = _breakdowns(cfg)
    write_csv(out / "entropy_report.csv", REPORT_COLUMNS, [_report_row(b, cfg.mode) for b in rows])
    for a in cfg.alpha_values:
        write_csv(out / kernel_filename(a), KERNEL_COLUMNS, kernel_rows(cfg, a))
    print(f"wrote {out / 'entropy_report.csv'} ({len(rows)} rows)")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    out = _prepare_out(cfg)
    rep = run_verification(cfg)
    payload = rep.to_dict()
    payload["oracle"] = oracle_report(cfg.params, cfg.n_max)
    (out / "verify.json").write_text(json.dumps(payload, indent=2) + "\n")
    text = rep.summary()
    (out / "verify.txt").write_text(text + "\n")
    print(text)
    return EXIT_OK if rep.passed else EXIT_ASSERTION


def cmd_sweep(cfg: RunConfig) -> int:
    positive = [a for a in cfg.alpha_values if a > 0]
    if len(positive) < 2:
        raise UsageError("--sweep needs at least two positive alpha values")
    out = _prepare_out(cfg)
    rows = _breakdowns(cfg)
    S0, S1 = rows[0].S0, rows[0].S1_G
    slope = richardson_slope(
        [b.alpha for b in rows], [b.S_numeric for b in rows], S0, S1
    )
    table = [_report_row(b, cfg.mode) + [b.S2, slope] for b in rows]
    write_csv(out / "sweep.csv", SWEEP_COLUMNS, table)
    print(f"wrote {out / 'sweep.csv'}; extrapolated alpha^2 slope {slope:.10g} "
          f"(derived {rows[0].S2 + 0.0:.10g})")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="yukent", description="Entanglement entropy of the screened two-body ground state.")
    ap.add_argument("--config", metavar="PATH", help="key = value file (g, m, B_r required)")
    ap.add_argument("--alpha", metavar="LIST", help="comma-separated alpha values")
    ap.add_argument("--out", metavar="DIR", help="output directory")
    ap.add_argument("--mode", choices=cfgmod.MODES, help="which S2 columns to report")
    ap.add_argument("--nmax", type=int, metavar="N", help="basis size for the diagonalization oracle")
    task = ap.add_mutually_exclusive_group()
    task.add_argument("--verify", action="store_true", help="run the invariant suite")
    task.add_argument("--sweep", action="store_true", help="alpha sweep with extrapolated slope")
    return ap


def resolve_config(args) -> RunConfig:
    cfg = cfgmod.load(args.config) if args.config else RunConfig()
    alphas = cfgmod.parse_alpha_list(args.alpha, "--alpha") if args.alpha else None
    if args.nmax is not None and args.nmax < 1:
        raise ConfigError("--nmax must be a positive integer")
    return cfgmod.with_overrides(
        cfg,
        alpha_values=alphas,
        out_dir=Path(args.out) if args.out else None,
        mode=args.mode,
        n_max=args.nmax,
    )


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        cfg = resolve_config(args)
        if args.verify:
            return cmd_verify(cfg)
        if args.sweep:
            return cmd_sweep(cfg)
        return cmd_compute(cfg)
    except (ConfigError, DomainError) as exc:
        print(f"yukent: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NUMERICAL_ERRORS as exc:
        print(f"yukent: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
