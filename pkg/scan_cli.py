#!/usr/bin/env python3
"""
Command line for the XX chain with three-spin interaction.

    python scan_cli.py measure --alpha 0.5 --m 1
    python scan_cli.py scan --alpha-min 0 --alpha-max 3 --step 0.005 --m 1 --out lqfi_m1.csv
    python scan_cli.py oracle --check g --n 4096

Exit codes: 0 success, 2 bad arguments, 3 internal consistency failure, 4 I/O failure.
"""
import argparse
import csv
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import yaml

import logger
import numerics
from correlations import MAX_SEPARATION, CorrelationTriple, correlation_triple, g_function
from errors import ClosedFormUnavailable, ConsistencyError, ValidationError
from finite_chain_oracle import ed_ground_energy, ff_ground_energy, finite_g
from measures import (BlochDirection, lqfi, lqfi_closed, lqfi_direction, owqd_closed,
                      owqd_closed_basis, owqd_numeric, qfi_local, qfi_sld_oracle)
from state import build_x_state, random_x_state, spectrum

# ----------------------------------------------------
# CONSTANTS
# ----------------------------------------------------
APP_CONFIG_PATH = Path(__file__).with_name("app_config.yaml")
CSV_HEADER = ["alpha", "m", "t1", "t3", "lqfi", "owqd", "dlqfi", "dowqd"]
MEASURES = ("lqfi", "owqd")
MAX_GRID_POINTS = 1_000_000
GRID_SNAP = 1e-9  # fraction of a step
MIN_TRANSITION_ROWS = 5
NOISE_FACTOR = 10.0
MIN_JUMP = 1e-9

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSISTENCY = 3
EXIT_IO = 4

ORACLE_CHECKS = ("g", "qfi", "owqd", "energy")
ORACLE_DEFAULT_N = {"g": 4096, "qfi": 200, "owqd": 7, "energy": 8}
ORACLE_TOLERANCE = {"g": 2e-3, "qfi": 1e-8, "owqd": 1e-6, "energy": 1e-9}
ORACLE_SEED = 2024

# ----------------------------------------------------
# CONFIG DEFAULTS (updated by parse_*_config)
# ----------------------------------------------------
LOG_CONFIG = {
    "log_to_file": False,
    "log_dir": "logs",
    "print_level": "WARN",
    "log_level": "DEBUG",
    "log_file_max_size_bytes": 1_000_000,
}

SCAN_CONFIG = {
    "alpha_min": 0.0,
    "alpha_max": 3.0,
    "step": 0.005,
    "m": 1,
    "measures": list(MEASURES),
    "workers": 4,
}

VALIDATION_CONFIG = {
    "check_every": 50,
    "tolerance": 1e-5,
}


# ----------------------------------------------------
# TYPES
# ----------------------------------------------------
@dataclass(frozen=True)
class ScanRow:
    alpha: float
    m: int
    t1: float
    t3: float
    lqfi: float
    owqd: float
    dlqfi: float
    dowqd: float

    def as_csv_fields(self) -> List[str]:
        return [f"{self.alpha + 0.0:.12g}", str(self.m)] + [
            f"{value + 0.0:.12g}" for value in (self.t1, self.t3, self.lqfi, self.owqd, self.dlqfi, self.dowqd)
        ]


@dataclass(frozen=True)
class ScanConfig:
    alpha_min: float
    alpha_max: float
    step: float
    m: int
    measures: Tuple[str, ...] = MEASURES
    workers: int = 4
    check_every: int = 50
    tolerance: float = 1e-5

    def __post_init__(self):
        if not 0 <= self.alpha_min < self.alpha_max:
            raise ValidationError(f"need 0 <= alpha_min < alpha_max, got [{self.alpha_min}, {self.alpha_max}]")
        if not self.step > 0 or not math.isfinite(self.step):
            raise ValidationError(f"step must be a positive number, got {self.step}")
        if (self.alpha_max - self.alpha_min) / self.step > MAX_GRID_POINTS:
            raise ValidationError(f"grid exceeds {MAX_GRID_POINTS} steps")
        if not isinstance(self.m, (int, np.integer)) or not 1 <= self.m <= MAX_SEPARATION:
            raise ValidationError(f"m must be an integer in 1..{MAX_SEPARATION}, got {self.m}")
        if not self.measures or any(name not in MEASURES for name in self.measures):
            raise ValidationError(f"measures must be a non-empty subset of {MEASURES}, got {self.measures}")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        if self.check_every < 1 or not self.tolerance > 0:
            raise ValidationError("check_every must be >= 1 and tolerance > 0")


class TransitionEstimate(NamedTuple):
    alpha_star: float
    jump: float
    detected: bool


# ----------------------------------------------------
# CONFIG LOADING
# ----------------------------------------------------
def load_config(config_path):
    try:
        with open(config_path, "r") as f:
            cfg = yaml.safe_load(f) or {}
            logger.info(f"Configuration loaded from {config_path}")
    except yaml.YAMLError as e:
        logger.error(f"Failed to parse configuration {config_path}: {e}")
        raise ValidationError(f"malformed configuration file {config_path}")
    except OSError as e:
        logger.error(f"Failed to load configuration: {e}")
        raise
    if not isinstance(cfg, dict):
        raise ValidationError(f"configuration {config_path} must be a mapping")
    return cfg


def parse_log_config(config):
    """Parse logging keys; unknown levels fall back to the defaults."""
    for key in ("print_level", "log_level"):
        level = str(config.get(key, LOG_CONFIG[key])).upper()
        if level not in logger.LEVELS:
            logger.warn(f"Invalid {key} {level}, using default {LOG_CONFIG[key]}")
        else:
            LOG_CONFIG[key] = level
    LOG_CONFIG["log_dir"] = str(config.get("log_dir", LOG_CONFIG["log_dir"]))
    LOG_CONFIG["log_to_file"] = bool(config.get("log_to_file", LOG_CONFIG["log_to_file"]))
    try:
        size = int(config.get("log_file_max_size_bytes", LOG_CONFIG["log_file_max_size_bytes"]))
        if size <= 0:
            raise ValueError(size)
        LOG_CONFIG["log_file_max_size_bytes"] = size
    except (TypeError, ValueError):
        logger.warn(f"Invalid log_file_max_size_bytes, using default {LOG_CONFIG['log_file_max_size_bytes']}")
    logger.debug(f"Log config: {LOG_CONFIG}")
    return LOG_CONFIG


def parse_scan_config(config):
    """Parse the scan section; invalid entries keep their default value."""
    section = config.get("scan") or {}
    for key, cast in (("alpha_min", float), ("alpha_max", float), ("step", float), ("m", int), ("workers", int)):
        if key not in section:
            continue
        try:
            SCAN_CONFIG[key] = cast(section[key])
        except (TypeError, ValueError):
            logger.warn(f"Invalid scan.{key} {section[key]!r}, using default {SCAN_CONFIG[key]}")
    if "measures" in section:
        names = section["measures"]
        if isinstance(names, str):
            names = [n.strip() for n in names.split(",")]
        if names and all(n in MEASURES for n in names):
            SCAN_CONFIG["measures"] = list(names)
        else:
            logger.warn(f"Invalid scan.measures {names!r}, using default {SCAN_CONFIG['measures']}")
    logger.debug(f"Scan config: {SCAN_CONFIG}")
    return SCAN_CONFIG


def parse_validation_config(config):
    section = config.get("validation") or {}
    every = section.get("check_every", VALIDATION_CONFIG["check_every"])
    if isinstance(every, int) and every >= 1:
        VALIDATION_CONFIG["check_every"] = every
    else:
        logger.warn(f"Invalid validation.check_every {every!r}, using default {VALIDATION_CONFIG['check_every']}")
    try:
        tolerance = float(section.get("tolerance", VALIDATION_CONFIG["tolerance"]))
        if not tolerance > 0:
            raise ValueError(tolerance)
        VALIDATION_CONFIG["tolerance"] = tolerance
    except (TypeError, ValueError):
        logger.warn(f"Invalid validation.tolerance, using default {VALIDATION_CONFIG['tolerance']}")
    logger.debug(f"Validation config: {VALIDATION_CONFIG}")
    return VALIDATION_CONFIG


# ----------------------------------------------------
# SCAN
# ----------------------------------------------------
def alpha_grid(cfg: ScanConfig) -> np.ndarray:
    """
    Uniform grid anchored on alpha = 1 when it lies inside the range, else on
    alpha_min. Endpoints are included when they fall on the grid.
    """
    lo, hi, h = cfg.alpha_min, cfg.alpha_max, cfg.step
    anchor = 1.0 if lo < 1.0 < hi else lo
    first = math.ceil((lo - anchor) / h - GRID_SNAP)
    last = math.floor((hi - anchor) / h + GRID_SNAP)
    grid = anchor + np.arange(first, last + 1) * h
    for exact in (lo, hi, anchor):
        grid[np.abs(grid - exact) < GRID_SNAP * h] = exact
    grid = grid[(grid >= lo) & (grid <= hi)]
    if len(grid) < 3:
        raise ValidationError(f"[{lo}, {hi}] with step {h} gives {len(grid)} points, need at least 3")
    if grid[0] != lo or grid[-1] != hi:
        logger.warn(f"step {h} anchored at alpha={anchor} misses the requested endpoints: "
                    f"effective range [{grid[0]:.12g}, {grid[-1]:.12g}] instead of [{lo}, {hi}]")
    return grid


def lqfi_with_fallback(t: CorrelationTriple) -> float:
    try:
        return lqfi_closed(t)
    except ClosedFormUnavailable as e:
        logger.warn(f"alpha={t.alpha} m={t.m}: {e}; using the spectral route")
        return lqfi(build_x_state(t))


def _validate_owqd(t: CorrelationTriple, closed: float, tolerance: float):
    numeric, basis = owqd_numeric(build_x_state(t))
    logger.debug(f"alpha={t.alpha} m={t.m}: owqd closed {closed:.9f} numeric {numeric:.9f} at {basis}")
    if abs(closed - numeric) > tolerance:
        logger.error(f"owqd mismatch at alpha={t.alpha} m={t.m}: closed {closed!r} numeric {numeric!r}")
        raise ConsistencyError(
            f"owqd closed form {closed:.9g} differs from minimization {numeric:.9g} at alpha={t.alpha}, m={t.m}",
            alpha=t.alpha, m=t.m, closed=closed, numeric=numeric,
        )


def scan(cfg: ScanConfig) -> List[ScanRow]:
    grid = alpha_grid(cfg)
    logger.info(f"scan m={cfg.m} over {len(grid)} points, measures {cfg.measures}, {cfg.workers} worker(s)")

    def point(index, alpha):
        t = correlation_triple(cfg.m, float(alpha))
        value_lqfi = lqfi_with_fallback(t) if "lqfi" in cfg.measures else 0.0
        value_owqd = 0.0
        if "owqd" in cfg.measures:
            value_owqd = owqd_closed(t)
            if index % cfg.check_every == 0:
                _validate_owqd(t, value_owqd, cfg.tolerance)
        return t, value_lqfi, value_owqd

    with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
        points = list(executor.map(point, range(len(grid)), grid))

    lqfi_column = np.array([p[1] for p in points])
    owqd_column = np.array([p[2] for p in points])
    dlqfi = numerics.central_difference(lqfi_column, cfg.step)
    dowqd = numerics.central_difference(owqd_column, cfg.step)
    return [
        ScanRow(alpha=float(alpha), m=cfg.m, t1=t.t1, t3=t.t3, lqfi=float(lq), owqd=float(ow),
                dlqfi=float(dl), dowqd=float(do))
        for alpha, (t, lq, ow), dl, do in zip(grid, points, dlqfi, dowqd)
    ]


def detect_transition(rows: Sequence[ScanRow], measure: str = "lqfi") -> TransitionEstimate:
    """
    Kink location from the largest absolute second difference of a measure.
    jump = |second difference| / h estimates the first-derivative jump.
    """
    if measure not in MEASURES:
        raise ValidationError(f"unknown measure {measure!r}, expected one of {MEASURES}")
    if len(rows) < MIN_TRANSITION_ROWS:
        raise ValidationError(f"need at least {MIN_TRANSITION_ROWS} rows, got {len(rows)}")
    alphas = np.array([row.alpha for row in rows])
    steps = np.diff(alphas)
    h = float(np.mean(steps))
    if not h > 0 or np.max(np.abs(steps - h)) > 1e-6 * h:
        raise ValidationError("rows must lie on a uniform increasing alpha grid")

    f = np.array([getattr(row, measure) for row in rows])
    d2 = np.abs(f[2:] - 2 * f[1:-1] + f[:-2])
    peak = int(np.argmax(d2))
    jump = float(d2[peak] / h)
    noise = float(np.median(d2) / h)
    detected = jump > NOISE_FACTOR * noise and jump > MIN_JUMP
    estimate = TransitionEstimate(alpha_star=float(alphas[peak + 1]), jump=jump, detected=detected)
    logger.info(f"{measure}: {estimate}")
    return estimate


def emit_csv(rows: Sequence[ScanRow], destination):
    """Write rows to a path, or to an open text stream; "-" means stdout."""
    def write(stream):
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.as_csv_fields())

    if hasattr(destination, "write"):
        write(destination)
        return
    if str(destination) == "-":
        write(sys.stdout)
        return
    try:
        with open(destination, "w", newline="") as f:
            write(f)
    except OSError as e:
        logger.error(f"Cannot write {destination}: {e}")
        raise
    logger.info(f"{len(rows)} rows written to {destination}")


# ----------------------------------------------------
# ORACLE CHECKS
# ----------------------------------------------------
def check_g(n: int) -> float:
    """max |g_function - finite_g(N = n)| over m = 1..4 and four couplings."""
    return max(
        abs(g_function(m, alpha) - finite_g(n, alpha, m))
        for m in range(1, 5) for alpha in (0.2, 0.7, 1.5, 3.0)
    )


def check_qfi(n: int, directions: int = 20) -> float:
    """max |qfi_local - qfi_sld_oracle| over n random X states."""
    rng = np.random.default_rng(ORACLE_SEED)
    worst = 0.0
    for _ in range(n):
        s = random_x_state(rng)
        d = spectrum(s)
        for _ in range(directions):
            r = BlochDirection.normalized(rng.normal(size=3))
            worst = max(worst, abs(qfi_local(s, r, d) - qfi_sld_oracle(s, r, d)))
    return worst


def check_owqd(n: int) -> float:
    """max |owqd_closed - owqd_numeric| on n couplings in [0, 3] for m = 1..3."""
    worst = 0.0
    for alpha in np.linspace(0.0, 3.0, max(n, 1)):
        for m in (1, 2, 3):
            t = correlation_triple(m, float(alpha))
            numeric, _ = owqd_numeric(build_x_state(t))
            worst = max(worst, abs(owqd_closed(t) - numeric))
    return worst


def check_energy(n: int) -> float:
    """max |exact diagonalization - free fermions| ground energy on an n-site ring."""
    return max(abs(ed_ground_energy(n, alpha) - ff_ground_energy(n, alpha)) for alpha in (0.0, 0.5, 1.0, 2.0, 5.0))


ORACLE_FUNCTIONS = {"g": check_g, "qfi": check_qfi, "owqd": check_owqd, "energy": check_energy}


# ----------------------------------------------------
# COMMANDS
# ----------------------------------------------------
def _print(line):
    print(line, flush=True)


def run_measure(args) -> int:
    if not args.alpha >= 0:
        raise ValidationError(f"alpha must be >= 0, got {args.alpha}")
    t = correlation_triple(args.m, args.alpha)
    rho = build_x_state(t)
    numeric, basis = owqd_numeric(rho)
    closed_basis = owqd_closed_basis(t)
    direction = lqfi_direction(rho)
    _print(f"alpha={args.alpha:.12g}")
    _print(f"m={args.m}")
    _print(f"t1={t.t1:.12g}")
    _print(f"t3={t.t3:.12g}")
    _print(f"lqfi={lqfi_with_fallback(t):.12g}")
    _print(f"lqfi_direction={direction.x:.6f},{direction.y:.6f},{direction.z:.6f}")
    _print(f"owqd={numeric:.12g}")
    _print(f"owqd_theta={basis.theta:.9f}")
    _print(f"owqd_phi={basis.phi:.9f}")
    _print(f"owqd_closed={owqd_closed(t):.12g}")
    _print(f"owqd_closed_theta={closed_basis.theta:.9f}")
    _print(f"owqd_closed_phi={closed_basis.phi:.9f}")
    return EXIT_OK


def run_scan(args) -> int:
    measures = tuple(n.strip() for n in args.measures.split(",")) if args.measures else tuple(SCAN_CONFIG["measures"])
    cfg = ScanConfig(
        alpha_min=args.alpha_min if args.alpha_min is not None else SCAN_CONFIG["alpha_min"],
        alpha_max=args.alpha_max if args.alpha_max is not None else SCAN_CONFIG["alpha_max"],
        step=args.step if args.step is not None else SCAN_CONFIG["step"],
        m=args.m if args.m is not None else SCAN_CONFIG["m"],
        measures=measures,
        workers=args.workers if args.workers is not None else SCAN_CONFIG["workers"],
        check_every=VALIDATION_CONFIG["check_every"],
        tolerance=VALIDATION_CONFIG["tolerance"],
    )
    rows = scan(cfg)
    emit_csv(rows, args.out)
    if len(rows) >= MIN_TRANSITION_ROWS:
        for name in cfg.measures:
            estimate = detect_transition(rows, name)
            if estimate.detected:
                logger.info(f"{name}: transition near alpha={estimate.alpha_star:.6g}, "
                            f"derivative jump {estimate.jump:.6g}")
    return EXIT_OK


def run_oracle(args) -> int:
    n = args.n if args.n is not None else ORACLE_DEFAULT_N[args.check]
    if n < 1:
        raise ValidationError(f"--n must be positive, got {n}")
    deviation = ORACLE_FUNCTIONS[args.check](n)
    tolerance = ORACLE_TOLERANCE[args.check]
    ok = deviation < tolerance
    _print(f"check={args.check} n={n} max_deviation={deviation:.3e} tolerance={tolerance:.1e} "
           f"status={'ok' if ok else 'FAIL'}")
    if not ok:
        logger.error(f"oracle {args.check} failed: {deviation:.3e} >= {tolerance:.1e}")
        return EXIT_CONSISTENCY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scan_cli.py",
        description="Quantum correlations of the XX chain with three-spin interaction.",
    )
    parser.add_argument("--config", type=Path, default=None,
                        help=f"YAML configuration (default: {APP_CONFIG_PATH.name} if present)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="measures at a single coupling ratio")
    p.add_argument("--alpha", type=float, required=True, help="coupling ratio J'/J >= 0")
    p.add_argument("--m", type=int, default=1, help=f"site separation 1..{MAX_SEPARATION}")
    p.set_defaults(func=run_measure)

    p = sub.add_parser("scan", help="sweep alpha and write CSV")
    p.add_argument("--alpha-min", type=float, default=None)
    p.add_argument("--alpha-max", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--out", default="-", help="CSV file, '-' for stdout")
    p.add_argument("--measures", default=None, help="comma separated subset of lqfi,owqd")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=run_scan)

    p = sub.add_parser("oracle", help="cross-check closed forms against independent routes")
    p.add_argument("--check", choices=ORACLE_CHECKS, required=True)
    p.add_argument("--n", type=int, default=None,
                   help="ring size (g, energy), state count (qfi) or coupling count (owqd)")
    p.set_defaults(func=run_oracle)
    return parser


def configure(config_path: Optional[Path]):
    path = config_path if config_path is not None else APP_CONFIG_PATH
    if config_path is None and not path.exists():
        logger.debug(f"No configuration at {path}, using defaults")
        return
    cfg = load_config(path)
    logger.apply_config(parse_log_config(cfg))
    parse_scan_config(cfg)
    parse_validation_config(cfg)


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        configure(args.config)
        return args.func(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as e:
        print(f"consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except OSError as e:
        print(f"I/O failure: {e}", file=sys.stderr)
        return EXIT_IO
    finally:
        logger.close_logger()


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
