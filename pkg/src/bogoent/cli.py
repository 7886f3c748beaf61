"""Command-line driver: config ingestion, sweeps, identity checks, CSV output.

Commands
--------
cavity   sweep the single-acceleration-segment scenario over u and write a
         CSV with the leading-order and full-pipeline negativities, the
         validity measure and the pair-state determinant
frw      expanding-universe pair entanglement over a momentum grid
apply    transform an initial product state by a coefficient file and report
         the entanglement of a chosen mode pair
check    verify the Bogoliubov identities of a coefficient file

All commands read a single JSON configuration document (unknown keys are
rejected) and write CSV with '#'-prefixed metadata lines. Output is
byte-identical across runs of the same configuration: floats are printed
with 17 significant digits and rows are assembled in grid order regardless
of worker scheduling.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bogo import read_coeffs, to_symplectic, verify_identities
from .cavity import CavityConfig, one_segment_sweep_row
from .errors import ConfigError, NumericalError
from .frw import FRWConfig, frw_coefficients, frw_negativity
from .gaussian import GaussianState, apply_symplectic, negativity, partial_trace

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _load_config(path: str) -> tuple[dict, str]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config document must be a JSON object")
    return cfg, hashlib.sha256(raw).hexdigest()


def _check_keys(cfg: dict, required: set[str], optional: set[str]) -> None:
    unknown = set(cfg) - required - optional
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = required - set(cfg)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")


def _number(cfg: dict, key: str, default=None) -> float:
    val = cfg.get(key, default)
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise ConfigError(f"config key '{key}' must be a number")
    return float(val)


def _integer(cfg: dict, key: str, default=None) -> int:
    val = cfg.get(key, default)
    if not isinstance(val, int) or isinstance(val, bool):
        raise ConfigError(f"config key '{key}' must be an integer")
    return val


def _grid(cfg: dict, key: str) -> np.ndarray:
    """Grid given either as an explicit list or as {start, stop, num}."""
    raw = cfg[key]
    if isinstance(raw, list):
        if not raw or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw
        ):
            raise ConfigError(f"'{key}' must be a nonempty list of numbers")
        grid = np.asarray(raw, dtype=float)
    elif isinstance(raw, dict):
        _check_keys(raw, {"start", "stop", "num"}, set())
        num = _integer(raw, "num")
        if num < 1:
            raise ConfigError(f"'{key}.num' must be >= 1")
        grid = np.linspace(_number(raw, "start"), _number(raw, "stop"), num)
    else:
        raise ConfigError(f"'{key}' must be a list or a start/stop/num object")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ConfigError(f"'{key}' must be strictly increasing")
    return grid


def _out_path(cfg: dict, args) -> Path:
    out = args.out or cfg.get("out")
    if not out:
        raise ConfigError("no output path: set 'out' in the config or pass --out")
    if not isinstance(out, str):
        raise ConfigError("'out' must be a string path")
    return Path(out)


def _write_csv(path: Path, command: str, config_hash: str,
               header: list[str], rows: list[list[float]]) -> None:
    lines = [
        f"# bogoent {__version__}",
        f"# command: {command}",
        f"# config-sha256: {config_hash}",
        ",".join(header),
    ]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


# --- commands -----------------------------------------------------------------


def _cmd_cavity(args) -> int:
    cfg, digest = _load_config(args.config)
    _check_keys(
        cfg,
        required={"h", "modes", "squeezings", "u_grid"},
        optional={"delta", "cutoff", "out"},
    )
    cutoff = args.cutoff if args.cutoff is not None else _integer(cfg, "cutoff", 30)
    try:
        cavity = CavityConfig(
            h=_number(cfg, "h"), delta=_number(cfg, "delta", 1.0), cutoff=cutoff
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    modes = cfg["modes"]
    if (not isinstance(modes, list) or len(modes) != 2
            or not all(isinstance(m, int) and not isinstance(m, bool) for m in modes)):
        raise ConfigError("'modes' must be a list of two mode numbers")
    k, kp = modes
    if not (1 <= k <= cavity.cutoff and 1 <= kp <= cavity.cutoff) or k == kp:
        raise ConfigError(
            f"mode pair ({k}, {kp}) must be distinct and within the cutoff {cavity.cutoff}"
        )
    squeezings = cfg["squeezings"]
    if (not isinstance(squeezings, list) or not squeezings or not all(
            isinstance(s, (int, float)) and not isinstance(s, bool) for s in squeezings)):
        raise ConfigError("'squeezings' must be a nonempty list of numbers")
    s_list = [float(s) for s in squeezings]
    u_grid = _grid(cfg, "u_grid")
    out = _out_path(cfg, args)

    def row_for(u: float) -> list[float]:
        row = one_segment_sweep_row(cavity, k, kp, s_list, u)
        return [row[name] for name in header]

    header = (
        ["u"]
        + [f"N_over_h_leading[s={s:g}]" for s in s_list]
        + [f"N_over_h_full[s={s:g}]" for s in s_list]
        + ["F_over_h2"]
        + [f"det_sigma[s={s:g}]" for s in s_list]
    )
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(row_for, u_grid))
    else:
        rows = [row_for(u) for u in u_grid]
    _write_csv(out, "cavity", digest, header, rows)
    return EXIT_OK


def _cmd_frw(args) -> int:
    cfg, digest = _load_config(args.config)
    _check_keys(
        cfg,
        required={"epsilon", "rho", "mass"},
        optional={"k", "k_grid", "out"},
    )
    if ("k" in cfg) == ("k_grid" in cfg):
        raise ConfigError("give exactly one of 'k' or 'k_grid'")
    ks = np.array([_number(cfg, "k")]) if "k" in cfg else _grid(cfg, "k_grid")
    out = _out_path(cfg, args)
    rows = []
    for k in ks:
        try:
            frw = FRWConfig(
                epsilon=_number(cfg, "epsilon"),
                rho=_number(cfg, "rho"),
                mass=_number(cfg, "mass"),
                k=float(k),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        coeff = frw_coefficients(frw)
        report = frw_negativity(frw)
        rows.append([float(k), coeff.beta_sq, report.nu_minus, report.negativity])
    _write_csv(out, "frw", digest, ["k", "beta_sq", "nu_minus", "negativity"], rows)
    return EXIT_OK


def _squeezed_state_for(modes: tuple[int, ...], squeezings: list[float]) -> GaussianState:
    diag = np.empty(2 * len(modes))
    diag[0::2] = np.exp(squeezings)
    diag[1::2] = np.exp([-s for s in squeezings])
    return GaussianState(modes, np.diag(diag))


def _cmd_apply(args) -> int:
    cfg, digest = _load_config(args.config)
    _check_keys(cfg, required={"coeffs", "modes"}, optional={"squeezings", "out"})
    coeffs = read_coeffs(cfg["coeffs"])
    if not coeffs.is_exact:
        raise ConfigError("apply needs exact coefficients, got a series term")
    squeezings = cfg.get("squeezings", [0.0] * coeffs.n_modes)
    if (not isinstance(squeezings, list)
            or len(squeezings) != coeffs.n_modes
            or not all(isinstance(s, (int, float)) and not isinstance(s, bool)
                       for s in squeezings)):
        raise ConfigError(
            f"'squeezings' must list one number per coefficient mode ({coeffs.n_modes})"
        )
    modes = cfg["modes"]
    if (not isinstance(modes, list) or len(modes) != 2
            or not all(isinstance(m, int) and not isinstance(m, bool) for m in modes)):
        raise ConfigError("'modes' must be a list of two mode labels")
    k, kp = modes
    if k not in coeffs.modes or kp not in coeffs.modes or k == kp:
        raise ConfigError(f"mode pair ({k}, {kp}) must be two distinct coefficient modes")

    state = _squeezed_state_for(coeffs.modes, [float(s) for s in squeezings])
    transformed = apply_symplectic(to_symplectic(coeffs), state)
    report = negativity(partial_trace(transformed, {k, kp}))
    print(f"nu_minus = {_fmt(report.nu_minus)}")
    print(f"negativity = {_fmt(report.negativity)}")
    print(f"log_negativity = {_fmt(report.log_negativity)}")
    print(f"det_cov = {_fmt(report.det_cov)}")
    if args.out or cfg.get("out"):
        _write_csv(
            _out_path(cfg, args), "apply", digest,
            ["k", "kp", "nu_minus", "negativity", "log_negativity", "det_cov"],
            [[k, kp, report.nu_minus, report.negativity,
              report.log_negativity, report.det_cov]],
        )
    return EXIT_OK


def _cmd_check(args) -> int:
    cfg, digest = _load_config(args.config)
    _check_keys(cfg, required={"coeffs"}, optional={"tol"})
    coeffs = read_coeffs(cfg["coeffs"])
    if not coeffs.is_exact:
        raise ConfigError("check needs exact coefficients, got a series term")
    tol = _number(cfg, "tol", coeffs.identity_tol)
    report = verify_identities(coeffs, tol=tol)
    print(f"normalization_residual = {_fmt(report.normalization_residual)}")
    print(f"symmetry_residual = {_fmt(report.symmetry_residual)}")
    print(f"tol = {_fmt(report.tol)}")
    print(f"passed = {report.passed}")
    if not report.passed:
        raise NumericalError(
            f"Bogoliubov identities violated beyond {tol:g}: "
            f"residuals {report.normalization_residual:.3e}, "
            f"{report.symmetry_residual:.3e}"
        )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bogoent",
        description="Mode entanglement from Bogoliubov transformations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, doc in (
        ("cavity", _cmd_cavity, "sweep the accelerated-cavity scenario over u"),
        ("frw", _cmd_frw, "expanding-universe pair entanglement"),
        ("apply", _cmd_apply, "apply a coefficient file to an initial state"),
        ("check", _cmd_check, "verify the Bogoliubov identities of a file"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output CSV path")
        p.add_argument("--cutoff", type=int, default=None, help="mode cutoff override")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
