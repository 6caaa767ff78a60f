"""Config-driven experiment runner.

Subcommands
-----------
eig          eigenvalue table with expansion predictions and residuals
nodes        per-index nodal point/length tables, numeric vs predicted
reconstruct  grid reconstruction of q per index plus a summary JSON
sp-table     generalized sine/cosine dump over one full period

Each command reads one INI config (key-value with sections, see
``configs/`` for bundled examples) and writes CSV files with fixed
12-significant-digit scientific formatting so repeated runs are byte
identical.  Per-index solver failures mark the affected rows and the
run continues; exit status 0 means every index succeeded, 2 means a
partial failure, 1 a config error.  PNODAL_THREADS caps the per-index
worker pool (default 4).
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .asymptotics import (
    VARIANTS,
    eigenvalue_expansion,
    nodal_length_expansion,
    nodal_point_expansion,
)
from .gentrig import PParameters, build_table, sp, sp_prime
from .potentials import CoefficientPair, Potential, make_potential
from .reconstruct import extrapolate_ladder, reconstruct_q
from .spectrum import nodal_data

__all__ = ["ExperimentConfig", "load_config", "main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2


class ConfigError(ValueError):
    """Raised for malformed experiment configs, with field diagnostics."""


@dataclass
class ExperimentConfig:
    """Validated experiment description."""

    p: float
    q_spec: str
    r_spec: str
    n_list: list[int]
    grid_size: int = 256
    sp_phases: int = 2048
    ode_tol: float = 1e-9
    root_tol: float = 1e-10
    variant: str = "proof-consistent"
    ladder: bool = False
    output_dir: Path = Path("out")
    table_size: int = 4096
    q: Potential = field(init=False, repr=False)
    r: Potential = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.p > 1.0:
            raise ConfigError(f"[problem] p must exceed 1, got {self.p}")
        if not self.n_list:
            raise ConfigError("[run] n_list must be nonempty")
        if any(b <= a for a, b in zip(self.n_list, self.n_list[1:])):
            raise ConfigError("[run] n_list must be strictly ascending")
        if self.n_list[0] < 1:
            raise ConfigError("[run] n_list entries must be >= 1")
        if self.grid_size < 16:
            raise ConfigError(f"[run] grid_size must be >= 16, got {self.grid_size}")
        if self.sp_phases < 16:
            raise ConfigError("[run] sp_phases must be >= 16")
        if not (self.ode_tol > 0 and self.root_tol > 0):
            raise ConfigError("[tolerances] ode_tol and root_tol must be positive")
        if self.variant not in VARIANTS:
            raise ConfigError(
                f"[output] variant must be one of {VARIANTS}, got {self.variant!r}"
            )
        try:
            self.q = make_potential(self.q_spec)
        except (ValueError, OSError) as exc:
            raise ConfigError(f"[problem] q: {exc}") from None
        try:
            self.r = make_potential(self.r_spec)
        except (ValueError, OSError) as exc:
            raise ConfigError(f"[problem] r: {exc}") from None

    def pair(self) -> CoefficientPair:
        return CoefficientPair(self.q, self.r)

    def params(self) -> PParameters:
        return PParameters.from_exponent(self.p, table_size=self.table_size)


def _parse_n_list(raw: str) -> list[int]:
    out: list[int] = []
    for chunk in raw.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." in chunk:
            lo, hi = chunk.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return out


def load_config(path) -> ExperimentConfig:
    """Parse and validate an INI experiment config."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        read = parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    if not read:
        raise ConfigError(f"config file not found: {path}")

    def get(section: str, key: str, cast, default=None):
        if not parser.has_option(section, key):
            if default is None:
                raise ConfigError(f"{path}: missing [{section}] {key}")
            return default
        raw = parser.get(section, key)
        try:
            if cast is bool:
                return parser.getboolean(section, key)
            return cast(raw)
        except (ValueError, configparser.Error) as exc:
            raise ConfigError(f"{path}: [{section}] {key} = {raw!r}: {exc}") from None

    try:
        return ExperimentConfig(
            p=get("problem", "p", float),
            q_spec=get("problem", "q", str),
            r_spec=get("problem", "r", str),
            n_list=get("run", "n_list", _parse_n_list),
            grid_size=get("run", "grid_size", int, 256),
            sp_phases=get("run", "sp_phases", int, 2048),
            ode_tol=get("tolerances", "ode_tol", float, 1e-9),
            root_tol=get("tolerances", "root_tol", float, 1e-10),
            variant=get("output", "variant", str, "proof-consistent"),
            ladder=get("output", "ladder", bool, False),
            output_dir=Path(get("output", "dir", str, "out")),
            table_size=get("run", "table_size", int, 4096),
        )
    except ConfigError:
        raise
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _fmt(value: float) -> str:
    """Fixed 12-significant-digit scientific formatting for CSV cells."""
    return f"{value:.11E}"


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _pool_size() -> int:
    raw = os.environ.get("PNODAL_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return max(1, n) if n else min(4, os.cpu_count() or 1)


def _per_index(cfg: ExperimentConfig, worker) -> tuple[dict, list[tuple[int, str]]]:
    """Run worker(n) for every configured index; collect errors per n."""
    results: dict = {}
    failures: list[tuple[int, str]] = []
    with ThreadPoolExecutor(max_workers=_pool_size()) as pool:
        futures = {n: pool.submit(worker, n) for n in cfg.n_list}
    for n in cfg.n_list:
        try:
            results[n] = futures[n].result()
        except Exception as exc:  # noqa: BLE001 - per-row failure policy
            failures.append((n, f"{type(exc).__name__}: {exc}"))
    return results, failures


def cmd_eig(cfg: ExperimentConfig) -> int:
    params = cfg.params()
    table = build_table(params)
    pair = cfg.pair()

    def worker(n: int) -> float:
        from .spectrum import find_eigenvalue

        return find_eigenvalue(params, pair, n, table=table, root_tol=cfg.root_tol)

    results, failures = _per_index(cfg, worker)
    failed = dict(failures)
    rows = []
    scale_exp = (params.p + 2.0) / params.p
    for n in cfg.n_list:
        if n in failed:
            rows.append([str(n), "NA", "NA", "NA", "NA", "NA", failed[n]])
            continue
        lam = results[n]
        lam_pow = lam ** (2.0 / params.p)
        pred = eigenvalue_expansion(params, pair, n, cfg.variant)
        resid = pred - lam_pow
        rows.append([
            str(n), _fmt(lam), _fmt(lam_pow), _fmt(pred), _fmt(resid),
            _fmt(resid * n**scale_exp), "ok",
        ])
    _write_csv(
        cfg.output_dir / "eig.csv",
        ["n", "lambda_n", "lambda_n_pow_2_over_p", "predicted",
         "residual", "residual_scaled", "status"],
        rows,
    )
    print(f"eig: wrote {cfg.output_dir / 'eig.csv'} ({len(rows)} rows)")
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_nodes(cfg: ExperimentConfig) -> int:
    params = cfg.params()
    table = build_table(params)
    pair = cfg.pair()

    def worker(n: int):
        return nodal_data(params, pair, n, table=table, root_tol=cfg.root_tol)

    results, failures = _per_index(cfg, worker)
    for n in cfg.n_list:
        if n not in results:
            continue
        nd = results[n]
        cuts = np.concatenate(([0.0], nd.nodal_points, [1.0]))
        rows = []
        for j in range(n):
            xj_num = cuts[j]
            xj_pred = 0.0 if j == 0 else nodal_point_expansion(
                params, pair, n, j, cfg.variant
            )
            lj_pred = nodal_length_expansion(
                params, pair, n, j, cfg.variant, lam=nd.lambda_n,
                interval=(float(cuts[j]), float(cuts[j + 1])),
            )
            rows.append([
                str(j), _fmt(xj_num), _fmt(xj_pred),
                _fmt(nd.nodal_lengths[j]), _fmt(lj_pred),
            ])
        _write_csv(
            cfg.output_dir / f"nodes_n{n:03d}.csv",
            ["j", "x_j_numeric", "x_j_predicted", "l_j_numeric", "l_j_predicted"],
            rows,
        )
    print(f"nodes: wrote {len(results)} tables to {cfg.output_dir}")
    for n, msg in failures:
        print(f"nodes: n={n} failed: {msg}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_reconstruct(cfg: ExperimentConfig) -> int:
    params = cfg.params()
    table = build_table(params)
    pair = cfg.pair()
    grid = np.linspace(0.0, 1.0, cfg.grid_size + 2)[1:-1]

    def worker(n: int):
        nd = nodal_data(params, pair, n, table=table, root_tol=cfg.root_tol)
        return reconstruct_q(params, nd, pair.r, grid, q_true=pair.q)

    results, failures = _per_index(cfg, worker)
    summary = {"variant": cfg.variant, "p": cfg.p, "runs": [], "failures": []}
    ladder_results = []
    for n in cfg.n_list:
        if n not in results:
            continue
        res = results[n]
        ladder_results.append(res)
        rows = [
            [_fmt(x), _fmt(v), _fmt(t), _fmt(abs(v - t))]
            for x, v, t in zip(res.grid, res.values, res.truth)
        ]
        _write_csv(
            cfg.output_dir / f"recon_n{n:03d}.csv",
            ["x", "q_hat", "q_true", "abs_err"],
            rows,
        )
        summary["runs"].append({
            "n": n,
            "lambda_n": float(_fmt(res.lambda_n)),
            "sup_error": float(_fmt(res.sup_error)),
            "l2_error": float(_fmt(res.l2_error)),
            "noise_floor": float(_fmt(res.noise_floor)),
        })
    for n, msg in failures:
        summary["failures"].append({"n": n, "error": msg})
    if cfg.ladder and len(ladder_results) >= 2:
        extr = extrapolate_ladder(ladder_results, truth_fn=pair.q)
        rows = [
            [_fmt(x), _fmt(v), _fmt(t), _fmt(abs(v - t))]
            for x, v, t in zip(extr.grid, extr.values, extr.truth)
        ]
        _write_csv(
            cfg.output_dir / "recon_extrapolated.csv",
            ["x", "q_hat_extrapolated", "q_true", "abs_err"],
            rows,
        )
        summary["ladder"] = {
            "rungs": [r.n for r in ladder_results[-2:]],
            "sup_error": float(_fmt(extr.sup_error)),
            "l2_error": float(_fmt(extr.l2_error)),
        }
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    with open(cfg.output_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"reconstruct: wrote {len(summary['runs'])} grids + summary.json "
          f"to {cfg.output_dir}")
    for n, msg in failures:
        print(f"reconstruct: n={n} failed: {msg}", file=sys.stderr)
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_sp_table(cfg: ExperimentConfig) -> int:
    params = cfg.params()
    table = build_table(params)
    phases = np.linspace(0.0, 2.0 * params.pi_p, cfg.sp_phases)
    s = sp(table, phases)
    c = sp_prime(table, phases)
    resid = np.abs(s) ** params.p + np.abs(c) ** params.p - 1.0
    rows = [
        [_fmt(ph), _fmt(sv), _fmt(cv), _fmt(rv)]
        for ph, sv, cv, rv in zip(phases, s, c, resid)
    ]
    _write_csv(
        cfg.output_dir / "sp_table.csv",
        ["phase", "S_p", "S_p_prime", "identity_residual"],
        rows,
    )
    print(f"sp-table: wrote {cfg.output_dir / 'sp_table.csv'} ({len(rows)} rows)")
    return EXIT_OK


_COMMANDS = {
    "eig": cmd_eig,
    "nodes": cmd_nodes,
    "reconstruct": cmd_reconstruct,
    "sp-table": cmd_sp_table,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pnodal",
        description="p-Laplacian pencil: eigenvalues, nodal data, reconstruction",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sp_ = sub.add_parser(name, help=fn.__doc__)
        sp_.add_argument("--config", required=True, help="INI experiment config")
        sp_.add_argument("--out", help="override [output] dir")
        sp_.add_argument("--variant", choices=list(VARIANTS),
                         help="expansion exponent variant override")
        sp_.add_argument("--ladder", action="store_true",
                         help="add Richardson extrapolation over the n ladder")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.out:
            cfg.output_dir = Path(args.out)
        if args.variant:
            cfg.variant = args.variant
        if args.ladder:
            cfg.ladder = True
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return _COMMANDS[args.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
