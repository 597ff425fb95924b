"""Command-line front end: analytic sweeps, Monte Carlo, SOP tables, throughput trade-off.

Every command writes one flat table. CSV output starts with a comment line
naming the schema version and the units of every column; JSON output
carries the same information under ``schema`` and ``units``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import config as cfgmod
from .config import ConfigError, ScenarioConfig
from .mathkernels import ConvergenceError, QuadratureError
from .montecarlo import simulate, wilson_interval
from .rficumulants import lobe_stats, sop_upper_bound
from .spectral import spectral_efficiency, sum_throughput

__all__ = ["Table", "cmd_analytic", "cmd_montecarlo", "cmd_sop", "cmd_tradeoff",
           "TRADEOFF_LAMBDAS", "main"]

SCHEMA_VERSION = 1
TRADEOFF_LAMBDAS = tuple(float(v) for v in sorted(set(np.linspace(0, 1500, 31)) | {150.0}))


@dataclass
class Table:
    """Rows of a sweep plus per-column units."""

    command: str
    columns: list[str]
    units: dict[str, str]
    rows: list[dict]

    def to_csv(self) -> str:
        buf = io.StringIO()
        unit_txt = "; ".join(f"{c}[{self.units.get(c, '-')}]" for c in self.columns)
        buf.write(f"# rfi-coexist {self.command} schema v{SCHEMA_VERSION}; {unit_txt}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(r[c]) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"schema": f"rfi-coexist {self.command} v{SCHEMA_VERSION}",
               "columns": self.columns, "units": self.units, "rows": self.rows}
        return json.dumps(doc, indent=1) + "\n"


def _cell(v):
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _tau_key(prefix: str, tau: float) -> str:
    return f"{prefix}_tau{tau:g}"


def _net(cfg: ScenarioConfig, lam: float, alpha: float):
    return replace(cfg.network, lambda_bs=float(lam), alpha=float(alpha))


# --------------------------------------------------------------------------
#  Commands
# --------------------------------------------------------------------------

def cmd_analytic(cfg: ScenarioConfig) -> Table:
    """Analytic mean, std, fourth central moment and SOP bounds on the sweep grid."""
    g = cfg.grid()
    cols = ["lambda_bs", "alpha", "lobe", "mean_k", "std_k", "mu4_k4"]
    cols += [_tau_key("sop_bound", t) for t in g.tau_list]
    units = {"lambda_bs": "BS/cluster", "alpha": "-", "lobe": "-", "mean_k": "K", "std_k": "K",
             "mu4_k4": "K^4", **{_tau_key("sop_bound", t): "prob" for t in g.tau_list}}
    rows = []
    for lam in g.lambda_bs_list:
        for a in g.alpha_list:
            net = _net(cfg, lam, a)
            for lobe in ("main", "side"):
                st = lobe_stats(lobe, cfg.geometry, cfg.radiometer, net, cfg.channel, cfg.propagation)
                row = dict(lambda_bs=float(lam), alpha=float(a), lobe=lobe, mean_k=st.mean_k,
                           std_k=st.std_k, mu4_k4=st.mu4_k4)
                for t in g.tau_list:
                    row[_tau_key("sop_bound", t)] = sop_upper_bound(st, t)
                rows.append(row)
    return Table("analytic", cols, units, rows)


def cmd_montecarlo(cfg: ScenarioConfig) -> Table:
    """Analytic columns plus empirical moments, standard errors and SOP with 95% CI."""
    base = cmd_analytic(cfg)
    g = cfg.grid()
    extra = ["emp_mean_k", "emp_mean_se_k", "emp_std_k", "emp_std_se_k", "rounds"]
    for t in g.tau_list:
        extra += [_tau_key("sop_emp", t), _tau_key("sop_ci_lo", t), _tau_key("sop_ci_hi", t)]
    units = dict(base.units, emp_mean_k="K", emp_mean_se_k="K", emp_std_k="K", emp_std_se_k="K",
                 rounds="count")
    units.update({c: "prob" for c in extra if c.startswith("sop")})
    n = cfg.sim.rounds
    by_key = {}
    for lam in g.lambda_bs_list:
        net = _net(cfg, lam, g.alpha_list[0])
        res = simulate(cfg.geometry, cfg.radiometer, net, cfg.channel, cfg.sim, cfg.propagation,
                       alphas=g.alpha_list, taus=g.tau_list)
        for lobe, summ in res.lobes.items():
            acc = summ.moments
            for i, a in enumerate(g.alpha_list):
                row = dict(emp_mean_k=float(acc.mean[i]), emp_mean_se_k=float(acc.mean_stderr[i]),
                           emp_std_k=float(acc.std[i]), emp_std_se_k=float(acc.std_stderr[i]),
                           rounds=n)
                for j, t in enumerate(g.tau_list):
                    k = int(res.exceed[lobe][j, i])
                    lo, hi = wilson_interval(k, n)
                    row[_tau_key("sop_emp", t)] = k / n
                    row[_tau_key("sop_ci_lo", t)] = lo
                    row[_tau_key("sop_ci_hi", t)] = hi
                by_key[(float(lam), float(a), lobe)] = row
    rows = [dict(r, **by_key[(r["lambda_bs"], r["alpha"], r["lobe"])]) for r in base.rows]
    return Table("montecarlo", base.columns + extra, units, rows)


def cmd_sop(cfg: ScenarioConfig) -> Table:
    """Side-lobe SOP table: Chebyshev bound next to the empirical rate and its 95% CI."""
    mc = cmd_montecarlo(cfg)
    g = cfg.grid()
    cols = ["lambda_bs", "alpha", "rounds"]
    for t in g.tau_list:
        cols += [_tau_key("sop_bound", t), _tau_key("sop_emp", t),
                 _tau_key("sop_ci_lo", t), _tau_key("sop_ci_hi", t)]
    rows = [{c: r[c] for c in cols} for r in mc.rows if r["lobe"] == "side"]
    units = {c: mc.units[c] for c in cols}
    return Table("sop", cols, units, rows)


def cmd_tradeoff(cfg: ScenarioConfig, lambdas: Sequence[float] = TRADEOFF_LAMBDAS) -> Table:
    """Spectral efficiency, sum throughput and side-lobe SOP bounds versus lambda_bs."""
    g = cfg.grid()
    cols = ["lambda_bs", "s_e_nats", "t_p_nats_per_s", "t_p_bits_per_s"]
    cols += [_tau_key("sop_bound", t) for t in g.tau_list]
    units = {"lambda_bs": "BS/cluster", "s_e_nats": "nats/s/Hz", "t_p_nats_per_s": "nats/s",
             "t_p_bits_per_s": "bit/s", **{_tau_key("sop_bound", t): "prob" for t in g.tau_list}}
    rows = []
    for lam in lambdas:
        intra = replace(cfg.intra, lambda_bs=float(lam))
        se = spectral_efficiency(intra, cfg.propagation)
        net = replace(cfg.network, lambda_bs=float(lam))
        tp = sum_throughput(se, cfg.geometry, net, cfg.intra.bandwidth_hz)
        row = dict(lambda_bs=float(lam), s_e_nats=se, t_p_nats_per_s=tp.nats_per_s,
                   t_p_bits_per_s=tp.bits_per_s)
        st = lobe_stats("side", cfg.geometry, cfg.radiometer, net, cfg.channel, cfg.propagation)
        for t in g.tau_list:
            row[_tau_key("sop_bound", t)] = sop_upper_bound(st, t) if lam > 0 else 0.0
        rows.append(row)
    return Table("tradeoff", cols, units, rows)


# --------------------------------------------------------------------------
#  Entry point
# --------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario file (default: bundled table1.cfg)")
    common.add_argument("--seed", type=int)
    common.add_argument("--rounds", type=int)
    common.add_argument("--workers", type=int)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--eq28-form", choices=("cos", "sin"), dest="eq28_form")
    common.add_argument("--offsets", action="store_true",
                        help="place base stations at Rayleigh offsets (per-station sampling)")

    p = argparse.ArgumentParser(prog="rfi-coexist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analytic", parents=[common], help="analytic RFI statistics and SOP bounds")
    sub.add_parser("montecarlo", parents=[common], help="analytic plus Monte Carlo statistics")
    sop = sub.add_parser("sop", parents=[common], help="side-lobe SOP table (20000 rounds by default)")
    sop.set_defaults(default_rounds=20_000)
    tr = sub.add_parser("tradeoff", parents=[common], help="throughput vs SOP bound sweep")
    tr.add_argument("--lambda-list", help="comma-separated lambda_bs values (default 0..1500)")
    return p


def _apply_overrides(cfg: ScenarioConfig, args) -> ScenarioConfig:
    sim = cfg.sim
    rounds = args.rounds if args.rounds is not None else getattr(args, "default_rounds", None)
    changes = {}
    if rounds is not None:
        changes["rounds"] = rounds
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.workers is not None:
        changes["workers"] = args.workers
    if args.offsets:
        changes["bs_offsets_enabled"] = True
    try:
        sim = replace(sim, **changes)
        geo = replace(cfg.geometry, eq28_form=args.eq28_form) if args.eq28_form else cfg.geometry
    except ValueError as exc:
        raise ConfigError(f"sim: {exc}") from None
    return replace(cfg, sim=sim, geometry=geo)


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = cfgmod.load(args.config) if args.config else cfgmod.load_bundled()
        cfg = _apply_overrides(cfg, args)
        if args.command == "analytic":
            table = cmd_analytic(cfg)
        elif args.command == "montecarlo":
            table = cmd_montecarlo(cfg)
        elif args.command == "sop":
            table = cmd_sop(cfg)
        else:
            lams = (cfgmod._float_list("--lambda-list", args.lambda_list)
                    if args.lambda_list else TRADEOFF_LAMBDAS)
            table = cmd_tradeoff(cfg, lams)
    except (ConfigError, OSError) as exc:
        print(f"rfi-coexist: error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, ConvergenceError) as exc:
        print(f"rfi-coexist: numerical tolerance not met: {exc}", file=sys.stderr)
        return 3

    bad = [r for r in table.rows for v in r.values()
           if isinstance(v, float) and not math.isfinite(v)]
    if bad:
        print(f"rfi-coexist: non-finite values in {len(bad)} row(s)", file=sys.stderr)
        return 3
    text = table.to_csv() if args.format == "csv" else table.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
