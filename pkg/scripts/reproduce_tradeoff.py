"""Throughput vs side-lobe SOP bound as the BS intensity per cluster grows.

    python3 scripts/reproduce_tradeoff.py --out results/tradeoff.csv [--plot results/tradeoff.png]
"""

import argparse
import sys

from rfi_coexist import cli
from rfi_coexist.config import load_bundled


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out")
    ap.add_argument("--plot", help="PNG path (needs matplotlib)")
    args = ap.parse_args(argv)

    cfg = load_bundled()
    table = cli.cmd_tradeoff(cfg)
    taus = cfg.grid().tau_list
    print(f"alpha = {cfg.network.alpha}, bounds at tau = {taus}")
    print(f"{'lambda':>7} {'s_e':>7} {'t_p [nats/s]':>13} " + " ".join(f"{'P' + format(t, 'g'):>8}" for t in taus))
    for r in table.rows:
        bounds = " ".join(f"{r[f'sop_bound_tau{t:g}']:8.4f}" for t in taus)
        print(f"{r['lambda_bs']:7.0f} {r['s_e_nats']:7.4f} {r['t_p_nats_per_s']:13.4e} {bounds}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(table.to_csv())
    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        fig, ax = plt.subplots(figsize=(6, 4.5))
        tp = [r["t_p_nats_per_s"] for r in table.rows]
        for t in taus:
            ax.plot(tp, [r[f"sop_bound_tau{t:g}"] for r in table.rows], label=f"tau={t:g} K")
        ax.set_xlabel("sum throughput [nats/s]")
        ax.set_ylabel("SOP upper bound")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)
    return 0


if __name__ == "__main__":
    sys.exit(main())
