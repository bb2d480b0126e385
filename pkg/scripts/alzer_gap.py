"""Size of the Alzer approximation error in each closed form.

Compares every closed form against exact-gamma Monte Carlo and against Monte
Carlo whose data-path fading is drawn from the Alzer law; the second
comparison should close to sampling noise, so the first is model error.
"""

import argparse

from covert_mmwave import oracle
from covert_mmwave.design import max_covert_rate
from covert_mmwave.link import ergodic_capacity, outage_probability
from design_optima import scenarios


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=4242)
    args = ap.parse_args()

    for name, cfg in scenarios().items():
        d = max_covert_rate(cfg, 0.05)
        cfg = cfg.with_pj_max(d.pj_opt)
        cap = ergodic_capacity(cfg)
        exact = oracle.mc_ergodic_capacity(cfg, args.samples, args.seed)
        alz = oracle.mc_ergodic_capacity(cfg, args.samples, args.seed, alzer_desired=True)
        out = outage_probability(cfg, d.r_b_opt)
        out_exact = oracle.mc_outage(cfg, d.r_b_opt, args.samples, args.seed)
        out_alz = oracle.mc_outage(cfg, d.r_b_opt, args.samples, args.seed, alzer_desired=True)
        print(f"{name}")
        print(f"  capacity {cap:.4f}  gamma MC {exact.mean:.4f} ({(cap - exact.mean) / exact.mean:+.2%})"
              f"  alzer MC {alz.mean:.4f} ({(cap - alz.mean) / alz.stderr:+.1f} se)")
        print(f"  outage   {out:.4f}  gamma MC {out_exact.mean:.4f}"
              f"  alzer MC {out_alz.mean:.4f} ({(out - out_alz.mean) / out_alz.stderr:+.1f} se)")


if __name__ == "__main__":
    main()
