"""Outage and effective covert rate at the benchmark's covert jamming ceiling."""

import argparse

from covert_mmwave import benchmark, mw_to_dbm, outage_probability, solve_pj_opt

RATES = (0.1, 0.5, 1.0, 2.5, 5.0, 10.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epsilon", type=float, default=0.05)
    args = ap.parse_args()

    cfg = benchmark()
    pj = solve_pj_opt(cfg, args.epsilon)
    cfg = cfg.with_pj_max(pj)
    print(f"P_J,opt = {mw_to_dbm(pj):.4f} dBm")
    print(f"{'R_b':>6} {'outage':>10} {'rate':>10}")
    for rb in RATES:
        out = outage_probability(cfg, rb)
        print(f"{rb:6.1f} {out:10.5f} {rb * (1 - out):10.4f}")


if __name__ == "__main__":
    main()
