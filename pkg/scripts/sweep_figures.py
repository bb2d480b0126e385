"""Jamming-ceiling sweeps of detection error, outage and capacity for the
benchmark and the single-parameter variants discussed with each curve family."""

import argparse
import csv

import numpy as np

from covert_mmwave import ergodic_capacity, expected_detection_error, outage_probability
from covert_mmwave.cli import config_from_flat
from covert_mmwave.channel import dbm_to_mw

DETECT_VARIANTS = {"benchmark": {}, "main_as_20db": {"main_as_db": 20}, "side_af_0db": {"side_af_db": 0},
                   "pa_5dbm": {"pa_dbm": 5}, "theta_as_15deg": {"theta_as_deg": 15},
                   "delta_15deg": {"delta_deg": 15}}
OUTAGE_VARIANTS = {"pa20_rb3_n74": ({}, 3.0), "pa25_rb3_n74": ({"pa_dbm": 25}, 3.0),
                   "pa20_rb5_n74": ({}, 5.0), "pa20_rb3_n64": ({"sigma2_b_dbm": -64}, 3.0)}
CAPACITY_VARIANTS = {"benchmark": {}, "main_af_20db": {"main_af_db": 20}, "side_as_0db": {"side_as_db": 0},
                     "pa_25dbm": {"pa_dbm": 25}, "theta_af_45deg": {"theta_af_deg": 45},
                     "delta_15deg": {"delta_deg": 15}}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--start", type=float, default=-20.0)
    ap.add_argument("--stop", type=float, default=50.0)
    ap.add_argument("--steps", type=int, default=36)
    ap.add_argument("--out", default="sweeps.csv")
    args = ap.parse_args()

    grid = np.linspace(args.start, args.stop, args.steps)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["metric", "variant", "pj_max_dbm", "value"])
        for name, flat in DETECT_VARIANTS.items():
            cfg = config_from_flat(flat)
            for x in grid:
                w.writerow(["detect_error", name, x, expected_detection_error(cfg.with_pj_max(dbm_to_mw(x)))])
        for name, (flat, rb) in OUTAGE_VARIANTS.items():
            cfg = config_from_flat(flat)
            for x in grid:
                w.writerow(["outage", name, x, outage_probability(cfg.with_pj_max(dbm_to_mw(x)), rb)])
        for name, flat in CAPACITY_VARIANTS.items():
            cfg = config_from_flat(flat)
            for x in grid:
                w.writerow(["capacity_bits_per_use", name, x, ergodic_capacity(cfg.with_pj_max(dbm_to_mw(x)))])
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
