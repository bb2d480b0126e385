"""Command-line entry point: config loading, single evaluations, sweeps, verification.

Configs are flat JSON objects; every key is optional and falls back to the
benchmark value. Results are written as CSV with a ``#`` metadata header.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracle
from .channel import (JAMMER_GAIN_MODES, AntennaPattern, BlockageParams, FadingParams,
                      SystemConfig, db_to_linear, dbm_to_mw, linear_to_db, mw_to_dbm)
from .design import best_effective_rate, max_covert_rate, solve_pj_opt
from .errors import ConfigError, DomainError, NumericalError
from .link import ergodic_capacity, outage_probability
from .warden import expected_detection_error

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VERIFY = 0, 2, 3, 4

DEFAULTS = {
    "pa_dbm": 20.0,
    "pj_max_dbm": 15.52,
    "sigma2_b_dbm": -74.0,
    "sigma2_w_dbm": -74.0,
    "d_ab_m": 25.0,
    "d_aw_m": 25.0,
    "los_decay_m": 200.0,
    "alpha_l": 2.0,
    "alpha_n": 4.0,
    "c_l": 1e-7,
    "c_n": 1e-7,
    "nu_l": 3,
    "nu_n": 2,
    "main_af_db": 15.0,
    "main_as_db": 15.0,
    "main_b_db": 15.0,
    "side_af_db": -5.0,
    "side_as_db": -5.0,
    "side_b_db": -5.0,
    "theta_af_deg": 30.0,
    "theta_as_deg": 30.0,
    "theta_b_deg": 30.0,
    "delta_deg": 5.0,
    "willie_in_main_lobe": False,
    "jammer_gain_mode": "averaged",
}

_POSITIVE = ("d_ab_m", "d_aw_m", "los_decay_m", "alpha_l", "alpha_n", "c_l", "c_n")
_ANGLES = ("theta_af_deg", "theta_as_deg", "theta_b_deg")


def _check_number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(key, "must be finite")
    return float(value)


def _validate(flat):
    out = {}
    for key, default in DEFAULTS.items():
        value = flat[key]
        if key in ("nu_l", "nu_n"):
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not math.isfinite(value) or value != int(value) or value < 1:
                raise ConfigError(key, f"must be an integer >= 1, got {value!r}")
            out[key] = int(value)
        elif key == "willie_in_main_lobe":
            if not isinstance(value, bool):
                raise ConfigError(key, f"expected true/false, got {value!r}")
            out[key] = value
        elif key == "jammer_gain_mode":
            if value not in JAMMER_GAIN_MODES:
                raise ConfigError(key, f"must be one of {JAMMER_GAIN_MODES}, got {value!r}")
            out[key] = value
        else:
            out[key] = _check_number(key, value)
    for key in _POSITIVE:
        if not out[key] > 0:
            raise ConfigError(key, f"must be > 0, got {out[key]}")
    for key in _ANGLES:
        if not 0 < out[key] < 360:
            raise ConfigError(key, f"must lie in (0, 360) degrees, got {out[key]}")
    if out["delta_deg"] < 0:
        raise ConfigError("delta_deg", "must be >= 0")
    for arr in ("af", "as", "b"):
        if not out[f"main_{arr}_db"] > out[f"side_{arr}_db"]:
            raise ConfigError(f"side_{arr}_db", "side-lobe gain must be below the main lobe")
    return out


def config_from_flat(values: dict) -> SystemConfig:
    """Build a SystemConfig from flat (dB, dBm, degree) keys; missing keys default."""
    unknown = sorted(set(values) - set(DEFAULTS))
    if unknown:
        raise ConfigError(unknown[0], "unknown key")
    v = _validate({**DEFAULTS, **values})
    delta = math.radians(v["delta_deg"])

    def pattern(arr):
        return AntennaPattern(db_to_linear(v[f"main_{arr}_db"]), db_to_linear(v[f"side_{arr}_db"]),
                              math.radians(v[f"theta_{arr}_deg"]), delta)

    try:
        return SystemConfig(
            p_a=dbm_to_mw(v["pa_dbm"]),
            pj_max=dbm_to_mw(v["pj_max_dbm"]),
            sigma2_b=dbm_to_mw(v["sigma2_b_dbm"]),
            sigma2_w=dbm_to_mw(v["sigma2_w_dbm"]),
            d_ab=v["d_ab_m"],
            d_aw=v["d_aw_m"],
            alice_first=pattern("af"),
            alice_second=pattern("as"),
            bob=pattern("b"),
            blockage=BlockageParams(v["los_decay_m"], v["alpha_l"], v["alpha_n"], v["c_l"], v["c_n"]),
            fading=FadingParams(v["nu_l"], v["nu_n"]),
            willie_in_main_lobe=v["willie_in_main_lobe"],
            jammer_gain_mode=v["jammer_gain_mode"],
        )
    except DomainError as exc:
        raise ConfigError("config", str(exc)) from exc


def load_config(path) -> SystemConfig:
    """Read a flat JSON config; ``None`` gives the benchmark."""
    if path is None:
        return config_from_flat({})
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("path", f"cannot read {path}: {exc}") from exc
    if not text.strip():
        return config_from_flat({})
    try:
        values = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("file", f"malformed JSON: {exc}") from exc
    if not isinstance(values, dict):
        raise ConfigError("file", "top level must be an object")
    return config_from_flat(values)


def flat_config(cfg: SystemConfig) -> dict:
    """Inverse of ``config_from_flat`` (dB/dBm/degree units)."""
    out = {
        "pa_dbm": mw_to_dbm(cfg.p_a),
        "pj_max_dbm": mw_to_dbm(cfg.pj_max) if cfg.pj_max > 0 else -math.inf,
        "sigma2_b_dbm": mw_to_dbm(cfg.sigma2_b),
        "sigma2_w_dbm": mw_to_dbm(cfg.sigma2_w),
        "d_ab_m": cfg.d_ab,
        "d_aw_m": cfg.d_aw,
        "los_decay_m": cfg.blockage.decay_length,
        "alpha_l": cfg.blockage.alpha_l,
        "alpha_n": cfg.blockage.alpha_n,
        "c_l": cfg.blockage.c_l,
        "c_n": cfg.blockage.c_n,
        "nu_l": cfg.fading.nu_l,
        "nu_n": cfg.fading.nu_n,
        "delta_deg": math.degrees(cfg.alice_first.steer_sigma),
        "willie_in_main_lobe": cfg.willie_in_main_lobe,
        "jammer_gain_mode": cfg.jammer_gain_mode,
    }
    for arr, pat in (("af", cfg.alice_first), ("as", cfg.alice_second), ("b", cfg.bob)):
        out[f"main_{arr}_db"] = linear_to_db(pat.main_gain)
        out[f"side_{arr}_db"] = linear_to_db(pat.side_gain)
        out[f"theta_{arr}_deg"] = math.degrees(pat.beamwidth)
    return out


def config_hash(cfg: SystemConfig) -> str:
    blob = json.dumps(flat_config(cfg), sort_keys=True, default=repr)
    return hashlib.sha256(blob.encode()).hexdigest()


# -- sweeps ------------------------------------------------------------------

SWEEP_VARIABLES = ("pj_max_dbm", "rb", "pa_dbm", "epsilon", "d_aw", "d_ab")
SWEEP_METRICS = ("detect", "outage", "effective_rate", "capacity", "design")

_VARIABLE_COLUMNS = {
    "pj_max_dbm": "pj_max_dbm",
    "rb": "rb_bits_per_use",
    "pa_dbm": "pa_dbm",
    "epsilon": "epsilon",
    "d_aw": "d_aw_m",
    "d_ab": "d_ab_m",
}
_METRIC_COLUMNS = {
    "detect": ["detect_error"],
    "outage": ["outage"],
    "effective_rate": ["effective_rate_bits_per_use"],
    "capacity": ["capacity_bits_per_use"],
    "design": ["pj_opt_dbm", "rb_opt_bits_per_use", "outage_opt", "rate_opt_bits_per_use"],
}


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int
    metrics: tuple = ("detect",)

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise DomainError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        bad = [m for m in self.metrics if m not in SWEEP_METRICS]
        if bad or not self.metrics:
            raise DomainError(f"metrics must be a non-empty subset of {SWEEP_METRICS}")
        if self.steps < 2:
            raise DomainError("steps must be >= 2")
        if not self.start < self.stop:
            raise DomainError("start must be < stop")

    def grid(self):
        return np.linspace(self.start, self.stop, self.steps)

    def columns(self):
        cols = [_VARIABLE_COLUMNS[self.variable]]
        if self.variable not in ("pj_max_dbm",):
            cols.append("pj_max_dbm")
        for m in self.metrics:
            cols.extend(_METRIC_COLUMNS[m])
        return cols


def _sweep_point(cfg, spec, x, rb, epsilon, pj_opt):
    var = spec.variable
    if var == "pj_max_dbm":
        cfg = cfg.with_pj_max(dbm_to_mw(x))
    elif var == "pa_dbm":
        cfg = cfg.replace(p_a=dbm_to_mw(x))
    elif var == "d_aw":
        cfg = cfg.replace(d_aw=x)
    elif var == "d_ab":
        cfg = cfg.replace(d_ab=x)
    elif var == "rb":
        rb = x
    elif var == "epsilon":
        epsilon = x
    if pj_opt:
        cfg = cfg.with_pj_max(solve_pj_opt(cfg, epsilon))
    row = {_VARIABLE_COLUMNS[var]: float(x), "pj_max_dbm": mw_to_dbm(cfg.pj_max)}
    for m in spec.metrics:
        if m == "detect":
            row["detect_error"] = expected_detection_error(cfg)
        elif m in ("outage", "effective_rate"):
            if rb is None:
                raise DomainError(f"metric {m} needs --rb unless sweeping rb")
            out = outage_probability(cfg, rb)
            row["outage"] = out
            row["effective_rate_bits_per_use"] = rb * (1.0 - out)
        elif m == "capacity":
            row["capacity_bits_per_use"] = ergodic_capacity(cfg)
        elif m == "design":
            d = max_covert_rate(cfg, epsilon)
            row.update(pj_opt_dbm=mw_to_dbm(d.pj_opt), rb_opt_bits_per_use=d.r_b_opt,
                       outage_opt=d.outage_opt, rate_opt_bits_per_use=d.rate_opt)
    return [row[c] for c in spec.columns()]


def run_sweep(cfg: SystemConfig, spec: SweepSpec, rb=None, epsilon: float = 0.05,
              pj_opt: bool = False, workers: int = 1):
    """Yield one row (list of floats, ``spec.columns()`` order) per grid point, in grid order.

    With ``pj_opt`` the jamming ceiling at each point is first set to the
    smallest value meeting the covertness target ``epsilon``.
    """
    grid = spec.grid()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_sweep_point, cfg, spec, x, rb, epsilon, pj_opt) for x in grid]
            for f in futures:
                yield f.result()
    else:
        for x in grid:
            yield _sweep_point(cfg, spec, x, rb, epsilon, pj_opt)


# -- verification ------------------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    closed: float
    reference: float
    tolerance: float
    stderr: float = 0.0

    @property
    def passed(self):
        return abs(self.closed - self.reference) <= self.tolerance


TABLE_RATES = (0.1, 0.5, 1.0, 2.5, 5.0, 10.0)


def run_verify(cfg: SystemConfig, tier: str = "tight", n: int = 1_000_000, seed: int = 0,
               rb=None, workers: int = 1):
    """Compare closed forms against the oracle tier; returns a list of Check."""
    checks = []
    if tier == "tight":
        checks.append(Check("detect", expected_detection_error(cfg),
                            oracle.alzer_ref_detection(cfg), 1e-6))
        for r in ([rb] if rb is not None else TABLE_RATES):
            checks.append(Check(f"outage@rb={r:g}", outage_probability(cfg, r),
                                oracle.alzer_ref_outage(cfg, r), 1e-8))
        cap = ergodic_capacity(cfg)
        checks.append(Check("capacity", cap, oracle.quadrature_ref_capacity(cfg),
                            max(1e-7 * abs(cap), 1e-10)))
    elif tier == "loose":
        if rb is None:
            rb = best_effective_rate(cfg)[0]
        det = oracle.mc_expected_detection_error(cfg, n, seed, workers)
        out = oracle.mc_outage(cfg, rb, n, seed, workers)
        cap_mc = oracle.mc_ergodic_capacity(cfg, n, seed, workers)
        cap = ergodic_capacity(cfg)
        checks.append(Check("detect", expected_detection_error(cfg), det.mean,
                            max(0.02, 3 * det.stderr), det.stderr))
        checks.append(Check(f"outage@rb={rb:.4g}", outage_probability(cfg, rb), out.mean,
                            max(0.02, 3 * out.stderr), out.stderr))
        checks.append(Check("capacity", cap, cap_mc.mean,
                            max(0.02 * abs(cap_mc.mean), 3 * cap_mc.stderr), cap_mc.stderr))
    else:
        raise DomainError(f"tier must be tight or loose, got {tier!r}")
    return checks


def format_checks(checks) -> str:
    lines = [f"{'check':<22}{'closed':>16}{'reference':>16}{'|diff|':>12}"
             f"{'tolerance':>12}{'stderr':>12}  result"]
    for c in checks:
        lines.append(f"{c.name:<22}{c.closed:>16.10g}{c.reference:>16.10g}"
                     f"{abs(c.closed - c.reference):>12.3e}{c.tolerance:>12.3e}"
                     f"{c.stderr:>12.3e}  {'PASS' if c.passed else 'FAIL'}")
    return "\n".join(lines)


# -- entry point -------------------------------------------------------------

def _metadata(cfg, args):
    lines = [f"# config_sha256={config_hash(cfg)}", f"# command={args.command}"]
    if getattr(args, "seed", None) is not None:
        lines.append(f"# seed={args.seed}")
    return lines


def _write_csv(fh, meta, columns, rows):
    for line in meta:
        fh.write(line + "\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
        fh.flush()


def _resolve_pj(cfg, args):
    if args.pj_opt:
        return cfg.with_pj_max(solve_pj_opt(cfg, args.epsilon))
    return cfg


def _single(cfg, args):
    cfg = _resolve_pj(cfg, args)
    pj = mw_to_dbm(cfg.pj_max) if cfg.pj_max > 0 else -math.inf
    if args.command == "detect":
        return ["pj_max_dbm", "detect_error"], [[pj, expected_detection_error(cfg)]]
    if args.command == "outage":
        out = outage_probability(cfg, args.rb)
        return (["pj_max_dbm", "rb_bits_per_use", "outage", "effective_rate_bits_per_use"],
                [[pj, args.rb, out, args.rb * (1.0 - out)]])
    if args.command == "capacity":
        return ["pj_max_dbm", "capacity_bits_per_use"], [[pj, ergodic_capacity(cfg)]]
    d = max_covert_rate(cfg, args.epsilon)
    return (["epsilon", "pj_opt_dbm", "rb_opt_bits_per_use", "outage_opt", "rate_opt_bits_per_use"],
            [[d.epsilon, mw_to_dbm(d.pj_opt), d.r_b_opt, d.outage_opt, d.rate_opt]])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="covert-mmwave",
                                     description="Covert mmWave dual-beam link analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat JSON config (missing keys take benchmark values)")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--epsilon", type=float, default=0.05, help="covertness slack")
        p.add_argument("--pj-opt", action="store_true",
                       help="replace the config's jamming ceiling by the covert optimum")
        p.add_argument("--workers", type=int, default=1)
        return p

    common(sub.add_parser("detect", help="expected minimum detection error at Willie"))
    common(sub.add_parser("outage", help="outage and effective rate")).add_argument(
        "--rb", type=float, required=True, help="target rate, bits/use")
    common(sub.add_parser("capacity", help="ergodic capacity, bits/use"))
    common(sub.add_parser("design", help="covert optimum: jamming ceiling and target rate"))

    sw = common(sub.add_parser("sweep", help="evaluate metrics over a 1-D grid"))
    sw.add_argument("--variable", required=True, choices=SWEEP_VARIABLES)
    sw.add_argument("--start", type=float, required=True)
    sw.add_argument("--stop", type=float, required=True)
    sw.add_argument("--steps", type=int, default=21)
    sw.add_argument("--metrics", default="detect",
                    help=f"comma-separated subset of {','.join(SWEEP_METRICS)}")
    sw.add_argument("--rb", type=float)

    ve = common(sub.add_parser("verify", help="check closed forms against independent oracles"))
    ve.add_argument("--tier", choices=("tight", "loose"), default="tight")
    ve.add_argument("--samples", type=int, default=1_000_000)
    ve.add_argument("--seed", type=int, default=0)
    ve.add_argument("--rb", type=float)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        return _dispatch(cfg, args, fh)
    finally:
        if args.out:
            fh.close()


def _dispatch(cfg, args, fh):
    meta = _metadata(cfg, args)
    if args.command == "verify":
        try:
            cfg = _resolve_pj(cfg, args)
            checks = run_verify(cfg, args.tier, args.samples, args.seed, args.rb, args.workers)
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except NumericalError as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        fh.write("\n".join(meta) + "\n" + format_checks(checks) + "\n")
        return EXIT_OK if all(c.passed for c in checks) else EXIT_VERIFY

    if args.command == "sweep":
        try:
            spec = SweepSpec(args.variable, args.start, args.stop, args.steps,
                             tuple(m.strip() for m in args.metrics.split(",") if m.strip()))
            if args.variable != "rb" and args.rb is None and \
                    {"outage", "effective_rate"} & set(spec.metrics):
                raise DomainError("outage/effective_rate sweeps need --rb")
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        columns, rows = spec.columns(), run_sweep(cfg, spec, args.rb, args.epsilon,
                                                  args.pj_opt, args.workers)
    else:
        columns, rows = None, None

    if rows is None:
        try:
            columns, rows = _single(cfg, args)
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except NumericalError as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL

    try:
        _write_csv(fh, meta, columns, rows)
    except NumericalError as exc:
        fh.write(f"# error: {exc}\n")
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except DomainError as exc:
        fh.write(f"# error: {exc}\n")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
