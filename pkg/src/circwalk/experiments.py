"""Experiment runners behind the CLI, plus their CSV/JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import diophantine as dio
from .alpha import AlphaVector, make_alpha
from .fourier import (
    BoundReport,
    TheoremConstants,
    default_m_cap,
    optimize_et_bound,
    paper_truncation_M,
    q_hat_table,
    su_lower_bound,
    theorem_constants,
    DEFAULT_SU_MMAX,
)
from .measure import (
    DEFAULT_SUPPORT_CAP,
    AtomicMeasure,
    SupportCapExceeded,
    atoms_on_circle,
    convolve_power,
    discrepancy_exact,
    sample_walk,
    walk_distributions,
)

MODES = ("exact", "montecarlo", "both")
FORMATS = ("csv", "json")
VERIFY_HEADER = ["k", "d_exact", "su_lower", "et_upper", "et_M", "paper_M", "c1_envelope", "c2_envelope"]
WALK_HEADER = ["position", "weight"]
DIOPH_HEADER = [
    "alpha", "d", "beta_hat", "beta_argmin", "n_max",
    "b_hat", "b_argmax_q", "q_max", "q_effective", "per_q_cap", "dm_verdict",
]


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    alpha_spec: str
    k_min: int = 1
    k_max: int = 100
    k_step: int = 1
    mode: str = "exact"
    n_samples: int = 100_000
    seed: int = 0
    n_max_dioph: int = 100_000
    q_max: int = 1000
    m_cap: Optional[int] = None
    support_cap: int = DEFAULT_SUPPORT_CAP
    output_path: str = "-"
    format: str = "csv"
    su_m_max: int = DEFAULT_SU_MMAX

    def validate(self, allow_k0: bool = False) -> None:
        lo = 0 if allow_k0 else 1
        if not lo <= self.k_min <= self.k_max:
            raise ConfigError(f"need {lo} <= k_min <= k_max, got k_min={self.k_min}, k_max={self.k_max}")
        if self.k_step < 1:
            raise ConfigError("k_step must be >= 1")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.mode != "exact" and self.n_samples < 1:
            raise ConfigError("n_samples must be >= 1")
        for name in ("n_max_dioph", "q_max", "support_cap", "su_m_max"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.m_cap is not None and self.m_cap < 1:
            raise ConfigError("m_cap must be >= 1")

    def alpha(self) -> AlphaVector:
        try:
            return make_alpha(self.alpha_spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def ks(self) -> list[int]:
        return list(range(self.k_min, self.k_max + 1, self.k_step))


@dataclass
class VerifyResult:
    alpha: AlphaVector
    approx: dio.ApproximationConstants
    constants: Optional[TheoremConstants]
    rows: list[BoundReport]
    slope: Optional[float]
    slope_window: tuple[float, float]
    caveats: list[str] = field(default_factory=list)
    config: Optional[ExperimentConfig] = None


def mc_seed(seed: int, k: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([seed, k])


def loglog_slope(ks, ds, k_lo: float, k_hi: float) -> Optional[float]:
    """Least-squares slope of log D against log k for k_lo <= k <= k_hi."""
    pts = [(k, d) for k, d in zip(ks, ds) if d is not None and d > 0 and k_lo <= k <= k_hi]
    if len(pts) < 2:
        return None
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def run_verify(config: ExperimentConfig) -> VerifyResult:
    config.validate()
    alpha = config.alpha()
    d = alpha.d
    m_cap = config.m_cap or default_m_cap(d)
    approx = dio.approximation_constants(alpha, config.n_max_dioph, config.q_max)

    caveats = [
        "theorem constants use finite-horizon estimates beta_hat and B_hat; "
        "they are not certified approximation constants",
    ]
    if approx.q_effective < approx.q_max:
        caveats.append(
            f"Dirichlet scan truncated at q={approx.q_effective} by per_q_cap={approx.per_q_cap}"
        )
    constants = None
    if approx.beta_hat > 0 and approx.b_hat > 0:
        constants = theorem_constants(d, approx.b_hat, approx.beta_hat)
    else:
        caveats.append(
            "beta_hat or B_hat is zero: tuple is not badly approximable at this horizon; "
            "envelopes and paper_M omitted"
        )
    if config.mode != "exact":
        caveats.append(
            f"Monte Carlo error budget 3/sqrt(n_samples) = {3 / math.sqrt(config.n_samples):.6g}"
        )

    table = q_hat_table(alpha, max(m_cap, config.su_m_max))
    abs_table = np.abs(table[:m_cap])
    ks = config.ks()

    exact: dict[int, Optional[float]] = {k: None for k in ks}
    if config.mode in ("exact", "both"):
        reachable = [k for k in ks if (2 * k + 1) ** d <= config.support_cap]
        if len(reachable) < len(ks):
            caveats.append(f"d_exact omitted for k beyond support cap {config.support_cap}")
        if reachable:
            wanted = set(reachable)
            for dist in walk_distributions(d, max(reachable), config.support_cap):
                if dist.k in wanted:
                    exact[dist.k] = discrepancy_exact(atoms_on_circle(dist, alpha))

    rows = []
    for k in ks:
        et_M, et_upper = optimize_et_bound(abs_table**k)
        su = su_lower_bound(alpha, k, config.su_m_max, table=table)
        d_mc = None
        if config.mode in ("montecarlo", "both"):
            d_mc = discrepancy_exact(sample_walk(alpha, k, config.n_samples, mc_seed(config.seed, k)))
        if constants is not None:
            c1e, c2e = constants.envelopes(k)
            pm = paper_truncation_M(approx.beta_hat, k, d)
        else:
            c1e = c2e = pm = None
        rows.append(BoundReport(k, exact[k], su, et_upper, et_M, pm, c1e, c2e, d_mc))

    window = ((config.k_min + config.k_max) / 2, float(config.k_max))
    slope = loglog_slope([r.k for r in rows], [r.d_exact for r in rows], *window)
    return VerifyResult(alpha, approx, constants, rows, slope, window, caveats, config)


def run_walk(config: ExperimentConfig) -> AtomicMeasure:
    """Distribution at k = k_min: exact lattice convolution or Monte Carlo sample."""
    config.validate(allow_k0=True)
    if config.mode == "both":
        raise ConfigError("walk takes a single mode: exact or montecarlo")
    alpha = config.alpha()
    k = config.k_min
    if config.mode == "exact":
        return atoms_on_circle(convolve_power(alpha.d, k, config.support_cap), alpha)
    return sample_walk(alpha, k, config.n_samples, mc_seed(config.seed, k))


def run_dioph(config: ExperimentConfig) -> dict:
    config.validate(allow_k0=True)
    alpha = config.alpha()
    approx = dio.approximation_constants(alpha, config.n_max_dioph, config.q_max)
    report = {"alpha": config.alpha_spec, "d": alpha.d, **asdict(approx)}
    report["dm_verdict"] = dio.davenport_mahler_check(approx.beta_hat).value if alpha.d == 2 else None
    report["entries"] = list(alpha.entries)
    return report


# --- serialisation -------------------------------------------------------

def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jnum(x):
    # 17 significant digits, as in the CSV
    if isinstance(x, (float, np.floating)):
        return float(format(float(x), ".17g"))
    return x


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def verify_meta(result: VerifyResult) -> dict:
    cfg = result.config
    c = result.constants
    meta = {
        "alpha_spec": result.alpha.spec,
        "entries": [_jnum(a) for a in result.alpha.entries],
        "d": result.alpha.d,
        "beta_hat": _jnum(result.approx.beta_hat),
        "beta_argmin": result.approx.beta_argmin,
        "b_hat": _jnum(result.approx.b_hat),
        "b_argmax_q": result.approx.b_argmax_q,
        "n_max": result.approx.n_max,
        "q_max": result.approx.q_max,
        "q_effective": result.approx.q_effective,
        "per_q_cap": result.approx.per_q_cap,
        "c1": _jnum(c.c1) if c else None,
        "c2": _jnum(c.c2) if c else None,
        "slope": _jnum(result.slope) if result.slope is not None else None,
        "slope_window": [_jnum(result.slope_window[0]), _jnum(result.slope_window[1])],
        "caveats": list(result.caveats),
        "certified": False,
    }
    if cfg is not None:
        meta.update(
            mode=cfg.mode,
            seed=cfg.seed,
            n_samples=cfg.n_samples if cfg.mode != "exact" else None,
            mc_error_budget=_jnum(3 / math.sqrt(cfg.n_samples)) if cfg.mode != "exact" else None,
            m_cap=cfg.m_cap or default_m_cap(result.alpha.d),
            su_m_max=cfg.su_m_max,
            support_cap=cfg.support_cap,
        )
    return meta


def verify_to_csv(result: VerifyResult) -> str:
    return _csv_text(
        VERIFY_HEADER,
        [
            (r.k, r.d_exact, r.su_lower, r.et_upper, r.et_M, r.paper_M, r.c1_envelope, r.c2_envelope)
            for r in result.rows
        ],
    )


def verify_to_json(result: VerifyResult) -> str:
    include_mc = result.config is not None and result.config.mode != "exact"
    rows = []
    for r in result.rows:
        row = {name: _jnum(getattr(r, name)) for name in VERIFY_HEADER}
        if include_mc:
            row["d_montecarlo"] = _jnum(r.d_montecarlo)
        rows.append(row)
    return json.dumps({"meta": verify_meta(result), "rows": rows}, indent=2) + "\n"


def walk_to_csv(p: AtomicMeasure) -> str:
    return _csv_text(WALK_HEADER, p.atoms)


def walk_to_json(p: AtomicMeasure, meta: dict) -> str:
    rows = [{"position": _jnum(x), "weight": _jnum(w)} for x, w in p.atoms]
    return json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"


def dioph_to_csv(report: dict) -> str:
    return _csv_text(DIOPH_HEADER, [[report[h] for h in DIOPH_HEADER]])


def dioph_to_json(report: dict) -> str:
    meta = {k: _jnum(v) if not isinstance(v, list) else [_jnum(x) for x in v] for k, v in report.items()}
    meta["certified"] = False
    return json.dumps({"meta": meta}, indent=2) + "\n"


def read_verify_csv(text: str) -> list[dict]:
    """Parse a verify CSV back into typed rows (empty fields become None)."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for key in VERIFY_HEADER:
            v = rec[key]
            if v == "":
                row[key] = None
            elif key in ("k", "et_M", "paper_M"):
                row[key] = int(v)
            else:
                row[key] = float(v)
        out.append(row)
    return out


__all__ = [
    "ConfigError", "ExperimentConfig", "VerifyResult", "SupportCapExceeded",
    "run_verify", "run_walk", "run_dioph", "loglog_slope",
    "verify_to_csv", "verify_to_json", "walk_to_csv", "walk_to_json",
    "dioph_to_csv", "dioph_to_json", "read_verify_csv",
]
