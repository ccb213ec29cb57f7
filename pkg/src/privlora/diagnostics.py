"""Smoothness instrumentation: gradient norms and scales, per-path component
scales, Hessian-norm estimation on a frozen batch, the dynamic rescaling
factors of the ratio-form defense, and the correlation verdict comparing the
two defenses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numkit import (
    ConfigError,
    ContractError,
    ParamVector,
    Rng,
    hvp,
    pearson,
    power_iteration,
)


# ---------------------------------------------------------------------------
# Gradient norms and scales
# ---------------------------------------------------------------------------

def grad_norm(gb: np.ndarray, ga: np.ndarray) -> float:
    """Overall L2 norm across both factor gradients:
    sqrt(||dL/dB||^2 + ||dL/dA||^2) over all entries."""
    gb = np.asarray(gb, dtype=np.float64)
    ga = np.asarray(ga, dtype=np.float64)
    return float(np.sqrt((gb * gb).sum() + (ga * ga).sum()))


def grad_scale(gb: np.ndarray, ga: np.ndarray) -> float:
    """Sum of the per-factor L2 norms: ||dL/dB|| + ||dL/dA||."""
    gb = np.asarray(gb, dtype=np.float64)
    ga = np.asarray(ga, dtype=np.float64)
    return float(np.sqrt((gb * gb).sum()) + np.sqrt((ga * ga).sum()))


def grad_norm_all(pv: ParamVector) -> float:
    """Overall L2 norm of a whole gradient vector (all segments)."""
    return pv.norm()


def grad_scale_all(pv: ParamVector) -> float:
    """Sum of per-tensor L2 norms over every gradient segment."""
    return float(sum(np.linalg.norm(a.ravel()) for _, a in pv.segments()))


def component_scales(model, attacker, sched, fspec, batch, lam: float,
                     delta: float, method: str) -> tuple[float, float]:
    """Gradient scales contributed by the adaptation path and the gain path
    of the composite loss (already carrying the method's implicit weights:
    identity/lam for the sum form, f1/f2*lam for the ratio form).
    """
    if method not in ("mp_lora", "smp_lora"):
        raise ContractError(f"component scales defined for the defense methods, got {method!r}")
    from .trainers import composite_grads
    res = composite_grads(model, attacker, sched, fspec, batch, method, lam, delta)
    s_ada = grad_scale_all(res.ada_path)
    s_gain = grad_scale_all(res.gain_path) if res.gain_path is not None else 0.0
    return s_ada, s_gain


# ---------------------------------------------------------------------------
# Hessian norm via power iteration on finite-difference HVPs
# ---------------------------------------------------------------------------

def hessian_norm(grad_fn, params: ParamVector, iters: int = 50, tol: float = 1e-6,
                 rng: Rng | None = None, step: float | None = None) -> tuple[float, bool]:
    """Dominant-eigenvalue magnitude of the Hessian behind `grad_fn` at
    `params`, via power iteration over central-difference Hessian-vector
    products. Non-convergence is reported in the flag, not raised.
    """
    if rng is None:
        rng = Rng(0, "hessian")
    flat0 = params.to_flat()
    if step is None:
        inf_norm = float(np.abs(flat0).max()) if flat0.size else 0.0
        step = 1e-5 * (1.0 + inf_norm)

    def oracle(v: np.ndarray) -> np.ndarray:
        return hvp(grad_fn, params, params.with_flat(v), step).to_flat()

    eig, converged = power_iteration(oracle, params.size, iters=iters, tol=tol, rng=rng)
    return abs(eig), converged


# ---------------------------------------------------------------------------
# Rescaling factors
# ---------------------------------------------------------------------------

@dataclass
class RescaleFactors:
    f1: float   # 1 / (1 - lam*g + delta)
    f2: float   # l_ada / (1 - lam*g + delta)^2


def rescale_factors(l_ada: float, g: float, lam: float, delta: float) -> RescaleFactors:
    if delta <= 0:
        raise ConfigError("delta must be positive")
    denom = 1.0 - lam * g + delta
    return RescaleFactors(f1=1.0 / denom, f2=l_ada / (denom * denom))


# ---------------------------------------------------------------------------
# Correlation verdict
# ---------------------------------------------------------------------------

@dataclass
class SmoothnessSeries:
    """Gradient-norm and Hessian-norm trajectories at matched iterations."""
    method: str
    iters: np.ndarray
    grad_norms: np.ndarray
    hessian_norms: np.ndarray

    def __post_init__(self):
        self.iters = np.asarray(self.iters, dtype=np.int64)
        self.grad_norms = np.asarray(self.grad_norms, dtype=np.float64)
        self.hessian_norms = np.asarray(self.hessian_norms, dtype=np.float64)
        if not (self.iters.size == self.grad_norms.size == self.hessian_norms.size):
            raise ContractError("series lengths must match")


def smoothness_series_from_diag(path, method: str) -> SmoothnessSeries:
    """Read a diagnostics CSV back into a series (iter, grad_norm, hessian_norm)."""
    iters, gns, hns = [], [], []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        gi, hi = header.index("grad_norm"), header.index("hessian_norm")
        for line in fh:
            parts = line.strip().split(",")
            if not parts or parts == [""]:
                continue
            iters.append(int(parts[0]))
            gns.append(float(parts[gi]))
            hns.append(float(parts[hi]))
    return SmoothnessSeries(method=method, iters=np.array(iters),
                            grad_norms=np.array(gns), hessian_norms=np.array(hns))


def correlation_verdict(series_mp: SmoothnessSeries, series_smp: SmoothnessSeries) -> dict:
    """Correlation between gradient norm and Hessian norm for each defense,
    plus their difference. Significance thresholds are reported for the
    reader, not enforced here.
    """
    for s in (series_mp, series_smp):
        if s.iters.size < 10:
            raise ContractError(f"need >= 10 Hessian samples, got {s.iters.size} for {s.method}")
    c_mp = pearson(series_mp.grad_norms, series_mp.hessian_norms)
    c_smp = pearson(series_smp.grad_norms, series_smp.hessian_norms)
    return {
        "mp_method": series_mp.method,
        "smp_method": series_smp.method,
        "mp_pcc": c_mp.r,
        "mp_p_value": c_mp.p_value,
        "mp_n": c_mp.n,
        "smp_pcc": c_smp.r,
        "smp_p_value": c_smp.p_value,
        "smp_n": c_smp.n,
        "pcc_gap": c_smp.r - c_mp.r,
        "p_threshold_weak": 0.05,
        "p_threshold_strong": 0.001,
        "interpretation": (
            "sum-form curvature carries no gradient-norm term, so its "
            "local smoothness is unconstrained; ratio-form curvature is "
            "bounded by a gradient-norm multiple, so a positive correlation "
            "is expected for the ratio form"
        ),
    }


def write_verdict(path, report: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, val in report.items():
            if isinstance(val, float):
                fh.write(f"{key}={val:.17g}\n")
            else:
                fh.write(f"{key}={val}\n")
