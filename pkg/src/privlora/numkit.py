"""Numeric substrate: seeded RNG streams, named parameter vectors, dense MLP
forward/backward, finite-difference oracles, Hessian-vector products, power
iteration, and correlation statistics.

Everything is 64-bit and deterministic given a seed; no shared mutable state.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


class ConfigError(ValueError):
    """Invalid configuration value."""


class ContractError(ValueError):
    """Caller violated an operation precondition."""


class DimensionError(ValueError):
    """Shape mismatch between operands."""


class NumericError(ArithmeticError):
    """Non-finite value where a finite one is required."""


class DegenerateInputError(ValueError):
    """Statistically degenerate input (e.g. zero variance)."""


def ensure_finite(arr, what="value"):
    if not np.all(np.isfinite(arr)):
        raise NumericError(f"non-finite {what}")
    return arr


# ---------------------------------------------------------------------------
# Seeded randomness
# ---------------------------------------------------------------------------

class Rng:
    """Deterministic random stream keyed by (seed, stream name).

    Identical seed and name give an identical stream; distinct names give
    independently keyed streams. Normal draws use the Marsaglia polar
    transform of uniform variates.
    """

    def __init__(self, seed: int, stream: str = "root"):
        self.seed = int(seed)
        self.stream = stream
        key = zlib.crc32(stream.encode("utf-8"))
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([self.seed & 0xFFFFFFFFFFFFFFFF, key]))
        )

    def spawn(self, stream: str) -> "Rng":
        """Independently keyed child stream under the same seed."""
        return Rng(self.seed, f"{self.stream}/{stream}")

    def uniform(self, n: int) -> np.ndarray:
        return self._gen.random(n, dtype=np.float64)

    def integers(self, low: int, high: int, n: int | None = None):
        out = self._gen.integers(low, high, size=n)
        return int(out) if n is None else np.asarray(out)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def normal(self, n: int) -> np.ndarray:
        """n i.i.d. standard-normal draws (polar method, batched rejection)."""
        out = np.empty(n, dtype=np.float64)
        filled = 0
        while filled < n:
            m = max(8, (n - filled) // 2 + 4)
            u = 2.0 * self.uniform(m) - 1.0
            v = 2.0 * self.uniform(m) - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            u, v, s = u[ok], v[ok], s[ok]
            f = np.sqrt(-2.0 * np.log(s) / s)
            pair = np.concatenate([u * f, v * f])
            take = min(pair.size, n - filled)
            out[filled:filled + take] = pair[:take]
            filled += take
        return out


def gaussian_sample(rng: Rng, shape) -> np.ndarray:
    """Matrix of i.i.d. standard-normal entries, deterministic per stream."""
    shape = tuple(int(s) for s in (shape if isinstance(shape, (tuple, list)) else (shape,)))
    if any(s < 0 for s in shape):
        raise ContractError(f"invalid shape {shape}")
    n = 1
    for s in shape:
        n *= s
    return rng.normal(n).reshape(shape)


# ---------------------------------------------------------------------------
# Parameter vectors
# ---------------------------------------------------------------------------

class ParamVector:
    """Ordered, named parameter segments with an exact flat 64-bit view.

    flatten/unflatten round-trips bit-exactly and the segment layout is
    immutable after construction.
    """

    def __init__(self, segments: Sequence[tuple[str, np.ndarray]]):
        self._names = [name for name, _ in segments]
        self._arrays = [np.array(arr, dtype=np.float64) for _, arr in segments]
        if len(set(self._names)) != len(self._names):
            raise ContractError("duplicate segment names")

    @property
    def names(self):
        return list(self._names)

    @property
    def size(self) -> int:
        return int(sum(a.size for a in self._arrays))

    def __len__(self):
        return self.size

    def __getitem__(self, name: str) -> np.ndarray:
        return self._arrays[self._names.index(name)]

    def segments(self):
        return list(zip(self._names, self._arrays))

    def copy(self) -> "ParamVector":
        return ParamVector([(n, a.copy()) for n, a in self.segments()])

    def to_flat(self) -> np.ndarray:
        if not self._arrays:
            return np.empty(0, dtype=np.float64)
        return np.concatenate([a.ravel() for a in self._arrays])

    def with_flat(self, flat: np.ndarray) -> "ParamVector":
        """Same names/shapes, values replaced from a flat vector."""
        flat = np.asarray(flat, dtype=np.float64)
        if flat.size != self.size:
            raise DimensionError(f"flat length {flat.size} != {self.size}")
        out, pos = [], 0
        for n, a in self.segments():
            out.append((n, flat[pos:pos + a.size].reshape(a.shape)))
            pos += a.size
        return ParamVector(out)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_flat()))

    def __add__(self, other: "ParamVector") -> "ParamVector":
        if self._names != other._names:
            raise DimensionError("segment layouts differ")
        return ParamVector([(n, a + b) for (n, a), (_, b)
                            in zip(self.segments(), other.segments())])

    def scaled(self, c: float) -> "ParamVector":
        return ParamVector([(n, c * a) for n, a in self.segments()])


# ---------------------------------------------------------------------------
# Dense MLP forward/backward
# ---------------------------------------------------------------------------

_ACTIVATIONS = ("relu", "silu", "identity")


def _act(z, kind):
    if kind == "relu":
        return np.maximum(z, 0.0)
    if kind == "silu":
        return z / (1.0 + np.exp(-z))
    return z


def _act_grad(z, kind):
    if kind == "relu":
        return (z > 0.0).astype(np.float64)
    if kind == "silu":
        sig = 1.0 / (1.0 + np.exp(-z))
        return sig * (1.0 + z * (1.0 - sig))
    return np.ones_like(z)


def init_mlp_params(arch: Sequence[int], rng: Rng) -> ParamVector:
    """He-style initialization for the [w0, b0, w1, b1, ...] layout."""
    segs = []
    for i in range(len(arch) - 1):
        fan_in, fan_out = arch[i], arch[i + 1]
        w = gaussian_sample(rng, (fan_out, fan_in)) * math.sqrt(2.0 / fan_in)
        segs.append((f"w{i}", w))
        segs.append((f"b{i}", np.zeros(fan_out)))
    return ParamVector(segs)


@dataclass
class MlpCache:
    arch: tuple
    activation: str
    inputs: list          # layer inputs, len = n_layers
    preacts: list         # pre-activations, len = n_layers
    weights: list         # weight matrices used in the forward


def mlp_forward(params: ParamVector, x: np.ndarray, arch: Sequence[int], activation: str):
    """Forward pass of a dense MLP; hidden layers use `activation`, the final
    layer is linear (caller applies any output nonlinearity).

    Returns (output, cache) where cache suffices for an exact backward.
    """
    if activation not in _ACTIVATIONS:
        raise ContractError(f"unknown activation {activation!r}")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != arch[0]:
        raise DimensionError(f"input shape {x.shape} incompatible with arch {list(arch)}")
    n_layers = len(arch) - 1
    inputs, preacts, weights = [], [], []
    h = x
    for i in range(n_layers):
        w, b = params[f"w{i}"], params[f"b{i}"]
        if w.shape != (arch[i + 1], arch[i]):
            raise DimensionError(f"w{i} shape {w.shape} != {(arch[i + 1], arch[i])}")
        z = h @ w.T + b
        inputs.append(h)
        preacts.append(z)
        weights.append(w)
        h = _act(z, activation) if i < n_layers - 1 else z
    return h, MlpCache(tuple(arch), activation, inputs, preacts, weights)


def mlp_backward(cache: MlpCache, output_grad: np.ndarray, with_input_grad: bool = False):
    """Exact reverse-mode gradients for a forward recorded in `cache`.

    Returns a ParamVector of parameter gradients, plus the gradient w.r.t.
    the network input when `with_input_grad` is set.
    """
    if not isinstance(cache, MlpCache) or not cache.inputs:
        raise ContractError("stale or invalid forward cache")
    g = np.asarray(output_grad, dtype=np.float64)
    if g.shape != cache.preacts[-1].shape:
        raise DimensionError(f"output_grad shape {g.shape} != {cache.preacts[-1].shape}")
    n_layers = len(cache.inputs)
    grads: list[tuple[str, np.ndarray]] = []
    for i in reversed(range(n_layers)):
        dz = g if i == n_layers - 1 else g * _act_grad(cache.preacts[i], cache.activation)
        grads.append((f"b{i}", dz.sum(axis=0)))
        grads.append((f"w{i}", dz.T @ cache.inputs[i]))
        g = dz @ cache.weights[i]
    grads.reverse()
    pv = ParamVector(grads)
    return (pv, g) if with_input_grad else pv


# ---------------------------------------------------------------------------
# Optimizers (flat-vector descent steps)
# ---------------------------------------------------------------------------

class Sgd:
    def __init__(self, dim: int, lr: float):
        self.lr = float(lr)

    def step(self, flat: np.ndarray, grad: np.ndarray) -> np.ndarray:
        return flat - self.lr * grad


class Adam:
    """Standard Adam with bias correction; step() performs one descent update."""

    def __init__(self, dim: int, lr: float, beta1: float = 0.9, beta2: float = 0.999,
                 eps: float = 1e-8):
        self.lr = float(lr)
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = np.zeros(dim, dtype=np.float64)
        self.v = np.zeros(dim, dtype=np.float64)
        self.t = 0

    def step(self, flat: np.ndarray, grad: np.ndarray) -> np.ndarray:
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        mhat = self.m / (1.0 - self.beta1 ** self.t)
        vhat = self.v / (1.0 - self.beta2 ** self.t)
        return flat - self.lr * mhat / (np.sqrt(vhat) + self.eps)


def make_optimizer(kind: str, dim: int, lr: float):
    if kind == "adam":
        return Adam(dim, lr)
    if kind == "sgd":
        return Sgd(dim, lr)
    raise ConfigError(f"unknown optimizer {kind!r}")


# ---------------------------------------------------------------------------
# Derivative oracles
# ---------------------------------------------------------------------------

def finite_diff_grad(loss_fn: Callable[[ParamVector], float], params: ParamVector,
                     step: float) -> ParamVector:
    """Central-difference gradient, entry i = (L(p+h e_i) - L(p-h e_i)) / 2h."""
    if step <= 0:
        raise ContractError("step must be positive")
    flat = params.to_flat()
    grad = np.empty_like(flat)
    for i in range(flat.size):
        probe = flat.copy()
        probe[i] = flat[i] + step
        lo_hi = loss_fn(params.with_flat(probe))
        probe[i] = flat[i] - step
        lo_lo = loss_fn(params.with_flat(probe))
        if not (math.isfinite(lo_hi) and math.isfinite(lo_lo)):
            raise NumericError("non-finite loss while probing")
        grad[i] = (lo_hi - lo_lo) / (2.0 * step)
    return params.with_flat(grad)


def hvp(grad_fn: Callable[[ParamVector], ParamVector], params: ParamVector,
        v: ParamVector, step: float) -> ParamVector:
    """Hessian-vector product by central differencing the analytic gradient:
    (grad(p + h v_hat) - grad(p - h v_hat)) * ||v|| / 2h with v_hat = v/||v||.
    """
    if step <= 0:
        raise ContractError("step must be positive")
    vflat = v.to_flat()
    vnorm = float(np.linalg.norm(vflat))
    if vnorm == 0.0:
        raise ContractError("zero direction vector")
    vhat = vflat / vnorm
    flat = params.to_flat()
    g_hi = grad_fn(params.with_flat(flat + step * vhat)).to_flat()
    g_lo = grad_fn(params.with_flat(flat - step * vhat)).to_flat()
    ensure_finite(g_hi, "gradient")
    ensure_finite(g_lo, "gradient")
    return params.with_flat((g_hi - g_lo) * (vnorm / (2.0 * step)))


def power_iteration(hvp_oracle: Callable[[np.ndarray], np.ndarray], dim: int,
                    iters: int = 50, tol: float = 1e-6,
                    rng: Rng | None = None) -> tuple[float, bool]:
    """Dominant (largest-magnitude) eigenvalue of a symmetric operator via
    power iteration with a Rayleigh-quotient estimate.

    converged is True iff two successive estimates differ by < tol before the
    iteration budget runs out. Defaults follow the diagnostics protocol
    (iters=50, tol=1e-6).
    """
    if dim < 1 or iters < 1 or tol <= 0:
        raise ContractError("dim >= 1, iters >= 1, tol > 0 required")
    if rng is None:
        rng = Rng(0, "power")
    v = rng.normal(dim)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = np.asarray(hvp_oracle(v), dtype=np.float64)
        ensure_finite(w, "operator output")
        new_est = float(v @ w)
        wnorm = float(np.linalg.norm(w))
        if wnorm == 0.0:
            # operator annihilates the iterate; dominant action on v is zero
            return 0.0, True
        v = w / wnorm
        if abs(new_est - est) < tol:
            return new_est, True
        est = new_est
    return est, False


# ---------------------------------------------------------------------------
# Correlation statistics
# ---------------------------------------------------------------------------

@dataclass
class CorrelationResult:
    r: float
    p_value: float
    n: int


def _betacf(a: float, b: float, x: float) -> float:
    # modified Lentz continued fraction for the incomplete beta function
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return h


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b), continued-fraction evaluation."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_sf2(t: float, df: float) -> float:
    """Two-sided tail probability of Student's t with df degrees of freedom."""
    t2 = t * t
    return reg_inc_beta(0.5 * df, 0.5, df / (df + t2))


def pearson(xs, ys) -> CorrelationResult:
    """Pearson correlation with a two-sided p-value from the t-distribution
    (CDF via the regularized incomplete beta).
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise DimensionError("series must be equal-length vectors")
    n = xs.size
    if n < 3:
        raise ContractError("need at least 3 points")
    dx = xs - xs.mean()
    dy = ys - ys.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInputError("zero variance series")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    df = n - 2
    if 1.0 - r * r <= 0.0:
        p = 0.0
    else:
        t = abs(r) * math.sqrt(df / (1.0 - r * r))
        p = student_t_sf2(t, df)
    return CorrelationResult(r=r, p_value=min(max(p, 0.0), 1.0), n=n)
