"""Toy denoising-diffusion machinery: linear noise schedule, forward noising,
a low-rank-adapted feed-forward denoiser with table-based conditioning, the
adaptation loss, and ancestral sampling.

Data lives directly in the latent space (identity encoder/decoder); the text
encoder is replaced by a frozen per-caption embedding table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numkit import (
    ConfigError,
    ContractError,
    DimensionError,
    ParamVector,
    Rng,
    gaussian_sample,
)


# ---------------------------------------------------------------------------
# Noise schedule and forward process
# ---------------------------------------------------------------------------

@dataclass
class NoiseSchedule:
    betas: np.ndarray        # per-step variances, index 0 is t=1
    alphas: np.ndarray       # 1 - beta
    alpha_bars: np.ndarray   # cumulative products, strictly decreasing

    @property
    def T(self) -> int:
        return int(self.betas.size)


def linear_schedule(T: int, beta_start: float = 1e-4, beta_end: float = 0.02) -> NoiseSchedule:
    """Linearly spaced betas (inclusive endpoints) with cumulative products."""
    if T < 1:
        raise ConfigError("T must be >= 1")
    if not (0.0 < beta_start <= beta_end < 1.0):
        raise ConfigError(f"invalid beta range ({beta_start}, {beta_end})")
    if T == 1:
        betas = np.array([beta_start], dtype=np.float64)
    else:
        betas = np.linspace(beta_start, beta_end, T, dtype=np.float64)
    alphas = 1.0 - betas
    return NoiseSchedule(betas=betas, alphas=alphas, alpha_bars=np.cumprod(alphas))


def forward_noise(z0: np.ndarray, t: int, eps: np.ndarray, sched: NoiseSchedule) -> np.ndarray:
    """z_t = sqrt(abar_t) z0 + sqrt(1 - abar_t) eps, t in 1..T."""
    if not 1 <= t <= sched.T:
        raise ContractError(f"t={t} outside 1..{sched.T}")
    z0 = np.asarray(z0, dtype=np.float64)
    eps = np.asarray(eps, dtype=np.float64)
    if z0.shape != eps.shape:
        raise DimensionError("z0 and eps shapes differ")
    ab = sched.alpha_bars[t - 1]
    return math.sqrt(ab) * z0 + math.sqrt(1.0 - ab) * eps


# ---------------------------------------------------------------------------
# Samples and LoRA layers
# ---------------------------------------------------------------------------

@dataclass
class Sample:
    x: np.ndarray   # data point, identified with its latent
    y: int          # caption id indexing the conditioning table


class LoraLayer:
    """Frozen dense weight plus a trainable low-rank update b @ a.

    Effective weight = frozen_w + scale * b @ a; frozen_w is never mutated
    after construction.
    """

    def __init__(self, frozen_w: np.ndarray, b: np.ndarray, a: np.ndarray, scale: float):
        self.frozen_w = np.asarray(frozen_w, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.a = np.asarray(a, dtype=np.float64)
        self.rank = int(b.shape[1])
        self.scale = float(scale)
        d, k = self.frozen_w.shape
        if self.b.shape != (d, self.rank) or self.a.shape != (self.rank, k):
            raise DimensionError("LoRA factor shapes inconsistent with frozen weight")

    def effective_weight(self) -> np.ndarray:
        return self.frozen_w + self.scale * (self.b @ self.a)


def init_lora(frozen_w: np.ndarray, r: int, lora_alpha: float | None, rng: Rng) -> LoraLayer:
    """Fresh LoRA pair: a ~ N(0, 1/r), b = 0, so the initial effective weight
    equals the frozen one. Desk-scale default lora_alpha = 2r.
    """
    frozen_w = np.asarray(frozen_w, dtype=np.float64)
    d, k = frozen_w.shape
    if r < 1:
        raise ConfigError("rank must be >= 1")
    if r > min(d, k) // 2:
        raise ConfigError(f"rank {r} too large for {d}x{k} (max {min(d, k) // 2})")
    if lora_alpha is None:
        lora_alpha = 2.0 * r
    a = gaussian_sample(rng, (r, k)) * math.sqrt(1.0 / r)
    b = np.zeros((d, r), dtype=np.float64)
    return LoraLayer(frozen_w, b, a, scale=lora_alpha / r)


# ---------------------------------------------------------------------------
# Denoiser
# ---------------------------------------------------------------------------

@dataclass
class DenoiserCache:
    inputs: list
    preacts: list
    eff_weights: list
    batch: int


class LoraDenoiser:
    """Feed-forward noise predictor on concat(z_t, time features, caption
    embedding); every linear layer carries a LoRA pair, layers are bias-free,
    hidden activations are SiLU and the output layer is linear.
    """

    def __init__(self, layers: list[LoraLayer], cond_table: np.ndarray,
                 data_dim: int, T: int, time_dim: int = 8):
        if time_dim % 2 != 0:
            raise ConfigError("time_dim must be even")
        self.layers = layers
        self.cond_table = np.asarray(cond_table, dtype=np.float64)
        self.data_dim = int(data_dim)
        self.T = int(T)
        self.time_dim = int(time_dim)
        k = time_dim // 2
        self._freqs = 10000.0 ** (-np.arange(k) / k)

    @property
    def cond_dim(self) -> int:
        return int(self.cond_table.shape[1])

    @property
    def n_classes(self) -> int:
        return int(self.cond_table.shape[0])

    def time_features(self, ts: np.ndarray) -> np.ndarray:
        ang = np.asarray(ts, dtype=np.float64)[:, None] * self._freqs[None, :]
        return np.concatenate([np.sin(ang), np.cos(ang)], axis=1)

    def input_features(self, z: np.ndarray, ts, ys) -> np.ndarray:
        z = np.atleast_2d(np.asarray(z, dtype=np.float64))
        ts = np.atleast_1d(np.asarray(ts, dtype=np.int64))
        ys = np.atleast_1d(np.asarray(ys, dtype=np.int64))
        if z.shape[1] != self.data_dim:
            raise DimensionError(f"z dim {z.shape[1]} != {self.data_dim}")
        if np.any(ys < 0) or np.any(ys >= self.n_classes):
            raise ContractError("caption id outside conditioning table")
        return np.concatenate([z, self.time_features(ts), self.cond_table[ys]], axis=1)

    def forward(self, z, ts, ys):
        """Predicted noise for a batch; returns (output, cache)."""
        h = self.input_features(z, ts, ys)
        inputs, preacts, effs = [], [], []
        n_layers = len(self.layers)
        for i, layer in enumerate(self.layers):
            w = layer.effective_weight()
            zpre = h @ w.T
            inputs.append(h)
            preacts.append(zpre)
            effs.append(w)
            if i < n_layers - 1:
                h = zpre / (1.0 + np.exp(-zpre))   # silu
            else:
                h = zpre
        return h, DenoiserCache(inputs, preacts, effs, h.shape[0])

    def backward(self, cache: DenoiserCache, dout: np.ndarray, full_ft: bool = False) -> ParamVector:
        """Gradients of a scalar loss w.r.t. the trainable set, given the
        gradient at the network output. Matches trainable() segment order.
        """
        if not isinstance(cache, DenoiserCache) or len(cache.inputs) != len(self.layers):
            raise ContractError("stale or invalid denoiser cache")
        g = np.asarray(dout, dtype=np.float64)
        segs: list[tuple[str, np.ndarray]] = []
        n_layers = len(self.layers)
        for i in reversed(range(n_layers)):
            zpre = cache.preacts[i]
            if i == n_layers - 1:
                dz = g
            else:
                sig = 1.0 / (1.0 + np.exp(-zpre))
                dz = g * (sig * (1.0 + zpre * (1.0 - sig)))
            dw_eff = dz.T @ cache.inputs[i]
            layer = self.layers[i]
            if full_ft:
                segs.append((f"layer{i}.w", dw_eff))
            else:
                segs.append((f"layer{i}.a", layer.scale * (layer.b.T @ dw_eff)))
                segs.append((f"layer{i}.b", layer.scale * (dw_eff @ layer.a.T)))
            g = dz @ cache.eff_weights[i]
        segs.reverse()
        return ParamVector(segs)

    def trainable(self, full_ft: bool = False) -> ParamVector:
        segs = []
        for i, layer in enumerate(self.layers):
            if full_ft:
                segs.append((f"layer{i}.w", layer.frozen_w))
            else:
                segs.append((f"layer{i}.b", layer.b))
                segs.append((f"layer{i}.a", layer.a))
        return ParamVector(segs)

    def set_trainable(self, pv: ParamVector, full_ft: bool = False) -> None:
        for i, layer in enumerate(self.layers):
            if full_ft:
                layer.frozen_w = pv[f"layer{i}.w"].copy()
            else:
                layer.b = pv[f"layer{i}.b"].copy()
                layer.a = pv[f"layer{i}.a"].copy()

    def frozen_fingerprint(self) -> bytes:
        """Bytes of every non-trainable tensor, for bit-identity checks."""
        parts = [layer.frozen_w.tobytes() for layer in self.layers]
        parts.append(self.cond_table.tobytes())
        return b"".join(parts)

    def clone(self) -> "LoraDenoiser":
        layers = [LoraLayer(l.frozen_w.copy(), l.b.copy(), l.a.copy(), l.scale)
                  for l in self.layers]
        out = LoraDenoiser(layers, self.cond_table.copy(), self.data_dim, self.T, self.time_dim)
        return out


def build_denoiser(data_dim: int, n_classes: int, T: int, hidden: int = 64,
                   n_hidden: int = 2, rank: int = 4, lora_alpha: float | None = None,
                   time_dim: int = 8, cond_dim: int = 8, rng: Rng | None = None) -> LoraDenoiser:
    """Random frozen base network with a zero-initialized LoRA pair per layer."""
    if rng is None:
        rng = Rng(0, "denoiser")
    init = rng.spawn("base")
    lora_rng = rng.spawn("lora")
    sizes = [data_dim + time_dim + cond_dim] + [hidden] * n_hidden + [data_dim]
    layers = []
    for i in range(len(sizes) - 1):
        fan_in, fan_out = sizes[i], sizes[i + 1]
        w = gaussian_sample(init, (fan_out, fan_in)) * math.sqrt(2.0 / fan_in)
        r_layer = min(rank, min(fan_in, fan_out) // 2)  # narrow layers cap their rank
        layers.append(init_lora(w, r_layer, lora_alpha, lora_rng.spawn(f"layer{i}")))
    cond_table = gaussian_sample(rng.spawn("cond"), (n_classes, cond_dim))
    return LoraDenoiser(layers, cond_table, data_dim, T, time_dim)


def pretrain_base(model: LoraDenoiser, sched: NoiseSchedule, rng: Rng,
                  steps: int = 3000, lr: float = 1e-3, batch: int = 32,
                  spread: float = 1.0, sigma: float = 0.35) -> LoraDenoiser:
    """Teach the base network generic denoising before any adaptation.

    Trains every base weight on an endless stream of synthetic clusters
    (fresh random means each batch, random captions, random timesteps), so
    low-rank adaptation afterwards starts from a competent denoiser instead
    of a random map. LoRA factors are untouched (b stays zero).
    """
    from .numkit import make_optimizer

    params = model.trainable(full_ft=True)
    opt = make_optimizer("adam", params.size, lr)
    for _ in range(steps):
        means = gaussian_sample(rng, (batch, model.data_dim)) * spread
        xs = means + sigma * gaussian_sample(rng, (batch, model.data_dim))
        ys = np.asarray(rng.integers(0, model.n_classes, batch))
        ts = np.asarray(rng.integers(1, sched.T + 1, batch))
        eps = gaussian_sample(rng, (batch, model.data_dim))
        ab = sched.alpha_bars[ts - 1]
        z = np.sqrt(ab)[:, None] * xs + np.sqrt(1.0 - ab)[:, None] * eps
        out, cache = model.forward(z, ts, ys)
        grads = model.backward(cache, (2.0 / batch) * (out - eps), full_ft=True)
        params = model.trainable(full_ft=True)
        model.set_trainable(params.with_flat(opt.step(params.to_flat(), grads.to_flat())),
                            full_ft=True)
    return model


# ---------------------------------------------------------------------------
# Adaptation losses
# ---------------------------------------------------------------------------

def adaptation_loss_sample(model: LoraDenoiser, s: Sample, t: int, eps: np.ndarray,
                           sched: NoiseSchedule) -> float:
    """Squared residual ||eps - model(z_t, t, cond(y))||^2 for one sample."""
    z_t = forward_noise(s.x, t, eps, sched)
    out, _ = model.forward(z_t[None, :], [t], [s.y])
    r = np.asarray(eps, dtype=np.float64) - out[0]
    return float(r @ r)


def adaptation_loss_batch(model: LoraDenoiser, batch: list[Sample],
                          sched: NoiseSchedule, rng: Rng):
    """Mean per-sample adaptation loss with fresh uniform t and fresh noise
    per sample. Returns (loss, records) where records hold each (t, eps) so a
    replay reproduces the value bit-exactly.
    """
    if not batch:
        raise ContractError("empty batch")
    n = len(batch)
    ts = [int(t) for t in rng.integers(1, sched.T + 1, n)]
    epss = [gaussian_sample(rng, (model.data_dim,)) for _ in range(n)]
    losses = [adaptation_loss_sample(model, s, t, e, sched)
              for s, t, e in zip(batch, ts, epss)]
    return float(np.mean(losses)), list(zip(ts, epss))


# ---------------------------------------------------------------------------
# Ancestral sampling
# ---------------------------------------------------------------------------

def generate(model: LoraDenoiser, sched: NoiseSchedule, y: int, n: int,
             rng: Rng) -> list[Sample]:
    """n samples from the reverse chain: start at z_T ~ N(0, I), iterate the
    posterior-mean update down to t=1, adding per-step noise except at t=1.
    """
    if n < 1:
        raise ContractError("n must be >= 1")
    z = gaussian_sample(rng, (n, model.data_dim))
    ys = np.full(n, int(y), dtype=np.int64)
    for t in range(sched.T, 0, -1):
        ab_t = sched.alpha_bars[t - 1]
        ab_prev = sched.alpha_bars[t - 2] if t > 1 else 1.0
        beta_t = sched.betas[t - 1]
        alpha_t = sched.alphas[t - 1]
        eps_hat, _ = model.forward(z, np.full(n, t), ys)
        mean = (z - (beta_t / math.sqrt(1.0 - ab_t)) * eps_hat) / math.sqrt(alpha_t)
        if t > 1:
            sigma = math.sqrt((1.0 - ab_prev) / (1.0 - ab_t) * beta_t)
            z = mean + sigma * gaussian_sample(rng, (n, model.data_dim))
        else:
            z = mean
    return [Sample(x=z[i].copy(), y=int(y)) for i in range(n)]
