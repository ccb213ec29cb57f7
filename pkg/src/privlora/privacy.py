"""Attack-side machinery: the membership classifier, the symmetric
log-likelihood MI gain, the proxy attacker's ascent step, the post-hoc
evaluation attacker, and the gradient-feature attack variant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diffmodel import LoraDenoiser, NoiseSchedule, Sample, forward_noise
from .numkit import (
    ConfigError,
    ContractError,
    DimensionError,
    ParamVector,
    Rng,
    gaussian_sample,
    init_mlp_params,
    make_optimizer,
    mlp_backward,
    mlp_forward,
)

PROB_CLAMP = 1e-7   # keeps every log term in the MI gain finite


# ---------------------------------------------------------------------------
# Attack model
# ---------------------------------------------------------------------------

class AttackModel:
    """Feed-forward membership classifier: feature vector in, 2-way softmax
    out; the member probability is clamped to [PROB_CLAMP, 1 - PROB_CLAMP].
    """

    def __init__(self, params: ParamVector, arch: list[int], prob_clamp: float = PROB_CLAMP):
        self.params = params
        self.arch = list(arch)
        self.prob_clamp = float(prob_clamp)

    @property
    def feat_dim(self) -> int:
        return self.arch[0]

    def forward(self, feats: np.ndarray) -> np.ndarray:
        probs, _, _ = self.forward_detail(feats)
        return probs

    def forward_detail(self, feats: np.ndarray):
        """(clamped member probabilities, raw softmax, mlp cache)."""
        feats = np.atleast_2d(np.asarray(feats, dtype=np.float64))
        if feats.shape[1] != self.feat_dim:
            raise DimensionError(f"feature width {feats.shape[1]} != {self.feat_dim}")
        logits, cache = mlp_forward(self.params, feats, self.arch, "relu")
        shifted = logits - logits.max(axis=1, keepdims=True)
        expz = np.exp(shifted)
        soft = expz / expz.sum(axis=1, keepdims=True)
        probs = np.clip(soft[:, 0], self.prob_clamp, 1.0 - self.prob_clamp)
        return probs, soft, cache

    def clone(self) -> "AttackModel":
        return AttackModel(self.params.copy(), list(self.arch), self.prob_clamp)


def new_attack_model(feat_dim: int, hidden=(512, 256), rng: Rng | None = None,
                     input_gain: float = 1.0, zero_output: bool = True) -> AttackModel:
    """He-initialized classifier with a zeroed output layer, so a fresh model
    outputs probability exactly 0.5 for every input.

    input_gain scales the first layer's initialization; a gain matched to the
    loss-feature scale gives the classifier usable decision slopes within a
    small ascent budget instead of having to grow them over many epochs.
    """
    if rng is None:
        rng = Rng(0, "attacker")
    arch = [int(feat_dim)] + [int(h) for h in hidden] + [2]
    params = init_mlp_params(arch, rng)
    params["w0"][:] *= float(input_gain)
    last = len(arch) - 2
    if zero_output:
        params[f"w{last}"][:] = 0.0
    return AttackModel(params, arch)


def attack_forward(h: AttackModel, feat: np.ndarray):
    """Clamped membership probability for one feature vector (or a batch)."""
    feat = np.asarray(feat, dtype=np.float64)
    if feat.ndim == 1:
        return float(h.forward(feat[None, :])[0])
    return h.forward(feat)


# ---------------------------------------------------------------------------
# MI gain and its gradients
# ---------------------------------------------------------------------------

@dataclass
class MiGainRecord:
    g: float
    member_count: int
    nonmember_count: int


def mi_gain(h: AttackModel, member_feats: np.ndarray, nonmember_feats: np.ndarray) -> MiGainRecord:
    """Symmetric log-likelihood score of the attacker: average log h on
    members plus average log(1 - h) on non-members, each weighted 1/2.
    Always <= 0; bounded below by log(PROB_CLAMP) thanks to the clamp.
    """
    m = np.atleast_2d(np.asarray(member_feats, dtype=np.float64))
    nm = np.atleast_2d(np.asarray(nonmember_feats, dtype=np.float64))
    if m.shape[0] == 0 or nm.shape[0] == 0:
        raise ContractError("both member and non-member sides must be nonempty")
    pm = h.forward(m)
    pn = h.forward(nm)
    g = float(np.log(pm).mean() / 2.0 + np.log1p(-pn).mean() / 2.0)
    return MiGainRecord(g=g, member_count=m.shape[0], nonmember_count=nm.shape[0])


def mi_gain_grads(h: AttackModel, member_feats: np.ndarray, nonmember_feats: np.ndarray):
    """MI gain plus exact gradients: w.r.t. the attacker parameters and w.r.t.
    the input features (the route through which the target model is reached).

    The clamp bounds the logged value only; gradients use the softmax
    log-likelihood derivative, which stays bounded at saturation and lets a
    saturated-wrong classifier recover.
    Returns (record, grad_params, dg_dmember_feats, dg_dnonmember_feats).
    """
    m = np.atleast_2d(np.asarray(member_feats, dtype=np.float64))
    nm = np.atleast_2d(np.asarray(nonmember_feats, dtype=np.float64))
    if m.shape[0] == 0 or nm.shape[0] == 0:
        raise ContractError("both member and non-member sides must be nonempty")
    feats = np.concatenate([m, nm], axis=0)
    probs, soft, cache = h.forward_detail(feats)
    n_m, n_nm = m.shape[0], nm.shape[0]
    g = float(np.log(probs[:n_m]).mean() / 2.0 + np.log1p(-probs[n_m:]).mean() / 2.0)

    # d log softmax0 / d logits = (1 - p0, -p1); d log softmax1 / d logits = (-p0, 1 - p1)
    p0, p1 = soft[:, 0], soft[:, 1]
    dlogits = np.empty_like(soft)
    dlogits[:n_m, 0] = (1.0 - p0[:n_m]) / (2.0 * n_m)
    dlogits[:n_m, 1] = -p1[:n_m] / (2.0 * n_m)
    dlogits[n_m:, 0] = -p0[n_m:] / (2.0 * n_nm)
    dlogits[n_m:, 1] = (1.0 - p1[n_m:]) / (2.0 * n_nm)

    grad_params, dfeat = mlp_backward(cache, dlogits, with_input_grad=True)
    rec = MiGainRecord(g=g, member_count=n_m, nonmember_count=n_nm)
    return rec, grad_params, dfeat[:n_m], dfeat[n_m:]


def proxy_ascent_step(h: AttackModel, member_feats: np.ndarray, nonmember_feats: np.ndarray,
                      eta1: float, optimizer=None) -> MiGainRecord:
    """One gradient-ascent step on the MI gain, updating h in place.

    Without an optimizer this is the literal update w <- w + eta1 * grad;
    with one (numkit.make_optimizer, built at lr eta1) the negated gradient
    is fed to its descent step so e.g. the Adam direction is used instead.
    """
    rec, grad_params, _, _ = mi_gain_grads(h, member_feats, nonmember_feats)
    flat = h.params.to_flat()
    if optimizer is None:
        h.params = h.params.with_flat(flat + eta1 * grad_params.to_flat())
    else:
        h.params = h.params.with_flat(optimizer.step(flat, -grad_params.to_flat()))
    return rec


# ---------------------------------------------------------------------------
# Loss features
# ---------------------------------------------------------------------------

@dataclass
class FeatureSpec:
    """Evaluation grid for loss features: F designated timesteps, plus one
    frozen noise row per timestep when the features must be deterministic
    (attack evaluation). Defense-side callers pass fresh noise instead, so
    the probes cannot be gamed pointwise."""
    ts: np.ndarray                 # (F,) int
    eps: np.ndarray | None = None  # (F, data_dim) frozen rows, or None

    @property
    def width(self) -> int:
        return int(self.ts.size)


def feature_timesteps(T: int, n_feats: int) -> np.ndarray:
    """Evenly spaced timesteps over 1..T (the mid-schedule step when n=1)."""
    if n_feats < 1:
        raise ConfigError("need at least one feature timestep")
    if n_feats == 1:
        return np.array([max(1, T // 2)], dtype=np.int64)
    return np.unique(np.round(np.linspace(1, T, n_feats)).astype(np.int64))


def make_feature_spec(T: int, data_dim: int, n_feats: int, rng: Rng) -> FeatureSpec:
    ts = feature_timesteps(T, n_feats)
    return FeatureSpec(ts=ts, eps=gaussian_sample(rng, (ts.size, data_dim)))


def loss_features(model: LoraDenoiser, sched: NoiseSchedule, samples: list[Sample],
                  spec: FeatureSpec, with_cache: bool = False,
                  eps_rows_override: np.ndarray | None = None):
    """Per-sample adaptation-loss profile over the feature grid.

    Noise rows come from the override when given, else from the spec's
    frozen rows. with_cache additionally returns the forward cache, the
    stacked noise targets and the outputs so callers can chain per-feature
    weights back to the model parameters.
    """
    n, F = len(samples), spec.width
    eps = eps_rows_override if eps_rows_override is not None else spec.eps
    if eps is None:
        raise ContractError("feature spec has no frozen noise and none was supplied")
    if eps.shape != (F, model.data_dim):
        raise DimensionError(f"noise rows shape {eps.shape} != {(F, model.data_dim)}")
    xs = np.stack([s.x for s in samples])
    ys = np.array([s.y for s in samples], dtype=np.int64)
    ab = sched.alpha_bars[spec.ts - 1]
    # rows ordered sample-major: (s0,f0), (s0,f1), ..., (s1,f0), ...
    z = (np.sqrt(ab)[None, :, None] * xs[:, None, :]
         + np.sqrt(1.0 - ab)[None, :, None] * eps[None, :, :]).reshape(n * F, -1)
    ts_rows = np.tile(spec.ts, n)
    ys_rows = np.repeat(ys, F)
    eps_rows = np.tile(eps, (n, 1))
    out, cache = model.forward(z, ts_rows, ys_rows)
    resid = eps_rows - out
    feats = (resid * resid).sum(axis=1).reshape(n, F)
    if with_cache:
        return feats, cache, eps_rows, out
    return feats


def feature_weights_to_output_grad(weights: np.ndarray, eps_rows: np.ndarray,
                                   out: np.ndarray) -> np.ndarray:
    """Output-gradient rows for sum_{s,f} weights[s,f] * feature[s,f]."""
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    return w[:, None] * 2.0 * (out - eps_rows)


# ---------------------------------------------------------------------------
# Attacker training (shared by the post-hoc and gradient-feature attacks)
# ---------------------------------------------------------------------------

def _aux_asr(probs_m: np.ndarray, probs_nm: np.ndarray) -> float:
    correct = int((probs_m >= 0.5).sum()) + int((probs_nm < 0.5).sum())
    return correct / (probs_m.size + probs_nm.size)


def fit_attacker(feats_m: np.ndarray, feats_nm: np.ndarray, epochs: int,
                 lr: float, batch_pairs: int, rng: Rng,
                 hidden=(512, 256), input_gain: float = 1.0) -> AttackModel:
    """Train a fresh attacker on fixed features with balanced batches and
    return the epoch checkpoint with the highest training-side accuracy.

    Starts from the calibrated zero-output init so threshold-0.5 calls track
    the decision boundary from the first epoch.
    """
    if feats_m.shape[0] == 0 or feats_nm.shape[0] == 0:
        raise ConfigError("degenerate split: empty member or non-member side")
    h = new_attack_model(feats_m.shape[1], hidden, rng.spawn("init"),
                         input_gain=input_gain, zero_output=True)
    if epochs == 0:
        return h
    opt = make_optimizer("adam", h.params.size, lr)
    order = rng.spawn("order")
    best = h.clone()
    best_asr = -1.0
    n_m, n_nm = feats_m.shape[0], feats_nm.shape[0]
    per = max(1, batch_pairs)
    for _ in range(epochs):
        pm = order.permutation(n_m)
        pn = order.permutation(n_nm)
        k = min(n_m, n_nm)
        for lo in range(0, k, per):
            hi = min(lo + per, k)
            proxy_ascent_step(h, feats_m[pm[lo:hi]], feats_nm[pn[lo:hi]], lr, opt)
        asr = _aux_asr(h.forward(feats_m), h.forward(feats_nm))
        if asr > best_asr:
            best_asr = asr
            best = h.clone()
    return best


def train_posthoc_attacker(split, target: LoraDenoiser, sched: NoiseSchedule,
                           spec: FeatureSpec, epochs: int = 100, lr: float = 1e-5,
                           batch_pairs: int = 2, rng: Rng | None = None,
                           hidden=(512, 256), input_gain: float = 1.0) -> AttackModel:
    """Fresh attacker fitted on the frozen target's loss features over the
    auxiliary split (balanced batches, Adam, best-checkpoint selection).
    """
    if rng is None:
        rng = Rng(0, "posthoc")
    feats_m = loss_features(target, sched, split.aux_m, spec)
    feats_nm = loss_features(target, sched, split.aux_nm, spec)
    return fit_attacker(feats_m, feats_nm, epochs, lr, batch_pairs, rng, hidden,
                        input_gain=input_gain)


# ---------------------------------------------------------------------------
# Gradient-feature attack
# ---------------------------------------------------------------------------

@dataclass
class GradFeatureSpec:
    ts: np.ndarray
    eps: np.ndarray


def make_grad_feature_spec(T: int, data_dim: int, rng: Rng, n_steps: int = 10) -> GradFeatureSpec:
    ts = np.unique(np.round(np.linspace(1, T, n_steps)).astype(np.int64))
    return GradFeatureSpec(ts=ts, eps=gaussian_sample(rng, (ts.size, data_dim)))


def grad_features(target: LoraDenoiser, sched: NoiseSchedule, samples: list[Sample],
                  spec: GradFeatureSpec) -> np.ndarray:
    """Per-layer norms of the low-rank-factor gradients of the average loss
    over the step grid; feature length equals the number of adapted layers.
    """
    F = spec.ts.size
    feats = np.empty((len(samples), len(target.layers)), dtype=np.float64)
    for i, s in enumerate(samples):
        zs = np.stack([forward_noise(s.x, int(t), spec.eps[j], sched)
                       for j, t in enumerate(spec.ts)])
        out, cache = target.forward(zs, spec.ts, np.full(F, s.y))
        dout = 2.0 * (out - spec.eps) / F     # gradient of the mean loss
        grads = target.backward(cache, dout)
        for li in range(len(target.layers)):
            gb = grads[f"layer{li}.b"]
            ga = grads[f"layer{li}.a"]
            feats[i, li] = float(np.sqrt((gb * gb).sum() + (ga * ga).sum()))
    return feats


def grad_feature_attack(split, target: LoraDenoiser, sched: NoiseSchedule,
                        rng: Rng, epochs: int = 100, lr: float = 1e-5,
                        batch_pairs: int = 2, hidden=(512, 256)):
    """White-box attack from gradient-norm features; returns the fitted
    attacker and a featurizer closure for scoring held-out samples.
    """
    spec = make_grad_feature_spec(sched.T, target.data_dim, rng.spawn("grid"))
    feats_m = grad_features(target, sched, split.aux_m, spec)
    feats_nm = grad_features(target, sched, split.aux_nm, spec)
    h = fit_attacker(feats_m, feats_nm, epochs, lr, batch_pairs, rng.spawn("fit"), hidden)

    def featurize(samples: list[Sample]) -> np.ndarray:
        return grad_features(target, sched, samples, spec)

    return h, featurize
