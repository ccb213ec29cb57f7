"""Dataset splitting, balanced sampling, and the training procedures: plain
low-rank adaptation, the sum-form min-max defense, the ratio-form stabilized
defense, and the full fine-tuning variants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics
from .diffmodel import LoraDenoiser, NoiseSchedule, Sample, forward_noise
from .numkit import (
    ConfigError,
    ContractError,
    ParamVector,
    Rng,
    gaussian_sample,
    make_optimizer,
)
from .privacy import (
    AttackModel,
    FeatureSpec,
    feature_timesteps,
    feature_weights_to_output_grad,
    loss_features,
    mi_gain_grads,
    proxy_ascent_step,
)

METHODS = ("lora", "mp_lora", "smp_lora", "full_ft", "smp_full_ft")
PRIVACY_METHODS = ("mp_lora", "smp_lora", "smp_full_ft")
FULL_FT_METHODS = ("full_ft", "smp_full_ft")


# ---------------------------------------------------------------------------
# Splits and sampling
# ---------------------------------------------------------------------------

@dataclass
class SplitDataset:
    """Four-way partition: members split into auxiliary/test halves, plus
    disjoint auxiliary and test non-member pools."""
    aux_m: list
    te_m: list
    aux_nm: list
    te_nm: list

    @property
    def d_tr(self):
        return self.aux_m + self.te_m

    @property
    def d_aux(self):
        return self.aux_m + self.aux_nm

    @property
    def d_te(self):
        return self.te_m + self.te_nm


def make_splits(pool: list, sizes, rng: Rng) -> SplitDataset:
    """Disjoint random assignment (without replacement) into the four subsets."""
    sizes = [int(s) for s in sizes]
    if len(sizes) != 4 or any(s < 1 for s in sizes):
        raise ConfigError("sizes must be four positive counts")
    if sum(sizes) > len(pool):
        raise ConfigError(f"pool of {len(pool)} too small for sizes {sizes}")
    order = rng.permutation(len(pool))
    parts, pos = [], 0
    for s in sizes:
        parts.append([pool[i] for i in order[pos:pos + s]])
        pos += s
    return SplitDataset(aux_m=parts[0], te_m=parts[1], aux_nm=parts[2], te_nm=parts[3])


def balanced_batches(aux_m: list, aux_nm: list, batch, rng: Rng):
    """Stream of (member, non-member) batch pairs with equal counts per pair.

    `batch` is an even total or an explicit (k, k) pair. One full pass covers
    the shorter side exactly once; the longer side is subsampled.
    """
    if isinstance(batch, (tuple, list)):
        if len(batch) != 2 or batch[0] != batch[1] or batch[0] < 1:
            raise ConfigError(f"pair mode needs two equal positive counts, got {batch}")
        per = int(batch[0])
    else:
        batch = int(batch)
        if batch < 2 or batch % 2 != 0:
            raise ConfigError("batch must be an even total >= 2")
        per = batch // 2
    if not aux_m or not aux_nm:
        raise ContractError("empty member or non-member side")
    pm = rng.permutation(len(aux_m))
    pn = rng.permutation(len(aux_nm))
    k = min(len(aux_m), len(aux_nm))
    pairs = []
    for lo in range(0, k, per):
        hi = min(lo + per, k)
        pairs.append(([aux_m[i] for i in pm[lo:hi]],
                      [aux_nm[i] for i in pn[lo:hi]]))
    return pairs


# ---------------------------------------------------------------------------
# Composite losses
# ---------------------------------------------------------------------------

def mp_lora_loss(l_ada: float, g: float, lam: float) -> float:
    """Sum-form defense loss: adaptation loss plus lam times the MI gain."""
    return l_ada + lam * g


def smp_lora_loss(l_ada: float, g: float, lam: float, delta: float) -> float:
    """Ratio-form defense loss: adaptation loss over (1 - lam*g + delta)."""
    if delta <= 0:
        raise ConfigError("delta must be positive")
    return l_ada / (1.0 - lam * g + delta)


# ---------------------------------------------------------------------------
# Training configuration and run log
# ---------------------------------------------------------------------------

@dataclass
class TrainConfig:
    method: str = "lora"
    lam: float = 0.05
    delta: float = 1e-5
    eta1: float = 1e-5
    eta2: float = 1e-4
    epochs: int = 400
    batch: int = 4
    aux_batch: int = 0    # per-side auxiliary batch; 0 = full side each step
    seed: int = 0
    optimizer: str = "adam"
    rank: int = 4
    T: int = 100
    diag_every: int = 100
    hidden: int = 64
    n_hidden: int = 2
    lora_alpha: float | None = None
    feat_timesteps: int = 8
    power_iters: int = 50
    power_tol: float = 1e-6
    attacker_hidden: tuple = (512, 256)
    attacker_input_gain: float = 1.0

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ConfigError("lambda must lie in [0, 1]")
        if self.delta <= 0:
            raise ConfigError("delta must be positive")
        if self.epochs < 0 or self.batch < 2 or self.batch % 2:
            raise ConfigError("epochs >= 0 and even batch >= 2 required")
        if self.optimizer not in ("sgd", "adam"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.T < 1 or self.rank < 1 or self.diag_every < 1 or self.feat_timesteps < 1:
            raise ConfigError("T, rank, diag_every, feat_timesteps must be >= 1")
        return self

    @property
    def full_ft(self) -> bool:
        return self.method in FULL_FT_METHODS

    @property
    def uses_privacy(self) -> bool:
        return self.method in PRIVACY_METHODS


RUNLOG_HEADER = ("iter,l_ada,g,loss,grad_norm,grad_scale,"
                 "grad_scale_ada,grad_scale_gain,rescale_f1,rescale_f2")
DIAG_HEADER = ("iter,grad_norm,grad_scale,scale_ada,scale_gain,"
               "f1,f2,hessian_norm,converged")


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


@dataclass
class RunLog:
    rows: list = field(default_factory=list)        # per-iteration tuples
    hessian_rows: list = field(default_factory=list)  # sparse (iter, value, converged)
    aborted: bool = False
    abort_iter: int | None = None
    abort_reason: str = ""

    def add_row(self, it, l_ada, g, loss, gnorm, gscale, s_ada, s_gain, f1, f2):
        if self.rows and it <= self.rows[-1][0]:
            raise ContractError("iteration indices must strictly increase")
        vals = (l_ada, g, loss, gnorm, gscale, s_ada, s_gain, f1, f2)
        if not all(math.isfinite(v) for v in vals):
            raise ContractError("refusing to log non-finite values")
        self.rows.append((int(it),) + tuple(float(v) for v in vals))

    def add_hessian_row(self, it, value, converged):
        self.hessian_rows.append((int(it), float(value), bool(converged)))

    def write_runlog_csv(self, path):
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(RUNLOG_HEADER + "\n")
            for row in self.rows:
                fh.write(str(row[0]) + "," + ",".join(_fmt(v) for v in row[1:]) + "\n")

    def write_diag_csv(self, path):
        """Diagnostics view: one row per Hessian-cadence iteration."""
        dense = {row[0]: row for row in self.rows}
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(DIAG_HEADER + "\n")
            for it, hval, conv in self.hessian_rows:
                r = dense[it]
                # r: iter, l_ada, g, loss, gnorm, gscale, s_ada, s_gain, f1, f2
                fields = [str(it), _fmt(r[4]), _fmt(r[5]), _fmt(r[6]), _fmt(r[7]),
                          _fmt(r[8]), _fmt(r[9]), _fmt(hval), "1" if conv else "0"]
                fh.write(",".join(fields) + "\n")


# ---------------------------------------------------------------------------
# Composite gradients (fused path used by the training loop and the Hessian)
# ---------------------------------------------------------------------------

@dataclass
class IterationBatch:
    """Everything one training iteration differentiates through: the fresh
    training batch with its recorded (t, eps) draws, and the auxiliary pair
    with the iteration's fresh feature-probe noise rows."""
    tr: list
    tr_records: list
    aux_m: list
    aux_nm: list
    aux_eps: np.ndarray | None = None   # (F, dim) noise rows for the gain term


@dataclass
class CompositeResult:
    l_ada: float
    g: float
    loss: float
    grads: ParamVector
    ada_path: ParamVector
    gain_path: ParamVector | None
    f1: float
    f2: float


def _ada_forward(model: LoraDenoiser, sched: NoiseSchedule, tr, tr_records):
    n = len(tr)
    zs = np.stack([forward_noise(s.x, t, e, sched) for s, (t, e) in zip(tr, tr_records)])
    ts = np.array([t for t, _ in tr_records], dtype=np.int64)
    ys = np.array([s.y for s in tr], dtype=np.int64)
    eps = np.stack([e for _, e in tr_records])
    out, cache = model.forward(zs, ts, ys)
    resid = eps - out
    l_ada = float((resid * resid).sum(axis=1).mean())
    return l_ada, cache, eps, out, n


def ada_grad(model: LoraDenoiser, sched: NoiseSchedule, tr, tr_records, full_ft=False):
    """Unweighted adaptation-loss value and gradient (the mu path)."""
    l_ada, cache, eps, out, n = _ada_forward(model, sched, tr, tr_records)
    grads = model.backward(cache, (2.0 / n) * (out - eps), full_ft)
    return l_ada, grads


def gain_grad(model: LoraDenoiser, attacker: AttackModel, sched: NoiseSchedule,
              fspec: FeatureSpec, aux_m, aux_nm, full_ft=False, aux_eps=None):
    """Unweighted MI-gain value and gradient w.r.t. the model's trainable set
    (the route through the per-sample loss features)."""
    fm, cm, em, om = loss_features(model, sched, aux_m, fspec, with_cache=True,
                                   eps_rows_override=aux_eps)
    fn, cn, en, on = loss_features(model, sched, aux_nm, fspec, with_cache=True,
                                   eps_rows_override=aux_eps)
    rec, _, dfm, dfnm = mi_gain_grads(attacker, fm, fn)
    gm = model.backward(cm, feature_weights_to_output_grad(dfm, em, om), full_ft)
    gn = model.backward(cn, feature_weights_to_output_grad(dfnm, en, on), full_ft)
    return rec.g, gm + gn


def composite_grads(model: LoraDenoiser, attacker: AttackModel | None,
                    sched: NoiseSchedule, fspec: FeatureSpec | None,
                    batch: IterationBatch, method: str, lam: float,
                    delta: float) -> CompositeResult:
    """Loss value and gradient of the method's training loss, with method
    weights applied to per-row output gradients before backprop (so the two
    path gradients come out already scaled: f1*mu and f2*lam*grad G for the
    ratio form, mu and lam*grad G for the sum form).
    """
    full_ft = method in FULL_FT_METHODS
    l_ada, cache_a, eps_a, out_a, n = _ada_forward(model, sched, batch.tr, batch.tr_records)

    g = 0.0
    dfm = dfnm = None
    caches = None
    if method in PRIVACY_METHODS:
        fm, cm, em, om = loss_features(model, sched, batch.aux_m, fspec, with_cache=True,
                                       eps_rows_override=batch.aux_eps)
        fn, cn, en, on = loss_features(model, sched, batch.aux_nm, fspec, with_cache=True,
                                       eps_rows_override=batch.aux_eps)
        rec, _, dfm, dfnm = mi_gain_grads(attacker, fm, fn)
        g = rec.g
        caches = (cm, em, om, cn, en, on)

    denom = 1.0 - lam * g + delta
    f1 = 1.0 / denom
    f2 = l_ada / (denom * denom)

    if method in ("lora", "full_ft"):
        loss, w_ada, w_gain = l_ada, 1.0, 0.0
    elif method == "mp_lora":
        loss, w_ada, w_gain = mp_lora_loss(l_ada, g, lam), 1.0, lam
    else:  # smp_lora, smp_full_ft
        loss, w_ada, w_gain = smp_lora_loss(l_ada, g, lam, delta), f1, lam * f2

    ada_path = model.backward(cache_a, (w_ada * 2.0 / n) * (out_a - eps_a), full_ft)
    gain_path = None
    if caches is not None and w_gain != 0.0:
        cm, em, om, cn, en, on = caches
        gain_path = (model.backward(cm, feature_weights_to_output_grad(w_gain * dfm, em, om), full_ft)
                     + model.backward(cn, feature_weights_to_output_grad(w_gain * dfnm, en, on), full_ft))
    grads = ada_path + gain_path if gain_path is not None else ada_path
    return CompositeResult(l_ada=l_ada, g=g, loss=loss, grads=grads,
                           ada_path=ada_path, gain_path=gain_path, f1=f1, f2=f2)


# ---------------------------------------------------------------------------
# Training loop
# ---------------------------------------------------------------------------

def _check_invariants(method: str, res: CompositeResult, lam: float, delta: float):
    if res.g > 0.0:
        raise RuntimeError(f"MI gain invariant violated: g={res.g}")
    if 1.0 - lam * res.g + delta < 1.0 + delta:
        raise RuntimeError("denominator invariant violated")
    if not 0.0 < res.f1 <= 1.0:
        raise RuntimeError(f"f1 invariant violated: {res.f1}")
    if not 0.0 <= res.f2 <= res.l_ada * (1.0 + 1e-12):
        raise RuntimeError(f"f2 invariant violated: {res.f2}")
    if method in ("smp_lora", "smp_full_ft"):
        if not 0.0 <= res.loss <= res.l_ada * (1.0 + 1e-12):
            raise RuntimeError(f"ratio-loss bound violated: {res.loss} vs {res.l_ada}")


def train(config: TrainConfig, data: SplitDataset, model: LoraDenoiser,
          attacker: AttackModel | None, sched: NoiseSchedule,
          rng: Rng) -> tuple[LoraDenoiser, AttackModel | None, RunLog]:
    """Run the configured adaptation procedure.

    Per iteration: (for privacy methods) sample a balanced auxiliary pair,
    ascend the proxy attacker on its MI gain, then recompute the gain with
    the updated attacker held constant; sample a fresh training batch and
    descend the trainable set on the method's composite loss. Hessian-norm
    estimates are taken every diag_every iterations at the pre-update state.
    Non-finite losses abort the run gracefully with the log preserved.
    """
    config.validate()
    if config.uses_privacy and attacker is None:
        raise ConfigError(f"method {config.method} needs an attacker")
    full_ft = config.full_ft
    fspec = None
    if config.uses_privacy:
        # bare t-grid: every gain evaluation draws its own probe noise
        fspec = FeatureSpec(ts=feature_timesteps(sched.T, config.feat_timesteps))

    noise = rng.spawn("noise")
    tr_order = rng.spawn("tr_order")
    aux_order = rng.spawn("aux_order")
    hess_rng = rng.spawn("hess")

    frozen_before = None if full_ft else model.frozen_fingerprint()

    params = model.trainable(full_ft)
    opt = make_optimizer(config.optimizer, params.size, config.eta2)
    opt_att = None
    if config.uses_privacy:
        opt_att = (make_optimizer("adam", attacker.params.size, config.eta1)
                   if config.optimizer == "adam" else None)

    log = RunLog()
    d_tr = data.d_tr
    if not d_tr:
        raise ContractError("empty training set")
    aux_pairs: list = []
    it = 0
    for _ in range(config.epochs):
        order = tr_order.permutation(len(d_tr))
        for lo in range(0, len(d_tr), config.batch):
            it += 1
            tr_batch = [d_tr[i] for i in order[lo:lo + config.batch]]

            aux_m = aux_nm = []
            aux_eps = None
            if config.uses_privacy:
                if config.aux_batch == 0:
                    aux_m, aux_nm = data.aux_m, data.aux_nm
                else:
                    if not aux_pairs:
                        aux_pairs = balanced_batches(data.aux_m, data.aux_nm,
                                                     (config.aux_batch, config.aux_batch),
                                                     aux_order)
                    aux_m, aux_nm = aux_pairs.pop(0)
                # fresh probe noise per iteration: the gain term must see the
                # same loss landscape the attack sees, not 8 fixed points the
                # model could satisfy without unlearning anything
                aux_eps = gaussian_sample(noise, (fspec.width, model.data_dim))
                fm = loss_features(model, sched, aux_m, fspec, eps_rows_override=aux_eps)
                fn = loss_features(model, sched, aux_nm, fspec, eps_rows_override=aux_eps)
                proxy_ascent_step(attacker, fm, fn, config.eta1, opt_att)

            ts = [int(t) for t in noise.integers(1, sched.T + 1, len(tr_batch))]
            epss = [gaussian_sample(noise, (model.data_dim,)) for _ in tr_batch]
            batch = IterationBatch(tr=tr_batch, tr_records=list(zip(ts, epss)),
                                   aux_m=aux_m, aux_nm=aux_nm, aux_eps=aux_eps)

            res = composite_grads(model, attacker, sched, fspec, batch,
                                  config.method, config.lam, config.delta)

            flat = res.grads.to_flat()
            finite = (math.isfinite(res.l_ada) and math.isfinite(res.g)
                      and math.isfinite(res.loss) and bool(np.all(np.isfinite(flat))))
            if not finite:
                log.aborted = True
                log.abort_iter = it
                log.abort_reason = (f"non-finite loss/gradient at iteration {it} "
                                    f"(l_ada={res.l_ada}, g={res.g}, loss={res.loss})")
                break

            _check_invariants(config.method, res, config.lam, config.delta)

            gnorm = diagnostics.grad_norm_all(res.grads)
            gscale = diagnostics.grad_scale_all(res.grads)
            s_ada = diagnostics.grad_scale_all(res.ada_path)
            s_gain = (diagnostics.grad_scale_all(res.gain_path)
                      if res.gain_path is not None else 0.0)

            if it % config.diag_every == 0:
                hval, conv = _hessian_at_state(model, attacker, sched, fspec, batch,
                                               config, hess_rng.spawn(f"i{it}"))
                log.add_hessian_row(it, hval, conv)

            log.add_row(it, res.l_ada, res.g, res.loss, gnorm, gscale,
                        s_ada, s_gain, res.f1, res.f2)

            params = model.trainable(full_ft)
            model.set_trainable(params.with_flat(opt.step(params.to_flat(), flat)), full_ft)
        if log.aborted:
            break

    if frozen_before is not None and model.frozen_fingerprint() != frozen_before:
        raise RuntimeError("frozen parameters changed during adaptation")
    return model, attacker, log


def _hessian_at_state(model, attacker, sched, fspec, batch, config, rng):
    """Dominant Hessian eigenvalue of the composite loss on the frozen batch."""
    probe = model.clone()
    att = attacker.clone() if attacker is not None else None
    full_ft = config.full_ft

    def grad_fn(pv: ParamVector) -> ParamVector:
        probe.set_trainable(pv, full_ft)
        res = composite_grads(probe, att, sched, fspec, batch,
                              config.method, config.lam, config.delta)
        return res.grads

    return diagnostics.hessian_norm(grad_fn, model.trainable(full_ft),
                                    iters=config.power_iters, tol=config.power_tol,
                                    rng=rng)


# ---------------------------------------------------------------------------
# Toy data
# ---------------------------------------------------------------------------

def make_toy_pool(kind: str, n: int, dim: int, classes: int, rng: Rng,
                  sigma: float = 0.35, spread: float = 1.0) -> list[Sample]:
    """Class-conditional synthetic pool; caption id equals the class index.

    gauss_mix draws per-class means (coordinate std `spread`) with pairwise
    separation >= 4 sigma; rings places classes on concentric circles in the
    first two coordinates.
    """
    if n < classes:
        raise ConfigError("need at least one sample per class")
    means_rng = rng.spawn("class_params")
    point_rng = rng.spawn("points")
    if kind == "gauss_mix":
        for attempt in range(1000):
            means = gaussian_sample(means_rng, (classes, dim)) * spread
            ok = all(np.linalg.norm(means[i] - means[j]) >= 4.0 * sigma
                     for i in range(classes) for j in range(i + 1, classes))
            if ok:
                break
        else:
            raise ConfigError(
                f"cannot separate {classes} class means by 4*sigma with "
                f"spread={spread}, sigma={sigma}")
        pool = []
        for i in range(n):
            c = i % classes
            pool.append(Sample(x=means[c] + sigma * gaussian_sample(point_rng, (dim,)), y=c))
        return pool
    if kind == "rings":
        if dim < 2:
            raise ConfigError("rings needs dim >= 2")
        pool = []
        for i in range(n):
            c = i % classes
            radius = 1.0 + c
            theta = 2.0 * math.pi * float(point_rng.uniform(1)[0])
            x = sigma * gaussian_sample(point_rng, (dim,))
            x[0] += radius * math.cos(theta)
            x[1] += radius * math.sin(theta)
            pool.append(Sample(x=x, y=c))
        return pool
    raise ConfigError(f"unknown pool kind {kind!r}")
