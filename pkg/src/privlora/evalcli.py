"""Attack-success metrics (ASR, AUC, ROC, TPR at a fixed FPR), a kernel
two-sample generation-quality statistic, experiment orchestration from flat
key=value config files, and the command-line interface.

CLI subcommands: train, attack-eval, diagnose, report. Exit codes: 0 success,
2 config error, 3 numeric abort (partial logs preserved).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import checkpoint, diagnostics, trainers
from .diffmodel import Sample, build_denoiser, generate, linear_schedule, pretrain_base
from .numkit import ConfigError, ContractError, NumericError, Rng
from .privacy import (
    grad_feature_attack,
    loss_features,
    make_feature_spec,
    new_attack_model,
    train_posthoc_attacker,
)
from .trainers import SplitDataset, TrainConfig, make_splits, make_toy_pool, train


def _fmt(v: float) -> str:
    return f"{float(v):.17g}"


# ---------------------------------------------------------------------------
# Score sets and attack metrics
# ---------------------------------------------------------------------------

@dataclass
class ScoreSet:
    """Attacker membership probabilities on the held-out evaluation split."""
    member_scores: np.ndarray
    nonmember_scores: np.ndarray

    def __post_init__(self):
        self.member_scores = np.asarray(self.member_scores, dtype=np.float64)
        self.nonmember_scores = np.asarray(self.nonmember_scores, dtype=np.float64)
        if self.member_scores.size == 0 or self.nonmember_scores.size == 0:
            raise ContractError("both score sides must be nonempty")
        allv = np.concatenate([self.member_scores, self.nonmember_scores])
        if np.any(allv < 0.0) or np.any(allv > 1.0) or not np.all(np.isfinite(allv)):
            raise ContractError("scores must lie in [0, 1]")


def asr(scores: ScoreSet) -> float:
    """Fraction of correct calls with the fixed rule: member iff score >= 0.5
    (ties count as member)."""
    m, nm = scores.member_scores, scores.nonmember_scores
    correct = int((m >= 0.5).sum()) + int((nm < 0.5).sum())
    return correct / (m.size + nm.size)


def roc_auc(scores: ScoreSet):
    """AUC with half credit for ties, plus the ROC as a threshold sweep over
    the observed scores (rule: member iff score >= threshold).

    The AUC accumulates integer and half-integer pair counts exactly, so it
    equals brute-force pair enumeration bit-for-bit.
    """
    m, nm = scores.member_scores, scores.nonmember_scores
    n_m, n_nm = m.size, nm.size
    thresholds = np.unique(np.concatenate([m, nm]))[::-1]
    tp = fp = 0
    auc_num = 0.0
    roc = [(0.0, 0.0)]
    for t in thresholds:
        dtp = int((m == t).sum())
        dfp = int((nm == t).sum())
        auc_num += dfp * tp + 0.5 * dfp * dtp
        tp += dtp
        fp += dfp
        roc.append((fp / n_nm, tp / n_m))
    return auc_num / (n_m * n_nm), roc


def tpr_at_fpr(scores: ScoreSet, fpr_cap: float = 0.05) -> float:
    """Best true-positive rate over thresholds whose empirical FPR stays
    within the cap."""
    if not 0.0 < fpr_cap < 1.0:
        raise ContractError("fpr_cap must lie strictly between 0 and 1")
    m, nm = scores.member_scores, scores.nonmember_scores
    thresholds = np.unique(np.concatenate([m, nm]))[::-1]
    tp = fp = 0
    best = 0.0
    for t in thresholds:
        tp += int((m == t).sum())
        fp += int((nm == t).sum())
        if fp / nm.size <= fpr_cap:
            best = max(best, tp / m.size)
    return best


def auc_deviation(auc: float) -> float:
    return abs(auc - 0.5) / 0.5


# ---------------------------------------------------------------------------
# Generation quality
# ---------------------------------------------------------------------------

def kernel_quality(generated: list[Sample], reference: list[Sample]) -> float:
    """Unbiased squared-MMD two-sample statistic with the polynomial kernel
    k(u, v) = (u.v/dim + 1)^3 on raw vectors; may be slightly negative."""
    if len(generated) < 10 or len(reference) < 10:
        raise ContractError("need at least 10 samples per side")
    X = np.stack([s.x for s in generated]).astype(np.float64)
    Y = np.stack([s.x for s in reference]).astype(np.float64)
    for x in X:
        if np.any(np.all(Y == x, axis=1)):
            raise ContractError("generated and reference lists overlap")
    dim = X.shape[1]
    kxx = (X @ X.T / dim + 1.0) ** 3
    kyy = (Y @ Y.T / dim + 1.0) ** 3
    kxy = (X @ Y.T / dim + 1.0) ** 3
    m, n = X.shape[0], Y.shape[0]
    t_xx = (kxx.sum() - np.trace(kxx)) / (m * (m - 1))
    t_yy = (kyy.sum() - np.trace(kyy)) / (n * (n - 1))
    return float(t_xx + t_yy - 2.0 * kxy.mean())


def mean_stderr(values) -> tuple[float, float]:
    """Two-pass mean and standard error of the mean."""
    vals = np.asarray(values, dtype=np.float64)
    mean = float(vals.sum() / vals.size)
    if vals.size < 2:
        return mean, 0.0
    var = float(((vals - mean) ** 2).sum() / (vals.size - 1))
    return mean, float(np.sqrt(var / vals.size))


# ---------------------------------------------------------------------------
# Experiment configuration (flat key=value text with sections)
# ---------------------------------------------------------------------------

@dataclass
class ExperimentConfig:
    out_dir: str = "out"
    seeds: tuple = (1, 2, 3)
    methods: tuple = ("lora", "mp_lora", "smp_lora")
    # training
    epochs: int = 400
    batch: int = 2
    aux_batch: int = 1
    lam: float = 0.05
    delta: float = 1e-5
    eta1: float = 1e-4
    eta2: float = 1e-3
    optimizer: str = "adam"
    rank: int = 8
    T: int = 100
    beta_start: float = 0.1
    beta_end: float = 0.3
    diag_every: int = 100
    hidden: int = 192
    n_hidden: int = 2
    time_dim: int = 8
    cond_dim: int = 16
    feat_timesteps: int = 8
    power_iters: int = 50
    power_tol: float = 1e-6
    attacker_hidden: tuple = (512, 256)
    attacker_input_gain: float = 20.0
    # data
    kind: str = "gauss_mix"
    dim: int = 8
    classes: int = 128
    sigma: float = 0.25
    spread: float = 2.0
    aux_m: int = 32
    te_m: int = 32
    aux_nm: int = 32
    te_nm: int = 32
    # base pre-training
    pretrain_steps: int = 12000
    pretrain_lr: float = 1e-3
    pretrain_batch: int = 32
    # metrics
    fpr_cap: float = 0.05
    n_generate: int = 256
    posthoc_epochs: int = 100
    posthoc_lr: float = 1e-5
    posthoc_batch_pairs: int = 1
    grad_attack: bool = False

    def validate(self) -> "ExperimentConfig":
        if not self.seeds:
            raise ConfigError("need at least one seed")
        for m in self.methods:
            if m not in trainers.METHODS:
                raise ConfigError(f"unknown method {m!r}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("duplicate methods")
        if min(self.aux_m, self.te_m, self.aux_nm, self.te_nm) < 1:
            raise ConfigError("all four split sizes must be positive")
        if self.n_generate < 10:
            raise ConfigError("n_generate must be >= 10 for the quality statistic")
        self.train_config("lora", 0).validate()
        return self

    def train_config(self, method: str, seed: int) -> TrainConfig:
        return TrainConfig(
            method=method, lam=self.lam, delta=self.delta, eta1=self.eta1,
            eta2=self.eta2, epochs=self.epochs, batch=self.batch,
            aux_batch=self.aux_batch, seed=seed,
            optimizer=self.optimizer, rank=self.rank, T=self.T,
            diag_every=self.diag_every, hidden=self.hidden, n_hidden=self.n_hidden,
            feat_timesteps=self.feat_timesteps, power_iters=self.power_iters,
            power_tol=self.power_tol, attacker_hidden=tuple(self.attacker_hidden),
            attacker_input_gain=self.attacker_input_gain,
        )

    @property
    def sizes(self) -> tuple:
        return (self.aux_m, self.te_m, self.aux_nm, self.te_nm)


_SCHEMA = (
    ("experiment", "out_dir", str),
    ("experiment", "seeds", "int_list"),
    ("experiment", "methods", "str_list"),
    ("train", "epochs", int),
    ("train", "batch", int),
    ("train", "aux_batch", int),
    ("train", "lambda", float),
    ("train", "delta", float),
    ("train", "eta1", float),
    ("train", "eta2", float),
    ("train", "optimizer", str),
    ("train", "rank", int),
    ("train", "diffusion_steps", int),
    ("train", "beta_start", float),
    ("train", "beta_end", float),
    ("train", "diag_every", int),
    ("train", "hidden", int),
    ("train", "n_hidden", int),
    ("train", "time_dim", int),
    ("train", "cond_dim", int),
    ("train", "feat_timesteps", int),
    ("train", "power_iters", int),
    ("train", "power_tol", float),
    ("train", "attacker_hidden", "int_list"),
    ("train", "attacker_input_gain", float),
    ("data", "kind", str),
    ("data", "dim", int),
    ("data", "classes", int),
    ("data", "sigma", float),
    ("data", "spread", float),
    ("data", "aux_m", int),
    ("data", "te_m", int),
    ("data", "aux_nm", int),
    ("data", "te_nm", int),
    ("data", "pretrain_steps", int),
    ("data", "pretrain_lr", float),
    ("data", "pretrain_batch", int),
    ("metrics", "fpr_cap", float),
    ("metrics", "n_generate", int),
    ("metrics", "posthoc_epochs", int),
    ("metrics", "posthoc_lr", float),
    ("metrics", "posthoc_batch_pairs", int),
    ("metrics", "grad_attack", "bool"),
)

_KEY_TO_ATTR = {"lambda": "lam", "diffusion_steps": "T"}
_ATTR_TO_KEY = {v: k for k, v in _KEY_TO_ATTR.items()}


def _render_value(val) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, float):
        return _fmt(val)
    if isinstance(val, (tuple, list)):
        return " ".join(str(v) for v in val)
    return str(val)


def config_to_text(cfg: ExperimentConfig) -> str:
    lines = []
    last_section = None
    for section, key, _ in _SCHEMA:
        if section != last_section:
            if last_section is not None:
                lines.append("")
            lines.append(f"[{section}]")
            last_section = section
        attr = _KEY_TO_ATTR.get(key, key)
        lines.append(f"{key} = {_render_value(getattr(cfg, attr))}")
    return "\n".join(lines) + "\n"


def config_from_text(text: str) -> ExperimentConfig:
    typed = {(s, k): t for s, k, t in _SCHEMA}
    cfg = ExperimentConfig()
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if (section, key) not in typed:
            raise ConfigError(f"line {lineno}: unknown key [{section}] {key}")
        kind = typed[(section, key)]
        attr = _KEY_TO_ATTR.get(key, key)
        try:
            if kind is int:
                parsed = int(value)
            elif kind is float:
                parsed = float(value)
            elif kind is str:
                parsed = value
            elif kind == "bool":
                if value not in ("true", "false"):
                    raise ValueError(value)
                parsed = value == "true"
            elif kind == "int_list":
                parsed = tuple(int(v) for v in value.split())
            else:  # str_list
                parsed = tuple(value.split())
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {value!r}") from exc
        setattr(cfg, attr, parsed)
    return cfg


def load_config(path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return config_from_text(text)


def save_config(path, cfg: ExperimentConfig) -> None:
    Path(path).write_text(config_to_text(cfg), encoding="utf-8")


# ---------------------------------------------------------------------------
# Experiment phases
# ---------------------------------------------------------------------------

def _run_dir(cfg: ExperimentConfig, method: str, seed: int) -> Path:
    return Path(cfg.out_dir) / method / f"seed{seed}"


def _build_world(cfg: ExperimentConfig, seed: int):
    """Pool, split and schedule shared by every method at this seed."""
    rng = Rng(seed, "run")
    pool = make_toy_pool(cfg.kind, sum(cfg.sizes), cfg.dim, cfg.classes,
                         rng.spawn("data"), sigma=cfg.sigma, spread=cfg.spread)
    split = make_splits(pool, cfg.sizes, rng.spawn("split"))
    sched = linear_schedule(cfg.T, cfg.beta_start, cfg.beta_end)
    return rng, split, sched


def _build_model(cfg: ExperimentConfig, rng: Rng, sched):
    """Pre-trained base (shared per seed across methods) with fresh LoRA."""
    model = build_denoiser(cfg.dim, cfg.classes, cfg.T, hidden=cfg.hidden,
                           n_hidden=cfg.n_hidden, rank=cfg.rank,
                           time_dim=cfg.time_dim, cond_dim=cfg.cond_dim,
                           rng=rng.spawn("model"))
    if cfg.pretrain_steps > 0:
        pretrain_base(model, sched, rng.spawn("pretrain"), steps=cfg.pretrain_steps,
                      lr=cfg.pretrain_lr, batch=cfg.pretrain_batch,
                      spread=cfg.spread, sigma=cfg.sigma)
    return model


def train_one(cfg: ExperimentConfig, method: str, seed: int):
    """Train a single (method, seed) run and persist its artifacts."""
    rng, split, sched = _build_world(cfg, seed)
    model = _build_model(cfg, rng, sched)
    tc = cfg.train_config(method, seed)
    attacker = None
    if tc.uses_privacy:
        attacker = new_attack_model(cfg.feat_timesteps, tuple(cfg.attacker_hidden),
                                    rng.spawn("proxy"),
                                    input_gain=cfg.attacker_input_gain,
                                    zero_output=False)
    model, attacker, log = train(tc, split, model, attacker, sched, rng.spawn("train"))

    run_dir = _run_dir(cfg, method, seed)
    run_dir.mkdir(parents=True, exist_ok=True)
    log.write_runlog_csv(run_dir / "runlog.csv")
    log.write_diag_csv(run_dir / "diag.csv")
    checkpoint.save_params(run_dir / "model.pllb", checkpoint.denoiser_to_params(model))
    if attacker is not None:
        checkpoint.save_params(run_dir / "attacker.pllb", attacker.params)
    with open(run_dir / "status.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"aborted={1 if log.aborted else 0}\n")
        fh.write(f"abort_iter={log.abort_iter if log.abort_iter is not None else -1}\n")
        fh.write(f"abort_reason={log.abort_reason}\n")
    return log


def attack_eval_one(cfg: ExperimentConfig, method: str, seed: int) -> dict:
    """Post-hoc attack and metric computation for a trained run."""
    rng, split, sched = _build_world(cfg, seed)
    run_dir = _run_dir(cfg, method, seed)
    model = checkpoint.denoiser_from_params(checkpoint.load_params(run_dir / "model.pllb"))

    spec = make_feature_spec(cfg.T, cfg.dim, cfg.feat_timesteps, rng.spawn("posthoc_feats"))
    hprime = train_posthoc_attacker(split, model, sched, spec,
                                    epochs=cfg.posthoc_epochs, lr=cfg.posthoc_lr,
                                    batch_pairs=cfg.posthoc_batch_pairs,
                                    rng=rng.spawn("posthoc"),
                                    hidden=tuple(cfg.attacker_hidden),
                                    input_gain=cfg.attacker_input_gain)
    checkpoint.save_params(run_dir / "posthoc.pllb", hprime.params)

    scores = ScoreSet(
        member_scores=hprime.forward(loss_features(model, sched, split.te_m, spec)),
        nonmember_scores=hprime.forward(loss_features(model, sched, split.te_nm, spec)),
    )
    auc, roc = roc_auc(scores)

    # sample captions from the adaptation set's empirical caption multiset so
    # the quality statistic compares matched conditional distributions; a
    # blown-up model can overflow the sampler, which counts as the worst score
    gen_rng = rng.spawn("gen")
    caption_cycle = [s.y for s in split.d_tr]
    counts: dict[int, int] = {}
    for i in range(cfg.n_generate):
        c = caption_cycle[i % len(caption_cycle)]
        counts[c] = counts.get(c, 0) + 1
    try:
        generated = []
        with np.errstate(over="raise", invalid="raise"):
            for c in sorted(counts):
                generated.extend(generate(model, sched, c, counts[c], gen_rng.spawn(f"class{c}")))
        quality = kernel_quality(generated, split.d_tr)
        if not np.isfinite(quality):
            quality = float("inf")
    except (FloatingPointError, NumericError):
        quality = float("inf")

    status = {"aborted": "0"}
    status_path = run_dir / "status.txt"
    if status_path.exists():
        for line in status_path.read_text(encoding="utf-8").splitlines():
            k, _, v = line.partition("=")
            status[k] = v

    metrics = {
        "method": method,
        "seed": seed,
        "aborted": int(status.get("aborted", "0")),
        "asr": asr(scores),
        "auc": auc,
        "auc_dev": auc_deviation(auc),
        "tpr_at_fpr": tpr_at_fpr(scores, cfg.fpr_cap),
        "fpr_cap": cfg.fpr_cap,
        "quality": quality,
        "n_member": scores.member_scores.size,
        "n_nonmember": scores.nonmember_scores.size,
    }
    if cfg.grad_attack:
        gh, featurize = grad_feature_attack(split, model, sched, rng.spawn("grad_attack"),
                                            epochs=cfg.posthoc_epochs, lr=cfg.posthoc_lr,
                                            batch_pairs=cfg.posthoc_batch_pairs,
                                            hidden=tuple(cfg.attacker_hidden))
        gscores = ScoreSet(member_scores=gh.forward(featurize(split.te_m)),
                           nonmember_scores=gh.forward(featurize(split.te_nm)))
        metrics["grad_asr"] = asr(gscores)

    with open(run_dir / "metrics.txt", "w", encoding="utf-8", newline="\n") as fh:
        for key, val in metrics.items():
            fh.write(f"{key}={_fmt(val) if isinstance(val, float) else val}\n")
    with open(run_dir / "roc.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("fpr,tpr\n")
        for fpr, tpr in roc:
            fh.write(f"{_fmt(fpr)},{_fmt(tpr)}\n")
    return metrics


def diagnose_all(cfg: ExperimentConfig):
    """Correlation verdicts comparing the sum-form and ratio-form defenses."""
    if "mp_lora" not in cfg.methods or "smp_lora" not in cfg.methods:
        return []
    reports = []
    for seed in cfg.seeds:
        s_mp = diagnostics.smoothness_series_from_diag(
            _run_dir(cfg, "mp_lora", seed) / "diag.csv", "mp_lora")
        s_smp = diagnostics.smoothness_series_from_diag(
            _run_dir(cfg, "smp_lora", seed) / "diag.csv", "smp_lora")
        report = diagnostics.correlation_verdict(s_mp, s_smp)
        diagnostics.write_verdict(Path(cfg.out_dir) / f"correlation_seed{seed}.txt", report)
        reports.append(report)
    return reports


SUMMARY_METRICS = ("asr", "auc", "auc_dev", "tpr_at_fpr", "quality")


def read_metrics(path) -> dict:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        key, _, val = line.partition("=")
        out[key] = val
    return out


def report_all(cfg: ExperimentConfig) -> Path:
    """Aggregate per-seed metrics into summary.csv (mean and standard error)."""
    rows = []
    for method in cfg.methods:
        per_metric = {m: [] for m in SUMMARY_METRICS}
        for seed in cfg.seeds:
            metrics = read_metrics(_run_dir(cfg, method, seed) / "metrics.txt")
            for m in SUMMARY_METRICS:
                per_metric[m].append(float(metrics[m]))
        for m in SUMMARY_METRICS:
            mean, stderr = mean_stderr(per_metric[m])
            rows.append((method, m, mean, stderr, len(cfg.seeds)))
    out_path = Path(cfg.out_dir) / "summary.csv"
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("method,metric,mean,stderr,n_seeds\n")
        for method, metric, mean, stderr, n in rows:
            fh.write(f"{method},{metric},{_fmt(mean)},{_fmt(stderr)},{n}\n")
    return out_path


def run_experiment(cfg: ExperimentConfig):
    """Full protocol: train every (method, seed), attack-eval each run, emit
    correlation verdicts and the cross-seed summary. Returns the per-run
    metrics; numeric aborts are recorded, not raised."""
    cfg.validate()
    Path(cfg.out_dir).mkdir(parents=True, exist_ok=True)
    for method in cfg.methods:
        for seed in cfg.seeds:
            train_one(cfg, method, seed)
    all_metrics = [attack_eval_one(cfg, method, seed)
                   for method in cfg.methods for seed in cfg.seeds]
    diagnose_all(cfg)
    report_all(cfg)
    return all_metrics


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", required=True, help="experiment config file")
    p.add_argument("--seed", type=int, default=None, help="restrict to one seed")
    p.add_argument("--method", default=None, help="restrict to one method")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="override the privacy weight")
    p.add_argument("--out", default=None, help="override the output directory")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="privlora",
        description="membership-privacy-preserving low-rank adaptation lab")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (("train", "train the configured runs"),
                       ("attack-eval", "post-hoc attack and metrics for trained runs"),
                       ("diagnose", "correlation verdicts from diagnostics logs"),
                       ("report", "aggregate per-seed metrics into summary.csv")):
        _add_common(sub.add_parser(name, help=desc))
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seeds = (args.seed,)
        if args.method is not None:
            cfg.methods = (args.method,)
        if args.lam is not None:
            cfg.lam = args.lam
        if args.out is not None:
            cfg.out_dir = args.out
        cfg.validate()
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        if not out.is_dir():
            raise ConfigError(f"output dir {out} not writable")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "train":
            aborted = False
            for method in cfg.methods:
                for seed in cfg.seeds:
                    log = train_one(cfg, method, seed)
                    state = "aborted" if log.aborted else "ok"
                    print(f"train {method} seed={seed}: {state} ({len(log.rows)} iterations)")
                    aborted |= log.aborted
            return 3 if aborted else 0
        if args.command == "attack-eval":
            for method in cfg.methods:
                for seed in cfg.seeds:
                    metrics = attack_eval_one(cfg, method, seed)
                    print(f"attack-eval {method} seed={seed}: asr={metrics['asr']:.4f} "
                          f"auc={metrics['auc']:.4f} quality={metrics['quality']:.5f}")
            return 0
        if args.command == "diagnose":
            reports = diagnose_all(cfg)
            for seed, report in zip(cfg.seeds, reports):
                print(f"diagnose seed={seed}: pcc_gap={report['pcc_gap']:.4f}")
            if not reports:
                print("diagnose: needs both mp_lora and smp_lora runs")
            return 0
        # report
        path = report_all(cfg)
        print(f"summary written to {path}")
        return 0
    except NumericError as exc:
        print(f"numeric abort: {exc}", file=sys.stderr)
        return 3
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
