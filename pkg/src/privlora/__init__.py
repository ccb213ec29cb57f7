"""Desk-scale laboratory for membership-privacy-preserving low-rank
adaptation of toy diffusion models: plain adaptation, the sum-form min-max
defense, the ratio-form stabilized defense, smoothness diagnostics, and
membership-inference evaluation."""

from .diffmodel import (
    LoraDenoiser,
    LoraLayer,
    NoiseSchedule,
    Sample,
    adaptation_loss_batch,
    adaptation_loss_sample,
    build_denoiser,
    forward_noise,
    generate,
    init_lora,
    linear_schedule,
)
from .numkit import (
    CorrelationResult,
    ParamVector,
    Rng,
    finite_diff_grad,
    gaussian_sample,
    hvp,
    pearson,
    power_iteration,
)
from .privacy import (
    AttackModel,
    MiGainRecord,
    attack_forward,
    grad_feature_attack,
    mi_gain,
    proxy_ascent_step,
    train_posthoc_attacker,
)
from .trainers import (
    RunLog,
    SplitDataset,
    TrainConfig,
    balanced_batches,
    make_splits,
    make_toy_pool,
    mp_lora_loss,
    smp_lora_loss,
    train,
)

__version__ = "0.1.0"
