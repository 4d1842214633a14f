"""Generation hyper-parameters and ablation switches."""

from dataclasses import dataclass


@dataclass(frozen=True)
class M2mConfig:
    """
    Settings for translating majority seeds into minority samples.

    Core hyper-parameters:
        lam: weight of the seed-class logit penalty lam * f_k0(x)
        beta: rejection base; a synthetic is rejected with prob beta^(N_k0 - N_k)+
        gamma: maximum generation loss L(g; x*, k) for acceptance
        eta: step size of each normalized gradient step
        steps: number of gradient steps T
        noise_scale: half-width of the uniform initial noise

    Ablations:
        use_self_as_g: translate against the classifier being trained ("M2m-Self")
        clean_seed: over-sample the untouched seed x0 ("M2m-Clean")
        random_target_label: label accepted synthetics with a random other class
        disable_reject: skip the Bernoulli rejection ("M2m-No-Reject")
        disable_gamma: accept regardless of the generation loss (gamma = inf)
        seed_pool_size: restrict seeds to a fixed per-class pool
        ensemble_size: average the loss over this many independently trained g
    """

    lam: float = 0.1
    beta: float = 0.999
    gamma: float = 0.9
    eta: float = 0.1
    steps: int = 10
    noise_scale: float = 0.01
    seed_retries: int = 10
    generation_scale: float = 1.0
    use_self_as_g: bool = False
    clean_seed: bool = False
    random_target_label: bool = False
    disable_reject: bool = False
    disable_gamma: bool = False
    seed_pool_size: int | None = None
    ensemble_size: int = 1

    def __post_init__(self):
        if not 0 <= self.beta < 1:
            raise ValueError(f"beta must lie in [0, 1), got {self.beta}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if not self.disable_gamma and not self.gamma > 0:
            raise ValueError(f"gamma must be > 0 unless disable_gamma is set, got {self.gamma}")
        if self.lam < 0:
            raise ValueError(f"lam must be non-negative, got {self.lam}")
        if self.noise_scale < 0:
            raise ValueError(f"noise_scale must be non-negative, got {self.noise_scale}")
        if self.seed_retries < 1:
            raise ValueError(f"seed_retries must be >= 1, got {self.seed_retries}")
        if not 0 <= self.generation_scale <= 1:
            raise ValueError(f"generation_scale must lie in [0, 1], got {self.generation_scale}")
        if self.seed_pool_size is not None and self.seed_pool_size < 1:
            raise ValueError(f"seed_pool_size must be >= 1, got {self.seed_pool_size}")
        if self.ensemble_size < 1:
            raise ValueError(f"ensemble_size must be >= 1, got {self.ensemble_size}")

    @property
    def acceptance_threshold(self) -> float:
        return float("inf") if self.disable_gamma else self.gamma
