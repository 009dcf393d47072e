"""Monte Carlo estimate of the squared H2 norm.

Euler-Maruyama integration of ``dx = A x dt + B dW`` from ``x = 0``; after a
burn-in the time average of ``|C x|^2`` estimates the stationary output
variance, i.e. the squared H2 norm.

Random numbers come from numpy's ``Philox4x32-10`` counter-based bit
generator (Salmon et al. 2011; 10 rounds, multipliers 0xD2511F53 and
0xCD9E8D57, Weyl key increments 0x9E3779B9 and 0xBB67AE85), keyed by
``seed + trial``, with standard normals drawn by numpy's ziggurat sampler.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig, UnstableStep
from .h2 import DEFAULT_NOISE, H2Report, realization

STABILITY_LIMIT = 0.5
BLOWUP_NORM = 1e6
_CHUNK = 2048


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    burn_in_steps: int = 10_000
    sample_steps: int = 100_000
    trials: int = 50
    seed: int = 0

    def __post_init__(self):
        if not (np.isfinite(self.dt) and self.dt > 0):
            raise InvalidConfig(f"dt must be positive, got {self.dt}")
        if self.burn_in_steps < 0:
            raise InvalidConfig(f"burn_in_steps must be >= 0, got {self.burn_in_steps}")
        if self.sample_steps < 1:
            raise InvalidConfig(f"sample_steps must be >= 1, got {self.sample_steps}")
        if self.trials < 1:
            raise InvalidConfig(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise InvalidConfig(f"seed must fit in 64 unsigned bits, got {self.seed}")


def _generators(cfg):
    return [np.random.Generator(np.random.Philox((cfg.seed + k) % 2**64))
            for k in range(cfg.trials)]


def simulate(r, noise=DEFAULT_NOISE, cfg=SimConfig()):
    """Return ``(mean, standard error)`` of the per-trial time-averaged ``|z|^2``."""
    A = r.A
    B = r.input_matrix(noise)
    G = r.C.T @ r.C
    dt = cfg.dt
    if dt * np.linalg.norm(A, 2) >= STABILITY_LIMIT:
        raise UnstableStep(f"dt * ||A|| = {dt * np.linalg.norm(A, 2):.3g} exceeds "
                           f"{STABILITY_LIMIT}; reduce dt")
    trials = cfg.trials
    if not np.any(B):
        return 0.0, 0.0

    step = np.eye(A.shape[0]) + dt * A
    step_T = step.T
    B_T = np.sqrt(dt) * B.T
    rngs = _generators(cfg)
    x = np.zeros((trials, A.shape[0]))
    acc = np.zeros(trials)
    total = cfg.burn_in_steps + cfg.sample_steps
    done = 0
    while done < total:
        size = min(_CHUNK, total - done)
        xi = np.stack([rng.standard_normal((size, B.shape[1])) for rng in rngs], axis=1)
        kicks = xi @ B_T  # (size, trials, k)
        for s in range(size):
            x = x @ step_T + kicks[s]
            if done + s >= cfg.burn_in_steps:
                acc += np.einsum("ti,ij,tj->t", x, G, x)
        done += size
        peak = np.max(np.abs(x))
        if not np.isfinite(peak) or peak > BLOWUP_NORM:
            raise UnstableStep(f"state norm exceeded {BLOWUP_NORM:g} after {done} steps")
    per_trial = acc / cfg.sample_steps
    mean = float(per_trial.mean())
    stderr = float(per_trial.std(ddof=1) / np.sqrt(trials)) if trials > 1 else float("nan")
    return mean, stderr


def empirical_h2(g, t=None, noise=DEFAULT_NOISE, model="full", cfg=SimConfig()):
    r = realization(g, t, model)
    mean, stderr = simulate(r, noise, cfg)
    return H2Report(mean, None, None, model, "empirical", stderr)
