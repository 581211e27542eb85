"""Seeded Monte Carlo estimates of OP and IP from the system model.

Trials are grouped into fixed-size blocks. Block ``b`` draws from a Philox
stream keyed by the seed with counter offset ``b``, so the estimate only
depends on ``(config, trials, seed)`` and not on how blocks are spread over
workers.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .channels import exp_sample, sr_sample
from .linkmodel import AnalysisConstants, NetworkConfig, snr_destination, snr_eavesdropper

BLOCK_SIZE = 1 << 14
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    trials: int
    count: int
    ci95: Tuple[float, float]

    @classmethod
    def from_count(cls, count: int, trials: int) -> "Estimate":
        p = count / trials
        se = math.sqrt(p * (1.0 - p) / trials)
        ci = (max(0.0, p - _Z95 * se), min(1.0, p + _Z95 * se))
        return cls(p, se, trials, count, ci)

    def contains(self, value: float) -> bool:
        return self.ci95[0] <= value <= self.ci95[1]


@dataclass(frozen=True)
class TrialOutcome:
    gamma_d: float
    gamma_e: float


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, block]))


def sample_gains(config: NetworkConfig, rng: np.random.Generator, n: int,
                 jammer_gain: Optional[float] = None) -> dict:
    """Draw ``n`` realizations of every link gain; relay selection on the true S-R gain."""
    sr = np.stack([sr_sample(p, rng, n) for p in config.relays])
    best = sr.max(axis=0)
    rates = config.rates
    rd = exp_sample(rates.lambda_rd, rng, n)
    re = exp_sample(rates.lambda_re, rng, n)
    je = exp_sample(rates.lambda_je, rng, n)
    if jammer_gain is not None:
        je = np.full(n, float(jammer_gain))
    return {"sr": best, "rd": rd, "re": re, "je": je}


def simulate_block(config: NetworkConfig, rng: np.random.Generator, n: int,
                   jammer_gain: Optional[float] = None):
    consts = AnalysisConstants.from_config(config)
    g = sample_gains(config, rng, n, jammer_gain)
    gamma_d = snr_destination(consts, g["sr"], g["rd"])
    gamma_e = snr_eavesdropper(consts, g["sr"], g["re"], g["je"])
    return gamma_d, gamma_e


def simulate_trial(config: NetworkConfig, rng: np.random.Generator) -> TrialOutcome:
    gamma_d, gamma_e = simulate_block(config, rng, 1)
    return TrialOutcome(float(gamma_d[0]), float(gamma_e[0]))


def _count_blocks(args):
    config, seed, blocks, trials, jammer_gain = args
    consts = AnalysisConstants.from_config(config)
    outage = intercept = 0
    for b in blocks:
        n = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
        gamma_d, gamma_e = simulate_block(config, block_rng(seed, b), n, jammer_gain)
        outage += int(np.count_nonzero(gamma_d < consts.gamma_th))
        intercept += int(np.count_nonzero(gamma_e >= consts.gamma_th))
    return outage, intercept


def estimate(config: NetworkConfig, trials: int, seed: int, workers: int = 1,
             jammer_gain: Optional[float] = None) -> Tuple[Estimate, Estimate]:
    """Monte Carlo (OP, IP) estimates.

    Pinning ``jammer_gain`` gives the conditional estimates used to check
    the closed-form conditional miss probability.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_blocks = -(-trials // BLOCK_SIZE)
    blocks = list(range(n_blocks))
    if workers <= 1 or n_blocks == 1:
        outage, intercept = _count_blocks((config, seed, blocks, trials, jammer_gain))
    else:
        shards = [blocks[i::workers] for i in range(workers) if blocks[i::workers]]
        with ProcessPoolExecutor(max_workers=len(shards)) as pool:
            parts = list(pool.map(_count_blocks,
                                  [(config, seed, s, trials, jammer_gain) for s in shards]))
        outage = sum(p[0] for p in parts)
        intercept = sum(p[1] for p in parts)
    return Estimate.from_count(outage, trials), Estimate.from_count(intercept, trials)
