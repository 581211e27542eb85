"""Scenario configuration, derived constants and instantaneous SNRs.

Everything is in noise-normalized units: ``psi``, ``phi`` and ``theta`` are
the satellite, relay and jammer transmit power over the noise power.
"""
from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from .channels import ShadowedRicianParams, TerrestrialRates


def db_to_linear(db):
    out = 10.0 ** (np.asarray(db, dtype=float) / 10.0)
    return out if out.ndim else float(out)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class CeeProfile:
    """Channel estimation error standard deviations per link."""

    mu_sr: float = 0.25
    mu_rd: float = 0.25
    mu_re: float = 0.25
    mu_je: float = 0.25

    def __post_init__(self):
        for name in ("mu_sr", "mu_rd", "mu_re", "mu_je"):
            if not getattr(self, name) >= 0:
                raise ValueError(f"{name} must be non-negative")

    @classmethod
    def uniform(cls, mu: float) -> "CeeProfile":
        return cls(mu, mu, mu, mu)


@dataclass(frozen=True)
class PowerProfile:
    psi_db: float = 20.0
    phi_db: float = 10.0
    theta_db: float = 1.0

    @property
    def psi(self) -> float:
        return db_to_linear(self.psi_db)

    @property
    def phi(self) -> float:
        return db_to_linear(self.phi_db)

    @property
    def theta(self) -> float:
        return db_to_linear(self.theta_db)


@dataclass(frozen=True)
class NetworkConfig:
    relays: Tuple[ShadowedRicianParams, ...]
    rates: TerrestrialRates = field(default_factory=TerrestrialRates)
    cee: CeeProfile = field(default_factory=CeeProfile)
    power: PowerProfile = field(default_factory=PowerProfile)
    c_th: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "relays", tuple(self.relays))
        if len(self.relays) < 1:
            raise ValueError("at least one relay is required")
        if not self.c_th >= 0:
            raise ValueError("c_th must be non-negative")

    @property
    def n_relays(self) -> int:
        return len(self.relays)

    def with_(self, **changes) -> "NetworkConfig":
        """Copy with top-level fields or power/cee/rates sub-fields replaced."""
        power = {k: changes.pop(k) for k in ("psi_db", "phi_db", "theta_db") if k in changes}
        rates = {k: changes.pop(k) for k in ("lambda_rd", "lambda_re", "lambda_je")
                 if k in changes}
        cfg = self
        if "cee" in changes and not isinstance(changes["cee"], CeeProfile):
            changes["cee"] = CeeProfile.uniform(float(changes["cee"]))
        if power:
            cfg = replace(cfg, power=replace(cfg.power, **power))
        if rates:
            cfg = replace(cfg, rates=replace(cfg.rates, **rates))
        return replace(cfg, **changes) if changes else cfg


def gamma_threshold(c_th: float) -> float:
    """SNR threshold for a target rate in bit/s/Hz over the two-hop channel."""
    if c_th < 0:
        raise ValueError("c_th must be non-negative")
    return 2.0 ** (2.0 * c_th) - 1.0


@dataclass(frozen=True)
class AnalysisConstants:
    psi: float
    phi: float
    theta: float
    mu_sr2: float
    mu_rd2: float
    mu_re2: float
    mu_je2: float
    gamma_th: float
    vartheta2: float
    vartheta4: float
    xi: float
    gamma_tilde_th: float
    xi_tilde: float
    lambda_: float
    gamma_hat_th: float
    lambda_tilde: float
    vartheta7: float

    @classmethod
    def from_config(cls, config: NetworkConfig) -> "AnalysisConstants":
        psi, phi, theta = config.power.psi, config.power.phi, config.power.theta
        cee = config.cee
        mu_sr2, mu_rd2 = cee.mu_sr ** 2, cee.mu_rd ** 2
        mu_re2, mu_je2 = cee.mu_re ** 2, cee.mu_je ** 2
        g = gamma_threshold(config.c_th)
        v2 = psi * mu_sr2 + 1.0
        v4 = phi * mu_rd2 + 1.0
        xi = v2 * v4
        g_tilde = g * v4 / phi
        eve_noise = phi * mu_re2 + theta * mu_je2 + 1.0
        lam = v2 * eve_noise
        g_hat = g * eve_noise / phi
        return cls(
            psi=psi, phi=phi, theta=theta,
            mu_sr2=mu_sr2, mu_rd2=mu_rd2, mu_re2=mu_re2, mu_je2=mu_je2,
            gamma_th=g, vartheta2=v2, vartheta4=v4, xi=xi,
            gamma_tilde_th=g_tilde, xi_tilde=g_tilde * v2 + xi / phi,
            lambda_=lam, gamma_hat_th=g_hat, lambda_tilde=g_hat * v2 + lam / phi,
            vartheta7=theta / phi + 1.0,
        )


def amplification_gain(power: PowerProfile, gamma_sr, mu_sr: float):
    """AF relay gain ``G`` in noise-normalized units."""
    g2 = power.phi / (power.psi * (np.asarray(gamma_sr) + mu_sr ** 2) + 1.0)
    return np.sqrt(g2)


def snr_destination(consts: AnalysisConstants, gamma_sr, gamma_rd):
    psi, phi = consts.psi, consts.phi
    num = psi * phi * gamma_sr * gamma_rd
    den = (gamma_rd * phi * consts.vartheta2
           + gamma_sr * psi * (consts.mu_rd2 * phi + 1.0) + consts.xi)
    return num / den


def snr_eavesdropper(consts: AnalysisConstants, gamma_sr, gamma_re, gamma_je):
    """Eavesdropper SNR; the jammer signal is noise to it only."""
    psi, phi, theta = consts.psi, consts.phi, consts.theta
    lambda1 = consts.mu_re2 * phi + theta * consts.mu_je2 + theta * gamma_je + 1.0
    num = psi * phi * gamma_sr * gamma_re
    den = (gamma_re * phi * consts.vartheta2 + gamma_sr * psi * lambda1
           + gamma_je * theta * consts.vartheta2 + consts.lambda_)
    return num / den
