"""Secrecy and reliability of a jammer-assisted satellite-terrestrial AF relay network."""
from .analysis import (ExpansionError, IpMethod, SeriesDivergenceError, intercept_probability,
                       ip_numeric_oracle, op_numeric_oracle, outage_probability, q_given_jammer)
from .channels import (AVERAGE_SHADOWING, HEAVY_SHADOWING, ShadowedRicianParams,
                       TermSum, TerrestrialRates, best_relay_cdf_terms, sr_cdf, sr_pdf, sr_sample)
from .experiments import SweepSpec, preset_config, run_point, run_sweep, run_tradeoff
from .linkmodel import CeeProfile, NetworkConfig, PowerProfile
from .montecarlo import Estimate
from .montecarlo import estimate as monte_carlo
from .specfun import AccuracyError, QuadratureSpec

__version__ = "0.1.0"
