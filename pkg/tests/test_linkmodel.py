import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satrelay import linkmodel
from satrelay.channels import HEAVY_SHADOWING
from satrelay.linkmodel import (AnalysisConstants, CeeProfile, NetworkConfig, PowerProfile,
                                snr_destination, snr_eavesdropper)

from conftest import grid_config


def test_db_roundtrip():
    assert linkmodel.db_to_linear(10.0) == pytest.approx(10.0)
    assert isinstance(linkmodel.db_to_linear(3.0), float)
    x = np.array([0.0, 10.0, 20.0])
    assert np.allclose(linkmodel.linear_to_db(linkmodel.db_to_linear(x)), x)


def test_gamma_threshold():
    assert linkmodel.gamma_threshold(1.0) == 3.0
    assert linkmodel.gamma_threshold(0.0) == 0.0
    with pytest.raises(ValueError):
        linkmodel.gamma_threshold(-1.0)


def test_constants_values():
    k = AnalysisConstants.from_config(grid_config("HS", 1, 20.0))
    assert k.psi == pytest.approx(100.0)
    assert k.vartheta2 == pytest.approx(100 * 0.0625 + 1)
    assert k.vartheta4 == pytest.approx(10 * 0.0625 + 1)
    assert k.gamma_tilde_th == pytest.approx(3 * k.vartheta4 / 10)
    eve = 10 * 0.0625 + 10 ** 0.1 * 0.0625 + 1
    assert k.gamma_hat_th == pytest.approx(3 * eve / 10)
    assert k.lambda_tilde == pytest.approx(k.gamma_hat_th * k.vartheta2 + k.vartheta2 * eve / 10)


def test_config_validation_and_with():
    with pytest.raises(ValueError):
        NetworkConfig(relays=())
    with pytest.raises(ValueError):
        NetworkConfig(relays=(HEAVY_SHADOWING,), c_th=-1)
    with pytest.raises(ValueError):
        CeeProfile(mu_sr=-0.1)
    cfg = NetworkConfig(relays=[HEAVY_SHADOWING])
    assert isinstance(cfg.relays, tuple)
    new = cfg.with_(psi_db=30.0, lambda_re=2.0, cee=0.1, c_th=0.5)
    assert new.power.psi_db == 30.0 and new.power.phi_db == cfg.power.phi_db
    assert new.rates.lambda_re == 2.0 and new.rates.lambda_rd == 1.0
    assert new.cee == CeeProfile.uniform(0.1)
    assert new.c_th == 0.5 and cfg.c_th == 1.0


def test_perfect_csi_reduces_to_textbook_af():
    cfg = NetworkConfig(relays=(HEAVY_SHADOWING,), cee=CeeProfile.uniform(0.0),
                        power=PowerProfile(20.0, 10.0, 1.0))
    k = AnalysisConstants.from_config(cfg)
    x, y = 0.3, 1.7
    assert snr_destination(k, x, y) == pytest.approx(100 * 10 * x * y / (10 * y + 100 * x + 1))


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-4, 10.0), st.floats(1e-4, 10.0), st.floats(0.0, 25.0), st.floats(0.0, 0.5))
def test_outage_event_maps_to_satellite_gain(x, y, psi_db, mu):
    # gamma_D < g  <=>  y below the shift, or x below the mapped argument
    cfg = NetworkConfig(relays=(HEAVY_SHADOWING,), cee=CeeProfile.uniform(mu),
                        power=PowerProfile(psi_db, 10.0, 1.0))
    k = AnalysisConstants.from_config(cfg)
    g = k.gamma_th
    gd = snr_destination(k, x, y)
    if y <= k.gamma_tilde_th:
        assert gd < g * (1 + 1e-12)
    else:
        arg = g * (y * k.phi * k.vartheta2 + k.xi) / (k.psi * (k.phi * y - g * k.vartheta4))
        if abs(x - arg) > 1e-9 * arg:
            assert (gd < g) == (x < arg)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 5.0), st.floats(1e-3, 5.0), st.floats(0.0, 5.0))
def test_jammer_only_hurts_eavesdropper(x, y, z):
    k = AnalysisConstants.from_config(grid_config("AS", 1, 20.0))
    assert snr_eavesdropper(k, x, y, z) <= snr_eavesdropper(k, x, y, 0.0) + 1e-15


def test_amplification_gain():
    p = PowerProfile(20.0, 10.0, 1.0)
    g = linkmodel.amplification_gain(p, 0.5, 0.25)
    assert g ** 2 == pytest.approx(10.0 / (100 * (0.5 + 0.0625) + 1))
