import numpy as np
import pytest

from satrelay import montecarlo
from satrelay.montecarlo import BLOCK_SIZE, Estimate

from conftest import grid_config


def test_estimate_from_count():
    e = Estimate.from_count(25, 100)
    assert e.value == 0.25
    assert e.stderr == pytest.approx(np.sqrt(0.25 * 0.75 / 100))
    assert e.ci95[0] < 0.25 < e.ci95[1]
    assert e.contains(0.25) and not e.contains(0.9)
    z = Estimate.from_count(0, 10)
    assert z.ci95 == (0.0, 0.0)


def test_deterministic_given_seed():
    cfg = grid_config("HS", 3, 20.0)
    assert montecarlo.estimate(cfg, 40_000, 11) == montecarlo.estimate(cfg, 40_000, 11)
    assert montecarlo.estimate(cfg, 40_000, 11) != montecarlo.estimate(cfg, 40_000, 12)


def test_worker_count_invariance():
    cfg = grid_config("AS", 3, 20.0)
    n = 5 * BLOCK_SIZE + 123
    ref = montecarlo.estimate(cfg, n, 99, workers=1)
    for workers in (2, 3, 8):
        assert montecarlo.estimate(cfg, n, 99, workers=workers) == ref


def test_blocks_are_prefix_stable():
    # growing the trial count only appends blocks
    cfg = grid_config("AS", 1, 10.0)
    a, _ = montecarlo.estimate(cfg, BLOCK_SIZE, 4)
    b, _ = montecarlo.estimate(cfg, 2 * BLOCK_SIZE, 4)
    c0 = montecarlo._count_blocks((cfg, 4, [1], 2 * BLOCK_SIZE, None))[0]
    assert b.count == a.count + c0


def test_simulate_trial_shapes():
    cfg = grid_config("HS", 2, 20.0)
    out = montecarlo.simulate_trial(cfg, montecarlo.block_rng(1, 0))
    assert out.gamma_d >= 0 and out.gamma_e >= 0
    g = montecarlo.sample_gains(cfg, montecarlo.block_rng(1, 0), 10, jammer_gain=2.0)
    assert set(g) == {"sr", "rd", "re", "je"}
    assert np.all(g["je"] == 2.0)


def test_relay_selection_takes_best():
    cfg = grid_config("AS", 3, 20.0)
    rng1, rng2 = montecarlo.block_rng(8, 0), montecarlo.block_rng(8, 0)
    from satrelay.channels import sr_sample
    manual = np.max([sr_sample(p, rng2, 50) for p in cfg.relays], axis=0)
    assert np.array_equal(montecarlo.sample_gains(cfg, rng1, 50)["sr"], manual)


def test_rejects_nonpositive_trials():
    with pytest.raises(ValueError):
        montecarlo.estimate(grid_config("HS", 1, 10.0), 0, 1)
