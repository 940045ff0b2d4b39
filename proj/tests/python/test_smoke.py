from pathlib import Path

import numpy as np
import pytest

import sbc

PRESETS = Path(__file__).resolve().parents[2] / "presets"

TINY = """
M=8
K=4
N_c=2
tau=2
U=1
snr_db=0,10
trials=2
signature_draws=100
P_rays=20
"""


def test_version():
    assert sbc.__version__ == "0.1.0"


def test_dft_basis_is_unitary():
    F = sbc.dft_basis(16)
    assert np.allclose(F.conj().T @ F, np.eye(16), atol=1e-12)
    v = np.random.default_rng(0).normal(size=16) + 0j
    assert np.allclose(sbc.analyze(list(v)), F.conj().T @ v)


def test_chordal_distance():
    assert sbc.chordal_distance([1, 2, 3], [2, 3, 4]) == 2.0


def test_grouping_against_oracle():
    sigs = [([0, 1], [1.0, 0.5]), ([1, 2], [0.8, 0.2]), ([5], [0.9]), ([6, 7], [0.3, 0.3])]
    groups = sbc.group_cell(sigs, tau=2, cap=2, mode="aware")
    assert len(groups) == 2
    members = [u for g in groups for u in g]
    assert len(members) == len(set(members))
    assert sbc.grouping_oracle(sigs, 2, 2, "aware") >= 0.0


def test_max_tau_cut_example():
    w = [[0, 0, 0, 5], [0, 0, 5, 0], [0, 5, 0, 0], [5, 0, 0, 0]]
    pilots, cut, opt = sbc.max_tau_cut([0, 0, 1, 1], w, tau=2)
    assert cut == opt == 10.0
    assert pilots[0] != pilots[1] and pilots[2] != pilots[3]


def test_simulate_is_deterministic():
    a = sbc.simulate(TINY)
    b = sbc.simulate(TINY, threads=2)
    assert set(a) == {"scheme", "snr_db", "trial", "user", "mse", "sinr", "se"}
    assert len(a["se"]) > 0
    for key in ("mse", "sinr", "se"):
        assert np.array_equal(a[key], b[key])
    c = sbc.simulate(TINY, seed=5, schemes=["aware"])
    assert set(c["scheme"]) == {"aware"}


def test_preset_and_overrides():
    cfg = sbc.load_config(str(PRESETS / "tiny.cfg"))
    assert cfg.M == 8
    cfg.set("trials", "1")
    csv = sbc.run_experiment_csv(cfg)
    assert csv.startswith("scheme,snr_db,trial,user,mse,sinr,se\n")


def test_bad_config_raises():
    with pytest.raises(ValueError):
        sbc.parse_config("M=8\n")
    cfg = sbc.parse_config(TINY)
    with pytest.raises(ValueError):
        cfg.set("colour", "blue")
