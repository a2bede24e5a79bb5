import math

import numpy as np
import pytest

import scmimo

TINY = """
link = uplink
filters = CMFE, ZFE, MMSEE
dims.antennas = 8
dims.users = 2
dims.taps = 2
dims.dft_size = 8
dims.block_length = 8
dims.cyclic_prefix = 3
corr.model = exponential
corr.alpha = 0, 0.9
rho_db = 0, 10
trials = 4
beta.trials = 3
seed = 3
"""


def test_exponential_correlation_structure():
    a = scmimo.exponential_correlation(0.5, 4)
    assert a.shape == (4, 4)
    assert np.allclose(a, a.conj().T)
    assert a[0, 1].real == pytest.approx(math.sqrt(0.5))
    assert np.all(np.diag(a).real == 1.0)


def test_bessel_broadside_is_real():
    a = scmimo.bessel_correlation(0.0, 0.0, 8)
    assert np.max(np.abs(a.imag)) < 1e-12
    assert np.min(np.linalg.eigvalsh(a)) > -1e-9


def test_bad_parameters_raise():
    with pytest.raises(ValueError):
        scmimo.bessel_correlation(20.0, math.pi / 4, 64, kind="upa", per_row=8)
    with pytest.raises(scmimo.ConfigError):
        scmimo.sweep(TINY, ["corr.alpha=2"])


def test_closed_forms():
    assert scmimo.cmfp_rate_closed(1.0, 64, 10, 64.0) == pytest.approx(10.352, abs=1e-3)
    assert scmimo.cmfp_rate_limit(64, 10, 64.0) == pytest.approx(14.44, abs=1e-2)


def test_sweep_rows_match_csv():
    rows = scmimo.sweep(TINY)
    assert len(rows) == 3 * 2 * 2
    assert all(r["if"] == 0.0 for r in rows)
    assert all(math.isfinite(r["rate_bpcu"]) for r in rows)
    csv = scmimo.sweep_csv(TINY)
    lines = csv.strip().split("\n")
    assert lines[0] == scmimo.CSV_HEADER
    assert len(lines) == len(rows) + 1
    assert csv == scmimo.sweep_csv(TINY)


def test_beta_search():
    beta, rate = scmimo.optimize_beta(TINY, "MMSEE", 10.0, point=1, trials=3)
    assert beta > 0.0
    assert rate > 0.0


def test_suite_listing():
    assert "zero_forcing" in scmimo.suite_names()
    report = scmimo.run_suite("appendix")
    assert report["passed"]
    assert report["checks"]
