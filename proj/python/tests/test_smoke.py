import math

import numpy as np
import pytest

import cpspdc


@pytest.fixture(scope="module")
def db():
    return cpspdc.default_database()


def test_database_lists_crystals(db):
    assert len(db) == 5
    assert "PPKTP" in db
    assert len(db.checksum) == 64


def test_ktp_period_and_index(db):
    assert cpspdc.poling_period(db, "PPKTP", "type0", 1550.0) == pytest.approx(419.637, abs=5e-3)
    n = cpspdc.refractive_index(db, "PPKTP", "z", 1550.0)
    assert 1.7 < n < 1.9
    assert cpspdc.group_index(db, "PPKTP", "z", 1550.0) > n


def test_tilt_changes_sign_across_gvm(db):
    gvm = cpspdc.gvm_wavelength(db, "PPKTP", "type2a")
    below = cpspdc.tilt_angle(db, "PPKTP", "type2a", gvm - 50.0)
    above = cpspdc.tilt_angle(db, "PPKTP", "type2a", gvm + 50.0)
    assert below * above < 0


def test_jsa_purity_matches_numpy(db):
    jsa = cpspdc.compute_jsa(db, "PPKTP", "type0", 1550.0, 5.0, 0.16, n=64)
    f = jsa.amplitudes
    assert f.shape == (64, 64)
    assert jsa.norm_squared == pytest.approx(1.0, abs=1e-12)
    s = np.linalg.svd(f, compute_uv=False)
    assert cpspdc.purity(jsa) == pytest.approx(np.sum(s**4) / np.sum(s**2) ** 2, abs=1e-10)
    c = cpspdc.schmidt_coefficients(jsa)
    assert sum(x * x for x in c) == pytest.approx(1.0, abs=1e-12)
    assert cpspdc.schmidt_number(jsa) == pytest.approx(1.0 / cpspdc.purity(jsa), rel=1e-10)


def test_hom_visibility_tracks_purity(db):
    jsa = cpspdc.compute_jsa(db, "PPKTP", "type2a", 1550.0, 5.0, 0.2, n=96)
    curve = cpspdc.hom(jsa, jsa, "signal")
    assert len(curve.delays_ps) == len(curve.p4) == 201
    assert curve.baseline == pytest.approx(0.5, abs=0.01)
    assert curve.visibility == pytest.approx(cpspdc.purity(jsa), abs=0.01)


def test_marginals_and_bandwidth(db):
    jsa = cpspdc.compute_jsa(db, "PPKTP", "type0", 1550.0, 5.0, 0.16, n=128)
    m = cpspdc.marginals(jsa)
    assert m["signal_fwhm_nm"] > m["idler_fwhm_nm"] > 0
    assert cpspdc.bandwidth_nm_to_ghz(1550.0, 0.54) == pytest.approx(67.43, abs=0.2)


def test_jsa_file_round_trip(db, tmp_path):
    jsa = cpspdc.compute_jsa(db, "PPKTP", "type0", 1550.0, 5.0, 0.16, span="fixed:3", n=32)
    path = tmp_path / "jsa.bin"
    jsa.write_binary(path)
    back = cpspdc.read_jsa(path)
    assert np.array_equal(back.amplitudes, jsa.amplitudes)
    assert back.signal_nm == jsa.signal_nm


def test_errors_map_to_python(db):
    with pytest.raises(cpspdc.ValidationError):
        cpspdc.poling_period(db, "NOPE", "type0", 1550.0)
    with pytest.raises(cpspdc.ValidationError):
        cpspdc.compute_jsa(db, "PPKTP", "type0", 1550.0, 5.0, 0.16, span="wide")
    with pytest.raises(cpspdc.Error):
        cpspdc.load_database("/nonexistent/crystals.json")
    assert not math.isnan(cpspdc.poling_period(db, "PPCTA", "type2b", 1550.0))
