"""Phase-matching, joint spectra and HOM interference for KTP-family crystals."""

import os
from functools import lru_cache
from pathlib import Path

from ._core import (
    CrystalDatabase,
    Error,
    GridBoundaryError,
    HomCurve,
    IoError,
    Jsa,
    ParseError,
    SolverError,
    ValidationError,
    __version__,
    bandwidth_nm_to_ghz,
    compute_jsa,
    default_database_path,
    gvm_wavelength,
    group_index,
    hom,
    load_database,
    marginals,
    optimize_purity,
    poling_period,
    purity,
    read_jsa,
    refractive_index,
    schmidt_coefficients,
    schmidt_number,
    tilt_angle,
)

_BUNDLED = Path(__file__).with_name("data") / "crystals.json"


def database_path() -> Path:
    env = os.environ.get("CPSPDC_DB")
    if env:
        return Path(env)
    if _BUNDLED.is_file():
        return _BUNDLED
    return Path(default_database_path())


@lru_cache(maxsize=None)
def default_database() -> CrystalDatabase:
    return load_database(database_path())


__all__ = [name for name in dir() if not name.startswith("_")]
