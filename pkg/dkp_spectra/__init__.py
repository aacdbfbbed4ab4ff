"""Spectra and radial eigenfunctions of the DKP oscillator under an extended uncertainty principle."""

from importlib import metadata as importlib_metadata


def get_version() -> str:
    try:
        return importlib_metadata.version("dkp-spectra")
    except importlib_metadata.PackageNotFoundError:  # pragma: no cover
        return "unknown"


version: str = get_version()
