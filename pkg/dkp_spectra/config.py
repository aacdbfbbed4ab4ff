import os

DEFAULT_LOGGER_NAME = "dkp_spectra"
LOG_LEVEL = os.environ.get("DKP_SPECTRA_LOG_LEVEL", "INFO").upper()
DKP_SPECTRA_THREADS = max(1, int(os.environ.get("DKP_SPECTRA_THREADS", min(4, os.cpu_count() or 1))))
DEFAULT_METRIC_NAMESPACE = os.environ.get("DEFAULT_METRIC_NAMESPACE", "DKPSpectra")
