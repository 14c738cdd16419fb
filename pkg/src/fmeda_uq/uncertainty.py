"""First-order propagation of input uncertainties into the safety metrics.

Every row's DC and failure rate carry a standard deviation.  Treating the
inputs as uncorrelated and the metric as locally linear, the variance of
SPFM follows from the squared partial derivatives:

    sigma_SPFM = (1/lambda_tot) * sqrt(  sum_i lambda_i^2  * sigma_DC_i^2
                                       + sum_i (1 - DC_i)^2 * sigma_lambda_i^2 )

The two sums can be kept separately: DC_ONLY drops the rate-uncertainty
sum, LAMBDA_ONLY drops the DC-uncertainty sum, and FULL keeps both, so
that sigma_full^2 = sigma_dc_only^2 + sigma_lambda_only^2 holds exactly.

lambda_tot is held fixed at its nominal value throughout: the propagation
model treats the total rate as a constant of the analysis, and rate
fluctuations of individual modes enter only through the numerator terms.
The Monte Carlo oracle in mc_oracle uses the same convention, so the two
routes are comparable.

sigma_LFM has no compact closed form; it is assembled from the analytic
partial derivatives of the LFM ratio (again with lambda_tot fixed), which
are exposed for finite-difference cross-checking.

Cross-covariances between inputs are deliberately not modeled; the data
model carries no covariance inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .metrics import UndefinedMetricError
from .model import FmedaTable, TableArrays, require_valid, table_arrays

# Two-sided standard-normal cut-offs, 5 significant digits.
NORMAL_CUTOFFS: dict[float, float] = {
    0.90: 1.6449,
    0.95: 1.9600,
    0.99: 2.5758,
}


def cutoff(confidence_level: float) -> float:
    """Standard-normal two-sided cut-off for one of the supported levels."""
    try:
        return NORMAL_CUTOFFS[confidence_level]
    except KeyError:
        raise ValueError(
            f"unsupported confidence level {confidence_level!r}; "
            f"expected one of {sorted(NORMAL_CUTOFFS)}"
        ) from None


class PropagationMode(str, enum.Enum):
    """Which uncertainty sources enter the SPFM variance."""

    FULL = "full"
    DC_ONLY = "dc_only"
    LAMBDA_ONLY = "lambda_only"


@dataclass(frozen=True)
class Interval:
    """A [lo, hi] confidence interval, clamped to the metric's [0, 1] range."""

    lo: float
    hi: float
    clamped: bool = False


@dataclass(frozen=True)
class UncertaintyResult:
    """Propagated sigmas and the intervals they imply at one confidence level."""

    sigma_spfm: float
    sigma_lfm: float | None
    mode: PropagationMode
    confidence_level: float
    k: float
    interval_spfm: Interval
    interval_lfm: Interval | None


def _spfm_variance_terms(arr: TableArrays) -> tuple[np.ndarray, np.ndarray]:
    """Per-row variance contributions (DC side, rate side), in FIT^2."""
    terms_dc = (arr.lam * arr.sigma_dc) ** 2
    terms_lam = ((1.0 - arr.dc) * arr.sigma_lam) ** 2
    return terms_dc, terms_lam


def sigma_spfm_from_arrays(arr: TableArrays, mode: PropagationMode = PropagationMode.FULL) -> float:
    if arr.lambda_tot <= 0.0:
        raise UndefinedMetricError("lambda_tot must be > 0 to propagate SPFM uncertainty")
    terms_dc, terms_lam = _spfm_variance_terms(arr)
    if mode is PropagationMode.FULL:
        var = float(terms_dc.sum() + terms_lam.sum())
    elif mode is PropagationMode.DC_ONLY:
        var = float(terms_dc.sum())
    elif mode is PropagationMode.LAMBDA_ONLY:
        var = float(terms_lam.sum())
    else:
        raise ValueError(f"unknown propagation mode {mode!r}")
    return math.sqrt(var) / arr.lambda_tot


def sigma_spfm(table: FmedaTable, mode: PropagationMode = PropagationMode.FULL) -> float:
    """Standard deviation of SPFM under the selected propagation mode."""
    require_valid(table)
    return sigma_spfm_from_arrays(table_arrays(table), mode)


def spfm_partials(table: FmedaTable) -> tuple[np.ndarray, np.ndarray]:
    """Analytic (dSPFM/dDC_i, dSPFM/dlambda_i) with lambda_tot held fixed."""
    require_valid(table)
    arr = table_arrays(table)
    d_dc = arr.lam / arr.lambda_tot
    d_lam = -(1.0 - arr.dc) / arr.lambda_tot
    return d_dc, d_lam


def lfm_partials_from_arrays(arr: TableArrays) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    residual = float(np.dot(1.0 - arr.dc, arr.lam))
    den = arr.lambda_tot - residual
    if den <= 0.0:
        raise UndefinedMetricError(
            "LFM is undefined: no detected pool to propagate uncertainty over"
        )
    num = float(np.dot((1.0 - arr.dc_lat) * arr.dc, arr.lam))
    # LFM = 1 - num/den with den = lambda_tot - sum((1-DC)*lambda); quotient
    # rule, lambda_tot constant.
    d_dc_lat = arr.dc * arr.lam / den
    d_dc = arr.lam * (num - (1.0 - arr.dc_lat) * den) / den**2
    d_lam = -((1.0 - arr.dc_lat) * arr.dc * den + num * (1.0 - arr.dc)) / den**2
    return d_dc, d_dc_lat, d_lam


def lfm_partials(table: FmedaTable) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic (dLFM/dDC_i, dLFM/dDC_lat_i, dLFM/dlambda_i), lambda_tot fixed."""
    require_valid(table)
    return lfm_partials_from_arrays(table_arrays(table))


def sigma_lfm_from_arrays(arr: TableArrays) -> float:
    d_dc, d_dc_lat, d_lam = lfm_partials_from_arrays(arr)
    var = float(
        np.dot(d_dc**2, arr.sigma_dc**2)
        + np.dot(d_dc_lat**2, arr.sigma_dc_lat**2)
        + np.dot(d_lam**2, arr.sigma_lam**2)
    )
    return math.sqrt(var)


def sigma_lfm(table: FmedaTable) -> float:
    """Standard deviation of LFM from the analytic partial derivatives."""
    require_valid(table)
    return sigma_lfm_from_arrays(table_arrays(table))


def confidence_interval(value: float, sigma: float, confidence_level: float) -> Interval:
    """value +/- k*sigma, clamped to [0, 1] with the clamp recorded."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    k = cutoff(confidence_level)
    lo = value - k * sigma
    hi = value + k * sigma
    clamped = lo < 0.0 or hi > 1.0
    return Interval(max(lo, 0.0), min(hi, 1.0), clamped)


def propagate(
    table: FmedaTable,
    mode: PropagationMode = PropagationMode.FULL,
    confidence_level: float = 0.95,
) -> UncertaintyResult:
    """Propagate all row sigmas and build the confidence intervals.

    The SPFM interval uses the requested mode's sigma.  When LFM is
    undefined for the table (no detected pool), its sigma and interval
    are None rather than an error, so callers can still report SPFM.
    """
    require_valid(table)
    arr = table_arrays(table)
    from .metrics import lfm_from_arrays, spfm_from_arrays

    k = cutoff(confidence_level)
    s_spfm = sigma_spfm_from_arrays(arr, mode)
    spfm_value = spfm_from_arrays(arr.dc, arr.lam, arr.lambda_tot)
    interval_spfm = confidence_interval(spfm_value, s_spfm, confidence_level)

    s_lfm: float | None
    interval_lfm: Interval | None
    try:
        lfm_value = lfm_from_arrays(arr.dc, arr.dc_lat, arr.lam, arr.lambda_tot)
        s_lfm = sigma_lfm_from_arrays(arr)
        interval_lfm = confidence_interval(lfm_value, s_lfm, confidence_level)
    except UndefinedMetricError:
        s_lfm = None
        interval_lfm = None

    return UncertaintyResult(
        sigma_spfm=s_spfm,
        sigma_lfm=s_lfm,
        mode=mode,
        confidence_level=confidence_level,
        k=k,
        interval_spfm=interval_spfm,
        interval_lfm=interval_lfm,
    )
