"""One-call assembly of the full analysis result.

analyze() runs the whole pipeline on a validated table: nominal SPFM and
LFM, the three propagation variants of sigma_SPFM, sigma_LFM, confidence
intervals, the error-importance ranking with per-failure-mode totals, and
the ASIL verdict when a target applies.  Rows whose DC was measured by a
sampled fault-injection campaign get their sigma_dc derived from the
campaign margin first (unless already explicit or disabled).

LFM can be legitimately undefined (a table where every fault is residual
has no detected pool); the result then carries lfm=None with a note
instead of failing, so SPFM reporting still works.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

from .eii import (
    EiiEntry,
    INPUT_DC,
    NO_UNCERTAINTY_NOTE,
    eii_table,
    total_per_failure_mode,
)
from .metrics import (
    AsilVerdict,
    UndefinedMetricError,
    asil_verdict,
    lfm,
    spfm,
)
from .model import FmedaTable, iter_rows, require_valid
from .sampling import apply_faultsim_sigmas
from .uncertainty import (
    Interval,
    PropagationMode,
    confidence_interval,
    cutoff,
    sigma_lfm,
    sigma_spfm,
)


@dataclass(frozen=True)
class ReportRow:
    """Per-failure-mode line of the report, inputs plus EII percentages."""

    part: str
    subpart: str
    failure_mode_id: str
    name: str
    lambda_fm: float
    sigma_lambda_fm: float
    dc: float
    sigma_dc: float
    dc_latent: float
    sigma_dc_latent: float
    eii_dc_percent: float
    eii_lambda_percent: float
    eii_total_percent: float


@dataclass(frozen=True)
class AnalysisResult:
    """Everything the emitters and the verdict need, in one immutable bundle."""

    lambda_tot: float
    spfm: float
    lfm: float | None
    lfm_note: str | None
    sigma_spfm_full: float
    sigma_spfm_dc_only: float
    sigma_spfm_lambda_only: float
    sigma_lfm: float | None
    mode: PropagationMode
    confidence_level: float
    k: float
    interval_spfm: Interval
    interval_lfm: Interval | None
    eii_entries: tuple[EiiEntry, ...]
    eii_totals: tuple[tuple[str, float], ...]
    eii_note: str | None
    asil_target: str | None
    verdict: AsilVerdict | None
    rows: tuple[ReportRow, ...]
    stamp: dict | None = None

    @property
    def sigma_spfm(self) -> float:
        """The sigma selected by the propagation mode (drives the verdict)."""
        if self.mode is PropagationMode.DC_ONLY:
            return self.sigma_spfm_dc_only
        if self.mode is PropagationMode.LAMBDA_ONLY:
            return self.sigma_spfm_lambda_only
        return self.sigma_spfm_full

    def to_dict(self) -> dict:
        doc = {
            "version": "fmeda-uq/1",
            "lambda_tot_fit": self.lambda_tot,
            "spfm": self.spfm,
            "lfm": self.lfm,
            "lfm_note": self.lfm_note,
            "sigma_spfm": {
                "full": self.sigma_spfm_full,
                "dc_only": self.sigma_spfm_dc_only,
                "lambda_only": self.sigma_spfm_lambda_only,
            },
            "sigma_lfm": self.sigma_lfm,
            "mode": self.mode.value,
            "confidence_level": self.confidence_level,
            "k": self.k,
            "interval_spfm": {
                "lo": self.interval_spfm.lo,
                "hi": self.interval_spfm.hi,
                "clamped": self.interval_spfm.clamped,
            },
            "interval_lfm": None if self.interval_lfm is None else {
                "lo": self.interval_lfm.lo,
                "hi": self.interval_lfm.hi,
                "clamped": self.interval_lfm.clamped,
            },
            "eii": [
                {
                    "failure_mode": e.failure_mode_id,
                    "input": e.input,
                    "raw_eii": e.raw_eii,
                    "variance_share": e.variance_share,
                    "percent": e.percent,
                }
                for e in self.eii_entries
            ],
            "eii_totals": [
                {"failure_mode": fm_id, "percent": pct}
                for fm_id, pct in self.eii_totals
            ],
            "eii_note": self.eii_note,
            "asil": None if self.verdict is None else {
                "target": self.verdict.target,
                "spfm": self.verdict.spfm,
                "lfm": self.verdict.lfm,
                "overall": self.verdict.overall,
            },
            "rows": [
                {
                    "part": r.part,
                    "subpart": r.subpart,
                    "failure_mode": r.failure_mode_id,
                    "name": r.name,
                    "lambda_fm_fit": r.lambda_fm,
                    "sigma_lambda_fm_fit": r.sigma_lambda_fm,
                    "dc": r.dc,
                    "sigma_dc": r.sigma_dc,
                    "dc_latent": r.dc_latent,
                    "sigma_dc_latent": r.sigma_dc_latent,
                    "eii_dc_percent": r.eii_dc_percent,
                    "eii_lambda_percent": r.eii_lambda_percent,
                    "eii_total_percent": r.eii_total_percent,
                }
                for r in self.rows
            ],
        }
        if self.stamp is not None:
            doc["stamp"] = self.stamp
        return doc


def analyze(
    table: FmedaTable,
    *,
    confidence_level: float = 0.95,
    mode: PropagationMode = PropagationMode.FULL,
    asil_target: str | None = None,
    derive_faultsim_sigma: bool = True,
    stamp: dict | None = None,
) -> AnalysisResult:
    """Run the full analysis on a valid table.

    asil_target overrides the table's own target; None falls back to it.
    """
    require_valid(table)
    if derive_faultsim_sigma:
        table = apply_faultsim_sigmas(table)

    k = cutoff(confidence_level)
    spfm_value = spfm(table).value
    s_full = sigma_spfm(table, PropagationMode.FULL)
    s_dc = sigma_spfm(table, PropagationMode.DC_ONLY)
    s_lam = sigma_spfm(table, PropagationMode.LAMBDA_ONLY)
    selected = {
        PropagationMode.FULL: s_full,
        PropagationMode.DC_ONLY: s_dc,
        PropagationMode.LAMBDA_ONLY: s_lam,
    }[mode]
    interval_spfm = confidence_interval(spfm_value, selected, confidence_level)

    lfm_value: float | None
    lfm_note = None
    s_lfm: float | None
    interval_lfm: Interval | None
    try:
        lfm_value = lfm(table).value
        s_lfm = sigma_lfm(table)
        interval_lfm = confidence_interval(lfm_value, s_lfm, confidence_level)
    except UndefinedMetricError as exc:
        lfm_value = None
        lfm_note = str(exc)
        s_lfm = None
        interval_lfm = None

    entries = tuple(eii_table(table))
    totals = tuple(total_per_failure_mode(list(entries)))
    eii_note = None if entries else NO_UNCERTAINTY_NOTE

    target = asil_target if asil_target is not None else table.asil_target
    verdict = None
    if target is not None:
        probe = SimpleNamespace(
            spfm=spfm_value, sigma_spfm=selected, lfm=lfm_value, sigma_lfm=s_lfm, k=k
        )
        verdict = asil_verdict(probe, target)

    by_row: dict[int, dict[str, float]] = {}
    for e in entries:
        by_row.setdefault(e.row_index, {})[e.input] = e.percent
    rows = []
    for i, (part, sub, row) in enumerate(iter_rows(table)):
        pcts = by_row.get(i, {})
        dc_pct = pcts.get(INPUT_DC, 0.0)
        lam_pct = sum((v for key, v in pcts.items() if key != INPUT_DC), 0.0)
        rows.append(ReportRow(
            part=part.name,
            subpart=sub.name,
            failure_mode_id=row.id,
            name=row.name,
            lambda_fm=row.lambda_fm,
            sigma_lambda_fm=row.sigma_lambda_fm,
            dc=row.dc,
            sigma_dc=row.sigma_dc,
            dc_latent=row.dc_latent,
            sigma_dc_latent=row.sigma_dc_latent,
            eii_dc_percent=dc_pct,
            eii_lambda_percent=lam_pct,
            eii_total_percent=dc_pct + lam_pct,
        ))

    arr_total = sum(r.lambda_fm for r in rows)
    return AnalysisResult(
        lambda_tot=arr_total,
        spfm=spfm_value,
        lfm=lfm_value,
        lfm_note=lfm_note,
        sigma_spfm_full=s_full,
        sigma_spfm_dc_only=s_dc,
        sigma_spfm_lambda_only=s_lam,
        sigma_lfm=s_lfm,
        mode=mode,
        confidence_level=confidence_level,
        k=k,
        interval_spfm=interval_spfm,
        interval_lfm=interval_lfm,
        eii_entries=entries,
        eii_totals=totals,
        eii_note=eii_note,
        asil_target=target,
        verdict=verdict,
        rows=tuple(rows),
        stamp=stamp,
    )
