"""Domain model for hierarchical FMEDA failure-mode tables.

Hierarchy: FmedaTable -> Part -> Subpart -> FailureModeRow.  Failure
rates are expressed in FIT (failures per 1e9 device-hours); diagnostic
coverages are dimensionless fractions in [0, 1].

A subpart carries its failure modes in one of two forms:

* DirectLambda: every row states lambda_fm (and sigma_lambda_fm) in FIT.
* Distribution: every row states an FMD fraction of the subpart rate,
  with an optional sigma on that fraction.  The canonical FIT values are
  materialized at construction: lambda_fm = lambda_subpart * fmd_fraction
  and sigma_lambda_fm = lambda_subpart * sigma_fmd.

The table-wide rate lambda_tot is always derived as the sum of all row
rates, never user-supplied, so it cannot disagree with the rows.

All types are immutable after construction and all operations are pure
functions, safe for concurrent use.  Structural problems are reported by
validate() as Violation records (data, not exceptions); operations whose
contract requires a valid table raise FmedaValidationError carrying the
full violation list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np

# Authored FMD fractions must sum to 1 within this absolute tolerance.
FMD_SUM_TOL = 1e-9
# A declared subpart rate must match the row sum within this relative slack.
LAMBDA_MATCH_RTOL = 1e-9

DIRECT_LAMBDA = "DirectLambda"
DISTRIBUTION = "Distribution"

EXPERT = "expert"
FAULT_SIMULATION = "faultsim"
FAULTSIM_CONFIDENCE_LEVELS = (0.90, 0.95, 0.99)

ASIL_LEVELS = ("A", "B", "C", "D")


class FmedaValidationError(ValueError):
    """Raised when an operation requires a valid table but violations exist."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"table has {len(self.violations)} violation(s): {lines}")


@dataclass(frozen=True)
class Violation:
    """One broken invariant: where it happened, which rule, what was observed."""

    location: str
    field: str
    rule: str
    observed: object
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.location}.{self.field}: {self.message} (observed {self.observed!r})"


@dataclass(frozen=True)
class DcSource:
    """Provenance of a row's diagnostic coverage estimate.

    kind is "expert" for judgment-based values, or "faultsim" for values
    measured by a statistical fault-injection campaign, in which case the
    campaign's margin of error and confidence level are recorded.
    """

    kind: str = EXPERT
    margin_e: float | None = None
    confidence_level: float | None = None

    @classmethod
    def fault_simulation(cls, margin_e: float, confidence_level: float) -> "DcSource":
        return cls(FAULT_SIMULATION, margin_e, confidence_level)

    @property
    def is_fault_simulation(self) -> bool:
        return self.kind == FAULT_SIMULATION


EXPERT_JUDGMENT = DcSource()


@dataclass(frozen=True)
class FailureModeRow:
    """One failure mode: rate, coverages, and their standard deviations.

    lambda_fm / sigma_lambda_fm are the canonical FIT values.  Rows of a
    Distribution subpart are authored via fmd_fraction / sigma_fmd instead;
    their FIT values are filled in when the enclosing Subpart is built.
    """

    id: str
    name: str = ""
    lambda_fm: float | None = None
    sigma_lambda_fm: float = 0.0
    fmd_fraction: float | None = None
    sigma_fmd: float = 0.0
    dc: float = 0.0
    sigma_dc: float = 0.0
    dc_latent: float = 0.0
    sigma_dc_latent: float = 0.0
    dc_source: DcSource = EXPERT_JUDGMENT
    safety_mechanisms: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "safety_mechanisms", tuple(self.safety_mechanisms))
        if not self.name:
            object.__setattr__(self, "name", self.id)


@dataclass(frozen=True)
class Subpart:
    """A named group of failure modes, optionally with its own rate in FIT.

    fmd_mode may be given explicitly; when None it is inferred from the
    rows (Distribution iff any row carries an FMD fraction).  Distribution
    rows get their canonical lambda_fm materialized here.
    """

    name: str
    lambda_subpart: float | None = None
    fmd_mode: str | None = None
    failure_modes: tuple[FailureModeRow, ...] = ()

    def __post_init__(self):
        rows = tuple(self.failure_modes)
        mode = self.fmd_mode
        if mode is None:
            has_fraction = any(r.fmd_fraction is not None for r in rows)
            mode = DISTRIBUTION if has_fraction else DIRECT_LAMBDA
        if mode == DISTRIBUTION and self.lambda_subpart is not None:
            rows = tuple(
                replace(
                    r,
                    lambda_fm=self.lambda_subpart * r.fmd_fraction,
                    sigma_lambda_fm=self.lambda_subpart * r.sigma_fmd,
                )
                if r.fmd_fraction is not None
                else r
                for r in rows
            )
        object.__setattr__(self, "failure_modes", rows)
        object.__setattr__(self, "fmd_mode", mode)


@dataclass(frozen=True)
class Part:
    """A named hardware part holding one or more subparts."""

    name: str
    subparts: tuple[Subpart, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "subparts", tuple(self.subparts))


@dataclass(frozen=True)
class FmedaTable:
    """The full analysis input: parts of subparts of failure modes."""

    parts: tuple[Part, ...] = ()
    asil_target: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def lambda_tot(self) -> float:
        """Total failure rate in FIT, derived as the sum of all row rates."""
        total = 0.0
        for _, _, row in iter_rows(self):
            if row.lambda_fm is None:
                raise FmedaValidationError(
                    [
                        Violation(
                            location=row.id,
                            field="lambda_fm",
                            rule="lambda.missing",
                            observed=None,
                            message="row has no failure rate (unresolved FMD fraction?)",
                        )
                    ]
                )
            total += row.lambda_fm
        return total


def iter_rows(table: FmedaTable) -> Iterator[tuple[Part, Subpart, FailureModeRow]]:
    """Yield (part, subpart, row) triples in table order."""
    for part in table.parts:
        for sub in part.subparts:
            for row in sub.failure_modes:
                yield part, sub, row


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _finite(x: float | None) -> bool:
    return x is None or (isinstance(x, (int, float)) and math.isfinite(x))


def validate(table: FmedaTable) -> list[Violation]:
    """Check every structural invariant; return all violations found.

    Returns an empty list iff the table is analyzable.  Never raises and
    never mutates: violations are data for the caller to report.
    """
    out: list[Violation] = []
    seen_ids: dict[str, str] = {}

    def bad(loc: str, fld: str, rule: str, obs: object, msg: str) -> None:
        out.append(Violation(loc, fld, rule, obs, msg))

    if table.asil_target is not None and table.asil_target not in ASIL_LEVELS:
        bad("table", "asil_target", "asil.unknown", table.asil_target,
            f"ASIL target must be one of {ASIL_LEVELS}")

    lambda_known = True
    total = 0.0

    for part in table.parts:
        for sub in part.subparts:
            sub_loc = f"{part.name}/{sub.name}"
            dist = sub.fmd_mode == DISTRIBUTION

            if sub.fmd_mode not in (DIRECT_LAMBDA, DISTRIBUTION):
                bad(sub_loc, "fmd_mode", "fmd.mode_unknown", sub.fmd_mode,
                    "fmd_mode must be DirectLambda or Distribution")
                dist = False
            if not _finite(sub.lambda_subpart):
                bad(sub_loc, "lambda_subpart", "value.finite", sub.lambda_subpart,
                    "subpart rate must be finite")
            elif sub.lambda_subpart is not None and sub.lambda_subpart < 0:
                bad(sub_loc, "lambda_subpart", "lambda_subpart.nonneg",
                    sub.lambda_subpart, "subpart rate must be >= 0")
            if dist and sub.lambda_subpart is None:
                bad(sub_loc, "lambda_subpart", "fmd.lambda_subpart_missing", None,
                    "Distribution mode needs lambda_subpart to derive row rates")

            fmd_sum = 0.0
            fmd_complete = dist
            row_sum = 0.0
            row_sum_known = True

            for row in sub.failure_modes:
                loc = f"{sub_loc}/{row.id}"

                if not row.id:
                    bad(loc, "id", "id.nonempty", row.id, "row id must not be empty")
                elif row.id in seen_ids:
                    bad(loc, "id", "table.duplicate_id", row.id,
                        f"id already used at {seen_ids[row.id]}")
                else:
                    seen_ids[row.id] = loc

                for fld in ("lambda_fm", "sigma_lambda_fm", "fmd_fraction",
                            "sigma_fmd", "dc", "sigma_dc", "dc_latent",
                            "sigma_dc_latent"):
                    if not _finite(getattr(row, fld)):
                        bad(loc, fld, "value.finite", getattr(row, fld),
                            "value must be finite")

                if _finite(row.dc) and not 0.0 <= row.dc <= 1.0:
                    bad(loc, "dc", "dc.range", row.dc, "DC must lie in [0, 1]")
                if _finite(row.dc_latent) and not 0.0 <= row.dc_latent <= 1.0:
                    bad(loc, "dc_latent", "dc_latent.range", row.dc_latent,
                        "latent DC must lie in [0, 1]")
                for fld in ("sigma_lambda_fm", "sigma_fmd", "sigma_dc",
                            "sigma_dc_latent"):
                    v = getattr(row, fld)
                    if _finite(v) and v < 0:
                        bad(loc, fld, f"{fld}.nonneg", v, "sigma must be >= 0")

                src = row.dc_source
                if src.kind not in (EXPERT, FAULT_SIMULATION):
                    bad(loc, "dc_source", "dc_source.kind", src.kind,
                        "dc_source kind must be expert or faultsim")
                elif src.is_fault_simulation:
                    if src.margin_e is None or not _finite(src.margin_e) \
                            or not 0.0 < src.margin_e < 1.0:
                        bad(loc, "dc_source", "dc_source.margin_range", src.margin_e,
                            "fault-simulation margin must lie in (0, 1)")
                    if src.confidence_level not in FAULTSIM_CONFIDENCE_LEVELS:
                        bad(loc, "dc_source", "dc_source.confidence_level",
                            src.confidence_level,
                            f"confidence level must be one of {FAULTSIM_CONFIDENCE_LEVELS}")

                if dist:
                    if row.fmd_fraction is None:
                        bad(loc, "fmd_fraction", "fmd.mode_consistency", None,
                            "Distribution subpart rows must carry an FMD fraction")
                        fmd_complete = False
                    else:
                        if _finite(row.fmd_fraction) and not 0.0 <= row.fmd_fraction <= 1.0:
                            bad(loc, "fmd_fraction", "fmd.fraction_range",
                                row.fmd_fraction, "FMD fraction must lie in [0, 1]")
                        fmd_sum += row.fmd_fraction if _finite(row.fmd_fraction) else 0.0
                else:
                    if row.fmd_fraction is not None:
                        bad(loc, "fmd_fraction", "fmd.mode_consistency",
                            row.fmd_fraction,
                            "DirectLambda subpart rows must not carry an FMD fraction")
                    if row.lambda_fm is None:
                        bad(loc, "lambda_fm", "lambda.missing", None,
                            "DirectLambda rows must state lambda_fm")

                if row.lambda_fm is None or not _finite(row.lambda_fm):
                    row_sum_known = False
                    lambda_known = False
                else:
                    if row.lambda_fm < 0:
                        bad(loc, "lambda_fm", "lambda_fm.nonneg", row.lambda_fm,
                            "failure rate must be >= 0")
                    row_sum += row.lambda_fm
                    total += row.lambda_fm

            if dist and fmd_complete and sub.failure_modes \
                    and abs(fmd_sum - 1.0) > FMD_SUM_TOL:
                bad(sub_loc, "fmd_fraction", "fmd.sum", fmd_sum,
                    f"FMD fractions must sum to 1 within {FMD_SUM_TOL}")

            if not dist and sub.lambda_subpart is not None and row_sum_known \
                    and _finite(sub.lambda_subpart):
                tol = LAMBDA_MATCH_RTOL * max(abs(sub.lambda_subpart), abs(row_sum))
                if abs(sub.lambda_subpart - row_sum) > tol:
                    bad(sub_loc, "lambda_subpart", "subpart.lambda_mismatch",
                        sub.lambda_subpart,
                        f"declared subpart rate differs from row sum {row_sum!r}")

    if lambda_known and total <= 0.0:
        bad("table", "lambda_tot", "table.lambda_tot_positive", total,
            "total failure rate must be > 0 for an analyzable table")

    return out


def require_valid(table: FmedaTable) -> None:
    """Raise FmedaValidationError when validate() reports anything."""
    violations = validate(table)
    if violations:
        raise FmedaValidationError(violations)


def total_lambda(table: FmedaTable) -> float:
    """Sum of all failure-mode rates in FIT.  Requires a valid table."""
    require_valid(table)
    return table.lambda_tot


def materialize_direct(table: FmedaTable) -> FmedaTable:
    """Rewrite Distribution subparts as DirectLambda with derived FIT rows."""
    parts = []
    for part in table.parts:
        subs = []
        for sub in part.subparts:
            if sub.fmd_mode == DISTRIBUTION:
                rows = tuple(
                    replace(r, fmd_fraction=None, sigma_fmd=0.0)
                    for r in sub.failure_modes
                )
                subs.append(Subpart(sub.name, sub.lambda_subpart, DIRECT_LAMBDA, rows))
            else:
                subs.append(sub)
        parts.append(Part(part.name, tuple(subs)))
    return FmedaTable(tuple(parts), table.asil_target)


# ---------------------------------------------------------------------------
# Array extraction for the numeric modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TableArrays:
    """Row-aligned numeric view of a table (float64), plus row identity."""

    ids: tuple[str, ...]
    lam: np.ndarray
    sigma_lam: np.ndarray
    dc: np.ndarray
    sigma_dc: np.ndarray
    dc_lat: np.ndarray
    sigma_dc_lat: np.ndarray
    lambda_tot: float


def table_arrays(table: FmedaTable) -> TableArrays:
    """Extract per-row vectors in table order.  Rows must have resolved rates."""
    ids, lam, slam, dc, sdc, lat, slat = [], [], [], [], [], [], []
    for _, _, row in iter_rows(table):
        if row.lambda_fm is None:
            raise FmedaValidationError(
                [Violation(row.id, "lambda_fm", "lambda.missing", None,
                           "row has no resolved failure rate")]
            )
        ids.append(row.id)
        lam.append(row.lambda_fm)
        slam.append(row.sigma_lambda_fm)
        dc.append(row.dc)
        sdc.append(row.sigma_dc)
        lat.append(row.dc_latent)
        slat.append(row.sigma_dc_latent)
    lam_arr = np.asarray(lam, dtype=np.float64)
    return TableArrays(
        ids=tuple(ids),
        lam=lam_arr,
        sigma_lam=np.asarray(slam, dtype=np.float64),
        dc=np.asarray(dc, dtype=np.float64),
        sigma_dc=np.asarray(sdc, dtype=np.float64),
        dc_lat=np.asarray(lat, dtype=np.float64),
        sigma_dc_lat=np.asarray(slat, dtype=np.float64),
        lambda_tot=float(lam_arr.sum()),
    )
