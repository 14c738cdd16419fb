"""Rank the uncertainty sources: where would better data help most?

Each uncertain input owns one additive slice of the SPFM variance, so the
slices form a percentage breakdown (the EII report columns).  Shrinking
the dominant slice is the cheapest way to tighten the final interval.
"""

from dataclasses import replace

from fmeda_uq import (
    FailureModeRow,
    FmedaTable,
    Part,
    Subpart,
    eii_table,
    sigma_spfm,
    total_per_failure_mode,
)

rows = (
    FailureModeRow(id="ALU", lambda_fm=40.0, dc=0.90, sigma_dc=0.030),
    FailureModeRow(id="FPU", lambda_fm=25.0, dc=0.95, sigma_dc=0.010,
                   sigma_lambda_fm=4.0),
    FailureModeRow(id="LSU", lambda_fm=35.0, dc=0.85, sigma_dc=0.004,
                   sigma_lambda_fm=1.0),
)
table = FmedaTable((Part("CORE", (Subpart("PIPE", failure_modes=rows),)),))

print(f"sigma_SPFM = {sigma_spfm(table):.6f}\n")
print(f"{'failure mode':14s} {'input':10s} {'share %':>8s}   raw EII")
entries = eii_table(table)
for e in entries:
    print(f"{e.failure_mode_id:14s} {e.input:10s} {e.percent:8.2f}   {e.raw_eii:.3e}")

print("\nper failure mode (the report's total column):")
for fm_id, pct in total_per_failure_mode(entries):
    print(f"  {fm_id:8s} {pct:6.2f} %")

# Act on the ranking: re-measure the dominant input (ALU coverage) and
# watch the total uncertainty drop; the remaining shares rescale
# proportionally.
top = entries[0]
fixed_rows = list(rows)
fixed_rows[top.row_index] = replace(fixed_rows[top.row_index], sigma_dc=0.005)
better = FmedaTable((Part("CORE", (Subpart("PIPE",
                                           failure_modes=tuple(fixed_rows)),)),))
print(f"\nafter re-measuring {top.failure_mode_id} coverage:")
print(f"  sigma_SPFM {sigma_spfm(table):.6f} -> {sigma_spfm(better):.6f}")
for e in eii_table(better)[:3]:
    print(f"  {e.failure_mode_id:8s} {e.input:10s} {e.percent:6.2f} %")
