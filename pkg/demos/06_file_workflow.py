"""End-to-end file workflow: author a CSV, analyze it, render the report.

The same steps are available from the shell:

    fmeda-uq analyze --input table.csv --asil B --format markdown
    fmeda-uq sample-size --population 1000000 --margin 0.01 --confidence 0.95
    fmeda-uq verify --input table.csv --samples 100000 --seed 42
"""

import tempfile
from pathlib import Path

from fmeda_uq import analyze, emit_json, emit_result, parse_csv

CSV = """\
part,subpart,failure_mode,lambda_fit,sigma_lambda_fit,fmd_fraction,dc,sigma_dc,dc_latent,sigma_dc_latent,dc_source,sm_list
CPU,MUL_DIV,,15,,,,,,,,
CPU,MUL_DIV,MD1,,0.03,0.8,0.92,,0.70,0.02,faultsim:e=0.01:cl=0.95,RESULT_CHECK
CPU,MUL_DIV,MD2,,0.03,0.2,0.99,0.005,0.85,0.02,expert,WATCHDOG
CPU,EX_CTRL,EC1,7.5,0.5,,0.88,0.02,0.60,0.02,expert,LOCKSTEP
CPU,EX_CTRL,EC2,2.5,0.2,,0.95,0.01,0.90,0.01,expert,WATCHDOG;LOCKSTEP
"""

# The MUL_DIV subpart uses the distribution form: a subpart-rate row
# (empty failure_mode) declares 15 FIT, and the modes carry fractions
# 0.8/0.2 whose sigmas live in the sigma_lambda_fit column.  MD1's
# coverage sigma is left empty: it is derived from the recorded
# fault-injection campaign (e=1% at 95%).

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "cpu_exec.csv"
    path.write_text(CSV, encoding="utf-8")

    table = parse_csv(path.read_text(encoding="utf-8"))
    print("parsed and validated OK")
    print(f"equivalent JSON document:\n{emit_json(table)}")

    result = analyze(table, asil_target="B", confidence_level=0.95)
    print(emit_result(result, "markdown"))
