"""Parsing and emission of FMEDA tables and analysis results.

Two table formats share one data model:

* CSV, flat: one row per failure mode with part/subpart as repeated label
  columns (see CSV_COLUMNS).  A row with an empty failure_mode cell and a
  lambda_fit value declares the enclosing subpart's rate, which is how
  Distribution subparts carry lambda_subpart in the flat layout.  For
  fraction rows the sigma_lambda_fit cell holds the fraction's sigma.
* JSON, nested: parts -> subparts -> failure_modes, versioned documents.

Unknown columns and unknown JSON keys are rejected rather than ignored so
authoring mistakes surface immediately.  Empty cells are allowed only
where a default is defined (sigmas and dc_latent default to 0, sm_list to
the empty list); everything else must be explicit.

Emission is deterministic: floats are serialized with 12 significant
digits, JSON keys are sorted, and no timestamps are embedded, so equal
inputs produce byte-identical documents.  Report percentages render at
2 decimals.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .model import (
    DISTRIBUTION,
    DcSource,
    EXPERT_JUDGMENT,
    FailureModeRow,
    FmedaTable,
    FmedaValidationError,
    Part,
    Subpart,
    require_valid,
    validate,
)

CSV_COLUMNS = (
    "part", "subpart", "failure_mode", "lambda_fit", "sigma_lambda_fit",
    "fmd_fraction", "dc", "sigma_dc", "dc_latent", "sigma_dc_latent",
    "dc_source", "sm_list",
)
FORMAT_VERSION = "fmeda-uq/1"


class TableSchema:
    """The fixed column order and document version of the table formats."""

    columns: tuple[str, ...] = CSV_COLUMNS
    version: str = FORMAT_VERSION


class ParseError(ValueError):
    """A malformed document, with 1-based line / key-path context."""

    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        self.line = line
        self.column = column
        ctx = []
        if line is not None:
            ctx.append(f"line {line}")
        if column is not None:
            ctx.append(f"column {column!r}")
        prefix = ", ".join(ctx)
        super().__init__(f"{prefix}: {message}" if prefix else message)


def fmt12(x: float) -> str:
    """Decimal rendering with 12 significant digits."""
    return f"{float(x):.12g}"


def round12(x: float) -> float:
    """The float actually meant by the 12-significant-digit rendering."""
    return float(fmt12(x))


def _round_floats(obj):
    if isinstance(obj, float):
        return round12(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _parse_float(cell: str, line: int | None, column: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"not a number: {cell!r}", line=line, column=column) from None
    if not math.isfinite(value):
        raise ParseError(f"not a finite number: {cell!r}", line=line, column=column)
    return value


def _parse_dc_source(cell: str, line: int | None, column: str) -> DcSource:
    if cell == "expert":
        return EXPERT_JUDGMENT
    if cell.startswith("faultsim:"):
        fields = cell.split(":")
        if len(fields) == 3 and fields[1].startswith("e=") and fields[2].startswith("cl="):
            e = _parse_float(fields[1][2:], line, column)
            cl = _parse_float(fields[2][3:], line, column)
            return DcSource.fault_simulation(e, cl)
    raise ParseError(
        f"dc_source must be 'expert' or 'faultsim:e=<float>:cl=<level>', got {cell!r}",
        line=line, column=column,
    )


def _encode_dc_source(src: DcSource) -> str:
    if src.is_fault_simulation:
        return f"faultsim:e={fmt12(src.margin_e)}:cl={src.confidence_level:.2f}"
    return "expert"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def parse_csv(text: str) -> FmedaTable:
    """Parse the flat CSV layout into a validated table.

    Raises ParseError on the first malformed cell (with 1-based line and
    column), or FmedaValidationError aggregating every broken invariant.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("no data rows") from None
    if header != list(CSV_COLUMNS):
        unknown = [h for h in header if h not in CSV_COLUMNS]
        missing = [c for c in CSV_COLUMNS if c not in header]
        problems = []
        if unknown:
            problems.append(f"unknown columns {unknown}")
        if missing:
            problems.append(f"missing columns {missing}")
        if not problems:
            problems.append("columns out of order")
        raise ParseError(
            "; ".join(problems) + f"; expected exactly {list(CSV_COLUMNS)}", line=1
        )

    parts: dict[str, dict[str, dict]] = {}
    n_rows = 0
    for record in reader:
        line = reader.line_num
        if not record or all(c.strip() == "" for c in record):
            continue
        if len(record) != len(CSV_COLUMNS):
            raise ParseError(
                f"expected {len(CSV_COLUMNS)} columns, got {len(record)}", line=line
            )
        cells = dict(zip(CSV_COLUMNS, (c.strip() for c in record)))
        for required in ("part", "subpart"):
            if not cells[required]:
                raise ParseError("cell must not be empty", line=line, column=required)
        acc = parts.setdefault(cells["part"], {}).setdefault(
            cells["subpart"], {"lambda": None, "rows": []}
        )

        if not cells["failure_mode"]:
            # Subpart-rate declaration row: lambda_fit only, everything else empty.
            if not cells["lambda_fit"]:
                raise ParseError(
                    "row without a failure_mode must declare the subpart rate",
                    line=line, column="lambda_fit",
                )
            stray = [c for c in CSV_COLUMNS[4:] if cells[c]]
            if stray:
                raise ParseError(
                    "subpart-rate row must leave this cell empty",
                    line=line, column=stray[0],
                )
            if acc["lambda"] is not None:
                raise ParseError(
                    f"duplicate subpart rate for {cells['part']}/{cells['subpart']}",
                    line=line, column="lambda_fit",
                )
            acc["lambda"] = _parse_float(cells["lambda_fit"], line, "lambda_fit")
            continue

        n_rows += 1
        has_lambda = bool(cells["lambda_fit"])
        has_fraction = bool(cells["fmd_fraction"])
        if has_lambda == has_fraction:
            raise ParseError(
                "exactly one of lambda_fit and fmd_fraction must be set",
                line=line, column="lambda_fit",
            )
        sigma = (
            _parse_float(cells["sigma_lambda_fit"], line, "sigma_lambda_fit")
            if cells["sigma_lambda_fit"] else 0.0
        )
        if not cells["dc"]:
            raise ParseError("cell must not be empty", line=line, column="dc")
        if not cells["dc_source"]:
            raise ParseError("cell must not be empty", line=line, column="dc_source")
        common = dict(
            id=cells["failure_mode"],
            dc=_parse_float(cells["dc"], line, "dc"),
            sigma_dc=_parse_float(cells["sigma_dc"], line, "sigma_dc")
            if cells["sigma_dc"] else 0.0,
            dc_latent=_parse_float(cells["dc_latent"], line, "dc_latent")
            if cells["dc_latent"] else 0.0,
            sigma_dc_latent=_parse_float(cells["sigma_dc_latent"], line, "sigma_dc_latent")
            if cells["sigma_dc_latent"] else 0.0,
            dc_source=_parse_dc_source(cells["dc_source"], line, "dc_source"),
            safety_mechanisms=tuple(
                s.strip() for s in cells["sm_list"].split(";") if s.strip()
            ),
        )
        if has_lambda:
            row = FailureModeRow(
                lambda_fm=_parse_float(cells["lambda_fit"], line, "lambda_fit"),
                sigma_lambda_fm=sigma,
                **common,
            )
        else:
            row = FailureModeRow(
                fmd_fraction=_parse_float(cells["fmd_fraction"], line, "fmd_fraction"),
                sigma_fmd=sigma,
                **common,
            )
        acc["rows"].append(row)

    if n_rows == 0:
        raise ParseError("no data rows")

    table = FmedaTable(
        tuple(
            Part(
                pname,
                tuple(
                    Subpart(sname, acc["lambda"], None, tuple(acc["rows"]))
                    for sname, acc in subs.items()
                ),
            )
            for pname, subs in parts.items()
        )
    )
    violations = validate(table)
    if violations:
        raise FmedaValidationError(violations)
    return table


def emit_csv(table: FmedaTable) -> str:
    """Serialize a valid table to the flat CSV layout."""
    require_valid(table)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for part in table.parts:
        for sub in part.subparts:
            if sub.lambda_subpart is not None:
                writer.writerow(
                    [part.name, sub.name, "", fmt12(sub.lambda_subpart)]
                    + [""] * (len(CSV_COLUMNS) - 4)
                )
            dist = sub.fmd_mode == DISTRIBUTION
            for row in sub.failure_modes:
                writer.writerow([
                    part.name,
                    sub.name,
                    row.id,
                    "" if dist else fmt12(row.lambda_fm),
                    fmt12(row.sigma_fmd if dist else row.sigma_lambda_fm),
                    fmt12(row.fmd_fraction) if dist else "",
                    fmt12(row.dc),
                    fmt12(row.sigma_dc),
                    fmt12(row.dc_latent),
                    fmt12(row.sigma_dc_latent),
                    _encode_dc_source(row.dc_source),
                    ";".join(row.safety_mechanisms),
                ])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def _expect_keys(obj, path: str, required: set[str], optional: set[str]) -> None:
    if not isinstance(obj, dict):
        raise ParseError(f"expected an object at {path}, got {type(obj).__name__}")
    unknown = sorted(set(obj) - required - optional)
    if unknown:
        raise ParseError(f"unknown key {unknown[0]!r}", column=f"{path}.{unknown[0]}")
    for key in sorted(required - set(obj)):
        raise ParseError(f"missing required key {key!r}", column=path)


def _expect_str(value, path: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"expected a string, got {type(value).__name__}", column=path)
    return value


def _expect_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {type(value).__name__}", column=path)
    if not math.isfinite(value):
        raise ParseError("expected a finite number", column=path)
    return float(value)


def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"expected an array, got {type(value).__name__}", column=path)
    return value


def parse_json(text: str) -> FmedaTable:
    """Parse the nested JSON document into a validated table."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None

    _expect_keys(doc, "$", required={"version", "parts"}, optional={"asil_target"})
    version = _expect_str(doc["version"], "$.version")
    if version != FORMAT_VERSION:
        raise ParseError(
            f"unsupported document version {version!r}; expected {FORMAT_VERSION!r}",
            column="$.version",
        )
    asil = None
    if "asil_target" in doc:
        asil = _expect_str(doc["asil_target"], "$.asil_target")

    parts = []
    for i, pd in enumerate(_expect_list(doc["parts"], "$.parts")):
        ppath = f"$.parts[{i}]"
        _expect_keys(pd, ppath, required={"name", "subparts"}, optional=set())
        subs = []
        for j, sd in enumerate(_expect_list(pd["subparts"], f"{ppath}.subparts")):
            spath = f"{ppath}.subparts[{j}]"
            _expect_keys(
                sd, spath,
                required={"name", "failure_modes"},
                optional={"lambda_fit", "fmd_mode"},
            )
            lam_sub = (
                _expect_number(sd["lambda_fit"], f"{spath}.lambda_fit")
                if "lambda_fit" in sd else None
            )
            mode = (
                _expect_str(sd["fmd_mode"], f"{spath}.fmd_mode")
                if "fmd_mode" in sd else None
            )
            rows = []
            for k, fd in enumerate(
                _expect_list(sd["failure_modes"], f"{spath}.failure_modes")
            ):
                fpath = f"{spath}.failure_modes[{k}]"
                rows.append(_parse_json_row(fd, fpath))
            subs.append(Subpart(
                _expect_str(sd["name"], f"{spath}.name"), lam_sub, mode, tuple(rows)
            ))
        parts.append(Part(_expect_str(pd["name"], f"{ppath}.name"), tuple(subs)))

    table = FmedaTable(tuple(parts), asil)
    violations = validate(table)
    if violations:
        raise FmedaValidationError(violations)
    return table


def _parse_json_row(fd, path: str) -> FailureModeRow:
    _expect_keys(
        fd, path,
        required={"id", "dc", "dc_source"},
        optional={
            "name", "lambda_fit", "fmd_fraction", "sigma_lambda_fit", "sigma_fmd",
            "sigma_dc", "dc_latent", "sigma_dc_latent", "safety_mechanisms",
        },
    )
    has_lambda = "lambda_fit" in fd
    has_fraction = "fmd_fraction" in fd
    if has_lambda == has_fraction:
        raise ParseError(
            "exactly one of lambda_fit and fmd_fraction must be set", column=path
        )
    if has_lambda and "sigma_fmd" in fd:
        raise ParseError("sigma_fmd requires fmd_fraction", column=f"{path}.sigma_fmd")
    if has_fraction and "sigma_lambda_fit" in fd:
        raise ParseError(
            "sigma_lambda_fit requires lambda_fit", column=f"{path}.sigma_lambda_fit"
        )
    sms = ()
    if "safety_mechanisms" in fd:
        sms = tuple(
            _expect_str(s, f"{path}.safety_mechanisms[{i}]")
            for i, s in enumerate(_expect_list(fd["safety_mechanisms"],
                                               f"{path}.safety_mechanisms"))
        )

    def number(key: str, default: float = 0.0) -> float:
        return _expect_number(fd[key], f"{path}.{key}") if key in fd else default

    return FailureModeRow(
        id=_expect_str(fd["id"], f"{path}.id"),
        name=_expect_str(fd["name"], f"{path}.name") if "name" in fd else "",
        lambda_fm=number("lambda_fit") if has_lambda else None,
        sigma_lambda_fm=number("sigma_lambda_fit"),
        fmd_fraction=number("fmd_fraction") if has_fraction else None,
        sigma_fmd=number("sigma_fmd"),
        dc=number("dc"),
        sigma_dc=number("sigma_dc"),
        dc_latent=number("dc_latent"),
        sigma_dc_latent=number("sigma_dc_latent"),
        dc_source=_parse_dc_source(
            _expect_str(fd["dc_source"], f"{path}.dc_source"), None, f"{path}.dc_source"
        ),
        safety_mechanisms=sms,
    )


def emit_json(table: FmedaTable) -> str:
    """Serialize a valid table to the nested JSON document."""
    require_valid(table)
    doc: dict = {"version": FORMAT_VERSION}
    if table.asil_target is not None:
        doc["asil_target"] = table.asil_target
    doc["parts"] = []
    for part in table.parts:
        subs = []
        for sub in part.subparts:
            sd: dict = {"name": sub.name, "fmd_mode": sub.fmd_mode}
            if sub.lambda_subpart is not None:
                sd["lambda_fit"] = sub.lambda_subpart
            dist = sub.fmd_mode == DISTRIBUTION
            rows = []
            for row in sub.failure_modes:
                fd: dict = {
                    "id": row.id,
                    "dc": row.dc,
                    "sigma_dc": row.sigma_dc,
                    "dc_latent": row.dc_latent,
                    "sigma_dc_latent": row.sigma_dc_latent,
                    "dc_source": _encode_dc_source(row.dc_source),
                }
                if row.name != row.id:
                    fd["name"] = row.name
                if dist:
                    fd["fmd_fraction"] = row.fmd_fraction
                    fd["sigma_fmd"] = row.sigma_fmd
                else:
                    fd["lambda_fit"] = row.lambda_fm
                    fd["sigma_lambda_fit"] = row.sigma_lambda_fm
                if row.safety_mechanisms:
                    fd["safety_mechanisms"] = list(row.safety_mechanisms)
                rows.append(fd)
            sd["failure_modes"] = rows
            subs.append(sd)
        doc["parts"].append({"name": part.name, "subparts": subs})
    return json.dumps(_round_floats(doc), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Analysis-result emission
# ---------------------------------------------------------------------------


def emit_result(result, format: str = "json") -> str:
    """Render an AnalysisResult as json, markdown or csv."""
    if format == "json":
        return json.dumps(_round_floats(result.to_dict()), sort_keys=True, indent=2) + "\n"
    if format == "markdown":
        return _result_markdown(result)
    if format == "csv":
        return _result_csv(result)
    raise ValueError(f"unknown result format {format!r}; expected json, markdown or csv")


def _interval_text(interval) -> str:
    text = f"[{fmt12(interval.lo)}, {fmt12(interval.hi)}]"
    if interval.clamped:
        text += " (clamped to [0, 1])"
    return text


def _result_markdown(result) -> str:
    lines = ["# FMEDA uncertainty analysis", "", "## Failure modes", ""]
    lines.append(
        "| part | subpart | failure mode | lambda_fm [FIT] | sigma_lambda_fm [FIT] "
        "| DC | sigma_DC | EII from sigma_DC [%] | EII from sigma_lambda_fm [%] "
        "| total EII [%] |"
    )
    lines.append("|" + " --- |" * 10)
    for row in result.rows:
        lines.append(
            f"| {row.part} | {row.subpart} | {row.failure_mode_id} "
            f"| {fmt12(row.lambda_fm)} | {fmt12(row.sigma_lambda_fm)} "
            f"| {fmt12(row.dc)} | {fmt12(row.sigma_dc)} "
            f"| {row.eii_dc_percent:.2f} | {row.eii_lambda_percent:.2f} "
            f"| {row.eii_total_percent:.2f} |"
        )
    lines += ["", "## Summary", ""]
    lines.append(f"- lambda_tot: {fmt12(result.lambda_tot)} FIT")
    lines.append(f"- SPFM: {fmt12(result.spfm)}")
    lines.append(f"- sigma_SPFM (full): {fmt12(result.sigma_spfm_full)}")
    lines.append(f"- sigma_SPFM (DC-only): {fmt12(result.sigma_spfm_dc_only)}")
    lines.append(f"- sigma_SPFM (lambda-only): {fmt12(result.sigma_spfm_lambda_only)}")
    lines.append(f"- SPFM interval: {_interval_text(result.interval_spfm)}")
    if result.lfm is None:
        lines.append(f"- LFM: undefined ({result.lfm_note})")
    else:
        lines.append(f"- LFM: {fmt12(result.lfm)}")
        lines.append(f"- sigma_LFM: {fmt12(result.sigma_lfm)}")
        lines.append(f"- LFM interval: {_interval_text(result.interval_lfm)}")
    lines.append(
        f"- confidence level: {result.confidence_level:.2f} (k = {fmt12(result.k)})"
    )
    lines.append(f"- propagation mode: {result.mode.value}")
    if result.verdict is None:
        lines.append("- ASIL target: none")
    else:
        v = result.verdict
        lfm_part = f", LFM {v.lfm}" if v.lfm is not None else ""
        lines.append(
            f"- ASIL target: {v.target} -> SPFM {v.spfm}{lfm_part}, overall {v.overall}"
        )
    if result.eii_note:
        lines.append(f"- note: {result.eii_note}")
    if result.stamp:
        lines.append(f"- generated by: {result.stamp.get('tool', '')} "
                     f"at {result.stamp.get('created', '')}")
    return "\n".join(lines) + "\n"


def _result_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([
        "part", "subpart", "failure_mode", "lambda_fit", "sigma_lambda_fit",
        "dc", "sigma_dc", "eii_dc_percent", "eii_lambda_percent", "eii_total_percent",
    ])
    for row in result.rows:
        writer.writerow([
            row.part, row.subpart, row.failure_mode_id,
            fmt12(row.lambda_fm), fmt12(row.sigma_lambda_fm),
            fmt12(row.dc), fmt12(row.sigma_dc),
            f"{row.eii_dc_percent:.2f}", f"{row.eii_lambda_percent:.2f}",
            f"{row.eii_total_percent:.2f}",
        ])
    writer.writerow([])
    writer.writerow(["metric", "value"])
    writer.writerow(["lambda_tot_fit", fmt12(result.lambda_tot)])
    writer.writerow(["spfm", fmt12(result.spfm)])
    writer.writerow(["sigma_spfm_full", fmt12(result.sigma_spfm_full)])
    writer.writerow(["sigma_spfm_dc_only", fmt12(result.sigma_spfm_dc_only)])
    writer.writerow(["sigma_spfm_lambda_only", fmt12(result.sigma_spfm_lambda_only)])
    writer.writerow(["spfm_interval_lo", fmt12(result.interval_spfm.lo)])
    writer.writerow(["spfm_interval_hi", fmt12(result.interval_spfm.hi)])
    if result.lfm is None:
        writer.writerow(["lfm", "undefined"])
    else:
        writer.writerow(["lfm", fmt12(result.lfm)])
        writer.writerow(["sigma_lfm", fmt12(result.sigma_lfm)])
        writer.writerow(["lfm_interval_lo", fmt12(result.interval_lfm.lo)])
        writer.writerow(["lfm_interval_hi", fmt12(result.interval_lfm.hi)])
    writer.writerow(["confidence_level", f"{result.confidence_level:.2f}"])
    writer.writerow(["k", fmt12(result.k)])
    writer.writerow(["mode", result.mode.value])
    if result.verdict is not None:
        writer.writerow(["asil_target", result.verdict.target])
        writer.writerow(["verdict_spfm", result.verdict.spfm])
        writer.writerow(["verdict_lfm", result.verdict.lfm or "n/a"])
        writer.writerow(["verdict_overall", result.verdict.overall])
    return buf.getvalue()
