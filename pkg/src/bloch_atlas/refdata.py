"""Stored reference tables of closed-form measures and probabilities.

Each table is a CSV file shipped with the package (UTF-8, LF line endings,
header row).  A row holds a generator combination, its multiplicity within
the equivalence-class decomposition, and up to three (expression, value)
column pairs: the total measure of the feasible section, the classified
(jointly constrained) measure, and the probability.  Expressions use a
small closed grammar -- numbers, ``pi``, the four arithmetic operators,
parentheses, and the functions ``sqrt``, ``asin``, ``acos``, ``atan``,
``acsc``, ``asec``, ``acot`` -- evaluated by the recursive-descent parser
in this module.  Every stored value agrees with its expression to better
than 5e-7; :func:`load` re-verifies this together with a SHA-256 checksum
recorded in ``manifest.json``.

Tables are flagged with a convention: ``paper_verified`` rows carry
probabilities and measures that computed results are expected to
reproduce, while ``unresolved_convention`` rows (boundary lengths,
interface lengths, and boundary-area splits) use a normalization that a
Euclidean coefficient-space computation does not reproduce; they are
reported for information only and never fail a comparison.

The environment variable ``BLOCH_ATLAS_REFDATA`` relocates the data
directory, allowing comparisons against an alternative table set.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .errors import BlochAtlasError, ComparisonError

__all__ = [
    "ReferenceRow",
    "ReferenceTable",
    "ComparisonReport",
    "evaluate_expression",
    "table_ids",
    "load",
    "compare",
]

_VALUE_TOL = 5e-7

_FUNCTIONS = {
    "sqrt": math.sqrt,
    "asin": math.asin,
    "acos": math.acos,
    "atan": math.atan,
    "acsc": lambda x: math.asin(1.0 / x),
    "asec": lambda x: math.acos(1.0 / x),
    "acot": lambda x: math.atan(1.0 / x),
}


class ExpressionError(BlochAtlasError):
    """An expression does not conform to the reference-table grammar."""


class _Parser:
    """Recursive-descent evaluator for the reference-table grammar.

    expression := term (('+' | '-') term)*
    term       := factor (('*' | '/') factor)*
    factor     := '-' factor | primary
    primary    := NUMBER | 'pi' | NAME '(' expression ')'
                | '(' expression ')'
    """

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> float:
        value = self._expression()
        self._skip_spaces()
        if self.pos != len(self.text):
            raise ExpressionError(
                f"unexpected trailing input at offset {self.pos} in "
                f"{self.text!r}"
            )
        return value

    def _skip_spaces(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] == " ":
            self.pos += 1

    def _peek(self) -> str:
        self._skip_spaces()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expression(self) -> float:
        value = self._term()
        while True:
            op = self._peek()
            if op == "+":
                self.pos += 1
                value += self._term()
            elif op == "-":
                self.pos += 1
                value -= self._term()
            else:
                return value

    def _term(self) -> float:
        value = self._factor()
        while True:
            op = self._peek()
            if op == "*":
                self.pos += 1
                value *= self._factor()
            elif op == "/":
                self.pos += 1
                value /= self._factor()
            else:
                return value

    def _factor(self) -> float:
        if self._peek() == "-":
            self.pos += 1
            return -self._factor()
        return self._primary()

    def _primary(self) -> float:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            value = self._expression()
            self._expect(")")
            return value
        if ch.isdigit() or ch == ".":
            return self._number()
        if ch.isalpha():
            name = self._name()
            if name == "pi":
                return math.pi
            func = _FUNCTIONS.get(name)
            if func is None:
                raise ExpressionError(
                    f"unknown name {name!r} in {self.text!r}"
                )
            self._expect("(")
            argument = self._expression()
            self._expect(")")
            return func(argument)
        raise ExpressionError(
            f"unexpected character {ch!r} at offset {self.pos} in "
            f"{self.text!r}"
        )

    def _name(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start:self.pos]

    def _expect(self, ch: str) -> None:
        if self._peek() != ch:
            raise ExpressionError(
                f"expected {ch!r} at offset {self.pos} in {self.text!r}"
            )
        self.pos += 1

    def _number(self) -> float:
        start = self.pos
        text = self.text
        while self.pos < len(text) and (text[self.pos].isdigit()
                                        or text[self.pos] == "."):
            self.pos += 1
        if self.pos < len(text) and text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < len(text) and text[self.pos] in "+-":
                self.pos += 1
            if self.pos < len(text) and text[self.pos].isdigit():
                while self.pos < len(text) and text[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark
        try:
            return float(text[start:self.pos])
        except ValueError:
            raise ExpressionError(
                f"malformed number at offset {start} in {text!r}"
            ) from None


def evaluate_expression(expression: str) -> float:
    """Evaluate a closed-form expression from a reference table."""
    if not expression:
        raise ExpressionError("empty expression")
    return _Parser(expression).parse()


@dataclass(frozen=True)
class ReferenceRow:
    """One stored row: a generator combination and its reference values."""

    gens: tuple  # ints for generator combinations, a str key otherwise
    multiplicity: int | None
    total_expr: str
    total_value: float | None
    classified_expr: str
    classified_value: float | None
    probability_expr: str
    probability_value: float | None
    note: str

    @property
    def key(self) -> tuple:
        return self.gens


@dataclass(frozen=True)
class ReferenceTable:
    """A stored table of reference values for one family of scenarios."""

    table_id: str
    n: int
    conditions: tuple
    convention: str
    rows: tuple

    def row(self, gens) -> ReferenceRow:
        key = _normalize_key(gens)
        for row in self.rows:
            if row.gens == key:
                return row
        raise KeyError(f"no row {gens!r} in table {self.table_id!r}")

    @property
    def informational(self) -> bool:
        return self.convention == "unresolved_convention"


def _normalize_key(gens) -> tuple:
    if isinstance(gens, str):
        parts = gens.split("+")
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            return (gens,)
    if isinstance(gens, Iterable):
        try:
            return tuple(int(g) for g in gens)
        except (TypeError, ValueError):
            return tuple(gens)
    return (gens,)


def _data_dir() -> str | None:
    """Directory holding the CSV tables, or None for the packaged data."""
    return os.environ.get("BLOCH_ATLAS_REFDATA") or None


def _read_text(filename: str) -> str:
    override = _data_dir()
    if override is not None:
        path = os.path.join(override, filename)
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                return fh.read()
        except OSError as exc:
            raise BlochAtlasError(
                f"reference data file {path!r} is not readable: {exc}"
            ) from exc
    package_dir = resources.files(__package__) / "refdata"
    try:
        return (package_dir / filename).read_text(encoding="utf-8")
    except OSError as exc:
        raise BlochAtlasError(
            f"packaged reference data file {filename!r} is missing: {exc}"
        ) from exc


def _manifest() -> dict:
    try:
        manifest = json.loads(_read_text("manifest.json"))
    except json.JSONDecodeError as exc:
        raise BlochAtlasError(f"reference manifest is corrupted: {exc}")
    if not isinstance(manifest, dict):
        raise BlochAtlasError("reference manifest must be a JSON object")
    return manifest


def table_ids() -> tuple:
    """Identifiers of all available reference tables, sorted."""
    return tuple(sorted(_manifest()))


def _parse_value(text: str, where: str) -> float | None:
    if text == "":
        return None
    try:
        return float(text)
    except ValueError:
        raise BlochAtlasError(
            f"corrupted reference data: non-numeric value {text!r} "
            f"in {where}"
        ) from None


def _check_pair(expr: str, value: float | None, where: str) -> None:
    if expr == "":
        if value is not None:
            raise BlochAtlasError(
                f"corrupted reference data: value without expression "
                f"in {where}"
            )
        return
    evaluated = evaluate_expression(expr)
    if value is None:
        raise BlochAtlasError(
            f"corrupted reference data: expression without value "
            f"in {where}"
        )
    if abs(evaluated - value) >= _VALUE_TOL:
        raise BlochAtlasError(
            f"corrupted reference data: {where} expression {expr!r} "
            f"evaluates to {evaluated!r} but the stored value is {value!r}"
        )


def load(table_id: str) -> ReferenceTable:
    """Load a reference table, verifying its checksum and consistency.

    Raises KeyError for an unknown identifier and BlochAtlasError when
    the stored data fails the checksum or the expression/value
    consistency requirement.
    """
    manifest = _manifest()
    if table_id not in manifest:
        raise KeyError(
            f"unknown reference table {table_id!r}; available: "
            f"{', '.join(sorted(manifest))}"
        )
    meta = manifest[table_id]
    text = _read_text(meta["file"])
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    if digest != meta["sha256"]:
        raise BlochAtlasError(
            f"corrupted reference data: checksum mismatch for "
            f"{meta['file']!r} (expected {meta['sha256']}, got {digest})"
        )
    reader = csv.DictReader(text.splitlines())
    expected_fields = [
        "gens", "multiplicity", "total_expr", "total_value",
        "classified_expr", "classified_value",
        "probability_expr", "probability_value", "note",
    ]
    if reader.fieldnames != expected_fields:
        raise BlochAtlasError(
            f"corrupted reference data: unexpected header in "
            f"{meta['file']!r}"
        )
    rows = []
    for record in reader:
        where = f"{table_id}/{record['gens']}"
        multiplicity = record["multiplicity"]
        row = ReferenceRow(
            gens=_normalize_key(record["gens"]),
            multiplicity=int(multiplicity) if multiplicity else None,
            total_expr=record["total_expr"],
            total_value=_parse_value(record["total_value"], where),
            classified_expr=record["classified_expr"],
            classified_value=_parse_value(record["classified_value"], where),
            probability_expr=record["probability_expr"],
            probability_value=_parse_value(record["probability_value"],
                                           where),
            note=record["note"],
        )
        _check_pair(row.total_expr, row.total_value, where + "/total")
        _check_pair(row.classified_expr, row.classified_value,
                    where + "/classified")
        _check_pair(row.probability_expr, row.probability_value,
                    where + "/probability")
        rows.append(row)
    if len(rows) != meta["rows"]:
        raise BlochAtlasError(
            f"corrupted reference data: {meta['file']!r} holds "
            f"{len(rows)} rows, manifest records {meta['rows']}"
        )
    return ReferenceTable(
        table_id=table_id,
        n=meta["n"],
        conditions=tuple(meta["conditions"]),
        convention=meta["convention"],
        rows=tuple(rows),
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of checking computed results against a reference table."""

    table_id: str
    convention: str
    tolerance: float
    rows: tuple
    n_checked: int
    n_pass: int
    n_fail: int
    n_informational: int
    max_deviation: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "table_id": self.table_id,
            "convention": self.convention,
            "tolerance": self.tolerance,
            "n_checked": self.n_checked,
            "n_pass": self.n_pass,
            "n_fail": self.n_fail,
            "n_informational": self.n_informational,
            "max_deviation": self.max_deviation,
            "passed": self.passed,
            "rows": [dict(row) for row in self.rows],
        }


def _reference_fields(row: ReferenceRow) -> dict:
    fields = {}
    if row.total_expr:
        fields["total"] = evaluate_expression(row.total_expr)
    if row.classified_expr:
        fields["classified"] = evaluate_expression(row.classified_expr)
    if row.probability_expr:
        fields["probability"] = evaluate_expression(row.probability_expr)
    return fields


def _computed_fields(result, table_id: str) -> dict:
    """Map a scenario result onto the reference-table column trio."""
    if table_id.endswith("_interior"):
        if result.boundary is None:
            raise ComparisonError(
                f"result for {result.generators} carries no boundary data "
                f"required by table {table_id!r}"
            )
        return {"total": result.boundary["interior_length"]}
    if table_id.endswith("_boundary") or table_id == "m3_boundary_areas":
        if result.boundary is None:
            raise ComparisonError(
                f"result for {result.generators} carries no boundary data "
                f"required by table {table_id!r}"
            )
        boundary = result.boundary
        return {
            "total": boundary["total_length"],
            "classified": boundary["classified_length"],
            "probability": boundary["boundary_probability"],
        }
    return {
        "total": result.total_measure,
        "classified": result.joint_measure,
        "probability": result.probability,
    }


def compare(results, table: ReferenceTable, tolerance: float = 1e-6
            ) -> ComparisonReport:
    """Check computed results against a stored reference table.

    ``results`` is either a sequence of scenario results (matched to rows
    by their generator combinations) or a mapping from row key to float
    (matched against the ``total`` column, used for constants tables).
    Every supplied result must match a stored row; reference rows with no
    supplied result are skipped for mapping input and are an error for
    scenario input only when the sequence is empty.  Rows of an
    ``unresolved_convention`` table are reported informationally and never
    fail.  Raises ComparisonError when a supplied result has no matching
    row or lacks a field the table requires.
    """
    informational_table = table.informational
    report_rows = []
    n_pass = n_fail = n_info = n_checked = 0
    max_dev = 0.0

    if isinstance(results, Mapping):
        supplied = {}
        for key, value in results.items():
            supplied[_normalize_key(key)] = {"total": float(value)}
    elif isinstance(results, Sequence):
        if not results:
            raise ComparisonError("no computed results supplied")
        supplied = {}
        for result in results:
            key = _normalize_key(result.generators)
            if key in supplied:
                raise ComparisonError(
                    f"duplicate computed result for {key}"
                )
            supplied[key] = _computed_fields(result, table.table_id)
    else:
        raise ComparisonError(
            f"unsupported results container {type(results).__name__!r}"
        )

    matched = set()
    for key in supplied:
        try:
            table.row(key)
        except KeyError:
            raise ComparisonError(
                f"computed result {key} has no row in table "
                f"{table.table_id!r}"
            ) from None

    for row in table.rows:
        reference = _reference_fields(row)
        computed = supplied.get(row.gens)
        if computed is None:
            continue
        matched.add(row.gens)
        for field, ref_value in reference.items():
            if field not in computed or computed[field] is None:
                raise ComparisonError(
                    f"computed result {row.gens} lacks field {field!r} "
                    f"required by table {table.table_id!r}"
                )
            value = float(computed[field])
            deviation = abs(value - ref_value)
            informational = informational_table
            within = deviation <= tolerance
            if informational:
                n_info += 1
            else:
                n_checked += 1
                max_dev = max(max_dev, deviation)
                if within:
                    n_pass += 1
                else:
                    n_fail += 1
            report_rows.append((
                ("gens", "+".join(str(g) for g in row.gens)),
                ("field", field),
                ("reference", ref_value),
                ("computed", value),
                ("deviation", deviation),
                ("within_tolerance", within),
                ("informational", informational),
            ))

    if not matched:
        raise ComparisonError(
            f"no supplied result matches any row of table "
            f"{table.table_id!r}"
        )

    return ComparisonReport(
        table_id=table.table_id,
        convention=table.convention,
        tolerance=float(tolerance),
        rows=tuple(report_rows),
        n_checked=n_checked,
        n_pass=n_pass,
        n_fail=n_fail,
        n_informational=n_info,
        max_deviation=max_dev,
        passed=(n_fail == 0),
    )
