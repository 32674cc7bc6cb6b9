"""Text formats for the batch front end.

Algebras, Fredholm data, split extensions and polynomial homotopies are
stored as JSON records whose scalars are exact strings ("p/q" or
"p/q+r/s*i").  Element and form literals use basis labels:

    element:  ``e11 - e22``, ``1/2*e``, ``(1+1/2*i)*u^1``
    form:     ``e.d(e)``, ``d(u^1).d(u^-1)``, ``1/2*a.d(b) - d(c)``

Coefficient prefixes are plain rationals or a parenthesised exact scalar.
"""

from __future__ import annotations

import json
import re

from .algebra import (
    AlgebraElement,
    BasedAlgebra,
    SplitExtension,
    dual_numbers,
    laurent_window,
    make_split_extension,
    matrix_algebra,
    null_algebra,
    rationals,
    truncated_poly,
    upper_triangular,
)
from .chern import FredholmData
from .forms import FORMAL_UNIT, FormVector
from .homology import PolynomialHomotopy
from .linalg import Matrix
from .scalars import ONE, Scalar, format_scalar, parse_scalar


class FormatError(Exception):
    """An input file or literal that does not parse; message carries context."""


# ---------------------------------------------------------------------------
# JSON plumbing
# ---------------------------------------------------------------------------


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _want(record: dict, field: str, where: str):
    if field not in record:
        raise FormatError(f"{where}: missing field {field!r}")
    return record[field]


def _scalar(text, where: str) -> Scalar:
    if isinstance(text, int):
        return Scalar(text)
    try:
        return parse_scalar(text)
    except (ValueError, TypeError) as exc:
        raise FormatError(f"{where}: bad scalar {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# algebra records
# ---------------------------------------------------------------------------


def algebra_from_record(record: dict, where: str = "algebra") -> BasedAlgebra:
    basis = _want(record, "basis", where)
    if not isinstance(basis, list) or not all(isinstance(s, str) for s in basis):
        raise FormatError(f"{where}: 'basis' must be a list of strings")
    index = {lab: k for k, lab in enumerate(basis)}
    if len(index) != len(basis):
        raise FormatError(f"{where}: duplicate basis labels")

    def look(label, slot):
        if label not in index:
            raise FormatError(f"{where}: {slot} names unknown basis label {label!r}")
        return index[label]

    structure = {}
    for pos, entry in enumerate(record.get("table", [])):
        here = f"{where}: table entry {pos}"
        i = look(_want(entry, "left", here), "left")
        j = look(_want(entry, "right", here), "right")
        ex = {}
        for term in _want(entry, "result", here):
            k = look(_want(term, "basis", here), "result")
            c = _scalar(_want(term, "coeff", here), here)
            if c:
                ex[k] = ex.get(k, Scalar(0)) + c
        structure[(i, j)] = {k: c for k, c in ex.items() if c}

    unit = record.get("unit")
    if unit is not None:
        unit = look(unit, "unit")
    window = record.get("window")
    if window is not None:
        if set(window) != set(basis):
            raise FormatError(f"{where}: 'window' must map every basis label")
        window = {index[lab]: int(p) for lab, p in window.items()}
    name = record.get("name", "algebra")
    return BasedAlgebra(basis, structure, unit=unit, window=window, name=name)


def algebra_to_record(A: BasedAlgebra) -> dict:
    record = {"name": A.name, "basis": list(A.labels)}
    if A.unit is not None:
        record["unit"] = A.labels[A.unit]
    record["table"] = [
        {
            "left": A.labels[i],
            "right": A.labels[j],
            "result": [
                {"basis": A.labels[k], "coeff": format_scalar(c)}
                for k, c in sorted(ex.items())
            ],
        }
        for (i, j), ex in sorted(A.structure.items())
    ]
    if A.window is not None:
        record["window"] = {A.labels[k]: p for k, p in sorted(A.window.items())}
    return record


_BUILTIN_RE = re.compile(r"^(m|upper|laurent|poly|null)(\d+)$")


def builtin_algebra(name: str):
    """Builder outputs addressable by name (q, dual, m2, laurent6, ...)."""
    if name == "q":
        return rationals()
    if name == "dual":
        return dual_numbers()
    hit = _BUILTIN_RE.match(name)
    if hit is None:
        return None
    kind, n = hit.group(1), int(hit.group(2))
    builder = {
        "m": matrix_algebra,
        "upper": upper_triangular,
        "laurent": laurent_window,
        "poly": truncated_poly,
        "null": null_algebra,
    }[kind]
    return builder(n)


def load_algebra(source: str) -> BasedAlgebra:
    """Load an algebra from a file path or a builder name."""
    built = builtin_algebra(source)
    if built is not None:
        return built
    return algebra_from_record(_load_json(source), where=source)


# ---------------------------------------------------------------------------
# element and form literals
# ---------------------------------------------------------------------------


def _split_terms(text: str, where: str):
    """Split a sum on top-level +/-; yields (sign, term-text, column)."""
    terms, depth, start, sign = [], 0, 0, ONE
    stripped = text
    for pos, ch in enumerate(stripped):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormatError(f"{where}: column {pos + 1}: unbalanced ')'")
        elif ch in "+-" and depth == 0 and pos > start:
            terms.append((sign, stripped[start:pos].strip(), start + 1))
            sign = ONE if ch == "+" else -ONE
            start = pos + 1
    if depth != 0:
        raise FormatError(f"{where}: unbalanced '('")
    last = stripped[start:].strip()
    if last.startswith("+"):
        last = last[1:].strip()
    elif last.startswith("-"):
        sign = -sign
        last = last[1:].strip()
    if not last:
        raise FormatError(f"{where}: column {start + 1}: empty term")
    terms.append((sign, last, start + 1))
    return terms


def _split_coefficient(term: str, where: str, col: int):
    """Peel an optional ``scalar*`` prefix off a term."""
    if term.startswith("("):
        depth = 0
        for pos, ch in enumerate(term):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                if pos + 1 >= len(term) or term[pos + 1] != "*":
                    raise FormatError(
                        f"{where}: column {col + pos + 1}: expected '*' after ')'"
                    )
                return _scalar(term[1:pos], where), term[pos + 2 :].strip()
        raise FormatError(f"{where}: column {col}: unbalanced '('")
    star = term.find("*")
    if star >= 0 and re.match(r"^[+-]?\d+(/\d+)?$", term[:star]):
        return _scalar(term[:star], where), term[star + 1 :].strip()
    return ONE, term


def parse_element(A: BasedAlgebra, text: str) -> AlgebraElement:
    """Parse an element literal like ``e11 - 1/2*e22`` over A's basis."""
    where = f"element literal {text!r}"
    coeffs = {}
    for sign, term, col in _split_terms(text, where):
        c, label = _split_coefficient(term, where, col)
        if label not in A._index:
            raise FormatError(
                f"{where}: column {col}: unknown basis label {label!r}"
            )
        k = A.index(label)
        s = coeffs.get(k, Scalar(0)) + sign * c
        coeffs[k] = s
    return AlgebraElement(coeffs)


_D_PART_RE = re.compile(r"^d\((.+)\)$")


def parse_form(A: BasedAlgebra, text: str) -> FormVector:
    """Parse a form literal like ``1/2*a.d(b).d(c) - d(a)`` over A's basis."""
    where = f"form literal {text!r}"

    def look(label, col):
        if label not in A._index:
            raise FormatError(
                f"{where}: column {col}: unknown basis label {label!r}"
            )
        return A.index(label)

    coeffs = {}
    for sign, term, col in _split_terms(text, where):
        c, chain = _split_coefficient(term, where, col)
        parts = [p.strip() for p in chain.split(".")]
        if not parts or not all(parts):
            raise FormatError(f"{where}: column {col}: empty monomial factor")
        first = _D_PART_RE.match(parts[0])
        if first is None:
            lead = look(parts[0], col)
            rest = parts[1:]
        else:
            lead = FORMAL_UNIT
            rest = parts
        tail = []
        for part in rest:
            hit = _D_PART_RE.match(part)
            if hit is None:
                raise FormatError(
                    f"{where}: column {col}: expected d(label), got {part!r}"
                )
            tail.append(look(hit.group(1), col))
        key = (lead, tuple(tail))
        coeffs[key] = coeffs.get(key, Scalar(0)) + sign * c
    return FormVector(A, coeffs)


def _coeff_text(c: Scalar) -> str:
    if c == ONE:
        return ""
    if c.im:
        return f"({format_scalar(c)})*"
    return f"{format_scalar(c)}*"


def format_element(A: BasedAlgebra, x: AlgebraElement) -> str:
    """Canonical text for an element; parse_element inverts it."""
    if x.is_zero():
        return "0"
    parts = []
    for k in sorted(x.coeffs):
        c = x.coeffs[k]
        sign = "-" if (not c.im and c.re < 0) else "+"
        mag = -c if sign == "-" else c
        parts.append((sign, f"{_coeff_text(mag)}{A.labels[k]}"))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {t}" for s, t in parts[1:])


def _mono_key(mono):
    lead, tail = mono
    return (len(tail), -1 if lead is FORMAL_UNIT else lead, tail)


def format_form(A: BasedAlgebra, x: FormVector) -> str:
    """Canonical text for a form; parse_form inverts it."""
    if x.is_zero():
        return "0"
    parts = []
    for mono in sorted(x.coeffs, key=_mono_key):
        lead, tail = mono
        c = x.coeffs[mono]
        sign = "-" if (not c.im and c.re < 0) else "+"
        mag = -c if sign == "-" else c
        chain = [] if lead is FORMAL_UNIT else [A.labels[lead]]
        chain.extend(f"d({A.labels[t]})" for t in tail)
        parts.append((sign, _coeff_text(mag) + ".".join(chain)))
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {t}" for s, t in parts[1:])


# ---------------------------------------------------------------------------
# matrices, Fredholm data, extensions, homotopies
# ---------------------------------------------------------------------------


def parse_matrix(rows, where: str) -> Matrix:
    """A dense matrix given as a list of rows of exact scalar strings."""
    if not isinstance(rows, list) or not rows:
        raise FormatError(f"{where}: matrix must be a non-empty list of rows")
    ncols = len(rows[0])
    out = []
    for r, row in enumerate(rows):
        if len(row) != ncols:
            raise FormatError(f"{where}: row {r} has {len(row)} entries, not {ncols}")
        out.append({c: _scalar(v, f"{where}: row {r}") for c, v in enumerate(row)})
    return Matrix.from_rows(out, ncols)


def matrix_to_rows(m: Matrix):
    return [[format_scalar(m.entry(r, c)) for c in range(m.ncols)] for r in range(m.nrows)]


def load_fredholm(path: str) -> FredholmData:
    """Fredholm data: algebra record, F, optional gamma, phi per basis label."""
    record = _load_json(path)
    spec = _want(record, "algebra", path)
    A = builtin_algebra(spec) if isinstance(spec, str) else None
    if A is None:
        A = algebra_from_record(spec, where=f"{path}: algebra")
    F = parse_matrix(_want(record, "F", path), f"{path}: F")
    gamma = record.get("gamma")
    if gamma is not None:
        gamma = parse_matrix(gamma, f"{path}: gamma")
    phi_rec = _want(record, "phi", path)
    phi = []
    for lab in A.labels:
        if lab not in phi_rec:
            raise FormatError(f"{path}: phi is missing basis label {lab!r}")
        phi.append(parse_matrix(phi_rec[lab], f"{path}: phi[{lab}]"))
    try:
        return FredholmData(A, F, phi, gamma=gamma)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def load_extension(path: str):
    """A split extension plus an optional alternative section.

    Returns (SplitExtension, alt_s or None).
    """
    record = _load_json(path)
    algebras = {}
    for slot in ("K", "E", "Q"):
        spec = _want(record, slot, path)
        A = builtin_algebra(spec) if isinstance(spec, str) else None
        if A is None:
            A = algebra_from_record(spec, where=f"{path}: {slot}")
        algebras[slot] = A
    i = parse_matrix(_want(record, "i", path), f"{path}: i")
    p = parse_matrix(_want(record, "p", path), f"{path}: p")
    s = parse_matrix(_want(record, "s", path), f"{path}: s")
    alt_s = record.get("alt_s")
    if alt_s is not None:
        alt_s = parse_matrix(alt_s, f"{path}: alt_s")
    try:
        ext = make_split_extension(
            algebras["K"], algebras["E"], algebras["Q"], i, p, s
        )
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return ext, alt_s


def load_homotopy(path: str) -> PolynomialHomotopy:
    """A polynomial family of homomorphisms, one t-coefficient list per label."""
    record = _load_json(path)
    out = {}
    for slot in ("source", "target"):
        spec = _want(record, slot, path)
        A = builtin_algebra(spec) if isinstance(spec, str) else None
        if A is None:
            A = algebra_from_record(spec, where=f"{path}: {slot}")
        out[slot] = A
    source, target = out["source"], out["target"]
    col_rec = _want(record, "columns", path)
    columns = []
    for lab in source.labels:
        if lab not in col_rec:
            raise FormatError(f"{path}: columns missing source label {lab!r}")
        col = []
        for power, elem in enumerate(col_rec[lab]):
            here = f"{path}: columns[{lab}][{power}]"
            coeffs = {}
            for tlab, cstr in elem.items():
                if tlab not in target._index:
                    raise FormatError(f"{here}: unknown target label {tlab!r}")
                coeffs[target.index(tlab)] = _scalar(cstr, here)
            col.append(AlgebraElement(coeffs))
        columns.append(col)
    try:
        return PolynomialHomotopy(source, target, columns)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from exc
