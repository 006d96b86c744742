"""JSON ingestion of operators, states and GKLS data; CSV export of trajectories.

Operator JSON: ``{"dim": n, "entries": [[[re, im], ...], ...]}``.  A file may
hold one operator or a mapping ``name -> operator``.  Entries may also be
plain real numbers.  States are ``{"rho": entries}`` or
``{"psi": [[re, im], ...]}``.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

from .hermitian import PAULI, gellmann_basis


class ParseError(ValueError):
    """Malformed or dimensionally inconsistent input document."""


def _number(x) -> complex:
    if isinstance(x, bool):
        raise ParseError(f"not a number: {x!r}")
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in x):
        return complex(x[0], x[1])
    raise ParseError(f"expected a number or [re, im] pair, got {x!r}")


def parse_entries(entries, dim: int | None = None) -> np.ndarray:
    if not isinstance(entries, list) or not entries or not all(isinstance(r, list) for r in entries):
        raise ParseError("entries must be a non-empty list of rows")
    M = np.array([[_number(x) for x in row] for row in entries], dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParseError(f"entries must form a square matrix, got shape {M.shape}")
    if dim is not None and M.shape[0] != dim:
        raise ParseError(f"declared dim {dim} but entries are {M.shape[0]}x{M.shape[1]}")
    if not np.all(np.isfinite(M)):
        raise ParseError("entries must be finite")
    return M


def parse_operator(doc) -> np.ndarray:
    """An operator document or a bare entries list."""
    if isinstance(doc, dict):
        if "entries" not in doc:
            raise ParseError("operator object needs an 'entries' field")
        dim = doc.get("dim")
        if dim is not None and (not isinstance(dim, int) or dim < 1):
            raise ParseError(f"dim must be a positive integer, got {dim!r}")
        return parse_entries(doc["entries"], dim)
    return parse_entries(doc)


def builtin_operator(name: str) -> np.ndarray | None:
    """``sigma0``..``sigma3`` and ``gellmann<n>_<k>`` (e.g. ``gellmann3_8``)."""
    if name in ("sigma0", "sigma1", "sigma2", "sigma3"):
        return PAULI[int(name[-1])].copy()
    if name.startswith("gellmann"):
        try:
            n, k = (int(s) for s in name[len("gellmann"):].split("_"))
            return gellmann_basis(n)[k].copy()
        except (ValueError, IndexError):
            return None
    return None


def load_json(source) -> object:
    """Parse a path or an inline JSON string (anything starting with ``{`` or ``[``)."""
    text = str(source)
    try:
        if text.lstrip().startswith(("{", "[")):
            return json.loads(text)
        return json.loads(Path(text).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {text[:40]!r}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {text!r}: {exc}") from exc


def load_operators(source) -> dict[str, np.ndarray]:
    doc = load_json(source)
    if isinstance(doc, list) or (isinstance(doc, dict) and "entries" in doc):
        return {"": parse_operator(doc)}
    if isinstance(doc, dict) and doc:
        return {str(k): parse_operator(v) for k, v in doc.items()}
    raise ParseError("expected an operator, an entries list or a non-empty name -> operator mapping")


def resolve_operator(spec: str, name: str | None = None) -> np.ndarray:
    """Built-in name, or a file/inline JSON (``name`` picks from a mapping)."""
    op = builtin_operator(spec)
    if op is not None:
        return op
    ops = load_operators(spec)
    if name is not None:
        if name not in ops:
            raise ParseError(f"operator {name!r} not found; have {sorted(ops)}")
        return ops[name]
    if len(ops) != 1:
        raise ParseError(f"file holds several operators {sorted(ops)}; pick one by name")
    return next(iter(ops.values()))


def parse_state(doc) -> tuple[str, np.ndarray]:
    """``("rho", matrix)`` or ``("psi", complex vector)``."""
    if not isinstance(doc, dict):
        raise ParseError("state must be a JSON object with 'rho' or 'psi'")
    if "rho" in doc:
        rho = doc["rho"]
        return "rho", parse_operator(rho) if isinstance(rho, dict) else parse_entries(rho, doc.get("dim"))
    if "psi" in doc:
        psi = doc["psi"]
        if not isinstance(psi, list) or not psi:
            raise ParseError("psi must be a non-empty list")
        z = np.array([_number(x) for x in psi], dtype=complex)
        if not np.all(np.isfinite(z)) or not np.any(z):
            raise ParseError("psi must be finite and nonzero")
        return "psi", z
    raise ParseError("state needs a 'rho' or 'psi' field")


def load_density(source) -> np.ndarray:
    """Density matrix from a state document; pure states become projectors."""
    kind, x = parse_state(load_json(source))
    if kind == "psi":
        x = x / np.linalg.norm(x)
        return np.outer(x, x.conj())
    return x


def parse_vector(text: str) -> np.ndarray:
    """Comma-separated reals, e.g. ``"1,0,0,0"``."""
    try:
        v = np.array([float(s) for s in text.split(",")])
    except ValueError as exc:
        raise ParseError(f"bad vector {text!r}: {exc}") from exc
    if not np.all(np.isfinite(v)):
        raise ParseError("vector must be finite")
    return v


def parse_gkls(doc) -> dict:
    """``{"H", "c", "F"?}`` or ``{"H", "V"}``; returns the parsed arrays."""
    if not isinstance(doc, dict) or "H" not in doc:
        raise ParseError("GKLS document needs 'H' and either 'c' or 'V'")
    out = {"H": parse_operator(doc["H"])}
    if "V" in doc:
        if not isinstance(doc["V"], list):
            raise ParseError("'V' must be a list of operators")
        out["V"] = [parse_operator(v) for v in doc["V"]]
    elif "c" in doc:
        out["c"] = parse_operator(doc["c"])
        if "F" in doc:
            if not isinstance(doc["F"], list):
                raise ParseError("'F' must be a list of operators")
            out["F"] = [parse_operator(f) for f in doc["F"]]
    else:
        raise ParseError("GKLS document needs 'c' or 'V'")
    return out


# -- CSV -------------------------------------------------------------------------


def phase_space_header(n: int) -> list[str]:
    cols = ["t"]
    for k in range(1, n + 1):
        cols += [f"q{k}", f"p{k}"]
    return cols


def bloch_header(n: int) -> list[str]:
    return ["t"] + [f"y{k}" for k in range(n * n)]


def matrix_header(n: int) -> list[str]:
    cols = ["t"]
    for i in range(n):
        for j in range(n):
            cols += [f"re{i}{j}", f"im{i}{j}"]
    return cols


def format_csv(header, times, rows) -> str:
    rows = np.asarray(rows, dtype=float)
    times = np.asarray(times, dtype=float)
    if rows.ndim != 2 or rows.shape[0] != times.size or rows.shape[1] + 1 != len(header):
        raise ValueError("CSV rows do not match the header")
    lines = [",".join(header)]
    for t, row in zip(times, rows):
        lines.append(",".join("%.17g" % v for v in (t, *row)))
    return "\n".join(lines) + "\n"


def write_csv(path, header, times, rows) -> None:
    text = format_csv(header, times, rows)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return header, data


def jsonable(x):
    """Replace numpy scalars/arrays and non-finite floats for ``json.dumps``."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, np.generic):
        return jsonable(x.item())
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x
