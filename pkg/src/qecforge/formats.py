"""Text and JSON file formats.

``.pcm`` sparse check matrices::

    3 7
    4 5 6 7
    2 3 6 7
    1 3 5 7

Line 1 holds ``rows cols``; every following line lists the 1-based columns
set in that row.  A blank line is an all-zero row.

Code descriptors are JSON objects with keys ``name``, ``n``,
``stabilizers``, ``logical_x``, ``logical_z`` and (for subsystem codes)
``gauge``; every operator is a Pauli string.
"""

from __future__ import annotations

import json
import os
from typing import Any, Dict, Union

import numpy as np

from .gf2 import BitMatrix
from .pauli import PauliOperator
from .stabilizer import SubsystemCode, build_stabilizer_group, subsystem_analyze, trivial_code

PathLike = Union[str, "os.PathLike[str]"]


class FormatError(ValueError):
    pass


def parse_pcm(text: str) -> BitMatrix:
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise FormatError("missing 'rows cols' header")
    try:
        rows, cols = (int(t) for t in lines[0].split())
    except ValueError:
        raise FormatError(f"bad header line {lines[0]!r}") from None
    body = lines[1:]
    # a trailing newline produces one empty element that is not a row
    if len(body) > rows and all(not b.strip() for b in body[rows:]):
        body = body[:rows]
    while len(body) < rows:
        body.append("")
    if len(body) != rows:
        raise FormatError(f"expected {rows} rows, found {len(body)}")
    M = np.zeros((rows, cols), dtype=np.uint8)
    for i, line in enumerate(body):
        for tok in line.split():
            j = int(tok)
            if not 1 <= j <= cols:
                raise FormatError(f"row {i + 1}: column {j} outside 1..{cols}")
            M[i, j - 1] ^= 1
    return BitMatrix(M)


def format_pcm(M: BitMatrix) -> str:
    out = [f"{M.rows} {M.cols}"]
    for row in M.array:
        out.append(" ".join(str(j + 1) for j in np.flatnonzero(row)))
    return "\n".join(out) + "\n"


def read_pcm(path: PathLike) -> BitMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pcm(fh.read())


def write_pcm(M: BitMatrix, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pcm(M))


def code_to_descriptor(code) -> Dict[str, Any]:
    d: Dict[str, Any] = {
        "name": code.name,
        "n": code.n,
        "stabilizers": [str(g) for g in code.stabilizers],
        "logical_x": [str(p) for p in code.logical_x],
        "logical_z": [str(p) for p in code.logical_z],
    }
    if isinstance(code, SubsystemCode):
        d["gauge"] = [str(g) for g in code.gauge_generators]
    return d


def descriptor_to_code(d: Dict[str, Any]):
    for key in ("n", "stabilizers"):
        if key not in d:
            raise FormatError(f"descriptor missing {key!r}")
    n = int(d["n"])
    name = d.get("name", "")
    if d.get("gauge"):
        gauge = [PauliOperator.from_str(s) for s in d["gauge"]]
        return subsystem_analyze(gauge, name=name)
    gens = [PauliOperator.from_str(s) for s in d["stabilizers"]]
    for g in gens:
        if g.n != n:
            raise FormatError(f"operator {g} does not act on n={n} qubits")
    if not gens:
        return trivial_code(n, name)
    lx = d.get("logical_x") or None
    lz = d.get("logical_z") or None
    return build_stabilizer_group(gens, name=name, logical_x=lx, logical_z=lz)


def dumps_descriptor(code) -> str:
    return json.dumps(code_to_descriptor(code), indent=2)


def load_descriptor(path: PathLike):
    with open(path, "r", encoding="utf-8") as fh:
        return descriptor_to_code(json.load(fh))


def save_descriptor(code, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_descriptor(code) + "\n")


__all__ = [
    "FormatError",
    "code_to_descriptor",
    "descriptor_to_code",
    "dumps_descriptor",
    "format_pcm",
    "load_descriptor",
    "parse_pcm",
    "read_pcm",
    "save_descriptor",
    "write_pcm",
]
