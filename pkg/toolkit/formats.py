"""
TRN v1: a header line `TRN v1` (optionally followed by provenance), the vertex
count on line 2, then n rows over {0,1,-}. Character j of row i is 1 iff i -> j;
the diagonal is '-'.
"""

from pathlib import Path

import numpy as np

from core.exceptions import InputError
from core.structures import Tournament

MAGIC = "TRN"
VERSION = "v1"


def save(T: Tournament) -> str:
    header = f"{MAGIC} {VERSION}"
    if T.provenance:
        header += f" {T.provenance}"
    cells = np.where(T.adj, "1", "0")
    np.fill_diagonal(cells, "-")
    rows = ["".join(row) for row in cells]
    return "\n".join([header, str(T.n), *rows]) + "\n"


def load(text: str) -> Tournament:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise InputError("line 1: empty input, expected a TRN header")

    tokens = lines[0].split(maxsplit=2)
    if tokens[:2] != [MAGIC, VERSION]:
        raise InputError(f"line 1: bad header {lines[0]!r}, expected '{MAGIC} {VERSION}'")
    provenance = tokens[2] if len(tokens) > 2 else ""

    if len(lines) < 2:
        raise InputError("line 2: missing vertex count")
    try:
        n = int(lines[1].strip())
    except ValueError:
        raise InputError(f"line 2: vertex count {lines[1]!r} is not an integer")
    if n < 1:
        raise InputError(f"line 2: vertex count must be positive, got {n}")

    rows = lines[2:]
    if len(rows) != n:
        raise InputError(f"line {3 + min(len(rows), n)}: expected {n} matrix rows, got {len(rows)}")

    matrix = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(rows):
        line = i + 3
        if len(row) != n:
            raise InputError(f"line {line}: expected {n} characters, got {len(row)}")
        for j, c in enumerate(row):
            if i == j:
                if c != "-":
                    raise InputError(f"line {line}, column {j + 1}: diagonal entry must be '-', got {c!r}")
            elif c == "1":
                matrix[i, j] = True
            elif c != "0":
                raise InputError(f"line {line}, column {j + 1}: unexpected character {c!r}")

    for i in range(n):
        for j in range(i):
            if matrix[i, j] == matrix[j, i]:
                raise InputError(f"line {i + 3}, column {j + 1}: complementarity violated at ({i},{j})")
    return Tournament(matrix, provenance=provenance)


def read_trn(path) -> Tournament:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    return load(text)


def write_trn(T: Tournament, path) -> None:
    Path(path).write_text(save(T))
