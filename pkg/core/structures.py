from dataclasses import dataclass

import numpy as np

from .exceptions import InputError

# Membership bitmask over [0, n): bit v set iff vertex v is in the set.
VertexSet = int


def _row_masks(matrix: np.ndarray) -> tuple[int, ...]:
    packed = np.packbits(matrix, axis=1, bitorder="little")
    return tuple(int.from_bytes(row.tobytes(), "little") for row in packed)


def check_tournament_matrix(matrix: np.ndarray) -> None:
    """
    Raise InputError unless `matrix` is the adjacency matrix of a tournament:
    square, false diagonal, exactly one of (u, v) / (v, u) for every pair.
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InputError(f"adjacency matrix must be square, got shape {matrix.shape}")
    if matrix.shape[0] < 1:
        raise InputError("a tournament needs at least one vertex")

    loops = np.flatnonzero(np.diagonal(matrix))
    if loops.size:
        v = int(loops[0])
        raise InputError(f"loop at vertex {v}: diagonal entry ({v},{v}) must be empty")

    # Below the diagonal, (i, j) clashes with (j, i) when both or neither arc is present
    clashes = np.argwhere(np.tril(matrix == matrix.T, k=-1))
    if clashes.size:
        i, j = (int(x) for x in clashes[0])
        raise InputError(f"complementarity violated at ({i},{j})")


class Tournament:
    """
    Immutable complete orientation on n vertices.

    `adj` is a read-only boolean matrix with adj[u, v] true iff u -> v.
    `out_masks[v]` / `in_masks[v]` hold N+(v) / N-(v) as VertexSet bitmasks.
    """

    __slots__ = ("n", "adj", "out_masks", "in_masks", "provenance")

    def __init__(self, adj, provenance: str = ""):
        matrix = np.array(adj, dtype=bool)
        check_tournament_matrix(matrix)
        matrix.setflags(write=False)

        object.__setattr__(self, "n", int(matrix.shape[0]))
        object.__setattr__(self, "adj", matrix)
        object.__setattr__(self, "out_masks", _row_masks(matrix))
        object.__setattr__(self, "in_masks", _row_masks(matrix.T))
        object.__setattr__(self, "provenance", provenance)

        n = self.n
        if int(matrix.sum()) != n * (n - 1) // 2:
            raise InputError("degree sum differs from n(n-1)/2")

    def __setattr__(self, name, value):
        raise AttributeError("Tournament is immutable")

    @classmethod
    def from_matrix(cls, rows, provenance: str = ""):
        """Rows of 0/1 values (or booleans); row i, column j is 1 iff i -> j."""
        try:
            matrix = [[bool(int(c)) for c in row] for row in rows]
        except (TypeError, ValueError) as exc:
            raise InputError(f"adjacency entries must be 0/1 values: {exc}")
        if any(len(row) != len(matrix) for row in matrix):
            raise InputError(f"adjacency matrix must be square, got {len(matrix)} rows of lengths {sorted({len(r) for r in matrix})}")
        return cls(np.array(matrix, dtype=bool).reshape(len(matrix), len(matrix)), provenance)

    @classmethod
    def from_arcs(cls, n: int, arcs, provenance: str = ""):
        matrix = np.zeros((n, n), dtype=bool)
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"arc ({u},{v}) out of range for n={n}")
            matrix[u, v] = True
        return cls(matrix, provenance=provenance)

    @property
    def vertices(self) -> VertexSet:
        return (1 << self.n) - 1

    def out_degrees(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Tournament):
            return NotImplemented
        return self.n == other.n and self.out_masks == other.out_masks

    def __hash__(self):
        return hash((self.n, self.out_masks))

    def __repr__(self):
        return f"Tournament(n={self.n})"


@dataclass(frozen=True)
class Dipath:
    """An ordered list of distinct vertices; arcs are checked against a host by is_dipath."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if not self.vertices:
            raise InputError("a dipath needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError(f"dipath repeats a vertex: {self.vertices}")

    @property
    def source(self) -> int:
        return self.vertices[0]

    @property
    def sink(self) -> int:
        return self.vertices[-1]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def interior(self) -> tuple[int, ...]:
        return self.vertices[1:-1]

    def __iter__(self):
        return iter(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def then(self, other: "Dipath") -> "Dipath":
        """Concatenate two dipaths sharing self.sink == other.source."""
        if self.sink != other.source:
            raise InputError(f"cannot join path ending at {self.sink} to one starting at {other.source}")
        return Dipath(self.vertices + other.vertices[1:])
