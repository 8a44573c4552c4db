import logging
from typing import Iterable

import numpy as np

from .exceptions import InputError, PreconditionViolation
from .structures import Tournament, VertexSet

logger = logging.getLogger(__name__)


# ------------------------------
# Vertex-set algebra
# ------------------------------
def vertex_set(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << int(v)
    return mask


def members(mask: VertexSet) -> tuple[int, ...]:
    """Vertices of `mask` in ascending id order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def smallest(mask: VertexSet, count: int) -> tuple[int, ...]:
    out = []
    while mask and len(out) < count:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def check_vertex(T: Tournament, v: int) -> None:
    if not isinstance(v, (int, np.integer)) or not 0 <= v < T.n:
        raise InputError(f"vertex {v} out of range [0, {T.n})")


def check_subset(T: Tournament, S: VertexSet) -> None:
    if S < 0 or S >> T.n:
        raise InputError(f"vertex set {members(S) if S >= 0 else S} is not inside [0, {T.n})")


# ------------------------------
# Arc and degree queries
# ------------------------------
def arc(T: Tournament, u: int, v: int) -> bool:
    check_vertex(T, u)
    check_vertex(T, v)
    if u == v:
        raise InputError(f"arc query needs two distinct vertices, got {u} twice")
    return bool(T.out_masks[u] >> v & 1)


def out_neighbors(T: Tournament, v: int, S: VertexSet | None = None) -> VertexSet:
    check_vertex(T, v)
    return T.out_masks[v] if S is None else T.out_masks[v] & S


def in_neighbors(T: Tournament, v: int, S: VertexSet | None = None) -> VertexSet:
    check_vertex(T, v)
    return T.in_masks[v] if S is None else T.in_masks[v] & S


def out_degree_within(T: Tournament, v: int, S: VertexSet) -> int:
    """d+(v, S): out-neighbours of v inside S (v itself never counts)."""
    return (out_neighbors(T, v) & S).bit_count()


def in_degree_within(T: Tournament, v: int, S: VertexSet) -> int:
    return (in_neighbors(T, v) & S).bit_count()


def degree_sequence(T: Tournament) -> list[int]:
    return [int(d) for d in T.out_degrees()]


def min_out_degree(T: Tournament) -> tuple[int, int]:
    """
    A vertex attaining the minimum out-degree and that degree.
    Ties go to the smallest id; every tournament has one at most (n-1)/2.
    """
    degrees = T.out_degrees()
    v = int(np.argmin(degrees))
    d = int(degrees[v])
    if 2 * d > T.n - 1:
        raise PreconditionViolation(
            f"minimum out-degree {d} exceeds (n-1)/2 for n={T.n}",
            step="min_out_degree",
            inequality="delta+ <= (n-1)/2",
        )
    return v, d


def min_out_degree_within(T: Tournament, S: VertexSet) -> tuple[int, int] | None:
    """Minimum out-degree vertex of the induced subtournament T[S], smallest id on ties."""
    best = None
    for v in members(S):
        d = (T.out_masks[v] & S).bit_count()
        if best is None or d < best[1]:
            best = (v, d)
    return best


def induced(T: Tournament, W: VertexSet) -> tuple[Tournament, tuple[int, ...]]:
    """
    T[W] relabelled to 0..|W|-1 in ascending id order, with the index map
    back to T (index_map[i] is the vertex of T behind vertex i of T[W]).
    """
    check_subset(T, W)
    index_map = members(W)
    if not index_map:
        raise InputError("cannot induce a tournament on an empty vertex set")
    idx = np.array(index_map, dtype=np.intp)
    sub = Tournament(T.adj[np.ix_(idx, idx)], provenance=T.provenance)
    return sub, index_map


def image(index_map: tuple[int, ...], local: VertexSet) -> VertexSet:
    """Translate a vertex set of T[W] back into the ids of T."""
    return vertex_set(index_map[v] for v in members(local))


def is_dipath(T: Tournament, vertices) -> bool:
    seq = tuple(vertices)
    if not seq or len(set(seq)) != len(seq):
        return False
    if any(not 0 <= v < T.n for v in seq):
        return False
    return all(T.out_masks[u] >> v & 1 for u, v in zip(seq, seq[1:]))


def check_terminal_tuples(T: Tournament, X, Y) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Two equal-length tuples of distinct, in-range vertices with no vertex in both."""
    X = tuple(int(v) for v in X)
    Y = tuple(int(v) for v in Y)
    if len(X) != len(Y):
        raise InputError(f"terminal tuples differ in length: {len(X)} and {len(Y)}")
    everything = X + Y
    if any(not 0 <= v < T.n for v in everything):
        raise InputError(f"terminal out of range [0, {T.n})")
    if len(set(everything)) != len(everything):
        raise InputError(f"terminals must be distinct and the tuples disjoint: {X} / {Y}")
    return X, Y
