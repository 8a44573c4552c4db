"""
Exhaustive verifiers. Each one is independent of the constructive modules it
checks and refuses to run past its budget instead of truncating the search.
"""

import logging
from itertools import combinations, permutations

from django.conf import settings

from core.exceptions import BudgetExceeded, InputError
from core.structures import Dipath, Tournament, VertexSet
from core.utils import check_terminal_tuples, members, smallest, vertex_set
from flow.structures import DigraphView, PathSystem
from flow.utils import as_view
from ordering.structures import Ordering

from .structures import DISJOINTNESS, ENDPOINT, MEMBERSHIP, MISSING_ARC, Violation

logger = logging.getLogger(__name__)


def _budget(name: str, default: int, override: int | None) -> int:
    return override if override is not None else getattr(settings, name, default)


def _check_budget(oracle: str, limit: int, requested: int) -> None:
    if requested > limit:
        raise BudgetExceeded(oracle, limit, requested)


def _reach(out_masks, start: int, allowed: VertexSet) -> VertexSet:
    """Vertices reachable from `start` through `allowed` (start included)."""
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for u in members(frontier):
            nxt |= out_masks[u]
        frontier = nxt & allowed & ~seen
        seen |= frontier
    return seen


# ------------------------------
# Validation
# ------------------------------
def validate_path_system(T: Tournament, expected_pairs, ps: PathSystem) -> list[Violation]:
    violations = []
    expected_pairs = [tuple(pair) for pair in expected_pairs]
    if len(ps.paths) != len(expected_pairs):
        violations.append(Violation(ENDPOINT, f"expected {len(expected_pairs)} paths, got {len(ps.paths)}"))

    for i, path in enumerate(ps.paths):
        outside = [v for v in path if not 0 <= v < T.n]
        if outside:
            violations.append(Violation(MEMBERSHIP, f"path {i} visits {outside} outside [0, {T.n})"))
            continue
        if i < len(expected_pairs) and (path.source, path.sink) != expected_pairs[i]:
            violations.append(
                Violation(ENDPOINT, f"path {i} runs {path.source} -> {path.sink}, expected {expected_pairs[i][0]} -> {expected_pairs[i][1]}")
            )
        for u, v in zip(path.vertices, path.vertices[1:]):
            if not T.out_masks[u] >> v & 1:
                violations.append(Violation(MISSING_ARC, f"path {i} uses {u} -> {v}, which is not an arc"))

    for i, j in combinations(range(len(ps.paths)), 2):
        shared = sorted(set(ps.paths[i]) & set(ps.paths[j]))
        if shared:
            violations.append(Violation(DISJOINTNESS, f"paths {i} and {j} share {shared}"))
    return violations


# ------------------------------
# Linkage
# ------------------------------
def _simple_paths(out_masks, src: int, dst: int, allowed: VertexSet):
    """Every simple src -> dst dipath with interior in `allowed`, interiors explored in ascending id."""
    stack = [(src, (src,), 1 << src)]
    while stack:
        v, walk, seen = stack.pop()
        if out_masks[v] >> dst & 1:
            yield walk + (dst,)
        # reversed so that the smallest id is expanded first
        for w in reversed(members(out_masks[v] & allowed & ~seen)):
            stack.append((w, walk + (w,), seen | 1 << w))


def _link(out_masks, everything: VertexSet, X, Y, i: int, used: VertexSet, chosen: list) -> bool:
    if i == len(X):
        return True
    terminals = vertex_set(X + Y)
    allowed = everything & ~used & ~terminals
    # every remaining pair must still be connected
    for j in range(i, len(X)):
        if not _reach(out_masks, X[j], allowed | 1 << Y[j]) >> Y[j] & 1:
            return False
    for walk in _simple_paths(out_masks, X[i], Y[i], allowed):
        chosen.append(walk)
        if _link(out_masks, everything, X, Y, i + 1, used | vertex_set(walk), chosen):
            return True
        chosen.pop()
    return False


def brute_force_linked(T: Tournament, X, Y, budget: int | None = None) -> PathSystem | None:
    """Disjoint dipaths x_i -> y_i by exhaustive backtracking, or None when no such family exists."""
    limit = _budget("ORACLE_EXHAUSTIVE_BUDGET", 14, budget)
    _check_budget("brute_force_linked", limit, T.n)
    X, Y = check_terminal_tuples(T, X, Y)
    chosen: list[tuple[int, ...]] = []
    if not _link(T.out_masks, T.vertices, X, Y, 0, 0, chosen):
        return None
    return PathSystem(
        pairs=tuple(zip(X, Y)),
        paths=tuple(Dipath(walk) for walk in chosen),
        permutation={i: i for i in range(len(X))},
    )


def brute_force_is_k_linked(T: Tournament, k: int, budget: int | None = None) -> bool:
    """Every pair of disjoint ordered k-tuples links. Tournaments with fewer than 2k vertices are not k-linked."""
    limit = _budget("ORACLE_K_LINKED_BUDGET", 10, budget)
    _check_budget("brute_force_is_k_linked", limit, T.n)
    _check_budget("brute_force_is_k_linked (k)", 2, k)
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    if T.n < 2 * k:
        return False
    for X in permutations(range(T.n), k):
        rest = [v for v in range(T.n) if v not in X]
        for Y in permutations(rest, k):
            if brute_force_linked(T, X, Y, budget=T.n) is None:
                logger.debug(f"no linkage for {X} -> {Y}")
                return False
    return True


def brute_force_anchors(T: Tournament, A, B, budget: int | None = None) -> bool:
    limit = _budget("ORACLE_EXHAUSTIVE_BUDGET", 14, budget)
    _check_budget("brute_force_anchors", limit, T.n)
    A, B = check_terminal_tuples(T, A, B)
    _check_budget("brute_force_anchors (k)", 4, len(A))
    for pi in permutations(range(len(A))):
        if brute_force_linked(T, A, tuple(B[j] for j in pi), budget=T.n) is None:
            logger.debug(f"{A} does not anchor {B}: permutation {pi} fails")
            return False
    return True


def brute_force_domination_pair(T: Tournament, k: int, budget: int | None = None) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """The first k-set A (in lexicographic order) dominating some disjoint k-set B, with B the k smallest such."""
    limit = _budget("ORACLE_EXHAUSTIVE_BUDGET", 14, budget)
    _check_budget("brute_force_domination_pair", limit, T.n)
    for A in combinations(range(T.n), k):
        common = T.vertices
        for a in A:
            common &= T.out_masks[a]
        if common.bit_count() >= k:
            return A, smallest(common, k)
    return None


# ------------------------------
# Connectivity and Menger
# ------------------------------
def _is_strong(out_masks, in_masks, alive: VertexSet) -> bool:
    start = smallest(alive, 1)[0]
    return _reach(out_masks, start, alive) == alive and _reach(in_masks, start, alive) == alive


def brute_force_vertex_connectivity(D, budget: int | None = None) -> int:
    """Smallest vertex set whose removal leaves a digraph that is not strong; n - 1 when none does."""
    D = as_view(D)
    limit = _budget("ORACLE_CONNECTIVITY_BUDGET", 12, budget)
    _check_budget("brute_force_vertex_connectivity", limit, D.order())
    alive = members(D.alive)
    for size in range(len(alive) - 1):
        for removed in combinations(alive, size):
            if not _is_strong(D.out_masks, D.in_masks, D.alive & ~vertex_set(removed)):
                return size
    return max(len(alive) - 1, 0)


def _check_sets(D: DigraphView, sources, sinks) -> tuple[VertexSet, VertexSet]:
    S, Tm = vertex_set(sources), vertex_set(sinks)
    if S & Tm:
        raise InputError("sources and sinks overlap")
    if (S | Tm) & ~D.alive:
        raise InputError("terminals must be alive vertices")
    return S, Tm


def brute_force_max_disjoint_paths(D, sources, sinks, budget: int | None = None) -> int:
    """Largest family of vertex-disjoint dipaths from distinct sources to distinct sinks."""
    D = as_view(D)
    limit = _budget("ORACLE_CONNECTIVITY_BUDGET", 12, budget)
    _check_budget("brute_force_max_disjoint_paths", limit, D.order())
    S, Tm = _check_sets(D, sources, sinks)
    order = members(S)

    def paths_from(x: int, free: VertexSet):
        stack = [(x, 1 << x)]
        while stack:
            v, walk = stack.pop()
            if Tm >> v & 1:
                yield walk
                continue
            for w in reversed(members(D.out_masks[v] & free & ~walk)):
                stack.append((w, walk | 1 << w))

    def best(i: int, free: VertexSet) -> int:
        if i == len(order):
            return 0
        x = order[i]
        result = best(i + 1, free)
        if free >> x & 1:
            for walk in paths_from(x, free):
                result = max(result, 1 + best(i + 1, free & ~walk))
        return result

    return best(0, D.alive)


def brute_force_min_vertex_cut(D, sources, sinks, budget: int | None = None) -> int:
    """Smallest vertex set (terminals allowed) meeting every source-to-sink dipath."""
    D = as_view(D)
    limit = _budget("ORACLE_CONNECTIVITY_BUDGET", 12, budget)
    _check_budget("brute_force_min_vertex_cut", limit, D.order())
    S, Tm = _check_sets(D, sources, sinks)
    alive = members(D.alive)
    for size in range(len(alive) + 1):
        for removed in combinations(alive, size):
            rest = D.alive & ~vertex_set(removed)
            if not any(_reach(D.out_masks, x, rest) & Tm for x in members(S & rest)):
                return size
    return len(alive)


# ------------------------------
# Orders and matchings
# ------------------------------
def exact_median_order(T: Tournament, budget: int | None = None) -> Ordering:
    """
    A true median order by dynamic programming over vertex subsets: best[mask] is the
    largest number of forward arcs of an order whose prefix is `mask`.
    """
    limit = _budget("ORACLE_MEDIAN_BUDGET", 12, budget)
    _check_budget("exact_median_order", limit, T.n)
    n = T.n
    full = T.vertices
    best = [-1] * (1 << n)
    choice = [-1] * (1 << n)
    best[0] = 0
    for mask in range(1 << n):
        if best[mask] < 0:
            continue
        for v in members(full & ~mask):
            nxt = mask | 1 << v
            value = best[mask] + (T.out_masks[v] & ~nxt).bit_count()
            if value > best[nxt]:
                best[nxt] = value
                choice[nxt] = v

    perm = []
    mask = full
    while mask:
        v = choice[mask]
        perm.append(v)
        mask &= ~(1 << v)
    return Ordering(tuple(reversed(perm)), best[full])


def brute_force_max_deficiency(x_size: int, z_size: int, edges, budget: int | None = None) -> tuple[int, VertexSet]:
    """max over S of |S| - |N(S)|, with the first subset (as a bitmask) attaining it."""
    limit = _budget("ORACLE_DEFICIENCY_BUDGET", 12, budget)
    _check_budget("brute_force_max_deficiency", limit, x_size)
    neighbours = [0] * x_size
    for x, z in edges:
        if not (0 <= x < x_size and 0 <= z < z_size):
            raise InputError(f"edge ({x},{z}) outside sides of size ({x_size}, {z_size})")
        neighbours[x] |= 1 << z

    best, witness = 0, 0
    for S in range(1 << x_size):
        reach = 0
        for x in members(S):
            reach |= neighbours[x]
        value = S.bit_count() - reach.bit_count()
        if value > best:
            best, witness = value, S
    return best, witness
