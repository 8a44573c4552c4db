import logging
from typing import Sequence

from core.exceptions import InputError, PreconditionViolation
from core.structures import Tournament, VertexSet
from core.utils import members, vertex_set

from .matching import BipartiteGraph, HopcroftKarp
from .network import DisjointPathEngine
from .structures import ConnectivityResult, DeficiencyMatching, DigraphView, FlowDeficit, PathSystem

logger = logging.getLogger(__name__)


def as_view(D) -> DigraphView:
    if isinstance(D, DigraphView):
        return D
    if isinstance(D, Tournament):
        return DigraphView.of(D)
    raise InputError(f"expected a tournament or a digraph view, got {type(D).__name__}")


def _check_terminals(D: DigraphView, vertices: Sequence[int], role: str) -> tuple[int, ...]:
    vertices = tuple(int(v) for v in vertices)
    if len(set(vertices)) != len(vertices):
        raise InputError(f"{role} repeat a vertex: {vertices}")
    for v in vertices:
        if not 0 <= v < D.n:
            raise InputError(f"{role} vertex {v} out of range [0, {D.n})")
        if not D.alive >> v & 1:
            raise InputError(f"{role} vertex {v} is deleted from the digraph")
    return vertices


# ------------------------------
# Disjoint paths
# ------------------------------
def max_disjoint_paths(D, sources: Sequence[int], sinks: Sequence[int], target_k: int) -> PathSystem | FlowDeficit:
    """
    target_k vertex-disjoint dipaths from the source set to the sink set, each source
    and sink used at most once. When fewer exist, a FlowDeficit carries a minimum
    vertex cut of that size together with the paths that were found.
    """
    D = as_view(D)
    sources = _check_terminals(D, sources, "sources")
    sinks = _check_terminals(D, sinks, "sinks")
    if set(sources) & set(sinks):
        raise InputError(f"sources and sinks overlap on {sorted(set(sources) & set(sinks))}")
    if not 0 <= target_k <= min(len(sources), len(sinks)):
        raise InputError(f"cannot ask for {target_k} paths between {len(sources)} sources and {len(sinks)} sinks")

    engine = DisjointPathEngine(D.out_masks, D.alive, vertex_set(sources), vertex_set(sinks))
    value = engine.run(limit=target_k)

    source_index = {v: i for i, v in enumerate(sources)}
    sink_index = {v: i for i, v in enumerate(sinks)}
    paths = sorted(engine.paths(), key=lambda p: source_index[p.source])
    system = PathSystem(
        pairs=tuple((p.source, p.sink) for p in paths),
        paths=tuple(paths),
        permutation={source_index[p.source]: sink_index[p.sink] for p in paths},
    )
    if value >= target_k:
        return system

    cut = engine.min_cut()
    logger.debug(f"only {value} of {target_k} disjoint paths; cut {members(cut)}")
    return FlowDeficit(requested=target_k, count=value, cut=cut, partial=system)


def min_vertex_cut(D, sources: Sequence[int], sinks: Sequence[int]) -> VertexSet:
    """A smallest vertex set (possibly containing terminals) meeting every source-to-sink dipath."""
    D = as_view(D)
    sources = _check_terminals(D, sources, "sources")
    sinks = _check_terminals(D, sinks, "sinks")
    if set(sources) & set(sinks):
        raise InputError(f"sources and sinks overlap on {sorted(set(sources) & set(sinks))}")
    engine = DisjointPathEngine(D.out_masks, D.alive, vertex_set(sources), vertex_set(sinks))
    engine.run()
    return engine.min_cut()


def local_connectivity(D, x: int, y: int, limit: int | None = None) -> ConnectivityResult:
    """
    The number of internally disjoint x -> y dipaths and, for x -/-> y, a minimum
    separator of that size. With `limit`, counting stops there and no separator is
    returned when the limit is reached.
    """
    D = as_view(D)
    x, y = _check_terminals(D, (x, y), "endpoints")
    if x == y:
        raise InputError(f"local connectivity needs two distinct vertices, got {x} twice")
    if D.arc(x, y):
        # no set of vertices separates an arc; reported as the largest possible value
        return ConnectivityResult(D.order() - 1, None, (x, y))

    inner = D.alive & ~(1 << x | 1 << y)
    engine = DisjointPathEngine(D.out_masks, inner, D.out_masks[x], D.in_masks[y])
    engine.seed_trivial_paths(limit)
    value = engine.run(limit)
    if limit is not None and value >= limit:
        return ConnectivityResult(value, None, (x, y))
    return ConnectivityResult(value, engine.min_cut(), (x, y))


# ------------------------------
# Strong connectivity
# ------------------------------
def _non_arcs_from(D: DigraphView, v: int):
    """Ordered non-adjacent pairs involving v, against the other alive vertices in ascending order."""
    for w in members(D.alive & ~(1 << v)):
        if not D.out_masks[v] >> w & 1:
            yield v, w
        if not D.out_masks[w] >> v & 1:
            yield w, v


def vertex_connectivity(D) -> ConnectivityResult:
    """
    kappa(D) with a separator of that size and the pair it separates.

    Any minimum separator misses one of the first kappa+1 vertices, so pairs
    through those vertices suffice.
    """
    D = as_view(D)
    alive = members(D.alive)
    m = len(alive)
    if m <= 1:
        return ConnectivityResult(0, 0, None)

    best = m - 1
    separator = None
    pair = None
    for processed, v in enumerate(alive):
        if processed > best:
            break
        for x, y in _non_arcs_from(D, v):
            result = local_connectivity(D, x, y, limit=best)
            if result.separator is not None and result.count < best:
                best, separator, pair = result.count, result.separator, (x, y)
                if best == 0:
                    return ConnectivityResult(0, separator, pair)

    return ConnectivityResult(best, separator, pair)


def is_k_connected(D, k: int) -> bool:
    D = as_view(D)
    if k <= 0:
        return True
    if D.order() < k + 1:
        return False
    for v in members(D.alive)[:k]:
        for x, y in _non_arcs_from(D, v):
            if local_connectivity(D, x, y, limit=k).count < k:
                logger.debug(f"pair ({x},{y}) has fewer than {k} disjoint paths")
                return False
    return True


# ------------------------------
# Bipartite matching
# ------------------------------
def matching_with_deficiency(x_size: int, z_size: int, edges) -> DeficiencyMatching:
    """
    Maximum matching between X and Z, its deficiency d = |X| - |M| and a set S of X
    with |N(S)| = |S| - d witnessing that no larger matching exists.
    """
    graph = BipartiteGraph(x_size, z_size, edges)
    solver = HopcroftKarp(graph)
    matching = solver()
    S, neighborhood = solver.alternating_reach()
    d = S.bit_count() - neighborhood.bit_count()
    if len(matching) != x_size - d:
        raise PreconditionViolation(
            f"matching of size {len(matching)} disagrees with deficiency witness d={d}",
            step="matching_with_deficiency",
            inequality="|M| = |X| - (|S| - |N(S)|)",
        )
    return DeficiencyMatching(tuple(matching), S, neighborhood, d, x_size, z_size)
