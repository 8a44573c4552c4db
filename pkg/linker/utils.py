"""
Linking k terminal pairs in a highly connected tournament of large minimum
out-degree: peel k* low-degree pairs, anchor inside the peeled v's, reach the
anchors from X0 by paths of length at most 4 and the targets by Menger in T - B.
"""

import logging

from django.conf import settings

from anchor.structures import AnchorCertificate, Escalation
from anchor.utils import anchor_threshold, find_anchored_candidate, route
from core.exceptions import HypothesisViolation, InputError, PreconditionViolation
from core.structures import Dipath, Tournament, VertexSet
from core.utils import (
    check_terminal_tuples,
    induced,
    members,
    min_out_degree,
    min_out_degree_within,
    smallest,
    vertex_set,
)
from flow.structures import DigraphView, FlowDeficit, PathSystem
from flow.utils import is_k_connected, matching_with_deficiency, max_disjoint_paths, vertex_connectivity
from oracle.utils import validate_path_system
from ordering.structures import Ordering

from .structures import ForbiddenSet, LinkerTrace, LinkOptions, PeelRecord

logger = logging.getLogger(__name__)


def thresholds(k: int) -> tuple[int, int, int]:
    """(ceil(12.5k - 6), 21k - 14, ceil(8.5k - 6))"""
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    return (25 * k - 12 + 1) // 2, 21 * k - 14, anchor_threshold(k)


def check_hypotheses(T: Tournament, k: int) -> dict:
    conn, deg, _ = thresholds(k)
    _, delta = min_out_degree(T)
    connected = is_k_connected(T, conn)
    report = {
        "k": k,
        "connectivity": {"required": conn, "holds": connected},
        "min_out_degree": {"required": deg, "observed": delta, "holds": delta >= deg},
    }
    failed = []
    if not connected:
        # exact value only on failure
        kappa = vertex_connectivity(T)
        report["connectivity"].update(
            observed=kappa.count,
            separator=list(members(kappa.separator or 0)),
            pair=list(kappa.pair) if kappa.pair else None,
        )
        failed.append(f"kappa(T) = {kappa.count} < {conn}")
    if delta < deg:
        failed.append(f"delta+(T) = {delta} < {deg}")
    if failed:
        report["failed"] = [name for name in ("connectivity", "min_out_degree") if not report[name]["holds"]]
        raise HypothesisViolation(f"hypotheses fail for k={k}: {'; '.join(failed)}", report)
    logger.info(f"hypotheses hold for k={k}: kappa >= {conn}, delta+ = {delta}")
    return report


def _should_check(T: Tournament, options: LinkOptions) -> bool:
    if options.check_hypotheses is not None:
        return options.check_hypotheses
    limit = getattr(settings, "HYPOTHESIS_CHECK_MAX_N", 300)
    if T.n <= limit:
        return True
    logger.warning(f"skipping the connectivity and out-degree check for n={T.n} (above {limit})")
    return False


# ------------------------------
# Peeling and successors
# ------------------------------
def peel(T: Tournament, X0, Y0, k_star: int, floor: int | None = None) -> list[PeelRecord]:
    """
    Remove k_star pairs D_i = {u_i, v_i} from T - X0 - Y0, smallest id on ties.
    `floor`, when given, is a lower bound every residual minimum out-degree must meet.
    """
    X0, Y0 = check_terminal_tuples(T, X0, Y0)
    remaining = T.vertices & ~vertex_set(X0 + Y0)
    records = []
    for i in range(k_star):
        best = min_out_degree_within(T, remaining)
        if best is None or best[1] == 0:
            raise PreconditionViolation(
                f"residual tournament before step {i} has no vertex with an out-neighbour",
                step="peel",
                inequality="delta+(T_{i-1}) > 0",
            )
        u, d = best
        if floor is not None and d < floor:
            raise PreconditionViolation(
                f"residual minimum out-degree {d} before step {i} is below {floor}",
                step="peel",
                inequality="delta+(T_{i-1}) >= 21k - 14 - 2k - 2k*",
            )

        neighbourhood = T.out_masks[u] & remaining
        v, a = min_out_degree_within(T, neighbourhood)
        A = T.out_masks[v] & neighbourhood
        if 2 * a > d - 1:
            raise PreconditionViolation(
                f"|A_{i}| = {a} exceeds ({d} - 1)/2",
                step="peel",
                inequality="|A_i| <= (d+(u_i) - 1)/2",
            )
        records.append(PeelRecord(i, u, v, A, d))
        logger.debug(f"peel {i}: u={u} v={v} d+={d} |A|={a}")
        remaining &= ~(1 << u | 1 << v)
    return records


def select_successors(T: Tournament, X0, forbidden: VertexSet) -> tuple[int, ...]:
    """Distinct x_i' with x_i -> x_i' outside `forbidden`, chosen in index order by smallest id."""
    taken = forbidden | vertex_set(X0)
    chosen = []
    for x in X0:
        pool = T.out_masks[x] & ~taken
        if not pool:
            raise PreconditionViolation(
                f"{x} has no free out-neighbour for its successor",
                step="select_successors",
                inequality="d+_{T*}(x_i) >= k",
            )
        successor = smallest(pool, 1)[0]
        chosen.append(successor)
        taken |= 1 << successor
    return tuple(chosen)


def build_shrunk_bipartite(T: Tournament, X1, alpha_pairs) -> list[tuple[int, int]]:
    """Edge (i, j) iff X1[i] dominates u or v of the j-th anchored pair."""
    edges = []
    for i, x in enumerate(X1):
        for j, (u, v) in enumerate(alpha_pairs):
            if T.out_masks[x] & (1 << u | 1 << v):
                edges.append((i, j))
    return edges


def forbidden_set(T: Tournament, trace: LinkerTrace, i: int) -> ForbiddenSet:
    """
    F_i = X0 + Y0 + (D_j, j < alpha_i) + U~ + V~ + X1 + A_{alpha_i} for a deficient
    index i, where U~ holds the u's of the matched neighbourhood N(S) and V~ the
    v's peeled after alpha_i.
    """
    alpha = trace.alpha[trace.assignment[i]]
    before = 0
    for record in trace.peels[:alpha]:
        before |= record.D
    terminals = vertex_set(trace.X0 + trace.Y0)
    u_tilde = vertex_set(trace.peels[trace.alpha[j]].u for j in members(trace.matching.neighborhood))
    v_tilde = vertex_set(record.v for record in trace.peels[alpha + 1:])
    mask = terminals | before | u_tilde | v_tilde | vertex_set(trace.X1) | trace.peels[alpha].A

    out = T.out_masks[trace.X1[i]]
    return ForbiddenSet(
        mask=mask,
        gamma=(out & terminals).bit_count(),
        tau=(out & before).bit_count(),
        available=(out & ~mask).bit_count(),
    )


# ------------------------------
# Pipeline
# ------------------------------
def _bfs_path(T: Tournament, x: int, y: int) -> Dipath:
    parent = {x: None}
    seen = 1 << x
    frontier = [x]
    while frontier and y not in parent:
        nxt = []
        for u in frontier:
            for w in members(T.out_masks[u] & ~seen):
                parent[w] = u
                seen |= 1 << w
                nxt.append(w)
        frontier = nxt
    if y not in parent:
        raise PreconditionViolation(f"{y} is unreachable from {x}", step="link", inequality="kappa(T) >= 1")
    walk = [y]
    while parent[walk[-1]] is not None:
        walk.append(parent[walk[-1]])
    return Dipath(tuple(reversed(walk)))


def _tail(T: Tournament, w: int, u: int, v: int) -> tuple[int, ...] | None:
    """w -> v when that arc exists, otherwise w -> u -> v."""
    if T.out_masks[w] >> v & 1:
        return (v,)
    if T.out_masks[w] >> u & 1:
        return (u, v)
    return None


def _lift_certificate(cert: AnchorCertificate, index_map) -> AnchorCertificate:
    ordering = None
    if cert.ordering is not None:
        ordering = Ordering(tuple(index_map[v] for v in cert.ordering.perm), cert.ordering.forward_arcs)
    return AnchorCertificate(
        kind=cert.kind,
        A=tuple(index_map[a] for a in cert.A),
        B=tuple(index_map[b] for b in cert.B),
        ordering=ordering,
        Z=tuple(index_map[z] for z in cert.Z),
        threshold=cert.threshold,
    )


def _match(T: Tournament, trace: LinkerTrace) -> None:
    k = trace.k
    pairs = [(trace.peels[a].u, trace.peels[a].v) for a in trace.alpha]
    result = matching_with_deficiency(k, k, build_shrunk_bipartite(T, trace.X1, pairs))
    partner = result.partner_of_x()
    z_taken = result.partner_of_z()

    deficient = [i for i in range(k) if i not in partner]
    free_z = [j for j in range(k) if j not in z_taken]
    inside = [i for i in members(result.S) if i in partner]
    outside = [i for i in range(k) if i in partner and not result.S >> i & 1]
    if any(not result.S >> i & 1 for i in deficient):
        raise PreconditionViolation(
            "an unmatched successor lies outside the deficiency witness",
            step="match",
            inequality="X1 - V(M) ⊆ S",
        )

    # pairs outside N(S) dominate every successor in S
    S_vertices = vertex_set(trace.X1[i] for i in members(result.S))
    for j in range(k):
        if result.neighborhood >> j & 1:
            continue
        A = trace.peels[trace.alpha[j]].A
        if S_vertices & ~A:
            raise PreconditionViolation(
                f"successors {members(S_vertices & ~A)} are not in A_{trace.alpha[j]}",
                step="match",
                inequality="S ⊆ A_{alpha_j}",
            )

    assignment = dict(partner)
    assignment.update(zip(deficient, free_z))
    trace.matching = result
    trace.d = result.d
    trace.s = result.S.bit_count()
    trace.relabel = tuple(deficient + inside + outside)
    trace.assignment = tuple(assignment[i] for i in range(k))
    logger.debug(f"matching of size {len(result.matching)}, d={trace.d}, s={trace.s}")


def _short_paths(T: Tournament, trace: LinkerTrace) -> None:
    """Q_i from x_i to the v of its assigned pair, through x_i' (and x_i'' when deficient)."""
    k = trace.k
    Q: dict[int, Dipath] = {}
    chosen = 0
    for position, i in enumerate(trace.relabel):
        x, x1 = trace.X0[i], trace.X1[i]
        record = trace.peels[trace.alpha[trace.assignment[i]]]
        if position >= trace.d:
            tail = _tail(T, x1, record.u, record.v)
            if tail is None:
                raise PreconditionViolation(
                    f"matched successor {x1} dominates neither {record.u} nor {record.v}",
                    step="short_paths",
                    inequality="x_i' -> u or x_i' -> v",
                )
            Q[i] = Dipath((x, x1) + tail)
            continue

        ledger = forbidden_set(T, trace, i)
        trace.ledgers[i] = ledger
        alpha = trace.alpha[trace.assignment[i]]
        notes = []
        if ledger.gamma > 2 * k - 1:
            notes.append(f"gamma_{i} = {ledger.gamma} exceeds 2k - 1 = {2 * k - 1}")
        if ledger.tau > 2 * alpha:
            notes.append(f"tau_{i} = {ledger.tau} exceeds 2(alpha_i - 1) = {2 * alpha}")
        if ledger.available <= trace.d:
            notes.append(f"x_{i}' has {ledger.available} out-neighbours outside F_{i}, not more than d = {trace.d}")
        for note in notes:
            logger.warning(note)
        trace.notes.extend(notes)

        pool = T.out_masks[x1] & ~ledger.mask & ~chosen
        if not pool:
            raise PreconditionViolation(
                f"no second successor for {x1} outside F_{i}",
                step="short_paths",
                inequality="d+(x_i', V(T) - F_i) > d",
            )
        x2 = smallest(pool, 1)[0]
        chosen |= 1 << x2
        trace.second_successors[i] = x2
        tail = _tail(T, x2, record.u, record.v)
        if tail is None:
            raise PreconditionViolation(
                f"{x2} dominates neither {record.u} nor {record.v}",
                step="short_paths",
                inequality="x_i'' not in A_{alpha_i}",
            )
        Q[i] = Dipath((x, x1, x2) + tail)

    trace.Q = [Q[i] for i in range(k)]
    if any(q.length > 4 for q in trace.Q):
        raise PreconditionViolation("a short path is longer than 4", step="short_paths", inequality="|Q_i| <= 4")


def _blocked(trace: LinkerTrace) -> None:
    k, cert = trace.k, trace.certificate
    B = trace.V & ~(cert.A_set | cert.B_set)
    for q in trace.Q:
        B |= vertex_set(q.vertices)
    bound = 5 * k + (trace.k_star - 2 * k)
    if B.bit_count() > bound:
        raise PreconditionViolation(
            f"|B| = {B.bit_count()} exceeds {bound}",
            step="blocked_set",
            inequality="|B| <= 5k + (k* - 2k)",
        )
    trace.B_set = B


def _menger(T: Tournament, trace: LinkerTrace) -> None:
    k = trace.k
    view = DigraphView.of(T, deleted=trace.B_set)
    if trace.hypotheses is not None and not is_k_connected(view, k):
        raise PreconditionViolation(
            f"T - B is not {k}-connected",
            step="menger",
            inequality="kappa(T - B) >= k",
        )
    result = max_disjoint_paths(view, trace.certificate.B, trace.Y0, k)
    if isinstance(result, FlowDeficit):
        raise PreconditionViolation(
            f"only {result.count} of {k} disjoint paths from V2 to Y0 in T - B; cut {members(result.cut)}",
            step="menger",
            inequality="kappa(T - B) >= k",
        )
    trace.menger = result


def _route_through_anchor(T: Tournament, trace: LinkerTrace, sub: Tournament, index_map, cert: AnchorCertificate):
    """Steps from the anchor certificate to the assembled system; an Escalation aborts before assembly."""
    trace.reset_downstream()
    lifted = _lift_certificate(cert, index_map)
    peel_of = {record.v: record.i for record in trace.peels}
    trace.certificate = lifted
    trace.alpha = tuple(peel_of[a] for a in lifted.A)
    trace.beta = tuple(peel_of[b] for b in lifted.B)
    logger.info(f"{lifted.kind} anchor V1={lifted.A} V2={lifted.B}")

    _match(T, trace)
    _short_paths(T, trace)
    _blocked(trace)
    _menger(T, trace)

    # R leaves V2[b] towards y_{rho(b)}; the anchor must send alpha-position j to that b
    sink_to_source = {sink: source for source, sink in trace.menger.permutation.items()}
    owner = {j: i for i, j in enumerate(trace.assignment)}
    pi = tuple(sink_to_source[owner[j]] for j in range(trace.k))
    routed = route(sub, cert, pi)
    if isinstance(routed, Escalation):
        return routed

    trace.anchor_paths = PathSystem(
        pairs=tuple((index_map[s], index_map[t]) for s, t in routed.pairs),
        paths=tuple(Dipath(tuple(index_map[v] for v in p)) for p in routed.paths),
        permutation=routed.permutation,
    )
    r_from = {p.source: p for p in trace.menger.paths}
    paths = []
    for i in range(trace.k):
        j = trace.assignment[i]
        middle = trace.anchor_paths.paths[j]
        tail = r_from[lifted.B[pi[j]]]
        paths.append(trace.Q[i].then(middle).then(tail))
    return PathSystem(
        pairs=tuple(zip(trace.X0, trace.Y0)),
        paths=tuple(paths),
        permutation={i: i for i in range(trace.k)},
    )


def _finish(T: Tournament, trace: LinkerTrace, options: LinkOptions) -> tuple[PathSystem, LinkerTrace]:
    if options.validate:
        violations = validate_path_system(T, list(zip(trace.X0, trace.Y0)), trace.final)
        if violations:
            raise PreconditionViolation(
                "; ".join(str(v) for v in violations),
                step="assemble",
                inequality="pairwise disjoint x_i -> y_i dipaths",
            )
    logger.info(f"linked {trace.k} pairs with {trace.final.vertices().bit_count()} vertices")
    return trace.final, trace


def link(T: Tournament, X0, Y0, options: LinkOptions | None = None) -> tuple[PathSystem, LinkerTrace]:
    """k vertex-disjoint dipaths x_i -> y_i, with the trace of every intermediate object."""
    options = options or LinkOptions()
    X0, Y0 = check_terminal_tuples(T, X0, Y0)
    k = len(X0)
    _, deg, k_star = thresholds(k)
    if options.anchor_threshold is not None:
        k_star = options.anchor_threshold

    trace = LinkerTrace(k=k, k_star=k_star, X0=X0, Y0=Y0)
    if _should_check(T, options):
        trace.hypotheses = check_hypotheses(T, k)

    if k == 1:
        path = _bfs_path(T, X0[0], Y0[0])
        trace.final = PathSystem(pairs=((X0[0], Y0[0]),), paths=(path,), permutation={0: 0})
        trace.notes.append("single pair linked by breadth-first search")
        return _finish(T, trace, options)

    _, delta = min_out_degree(T)
    floor = deg - 2 * k - 2 * k_star if delta >= deg else None
    trace.peels = peel(T, X0, Y0, k_star, floor)
    trace.U = vertex_set(record.u for record in trace.peels)
    trace.V = vertex_set(record.v for record in trace.peels)
    logger.info(f"peeled {k_star} pairs; V={members(trace.V)}")

    sub, index_map = induced(T, trace.V)
    cert = find_anchored_candidate(sub, k, threshold=k_star)
    trace.X1 = select_successors(T, X0, vertex_set(X0 + Y0) | trace.U | trace.V)

    result = _route_through_anchor(T, trace, sub, index_map, cert)
    if isinstance(result, Escalation):
        trace.escalations = 1
        logger.info("anchor candidate stalled; restarting with its domination pair")
        result = _route_through_anchor(T, trace, sub, index_map, result.certificate)
        if isinstance(result, Escalation):
            raise PreconditionViolation(
                "domination certificate stalled",
                step="route",
                inequality="at most one escalation",
            )
    trace.final = result
    return _finish(T, trace, options)
