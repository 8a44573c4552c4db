import logging
from itertools import permutations

from core.exceptions import InputError, PreconditionViolation
from core.structures import Dipath, Tournament, VertexSet
from core.utils import members, smallest, vertex_set
from flow.structures import PathSystem
from ordering.structures import Ordering
from ordering.utils import local_median_order

from .structures import DOMINATION, MEDIAN, AnchorCertificate, Escalation, GreedyState, Stall

logger = logging.getLogger(__name__)


def anchor_threshold(k: int) -> int:
    """ceil(8.5k - 6)"""
    return (17 * k - 12 + 1) // 2


def check_pi(pi, k: int) -> tuple[int, ...]:
    pi = tuple(int(i) for i in pi)
    if sorted(pi) != list(range(k)):
        raise InputError(f"{pi} is not a permutation of 0..{k - 1}")
    return pi


# ------------------------------
# Certificates
# ------------------------------
def find_anchored_candidate(
    T: Tournament, k: int, threshold: int | None = None, seed_order: Ordering | None = None
) -> AnchorCertificate:
    """
    A MEDIAN candidate from a local median order: A = v_1..v_k, B = v_n..v_{n-k+1}.
    Anchoring is settled lazily by `route`, which escalates on the first stall.
    """
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    required = anchor_threshold(k) if threshold is None else threshold
    if T.n < max(required, 2 * k):
        raise PreconditionViolation(
            f"n={T.n} is below the anchoring threshold {max(required, 2 * k)} for k={k}",
            step="find_anchored_candidate",
            inequality="n >= ceil(8.5k - 6)",
        )

    order = local_median_order(T, seed_order)
    perm = order.perm
    cert = AnchorCertificate(
        kind=MEDIAN,
        A=order.first(k),
        B=order.last_reversed(k),
        ordering=order,
        Z=perm[k:T.n - k],
        threshold=required,
    )
    logger.debug(f"median candidate for k={k}: A={cert.A} B={cert.B}")
    return cert


def check_degree_bounds(T: Tournament, cert: AnchorCertificate) -> None:
    """d+_Z(x_i) >= (n - 3k + i)/2 and d-_Z(y_i) >= (n - 3k + i)/2 for i = 1..k."""
    n, k, Z = T.n, cert.k, cert.Z_set
    for i in range(1, k + 1):
        x, y = cert.A[i - 1], cert.B[i - 1]
        for role, v, d in (("x", x, (T.out_masks[x] & Z).bit_count()), ("y", y, (T.in_masks[y] & Z).bit_count())):
            if 2 * d < n - 3 * k + i:
                raise PreconditionViolation(
                    f"{role}_{i}={v} has only {d} neighbours in Z",
                    step="route",
                    inequality=f"2 d_Z({role}_{i}) >= n - 3k + {i}",
                )


# ------------------------------
# Routing
# ------------------------------
def greedy_short_path(T: Tournament, src: int, dst: int, interior_pool: VertexSet) -> Dipath | None:
    """
    The shortest src -> dst dipath of length at most 3 with interior in the pool;
    length-2 ties go to the smallest interior id, length-3 ties to the
    lexicographically smallest interior pair.
    """
    if src == dst:
        raise InputError(f"source and target coincide at {src}")
    if interior_pool >> src & 1 or interior_pool >> dst & 1:
        raise InputError("the interior pool must exclude both endpoints")

    out_masks, in_masks = T.out_masks, T.in_masks
    if out_masks[src] >> dst & 1:
        return Dipath((src, dst))

    middle = out_masks[src] & in_masks[dst] & interior_pool
    if middle:
        return Dipath((src, smallest(middle, 1)[0], dst))

    for z1 in members(out_masks[src] & interior_pool):
        second = out_masks[z1] & in_masks[dst] & interior_pool & ~(1 << z1)
        if second:
            return Dipath((src, z1, smallest(second, 1)[0], dst))
    return None


def _route_domination(T: Tournament, cert: AnchorCertificate, pi) -> PathSystem:
    pairs = []
    for i, a in enumerate(cert.A):
        b = cert.B[pi[i]]
        if not T.out_masks[a] >> b & 1:
            raise PreconditionViolation(
                f"domination certificate is missing the arc {a} -> {b}",
                step="route",
                inequality="A => B",
            )
        pairs.append((a, b))
    return PathSystem(
        pairs=tuple(pairs),
        paths=tuple(Dipath(pair) for pair in pairs),
        permutation={i: pi[i] for i in range(cert.k)},
    )


def route(T: Tournament, cert: AnchorCertificate, pi) -> PathSystem | Escalation:
    """
    Disjoint dipaths a_i -> b_pi(i). MEDIAN certificates run the alternating greedy:
    odd steps take the lowest unused source, even steps the lowest unused target,
    and each path has length at most 3 with interior in Z minus used vertices.
    """
    k = cert.k
    pi = check_pi(pi, k)
    if cert.kind == DOMINATION:
        return _route_domination(T, cert, pi)

    check_degree_bounds(T, cert)
    pi_inverse = {target: i for i, target in enumerate(pi)}
    X, Y, Z = cert.A, cert.B, cert.Z_set

    found: dict[int, Dipath] = {}
    used = 0
    for step in range(1, k + 1):
        if step % 2:
            i = min(set(range(k)) - set(found))
        else:
            i = pi_inverse[min(set(range(k)) - {pi[j] for j in found})]
        src, dst = X[i], Y[pi[i]]

        path = greedy_short_path(T, src, dst, Z & ~used)
        if path is None:
            pool = Z & ~used
            stall = Stall(src, dst, T.out_masks[src] & pool, T.in_masks[dst] & pool)
            state = GreedyState(step - 1, tuple(found[j] for j in sorted(found)), used, Z, stall)
            logger.info(f"greedy stalled at step {step} between {src} and {dst}")
            return Escalation(extract_domination_pair(T, state, k), state)

        logger.debug(f"step {step}: {path.vertices}")
        found[i] = path
        used |= vertex_set(path.vertices)

    return PathSystem(
        pairs=tuple((X[i], Y[pi[i]]) for i in range(k)),
        paths=tuple(found[i] for i in range(k)),
        permutation={i: pi[i] for i in range(k)},
    )


def extract_domination_pair(T: Tournament, state: GreedyState, k: int) -> AnchorCertificate:
    """
    Turn a stall into a complete-domination pair. Nothing leaves X* + {source}
    towards Y* + {target}, so in a tournament every arc between them points back.
    """
    if state.stall is None:
        raise InputError("greedy state has no stall to extract from")
    if state.h > k - 1:
        raise PreconditionViolation(
            f"stall after {state.h} completed paths",
            step="extract_domination_pair",
            inequality="h <= k - 1",
        )

    src, dst = state.stall.source, state.stall.target
    pool = state.pool
    X_star = T.out_masks[src] & pool
    Y_star = T.in_masks[dst] & pool

    if X_star & Y_star:
        raise PreconditionViolation(
            f"X* and Y* share {members(X_star & Y_star)}",
            step="extract_domination_pair",
            inequality="X* ∩ Y* = ∅",
        )

    out_side = X_star | 1 << src
    in_side = Y_star | 1 << dst
    for u in members(out_side):
        if T.out_masks[u] & in_side:
            raise PreconditionViolation(
                f"arc from {u} into {members(T.out_masks[u] & in_side)}",
                step="extract_domination_pair",
                inequality="A(X* ∪ {x}, Y* ∪ {y}) = ∅",
            )

    if out_side.bit_count() < k or in_side.bit_count() < k:
        raise PreconditionViolation(
            f"sides of size {out_side.bit_count()} and {in_side.bit_count()} for k={k}",
            step="extract_domination_pair",
            inequality="(n - 6.5k + 4.5)/2 >= k - 1",
        )

    cert = AnchorCertificate(kind=DOMINATION, A=smallest(in_side, k), B=smallest(out_side, k))
    for a in cert.A:
        if T.out_masks[a] & cert.B_set != cert.B_set:
            raise PreconditionViolation(
                f"{a} does not dominate all of {cert.B}",
                step="extract_domination_pair",
                inequality="A => B",
            )
    logger.info(f"escalated to domination pair A={cert.A} B={cert.B}")
    return cert


def route_with_escalation(T: Tournament, cert: AnchorCertificate, pi) -> tuple[PathSystem, AnchorCertificate, int]:
    result = route(T, cert, pi)
    if not isinstance(result, Escalation):
        return result, cert, 0
    cert = result.certificate
    result = route(T, cert, pi)
    if isinstance(result, Escalation):
        raise PreconditionViolation(
            "domination certificate stalled",
            step="route_with_escalation",
            inequality="at most one escalation",
        )
    return result, cert, 1


def route_all_permutations(T: Tournament, cert: AnchorCertificate) -> tuple[AnchorCertificate, list[PathSystem]]:
    """Route every permutation, restarting the enumeration once if the candidate escalates."""
    systems = []
    for pi in permutations(range(cert.k)):
        system, final, escalations = route_with_escalation(T, cert, pi)
        if escalations:
            return final, [route(T, final, p) for p in permutations(range(cert.k))]
        systems.append(system)
    return cert, systems
