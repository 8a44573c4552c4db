import logging

from core.exceptions import InputError, PreconditionViolation
from core.structures import Tournament
from core.utils import induced

from .structures import DOMINATED, DOMINATES, IntervalViolation, Ordering

logger = logging.getLogger(__name__)


def check_permutation(T: Tournament, perm) -> tuple[int, ...]:
    perm = tuple(int(v) for v in perm)
    if sorted(perm) != list(range(T.n)):
        raise InputError(f"order is not a permutation of the {T.n} vertices")
    return perm


def count_forward_arcs(T: Tournament, perm) -> int:
    placed = 0
    total = 0
    for v in perm:
        placed |= 1 << v
        total += (T.out_masks[v] & ~placed).bit_count()
    return total


def _prefixes(perm) -> list[int]:
    # prefix[t] is the vertex set of perm[:t]
    prefix = [0]
    for v in perm:
        prefix.append(prefix[-1] | 1 << v)
    return prefix


def _scan(T: Tournament, perm, start_j: int = 1, first_only: bool = False):
    """
    Yield interval violations ordered by smallest j, then smallest i,
    with the out-domination clause before the mirrored one.
    """
    prefix = _prefixes(perm)
    out_masks, in_masks = T.out_masks, T.in_masks
    for j in range(max(start_j, 1), len(perm)):
        tail_in = in_masks[perm[j]]
        for i in range(j):
            span = j - i
            required = (span + 1) // 2

            # perm[i] against perm[i+1..j]
            count = (out_masks[perm[i]] & (prefix[j + 1] ^ prefix[i + 1])).bit_count()
            if count < required:
                yield IntervalViolation(i, j, DOMINATES, count, required)
                if first_only:
                    return

            # perm[j] against perm[i..j-1]
            count = (tail_in & (prefix[j] ^ prefix[i])).bit_count()
            if count < required:
                yield IntervalViolation(i, j, DOMINATED, count, required)
                if first_only:
                    return


def check_interval_domination(T: Tournament, ordering: Ordering) -> list[IntervalViolation]:
    """Every (i, j, clause) breaking interval domination; empty means the order is locally median."""
    perm = check_permutation(T, ordering.perm)
    return list(_scan(T, perm))


def local_median_order(T: Tournament, seed_order: Ordering | None = None, max_repairs: int | None = None) -> Ordering:
    """
    Repair interval violations until none is left.

    Each repair moves the offending endpoint across its interval, which gains
    span - 2*count > 0 forward arcs, so at most n(n-1)/2 repairs happen.
    """
    n = T.n
    perm = list(check_permutation(T, seed_order.perm) if seed_order else range(n))
    forward = count_forward_arcs(T, perm)
    limit = n * (n - 1) // 2 if max_repairs is None else max_repairs

    repairs = 0
    start_j = 1
    while True:
        violation = next(_scan(T, perm, start_j=start_j, first_only=True), None)
        if violation is None:
            break
        if repairs >= limit:
            raise PreconditionViolation(
                f"local search exceeded {limit} repairs",
                step="local_median_order",
                inequality="repairs <= n(n-1)/2",
            )

        i, j = violation.i, violation.j
        if violation.clause == DOMINATES:
            perm.insert(j, perm.pop(i))
        else:
            perm.insert(i, perm.pop(j))

        gained = (j - i) - 2 * violation.count
        if gained <= 0:
            raise PreconditionViolation(
                f"repair at {violation} did not gain forward arcs",
                step="local_median_order",
                inequality="forward arcs strictly increase",
            )
        forward += gained
        repairs += 1
        # Intervals ending before position i are untouched by the move
        start_j = i

    logger.debug(f"local median order on n={n}: {repairs} repairs, {forward} forward arcs")
    return Ordering(tuple(perm), forward)


def restrict(T: Tournament, ordering: Ordering, i: int, j: int) -> tuple[Tournament, Ordering]:
    """The interval perm[i..j] as an ordering of the induced subtournament on its vertices."""
    if not 0 <= i <= j < len(ordering.perm):
        raise InputError(f"interval [{i}, {j}] outside an order of length {len(ordering.perm)}")
    window = ordering.perm[i:j + 1]
    sub, index_map = induced(T, sum(1 << v for v in window))
    local = {v: idx for idx, v in enumerate(index_map)}
    local_perm = tuple(local[v] for v in window)
    return sub, Ordering(local_perm, count_forward_arcs(sub, local_perm))
