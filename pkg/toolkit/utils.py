import logging

import numpy as np

from core.exceptions import InputError
from core.structures import Tournament

from .structures import BLOCKS, RANDOM, ROTATIONAL_QR, TRANSITIVE, GenSpec

logger = logging.getLogger(__name__)

# Named and versioned: the header of every generated file records it
GENERATOR = "seedseq-pair-v1"

SEED_MAX = 2**64 - 1


def pair_bit(seed: int, u: int, v: int) -> bool:
    """The orientation bit of the pair {u, v}: true means min(u, v) -> max(u, v)."""
    state = np.random.SeedSequence([seed, min(u, v), max(u, v)]).generate_state(1)[0]
    return bool(state & 1)


def _random_block(n: int, seed: int, offset: int = 0) -> np.ndarray:
    matrix = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if pair_bit(seed, i + offset, j + offset):
                matrix[i, j] = True
            else:
                matrix[j, i] = True
    return matrix


def _transitive_block(n: int) -> np.ndarray:
    return np.triu(np.ones((n, n), dtype=bool), k=1)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n**0.5) + 1))


def quadratic_residues(p: int) -> set[int]:
    return {x * x % p for x in range(1, p)}


def _rotational_qr(n: int) -> np.ndarray:
    if not is_prime(n) or n % 4 != 3:
        raise InputError(f"rotational-qr needs a prime n with n = 3 (mod 4), got {n}")
    residues = np.array(sorted(quadratic_residues(n)))
    idx = np.arange(n)
    diff = (idx[None, :] - idx[:, None]) % n
    return np.isin(diff, residues)


def provenance(spec: GenSpec) -> str:
    parts = [f"gen={GENERATOR}", f"model={spec.model}"]
    if spec.model in (RANDOM, BLOCKS):
        parts.append(f"seed={spec.seed}")
    if spec.model == BLOCKS:
        split = spec.split if spec.split is not None else spec.n // 2
        parts += [f"split={split}", f"inner={spec.inner}"]
    return " ".join(parts)


def generate(spec: GenSpec) -> Tournament:
    """Build the tournament a GenSpec describes; the seed fully determines random bits."""
    n = spec.n
    if n < 1:
        raise InputError(f"a tournament needs at least one vertex, got n={n}")
    if not 0 <= spec.seed <= SEED_MAX:
        raise InputError(f"seed {spec.seed} is not a 64-bit unsigned integer")

    if spec.model == RANDOM:
        matrix = _random_block(n, spec.seed)
    elif spec.model == TRANSITIVE:
        matrix = _transitive_block(n)
    elif spec.model == ROTATIONAL_QR:
        matrix = _rotational_qr(n)
    elif spec.model == BLOCKS:
        split = spec.split if spec.split is not None else n // 2
        if not 0 < split < n:
            raise InputError(f"block split {split} must leave both blocks nonempty for n={n}")
        matrix = np.zeros((n, n), dtype=bool)
        matrix[:split, split:] = True
        for start, stop in ((0, split), (split, n)):
            size = stop - start
            if spec.inner == TRANSITIVE:
                block = _transitive_block(size)
            else:
                block = _random_block(size, spec.seed, offset=start)
            matrix[start:stop, start:stop] = block
    else:
        raise InputError(f"unknown generator model {spec.model!r}")

    logger.debug(f"generated {spec.model} tournament on {n} vertices")
    return Tournament(matrix, provenance=provenance(spec))


def transitive(n: int) -> Tournament:
    return generate(GenSpec(TRANSITIVE, n))


def rotational_qr(n: int) -> Tournament:
    return generate(GenSpec(ROTATIONAL_QR, n))


def random_tournament(n: int, seed: int) -> Tournament:
    return generate(GenSpec(RANDOM, n, seed))
