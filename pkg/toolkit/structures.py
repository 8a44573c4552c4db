from dataclasses import dataclass

# Generator models
RANDOM = "random"
TRANSITIVE = "transitive"
ROTATIONAL_QR = "rotational-qr"
BLOCKS = "blocks"

MODEL_CHOICES = [
    (RANDOM, "Random (one seeded bit per pair)"),
    (TRANSITIVE, "Transitive (i -> j iff i < j)"),
    (ROTATIONAL_QR, "Rotational quadratic residue"),
    (BLOCKS, "Two blocks, block 1 dominating block 2"),
]

INNER_CHOICES = [
    (RANDOM, "Random"),
    (TRANSITIVE, "Transitive"),
]


@dataclass(frozen=True)
class GenSpec:
    model: str
    n: int
    seed: int = 0
    split: int | None = None
    inner: str = RANDOM
