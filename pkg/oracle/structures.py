from dataclasses import dataclass

# Violation kinds
DISJOINTNESS = "disjointness"
ENDPOINT = "endpoint"
MISSING_ARC = "missing-arc"
MEMBERSHIP = "membership"

KIND_CHOICES = [
    (DISJOINTNESS, "Paths share a vertex"),
    (ENDPOINT, "Path does not run between its expected endpoints"),
    (MISSING_ARC, "Consecutive vertices are not joined by an arc"),
    (MEMBERSHIP, "Vertex outside the tournament"),
]


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"
