from dataclasses import dataclass, field

from core.structures import Dipath, VertexSet
from core.utils import vertex_set
from ordering.structures import Ordering

MEDIAN = "median"
DOMINATION = "domination"


@dataclass(frozen=True)
class AnchorCertificate:
    """
    Two disjoint k-tuples where A anchors B.

    MEDIAN: A is the first k of `ordering`, B its last k read backwards, Z the middle;
    anchoring is established route by route. DOMINATION: every arc goes from A to B.
    """

    kind: str
    A: tuple[int, ...]
    B: tuple[int, ...]
    ordering: Ordering | None = None
    Z: tuple[int, ...] = ()
    threshold: int | None = None

    @property
    def k(self) -> int:
        return len(self.A)

    @property
    def A_set(self) -> VertexSet:
        return vertex_set(self.A)

    @property
    def B_set(self) -> VertexSet:
        return vertex_set(self.B)

    @property
    def Z_set(self) -> VertexSet:
        return vertex_set(self.Z)


@dataclass(frozen=True)
class Stall:
    source: int
    target: int
    X_star: VertexSet
    Y_star: VertexSet


@dataclass(frozen=True)
class GreedyState:
    h: int
    paths: tuple[Dipath, ...]
    used: VertexSet
    Z: VertexSet
    stall: Stall | None = None

    @property
    def pool(self) -> VertexSet:
        return self.Z & ~self.used


@dataclass(frozen=True)
class Escalation:
    """A stalled greedy run, with the complete-domination pair extracted from the stall."""

    certificate: AnchorCertificate
    state: GreedyState = field(compare=False)
