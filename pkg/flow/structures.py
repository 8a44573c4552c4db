from dataclasses import dataclass, field

from core.exceptions import InputError
from core.structures import Dipath, Tournament, VertexSet


@dataclass(frozen=True)
class DigraphView:
    """
    A tournament with some vertices deleted (T - B, or T minus a separator candidate).
    Arc queries never see deleted vertices.
    """

    n: int
    out_masks: tuple[int, ...]
    in_masks: tuple[int, ...]
    alive: VertexSet

    @classmethod
    def of(cls, T: Tournament, deleted: VertexSet = 0) -> "DigraphView":
        alive = T.vertices & ~deleted
        return cls(T.n, T.out_masks, T.in_masks, alive)

    @property
    def deleted(self) -> VertexSet:
        return ((1 << self.n) - 1) & ~self.alive

    def delete(self, vertices: VertexSet) -> "DigraphView":
        return DigraphView(self.n, self.out_masks, self.in_masks, self.alive & ~vertices)

    def out(self, v: int) -> VertexSet:
        if not self.alive >> v & 1:
            return 0
        return self.out_masks[v] & self.alive

    def inn(self, v: int) -> VertexSet:
        if not self.alive >> v & 1:
            return 0
        return self.in_masks[v] & self.alive

    def arc(self, u: int, v: int) -> bool:
        return bool(self.alive >> u & 1 and self.alive >> v & 1 and self.out_masks[u] >> v & 1)

    def order(self) -> int:
        return self.alive.bit_count()


@dataclass(frozen=True)
class PathSystem:
    """
    One dipath per (source, sink) pair. `permutation` maps a source index to the
    sink index it was paired with when the endpoints were given set-to-set.
    Validity (disjointness, arcs, endpoints) is certified by the oracle validator.
    """

    pairs: tuple[tuple[int, int], ...]
    paths: tuple[Dipath, ...]
    permutation: dict[int, int] | None = field(default=None, compare=True)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(s), int(t)) for s, t in self.pairs))
        object.__setattr__(self, "paths", tuple(p if isinstance(p, Dipath) else Dipath(tuple(p)) for p in self.paths))
        if len(self.pairs) != len(self.paths):
            raise InputError(f"{len(self.pairs)} pairs but {len(self.paths)} paths")

    def __len__(self):
        return len(self.paths)

    def vertices(self) -> VertexSet:
        mask = 0
        for path in self.paths:
            for v in path:
                mask |= 1 << v
        return mask


@dataclass(frozen=True)
class FlowDeficit:
    """Fewer than the requested disjoint paths exist; `cut` meets every source-to-sink dipath."""

    requested: int
    count: int
    cut: VertexSet
    partial: PathSystem


@dataclass(frozen=True)
class ConnectivityResult:
    count: int
    separator: VertexSet | None
    pair: tuple[int, int] | None


@dataclass(frozen=True)
class DeficiencyMatching:
    matching: tuple[tuple[int, int], ...]
    S: VertexSet
    neighborhood: VertexSet
    d: int
    x_size: int
    z_size: int

    def partner_of_x(self) -> dict[int, int]:
        return {x: z for x, z in self.matching}

    def partner_of_z(self) -> dict[int, int]:
        return {z: x for x, z in self.matching}
