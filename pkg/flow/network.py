"""
Vertex-disjoint path packing by augmenting paths (Edmonds-Karp on the split network).

Every vertex v is split into v_in -> v_out with capacity one; arcs u_out -> w_in,
the super-source edges and the super-sink edges are uncapacitated. The split
network is never materialised: flow is kept as `succ` / `pred` links between
vertices and the residual graph is explored with bitmask frontiers.
"""

import logging
from collections import deque

from core.structures import Dipath, VertexSet
from core.utils import members

logger = logging.getLogger(__name__)

SOURCE = -1
SINK = -2

IN, OUT = 0, 1


class DisjointPathEngine:
    def __init__(self, out_masks: tuple[int, ...], alive: VertexSet, sources: VertexSet, sinks: VertexSet):
        self.out_masks = out_masks
        self.alive = alive
        self.sources = sources & alive
        self.sinks = sinks & alive
        self.succ: dict[int, int] = {}
        self.pred: dict[int, int] = {}
        self.value = 0
        self.visited_in = 0
        self.visited_out = 0

    def seed_trivial_paths(self, limit: int | None = None) -> None:
        """Route every vertex that is both a source and a sink as a one-vertex path."""
        for v in members(self.sources & self.sinks):
            if limit is not None and self.value >= limit:
                return
            if v not in self.pred:
                self.pred[v] = SOURCE
                self.succ[v] = SINK
                self.value += 1

    def _search(self):
        """
        Breadth-first search of the residual graph from the super source.
        Returns the sink-side vertex whose out-node reached the super sink, or None.
        """
        parent_in: dict[int, tuple[str, int]] = {}
        parent_out: dict[int, tuple[str, int]] = {}
        visited_in = 0
        visited_out = 0
        queue = deque()

        for x in members(self.sources):
            visited_in |= 1 << x
            parent_in[x] = ("source", x)
            queue.append((IN, x))

        found = None
        while queue:
            side, v = queue.popleft()
            if side == IN:
                p = self.pred.get(v)
                if p is None:
                    # v is unused: cross the split edge
                    if not visited_out >> v & 1:
                        visited_out |= 1 << v
                        parent_out[v] = ("split", v)
                        queue.append((OUT, v))
                elif p != SOURCE and not visited_out >> p & 1:
                    # push back the flow on p -> v
                    visited_out |= 1 << p
                    parent_out[p] = ("cancel", v)
                    queue.append((OUT, p))
                continue

            if self.sinks >> v & 1 and self.succ.get(v) != SINK:
                found = v
                break

            fresh = self.out_masks[v] & self.alive & ~visited_in
            for w in members(fresh):
                parent_in[w] = ("arc", v)
                queue.append((IN, w))
            visited_in |= fresh

            if v in self.pred and not visited_in >> v & 1:
                # v carries flow: undo its split edge
                visited_in |= 1 << v
                parent_in[v] = ("unsplit", v)
                queue.append((IN, v))

        self.visited_in = visited_in
        self.visited_out = visited_out
        return found, parent_in, parent_out

    def _augment(self, last: int, parent_in, parent_out) -> None:
        cancels: list[tuple[int, int]] = []
        adds: list[tuple[int, int]] = [(last, SINK)]

        side, v = OUT, last
        while True:
            if side == OUT:
                kind, w = parent_out[v]
                if kind == "cancel":
                    cancels.append((v, w))
                    side, v = IN, w
                else:
                    side = IN
            else:
                kind, u = parent_in[v]
                if kind == "source":
                    adds.append((SOURCE, v))
                    break
                if kind == "arc":
                    adds.append((u, v))
                    side, v = OUT, u
                else:
                    side = OUT

        for u, w in cancels:
            del self.succ[u]
            del self.pred[w]
        for u, w in adds:
            if u == SOURCE:
                self.pred[w] = SOURCE
            elif w == SINK:
                self.succ[u] = SINK
            else:
                self.succ[u] = w
                self.pred[w] = u
        self.value += 1

    def run(self, limit: int | None = None) -> int:
        """Augment until no augmenting path is left or `limit` paths are routed."""
        while limit is None or self.value < limit:
            found, parent_in, parent_out = self._search()
            if found is None:
                return self.value
            self._augment(found, parent_in, parent_out)
        return self.value

    def min_cut(self) -> VertexSet:
        """
        After a run that stopped without augmenting path: vertices whose in-node is
        reachable and whose out-node is not. Every source-to-sink dipath meets it.
        """
        self._search()
        return self.visited_in & ~self.visited_out

    def paths(self) -> list[Dipath]:
        out = []
        for x in members(self.sources):
            if self.pred.get(x) != SOURCE:
                continue
            walk = [x]
            while self.succ[walk[-1]] != SINK:
                walk.append(self.succ[walk[-1]])
            out.append(Dipath(tuple(walk)))
        return out
