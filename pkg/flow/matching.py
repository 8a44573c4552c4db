"""
Hopcroft-Karp maximum matching on the shrunk bipartite graph, plus the
König-style witness of its deficiency.
"""

from collections import deque

from core.exceptions import InputError

NIL = -1


class BipartiteGraph:
    """X side indexed 0..x_size-1, Z side 0..z_size-1; adjacency kept sorted for determinism."""

    def __init__(self, x_size: int, z_size: int, edges):
        if x_size < 0 or z_size < 0:
            raise InputError(f"negative side size ({x_size}, {z_size})")
        self.x_size = x_size
        self.z_size = z_size
        adj_x = [set() for _ in range(x_size)]
        for x, z in edges:
            if not (0 <= x < x_size and 0 <= z < z_size):
                raise InputError(f"edge ({x},{z}) outside sides of size ({x_size}, {z_size})")
            adj_x[x].add(z)
        self.adj_x = [sorted(zs) for zs in adj_x]


class HopcroftKarp:
    def __init__(self, graph: BipartiteGraph):
        self.graph = graph
        self.match_x = [NIL] * graph.x_size
        self.match_z = [NIL] * graph.z_size
        self.dist: dict[int, int] = {}

    def _layer(self) -> bool:
        """BFS layering from the unmatched X vertices; True when some free Z is reachable."""
        queue = deque()
        infinite = self.graph.x_size + 1
        for x in range(self.graph.x_size):
            if self.match_x[x] == NIL:
                self.dist[x] = 0
                queue.append(x)
            else:
                self.dist[x] = infinite
        self.dist[NIL] = infinite
        while queue:
            x = queue.popleft()
            if self.dist[x] < self.dist[NIL]:
                for z in self.graph.adj_x[x]:
                    partner = self.match_z[z]
                    if self.dist[partner] == infinite:
                        self.dist[partner] = self.dist[x] + 1
                        queue.append(partner)
        return self.dist[NIL] != infinite

    def _augment(self, x: int) -> bool:
        if x == NIL:
            return True
        for z in self.graph.adj_x[x]:
            partner = self.match_z[z]
            if self.dist[partner] == self.dist[x] + 1 and self._augment(partner):
                self.match_z[z] = x
                self.match_x[x] = z
                return True
        self.dist[x] = self.graph.x_size + 1
        return False

    def __call__(self) -> list[tuple[int, int]]:
        while self._layer():
            for x in range(self.graph.x_size):
                if self.match_x[x] == NIL:
                    self._augment(x)
        return [(x, z) for x, z in enumerate(self.match_x) if z != NIL]

    def alternating_reach(self) -> tuple[int, int]:
        """
        X and Z vertices reachable from unmatched X vertices by alternating paths,
        as bitmasks. With a maximum matching, |S| - |N(S)| is the deficiency.
        """
        reach_x = 0
        reach_z = 0
        queue = deque(x for x in range(self.graph.x_size) if self.match_x[x] == NIL)
        for x in queue:
            reach_x |= 1 << x
        while queue:
            x = queue.popleft()
            for z in self.graph.adj_x[x]:
                if reach_z >> z & 1:
                    continue
                reach_z |= 1 << z
                partner = self.match_z[z]
                if partner != NIL and not reach_x >> partner & 1:
                    reach_x |= 1 << partner
                    queue.append(partner)
        return reach_x, reach_z
