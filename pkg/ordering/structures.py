from dataclasses import dataclass

# Clause names of the interval-domination property
DOMINATES = "dominates"      # perm[i] out-dominates >= ceil((j-i)/2) of perm[i+1..j]
DOMINATED = "dominated"      # perm[j] is in-dominated by >= ceil((j-i)/2) of perm[i..j-1]


@dataclass(frozen=True)
class Ordering:
    perm: tuple[int, ...]
    forward_arcs: int

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(int(v) for v in self.perm))

    def __len__(self):
        return len(self.perm)

    def first(self, k: int) -> tuple[int, ...]:
        return self.perm[:k]

    def last_reversed(self, k: int) -> tuple[int, ...]:
        """perm[n-1], perm[n-2], ..., perm[n-k]: the order in which the anchored side is indexed."""
        return tuple(reversed(self.perm[len(self.perm) - k:]))


@dataclass(frozen=True)
class IntervalViolation:
    i: int
    j: int
    clause: str
    count: int
    required: int

    def __str__(self):
        return f"({self.i},{self.j}) {self.clause}: {self.count} < {self.required}"
