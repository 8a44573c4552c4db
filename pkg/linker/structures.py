from dataclasses import dataclass, field

from anchor.structures import AnchorCertificate
from core.structures import Dipath, VertexSet
from flow.structures import DeficiencyMatching, PathSystem


@dataclass(frozen=True)
class PeelRecord:
    """
    One peeling step on the residual tournament T_{i-1}: u has minimum out-degree
    there, v has minimum out-degree inside N+(u), A is their common out-neighbourhood.
    """

    i: int
    u: int
    v: int
    A: VertexSet
    degree: int

    @property
    def D(self) -> VertexSet:
        return 1 << self.u | 1 << self.v


@dataclass(frozen=True)
class ForbiddenSet:
    """F_i for a deficient index, with the out-degree ledger of x_i' against it."""

    mask: VertexSet
    gamma: int
    tau: int
    available: int


@dataclass(frozen=True)
class LinkOptions:
    # None: check when n <= HYPOTHESIS_CHECK_MAX_N
    check_hypotheses: bool | None = None
    anchor_threshold: int | None = None
    validate: bool = True


@dataclass
class LinkerTrace:
    """
    Everything one `link` run built, indexed by the original terminal index i.
    `alpha`/`beta` hold the peel steps of the anchoring tuples, `assignment[i]`
    the anchor position whose pair Q_i ends in, and `relabel` the order in which
    terminals were treated (deficient first, then matched inside S, then the rest).
    """

    k: int
    k_star: int
    X0: tuple[int, ...]
    Y0: tuple[int, ...]
    hypotheses: dict | None = None
    peels: list[PeelRecord] = field(default_factory=list)
    U: VertexSet = 0
    V: VertexSet = 0
    certificate: AnchorCertificate | None = None
    alpha: tuple[int, ...] = ()
    beta: tuple[int, ...] = ()
    X1: tuple[int, ...] = ()
    matching: DeficiencyMatching | None = None
    d: int = 0
    s: int = 0
    relabel: tuple[int, ...] = ()
    assignment: tuple[int, ...] = ()
    second_successors: dict[int, int] = field(default_factory=dict)
    ledgers: dict[int, ForbiddenSet] = field(default_factory=dict)
    Q: list[Dipath] = field(default_factory=list)
    B_set: VertexSet = 0
    menger: PathSystem | None = None
    anchor_paths: PathSystem | None = None
    final: PathSystem | None = None
    escalations: int = 0
    notes: list[str] = field(default_factory=list)

    def reset_downstream(self) -> None:
        """Forget everything that depends on the anchor certificate."""
        self.certificate = None
        self.alpha = self.beta = ()
        self.matching = None
        self.d = self.s = 0
        self.relabel = self.assignment = ()
        self.second_successors = {}
        self.ledgers = {}
        self.Q = []
        self.B_set = 0
        self.menger = self.anchor_paths = self.final = None
