import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .numeric import Scalar, SymMatrix
from .poly import MultiPoly


class LorentzClass(str, enum.Enum):
    NEGATIVE_SEMIDEFINITE = "NEGATIVE_SEMIDEFINITE"
    LORENTZIAN_STRICT = "LORENTZIAN_STRICT"
    LORENTZIAN = "LORENTZIAN"
    NOT_LORENTZIAN = "NOT_LORENTZIAN"


class ConeVariant(str, enum.Enum):
    ORTHANT = "orthant"
    GENERATORS = "generators"
    HYPERBOLICITY = "hyperbolicity"


class PermanentMethod(str, enum.Enum):
    RYSER = "ryser"
    NAIVE = "naive"
    DERIVATIVES = "derivatives"
    CAPACITY = "capacity"


@dataclass(frozen=True)
class SignatureReport:
    n_pos: int
    n_zero: int
    n_neg: int
    eigenvalues: Tuple[float, ...]
    tolerance: float

    @property
    def inertia(self) -> Tuple[int, int, int]:
        return self.n_pos, self.n_zero, self.n_neg

    @property
    def n(self) -> int:
        return self.n_pos + self.n_zero + self.n_neg


@dataclass(frozen=True)
class SlcReport:
    """The three equivalent strict log-concavity criteria at a point."""

    signature_strict: bool
    deflation_semidefinite: bool
    complement_negative_definite: bool

    @property
    def consistent(self) -> bool:
        return (
            self.signature_strict
            == self.deflation_semidefinite
            == self.complement_negative_definite
        )


@dataclass(frozen=True)
class RayleighViolation:
    point: Tuple[float, ...]
    alpha: Tuple[int, ...]
    i: int
    j: int
    lhs: float
    rhs: float


@dataclass(frozen=True)
class RootProfile:
    roots: Tuple[complex, ...]
    max_imag_ratio: float
    all_real: bool
    all_negative: bool

    @property
    def real_roots(self) -> Tuple[float, ...]:
        return tuple(sorted(r.real for r in self.roots))


@dataclass(frozen=True)
class SampledVerdict:
    """Outcome of a Monte-Carlo check, with the sample count and seed behind it."""

    holds: bool
    n_samples: int
    seed: int
    witness: Optional[Tuple[float, ...]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class ConeSpec:
    variant: ConeVariant
    n: int
    generators: Tuple[Tuple[float, ...], ...] = ()
    poly: Optional[MultiPoly] = None
    direction: Tuple[Scalar, ...] = ()
    seed: Optional[int] = None


@dataclass(frozen=True)
class ChainWitness:
    directions: Tuple[Tuple[float, ...], ...]
    inertia: Tuple[int, int, int]
    lorentz_class: LorentzClass
    contraction: Optional[float]
    reason: str


@dataclass(frozen=True)
class LorentzianReport:
    holds: bool
    strict: bool
    n_chains: int
    seed: int
    witnesses: Tuple[ChainWitness, ...] = ()
    negated: bool = False

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class NuijStep:
    s: float
    distance: float
    report: LorentzianReport


@dataclass(frozen=True)
class DetSumExpansion:
    direct: Scalar
    total: Scalar
    terms: Tuple[Tuple[Tuple[int, ...], Scalar], ...]


@dataclass(frozen=True)
class RankOneUpdate:
    lhs: Scalar
    rhs: Scalar
    via_mixed: Optional[Scalar]


@dataclass(frozen=True)
class CongruenceCheck:
    lhs: Scalar
    rhs: Scalar
    holds: bool


@dataclass(frozen=True)
class CapacityResult:
    value: float
    log_value: float
    argmin: Tuple[float, ...]
    iterations: int
    starts: int
    converged: bool
    feasible: bool
    # local descent only ever certifies an upper bound
    upper_bound: bool = True


@dataclass(frozen=True)
class CapacityAudit:
    f_at_ones: Scalar
    capacity: CapacityResult
    coefficient: Scalar
    violations: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class PositivityVerdict:
    guaranteed_positive: bool
    reason: str


@dataclass(frozen=True)
class NormalizedGnk:
    matrix: SymMatrix
    per: Fraction
