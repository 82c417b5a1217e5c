from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from .hyperbolic import generated_cone, hyperbolicity_cone, orthant
from .models import (
    CapacityResult,
    ConeSpec,
    LorentzClass,
    SampledVerdict,
    SignatureReport,
)
from .numeric import Rows, as_rows, format_scalar, to_vector
from .poly import MultiPoly
from .spectra import classify

# exact values travel as "p/q" strings, floats as JSON numbers
JsonScalar = Union[int, float, str]


def dump_rows(rows: Rows) -> List[List[JsonScalar]]:
    return [[format_scalar(v) for v in row] for row in rows]


# inputs


class TermIn(BaseModel):
    exp: List[int]
    coef: JsonScalar


class PolynomialIn(BaseModel):
    nvars: int = Field(ge=1)
    terms: List[TermIn] = []

    def to_poly(self, exact: bool) -> MultiPoly:
        return MultiPoly(self.nvars, [(t.exp, t.coef) for t in self.terms], exact)

    @classmethod
    def from_poly(cls, f: MultiPoly) -> "PolynomialIn":
        return cls(
            nvars=f.nvars,
            terms=[
                TermIn(exp=list(t.exponents), coef=format_scalar(t.coefficient))
                for t in f.terms()
            ],
        )


class MatrixIn(BaseModel):
    rows: List[List[JsonScalar]]

    def to_rows(self, exact: bool) -> Rows:
        return as_rows(self.rows, exact)[0]


class WeightedMatrixIn(MatrixIn):
    multiplicity: int = Field(1, ge=0)


class MixedDiscIn(BaseModel):
    matrices: List[WeightedMatrixIn] = Field(min_length=1)

    def to_matrices(self, exact: bool) -> List[Rows]:
        return [m.to_rows(exact) for m in self.matrices]

    @property
    def multiplicities(self) -> List[int]:
        return [m.multiplicity for m in self.matrices]


class OrthantConeIn(BaseModel):
    variant: Literal["orthant"]
    n: int = Field(ge=1)

    def to_cone(self, exact: bool, seed: Optional[int] = None) -> ConeSpec:
        return orthant(self.n, seed)


class GeneratorConeIn(BaseModel):
    variant: Literal["generators"]
    generators: List[List[JsonScalar]] = Field(min_length=1)

    def to_cone(self, exact: bool, seed: Optional[int] = None) -> ConeSpec:
        return generated_cone([to_vector(g, False) for g in self.generators], seed)


class HyperbolicityConeIn(BaseModel):
    variant: Literal["hyperbolicity"]
    poly: PolynomialIn
    direction: List[JsonScalar]

    def to_cone(self, exact: bool, seed: Optional[int] = None) -> ConeSpec:
        f = self.poly.to_poly(exact)
        return hyperbolicity_cone(
            f, to_vector(self.direction, exact), validate=True, seed=seed
        )


ConeIn = Annotated[
    Union[OrthantConeIn, GeneratorConeIn, HyperbolicityConeIn],
    Field(discriminator="variant"),
]


class CapacityIn(BaseModel):
    polynomial: PolynomialIn
    cone: Optional[ConeIn] = None


# responses


class SignatureOut(BaseModel):
    lorentz_class: LorentzClass = Field(alias="class")
    inertia: List[int]
    eigenvalues: List[float]
    tolerance: float

    model_config = ConfigDict(populate_by_name=True)

    @classmethod
    def build(cls, report: SignatureReport) -> "SignatureOut":
        return cls(
            lorentz_class=classify(report),
            inertia=list(report.inertia),
            eigenvalues=list(report.eigenvalues),
            tolerance=report.tolerance,
        )


class PermanentOut(BaseModel):
    value: JsonScalar
    method: str
    diagnostics: Dict[str, Any] = {}


class CapacityOut(BaseModel):
    value: Optional[float]
    log_value: Optional[float]
    argmin: List[float]
    iterations: int
    starts: int
    converged: bool
    feasible: bool
    upper_bound: bool

    model_config = ConfigDict(from_attributes=True)

    @classmethod
    def build(cls, result: CapacityResult) -> "CapacityOut":
        out = cls.model_validate(result)
        if not result.feasible:
            out = out.model_copy(update={"value": None, "log_value": None})
        return out


class HyperbolicOut(BaseModel):
    holds: bool
    n_samples: int
    seed: int
    witness: Optional[List[float]] = None
    reason: str = ""
    in_cone: Optional[bool] = None

    model_config = ConfigDict(from_attributes=True)

    @classmethod
    def build(
        cls, verdict: SampledVerdict, in_cone: Optional[bool] = None
    ) -> "HyperbolicOut":
        out = cls.model_validate(verdict)
        return out.model_copy(update={"in_cone": in_cone})


class MixedDiscOut(BaseModel):
    value: JsonScalar
    via_coefficients: Optional[JsonScalar] = None
    agree: Optional[bool] = None


class NestedValueOut(BaseModel):
    k: int
    per: str


class GnkOut(BaseModel):
    n: int
    k: Optional[int] = None
    per: Optional[str] = None
    matrix: Optional[List[List[str]]] = None
    guaranteed_positive: Optional[bool] = None
    reason: Optional[str] = None
    nested: Optional[List[NestedValueOut]] = None
    nested_holds: Optional[bool] = None
