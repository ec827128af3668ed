from sqlmodel import SQLModel, Field
from typing import Optional


# Non-persistent schemas: everything the library reports and the CLI serializes.
class CartanType(SQLModel, table=False):
    """Crystallographic type, e.g. family "E" and rank 6."""

    family: str = Field(min_length=1, max_length=1)
    rank: int = Field(ge=1)

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


class PolyPayload(SQLModel, table=False):
    """One-variable integer polynomial; coefficient keys are decimal exponents."""

    var: str = Field(default="t")
    coeffs: dict[str, int] = Field(default_factory=dict)


class Poly2Payload(SQLModel, table=False):
    """Two-variable integer polynomial; coefficient keys are "e1,e2"."""

    vars: list[str] = Field(default_factory=lambda: ["t1", "t2"])
    coeffs: dict[str, int] = Field(default_factory=dict)


class ElementPayload(SQLModel, table=False):
    """A Weyl group element as a reduced word and as the images of the simple roots."""

    word: str
    images: list[list[int]]
    length: int = Field(ge=0)


class ComponentPayload(SQLModel, table=False):
    nodes: list[str]
    cartan_type: str
    shape: str
    simply_laced: bool


class Violation(SQLModel, table=False):
    """One failed condition of the smoothness criterion."""

    kind: str
    node: Optional[str] = Field(default=None)
    component: list[str] = Field(default_factory=list)
    message: str


class SmoothnessVerdict(SQLModel, table=False):
    cartan_type: str
    J: list[str] = Field(default_factory=list)
    smooth: bool
    violations: list[Violation] = Field(default_factory=list)


class ClassificationComparison(SQLModel, table=False):
    """Classifier output against the tabulated classification for one type."""

    cartan_type: str
    only_in_table: list[list[str]] = Field(default_factory=list)
    only_in_classifier: list[list[str]] = Field(default_factory=list)
    matches: bool
    informative: bool = Field(default=False)


class SmoothSubsetRow(SQLModel, table=False):
    J: list[str]
    item: Optional[str] = Field(default=None)
    components: list[str] = Field(default_factory=list)
    quotient_size: int
    in_table: bool = Field(default=True)


class SmoothListReport(SQLModel, table=False):
    cartan_type: str
    subsets: list[SmoothSubsetRow] = Field(default_factory=list)
    comparison: ClassificationComparison


class QuotientReport(SQLModel, table=False):
    """Minimal coset representatives W^J."""

    cartan_type: str
    J: list[str] = Field(default_factory=list)
    size: int
    longest: ElementPayload
    length_poly: PolyPayload
    elements: list[ElementPayload] = Field(default_factory=list)


class AugmentedEntry(SQLModel, table=False):
    element: ElementPayload
    nu: dict[str, int] = Field(default_factory=dict)
    nu_plain: int
    nu_weighted: Optional[int] = Field(default=None)
    ascents: list[str] = Field(default_factory=list)


class DescentReport(SQLModel, table=False):
    """Descent system (W^J, S^J) together with its augmented poset."""

    cartan_type: str
    J: list[str] = Field(default_factory=list)
    classes: dict[str, list[str]] = Field(default_factory=dict)
    delta: dict[str, Optional[int]] = Field(default_factory=dict)
    entries: list[AugmentedEntry] = Field(default_factory=list)
    two_variable_euler: Optional[Poly2Payload] = Field(default=None)


class PolyReport(SQLModel, table=False):
    """A single polynomial together with its provenance."""

    formula: str
    cartan_type: Optional[str] = Field(default=None)
    J: list[str] = Field(default_factory=list)
    parameters: dict[str, int] = Field(default_factory=dict)
    poly: PolyPayload
    poincare: bool = Field(default=False)
    value_at_one: int
    degree: int


class EmbeddingSpec(SQLModel, table=False):
    """Which embedding to compute: "simple", "wonderful" or "rank2"."""

    kind: str
    cartan_type: Optional[str] = Field(default=None)
    J: list[str] = Field(default_factory=list)
    case: Optional[str] = Field(default=None)
    n_long: Optional[int] = Field(default=None)
    k: Optional[int] = Field(default=None)


class HPolyReport(SQLModel, table=False):
    """H-polynomial of an embedding, its product factors and derived numbers."""

    kind: str
    formula: str
    cartan_type: Optional[str] = Field(default=None)
    J: list[str] = Field(default_factory=list)
    parameters: dict[str, int] = Field(default_factory=dict)
    h: PolyPayload
    poincare: PolyPayload
    factors: list[PolyPayload] = Field(default_factory=list)
    euler_characteristic: int
    dimension: int
    palindromic: bool
    warnings: list[str] = Field(default_factory=list)


class OrbitRow(SQLModel, table=False):
    """One B x B orbit of M_n: representative, measured sizes and fitted exponents."""

    label: str
    rep: list[list[int]]
    rank: int
    sizes: dict[str, int] = Field(default_factory=dict)
    a: int
    b: int
    term: PolyPayload


class OracleReport(SQLModel, table=False):
    n: int
    qs: list[int] = Field(default_factory=list)
    rows: list[OrbitRow] = Field(default_factory=list)
    totals: dict[str, int] = Field(default_factory=dict)
    h: PolyPayload
