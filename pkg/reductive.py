"""
Reductive group descriptors and the speciality classifiers built on them.

A group is described by discrete data only: its simply connected derived
factors (degree and index of the algebra, degree of the field extension),
the coradical torus, and for inner forms the embedding of the center.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from math import gcd
from typing import Optional, Sequence, Tuple, Union

import report
from glattice import trivial_lattice
from groups import trivial_group
from intlinalg import IntMatrix, saturation_witness, snf
from report import ClassificationReport, Verdict
from torus import TorusDescriptor, is_special_torus

logger = logging.getLogger(__name__)


class ShapeError(ValueError):
    pass


class Indivisible(ValueError):
    def __init__(self, modulus: int, value: int, row: int = 0, col: int = 0):
        self.modulus = modulus
        self.value = value
        self.row = row
        self.col = col
        super().__init__(
            f"center order {modulus} does not divide a*n = {value} (row {row}, column {col})")


class NotDecomposed(ValueError):
    pass


class FactorKind(Enum):
    SL1 = "SL1"
    SP = "Sp"


@dataclass(frozen=True)
class FactorDescriptor:
    """SL_1(A) with deg A = n and ind A = d, or Sp_2n; over an extension of the given degree."""
    kind: FactorKind
    n: int
    index_d: int = 1
    extension_degree: int = 1

    @property
    def is_split(self) -> bool:
        return self.index_d == 1

    def validate(self):
        if self.n < 1:
            raise ShapeError(f"degree n={self.n} must be positive")
        if self.index_d < 1:
            raise ShapeError(f"index d={self.index_d} must be positive")
        if self.extension_degree < 1:
            raise ShapeError(f"extension degree {self.extension_degree} must be positive")
        if self.kind is FactorKind.SL1 and self.n % self.index_d:
            raise ShapeError(f"index {self.index_d} does not divide degree {self.n}")
        if self.kind is FactorKind.SP and self.index_d != 1:
            raise ShapeError("symplectic factors carry no algebra index")

    def label(self) -> str:
        if self.kind is FactorKind.SP:
            base = f"Sp_{2 * self.n}"
        elif self.is_split:
            base = f"SL_{self.n}"
        else:
            base = f"SL_1(A), deg {self.n}, ind {self.index_d}"
        if self.extension_degree > 1:
            return f"R_[K:k]={self.extension_degree}({base})"
        return base


def _nonsplit_first(factors: Sequence[FactorDescriptor]) -> Tuple[FactorDescriptor, ...]:
    return tuple(sorted(factors, key=lambda f: f.is_split))


@dataclass(frozen=True)
class InnerDescriptor:
    factors: Tuple[FactorDescriptor, ...]
    center_orders: Tuple[int, ...]
    embedding: IntMatrix

    def __post_init__(self):
        object.__setattr__(self, "factors", _nonsplit_first(self.factors))
        object.__setattr__(self, "center_orders", tuple(self.center_orders))
        if any(m < 1 for m in self.center_orders):
            raise ShapeError(f"center orders must be positive, got {list(self.center_orders)}")
        if self.embedding.shape != (self.s, len(self.center_orders)):
            raise ShapeError(
                f"embedding has shape {self.embedding.shape}, expected "
                f"{(self.s, len(self.center_orders))}")

    @property
    def s(self) -> int:
        """Number of nonsplit factors; they come first."""
        return sum(1 for f in self.factors if not f.is_split)

    @property
    def q(self) -> int:
        return len(self.center_orders)

    def validate(self):
        validate_derived_shape(self.factors)
        for i, f in enumerate(self.factors):
            if f.extension_degree != 1:
                raise ShapeError(f"factor {i}: inner type needs factors defined over k")
        compute_b(self)


@dataclass(frozen=True)
class TorusGroup:
    torus: TorusDescriptor


@dataclass(frozen=True)
class SemisimpleGroup:
    factors: Tuple[FactorDescriptor, ...]


@dataclass(frozen=True)
class InnerGroup:
    inner: InnerDescriptor


@dataclass(frozen=True)
class QuasisplitGroup:
    factors: Tuple[FactorDescriptor, ...]
    coradical: TorusDescriptor


@dataclass(frozen=True)
class GeneralGroup:
    factors: Tuple[FactorDescriptor, ...]
    coradical: TorusDescriptor


GroupDescriptor = Union[TorusGroup, SemisimpleGroup, InnerGroup, QuasisplitGroup, GeneralGroup]


def validate_derived_shape(factors: Sequence[FactorDescriptor]):
    for i, f in enumerate(factors):
        try:
            f.validate()
        except ShapeError as e:
            raise ShapeError(f"factor {i}: {e}") from None


def _first_nonsplit(factors: Sequence[FactorDescriptor]) -> Optional[int]:
    return next((i for i, f in enumerate(factors)
                 if f.kind is FactorKind.SL1 and not f.is_split), None)


def classify_semisimple(factors: Sequence[FactorDescriptor]) -> ClassificationReport:
    validate_derived_shape(factors)
    bad = _first_nonsplit(factors)
    if bad is not None:
        f = factors[bad]
        return ClassificationReport(Verdict.NOT_SPECIAL, report.SEMISIMPLE, {
            "factor": bad,
            "description": f.label(),
            "index": f.index_d,
        })
    return ClassificationReport(Verdict.SPECIAL, report.SEMISIMPLE,
                                {"factors": [f.label() for f in factors]})


def compute_b(desc: InnerDescriptor) -> IntMatrix:
    """b[i][j] = a[i][j] * n_i / m_j, exactly."""
    rows = []
    for i in range(desc.s):
        n = desc.factors[i].n
        row = []
        for j, m in enumerate(desc.center_orders):
            value = desc.embedding[i, j] * n
            if value % m:
                raise Indivisible(m, value, i, j)
            row.append(value // m)
        rows.append(row)
    return IntMatrix.from_rows(rows, desc.q)


def saturation_matrix(desc: InnerDescriptor) -> IntMatrix:
    """[diag(d_1..d_s) | b]."""
    d = IntMatrix.diagonal([f.index_d for f in desc.factors[:desc.s]])
    return d.hstack(compute_b(desc))


def classify_inner(desc: InnerDescriptor) -> ClassificationReport:
    desc.validate()
    matrix = saturation_matrix(desc)
    if desc.s == 0:
        return ClassificationReport(Verdict.SPECIAL, report.INNER,
                                    {"matrix": [], "invariant_factors": []})
    factors = list(snf(matrix).invariant_factors)
    witness = {"matrix": matrix.to_lists(), "invariant_factors": factors}
    found = saturation_witness(matrix)
    if found is None:
        logger.info(f"inner type, s={desc.s}: saturated, special")
        return ClassificationReport(Verdict.SPECIAL, report.INNER, witness)
    c, divisor = found
    combination = matrix.vector_times(c)
    if any(x % divisor for x in combination):
        raise AssertionError("saturation witness does not divide its row combination")
    witness.update({
        "primitive_vector": list(c),
        "divisor": divisor,
        "combination": list(combination),
    })
    logger.info(f"inner type, s={desc.s}: not saturated (divisor {divisor})")
    return ClassificationReport(Verdict.NOT_SPECIAL, report.INNER, witness)


def classify_inner_decomposed(desc: InnerDescriptor) -> ClassificationReport:
    """gcd(d_i, n_i/m_i) = 1 for each nonsplit factor, when the center splits factor by factor."""
    desc.validate()
    if desc.q != len(desc.factors):
        raise NotDecomposed(f"{desc.q} center factors for {len(desc.factors)} simple factors")
    for i in range(desc.s):
        for j in range(desc.q):
            a = desc.embedding[i, j]
            if j != i and a:
                raise NotDecomposed(f"center factor {j} meets simple factor {i}")
            if j == i and gcd(a, desc.center_orders[i]) != 1:
                raise NotDecomposed(f"center factor {i} does not embed into factor {i}")
    for i in range(desc.s):
        f = desc.factors[i]
        quotient = f.n // desc.center_orders[i]
        g = gcd(f.index_d, quotient)
        if g != 1:
            return ClassificationReport(Verdict.NOT_SPECIAL, report.INNER_DECOMPOSED, {
                "factor": i, "d": f.index_d, "n_over_m": quotient, "gcd": g,
            })
    return ClassificationReport(Verdict.SPECIAL, report.INNER_DECOMPOSED,
                                {"factors_checked": desc.s})


def classify_quasisplit(factors: Sequence[FactorDescriptor],
                        coradical: TorusDescriptor,
                        max_rank: Optional[int] = None) -> ClassificationReport:
    validate_derived_shape(factors)
    bad = _first_nonsplit(factors)
    if bad is not None:
        return ClassificationReport(Verdict.NOT_SPECIAL, report.QUASISPLIT, {
            "failing": "derived subgroup",
            "factor": bad,
            "description": factors[bad].label(),
        })
    torus = is_special_torus(coradical, max_rank=max_rank)
    if torus.verdict is not Verdict.SPECIAL:
        return ClassificationReport(Verdict.NOT_SPECIAL, report.QUASISPLIT,
                                    {"failing": "coradical", "torus": torus.witness})
    return ClassificationReport(Verdict.SPECIAL, report.QUASISPLIT, {"torus": torus.witness})


def classify(desc: GroupDescriptor, max_rank: Optional[int] = None) -> ClassificationReport:
    if isinstance(desc, TorusGroup):
        return is_special_torus(desc.torus, max_rank=max_rank)
    if isinstance(desc, SemisimpleGroup):
        return classify_semisimple(desc.factors)
    if isinstance(desc, InnerGroup):
        return classify_inner(desc.inner)
    if isinstance(desc, QuasisplitGroup):
        return classify_quasisplit(desc.factors, desc.coradical, max_rank=max_rank)
    if isinstance(desc, GeneralGroup):
        return _classify_general(desc, max_rank)
    raise TypeError(f"not a group descriptor: {desc!r}")


def _classify_general(desc: GeneralGroup, max_rank: Optional[int]) -> ClassificationReport:
    validate_derived_shape(desc.factors)
    torus = is_special_torus(desc.coradical, max_rank=max_rank)
    if torus.verdict is not Verdict.SPECIAL:
        return ClassificationReport(Verdict.NOT_SPECIAL, report.CORADICAL, torus.witness)
    if desc.coradical.dimension == 0:
        return classify_semisimple(desc.factors)
    if _first_nonsplit(desc.factors) is None:
        return classify_quasisplit(desc.factors, desc.coradical, max_rank=max_rank)
    nonsplit = [i for i, f in enumerate(desc.factors) if not f.is_split]
    logger.info(f"general descriptor with nonsplit factors {nonsplit}: undecided")
    return ClassificationReport(Verdict.UNDECIDED, report.GENERAL, {
        "nonsplit_factors": nonsplit,
        "coradical": torus.witness,
    })


# ─── Quasisplit forms and special envelopes ────────────────────────────────

def _split(factors: Sequence[FactorDescriptor]) -> Tuple[FactorDescriptor, ...]:
    return tuple(replace(f, index_d=1) for f in factors)


def quasisplit_form(desc: GroupDescriptor) -> GroupDescriptor:
    """Same coradical, every algebra replaced by a split one."""
    if isinstance(desc, TorusGroup):
        return desc
    if isinstance(desc, InnerGroup):
        inner = desc.inner
        return InnerGroup(InnerDescriptor(_split(inner.factors), inner.center_orders,
                                          IntMatrix.zeros(0, inner.q)))
    if isinstance(desc, SemisimpleGroup):
        return SemisimpleGroup(_split(desc.factors))
    return type(desc)(_split(desc.factors), desc.coradical)


def quasisplit_form_special(desc: GroupDescriptor, max_rank: Optional[int] = None) -> ClassificationReport:
    result = classify(quasisplit_form(desc), max_rank=max_rank)
    return replace(result, criterion=f"{report.QUASISPLIT_FORM}: {result.criterion}")


def split_torus(rank: int) -> TorusDescriptor:
    G = trivial_group()
    return TorusDescriptor(G, trivial_lattice(G, rank))


def special_envelope(factors: Sequence[FactorDescriptor]) -> InnerGroup:
    """The product of GL_1(A_i) over the nonsplit factors and the split factors.

    Each center μ_{n_i} of a nonsplit factor is sent to its own factor, so
    the saturation matrix contains an identity block and the group is special.
    """
    validate_derived_shape(factors)
    for i, f in enumerate(factors):
        if f.extension_degree != 1:
            raise ShapeError(f"factor {i}: inner type needs factors defined over k")
    ordered = _nonsplit_first(factors)
    nonsplit = [f for f in ordered if not f.is_split]
    inner = InnerDescriptor(ordered, tuple(f.n for f in nonsplit),
                            IntMatrix.identity(len(nonsplit)))
    return InnerGroup(inner)
