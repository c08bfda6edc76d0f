"""
Verdicts and classification reports shared by every classifier.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict


class Verdict(Enum):
    SPECIAL = "special"
    NOT_SPECIAL = "not_special"
    UNDECIDED = "undecided"

    @property
    def exit_code(self) -> int:
        return {Verdict.SPECIAL: 0, Verdict.NOT_SPECIAL: 1, Verdict.UNDECIDED: 2}[self]


EXIT_ERROR = 3


# Criterion tags
TORUS = "torus invertibility"
INNER = "inner-type saturation"
INNER_DECOMPOSED = "inner-type decomposed coprimality"
SEMISIMPLE = "semisimple split factors"
QUASISPLIT = "quasisplit split factors and special coradical"
DERIVED_SHAPE = "derived shape"
CORADICAL = "coradical speciality"
GENERAL = "general: center condition not effective for this descriptor"
QUASISPLIT_FORM = "quasisplit form"

EXPLANATIONS = {
    TORUS: (
        "A torus is special exactly when its character lattice is invertible: "
        "a direct summand of a permutation lattice. The witness is either an "
        "equivariant section of the coflasque cover or an integer certificate "
        "that no section exists, together with the subgroup whose H^1 is nonzero."),
    INNER: (
        "For a group of inner type the rows of [diag(d) | b] must span a saturated "
        "sublattice. A primitive vector c with c times the matrix divisible by some "
        "d > 1 shows that they do not."),
    INNER_DECOMPOSED: (
        "When each center factor embeds into its own simple factor, speciality comes "
        "down to gcd(d_i, n_i/m_i) = 1 for every nonsplit factor."),
    SEMISIMPLE: (
        "A semisimple simply connected group is special exactly when it is a product "
        "of special linear and symplectic groups of split algebras. The witness names "
        "the first factor built from a division algebra of index above one."),
    QUASISPLIT: (
        "A quasisplit group is special exactly when every derived factor is split and "
        "the coradical torus is special."),
    DERIVED_SHAPE: (
        "Only special linear groups of central simple algebras and split symplectic "
        "groups, possibly over finite separable extensions, can occur as derived "
        "subgroups of a special group."),
    CORADICAL: (
        "The coradical G/[G,G] of a special group is a special torus. The witness "
        "comes from the torus test."),
    GENERAL: (
        "The derived shape and the coradical pass, but the remaining condition on the "
        "center is not computable from this descriptor. Supply an inner-type or "
        "quasisplit descriptor to decide."),
    QUASISPLIT_FORM: (
        "The group was replaced by its quasisplit inner form, all algebras split, "
        "and classified again."),
}


@dataclass(frozen=True)
class ClassificationReport:
    verdict: Verdict
    criterion: str
    witness: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is Verdict.NOT_SPECIAL and not self.witness:
            raise AssertionError(f"negative verdict without a witness ({self.criterion})")

    @property
    def exit_code(self) -> int:
        return self.verdict.exit_code

    def explanation(self) -> str:
        prefix = QUASISPLIT_FORM + ": "
        if self.criterion.startswith(prefix):
            inner = EXPLANATIONS.get(self.criterion[len(prefix):], "")
            return f"{EXPLANATIONS[QUASISPLIT_FORM]} {inner}".strip()
        return EXPLANATIONS.get(self.criterion, "")

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.value, "criterion": self.criterion, "witness": self.witness}
