"""
Speciality of algebraic tori.

A torus is described by its splitting group G and the G-lattice of its
characters. It is special exactly when that lattice is invertible.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import report
from glattice import (
    AbelianInvariants,
    GLattice,
    GroupMismatch,
    dual,
    h1,
    is_coflasque,
    is_flasque,
    is_invertible,
)
from groups import FiniteGroup, Subgroup, subgroups
from report import ClassificationReport, Verdict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TorusDescriptor:
    galois: FiniteGroup
    character_lattice: GLattice

    def __post_init__(self):
        if self.character_lattice.group != self.galois:
            raise GroupMismatch("character lattice is over a different group")

    @property
    def dimension(self) -> int:
        return self.character_lattice.rank


def is_special_torus(T: TorusDescriptor, max_rank: Optional[int] = None) -> ClassificationReport:
    test = is_invertible(T.character_lattice, max_rank=max_rank)
    witness = test.to_dict()
    if test.holds:
        logger.info(f"torus of dimension {T.dimension}: special")
        return ClassificationReport(Verdict.SPECIAL, report.TORUS, witness)

    flasque = is_flasque(T.character_lattice, max_rank=max_rank)
    if not flasque.holds:
        witness["obstruction"] = {"side": "cocharacters", **flasque.to_dict()}
    else:
        coflasque = is_coflasque(T.character_lattice, max_rank=max_rank)
        if not coflasque.holds:
            witness["obstruction"] = {"side": "characters", **coflasque.to_dict()}
    logger.info(f"torus of dimension {T.dimension}: not special")
    return ClassificationReport(Verdict.NOT_SPECIAL, report.TORUS, witness)


def cocharacter_h1_profile(T: TorusDescriptor,
                           max_rank: Optional[int] = None) -> List[Tuple[Subgroup, AbelianInvariants]]:
    """H¹(H, cocharacters) for every subgroup H."""
    cochars = dual(T.character_lattice)
    return [(H, h1(H, cochars, max_rank=max_rank)) for H in subgroups(T.galois)]
