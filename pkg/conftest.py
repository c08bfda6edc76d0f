from pathlib import Path
from typing import List, Tuple

import pytest

from glattice import (
    GLattice,
    augmentation_kernel,
    conjugate,
    direct_sum,
    norm_quotient,
    permutation_lattice,
    regular_lattice,
    sign_lattice,
    trivial_lattice,
)
from groups import alternating4, cyclic, dihedral, klein_four, subgroups, symmetric
from intlinalg import IntMatrix

FIXTURES = Path(__file__).parent / "fixtures"


def _subgroup_of_order(G, order):
    return next(H for H in subgroups(G) if H.order == order)


def lattice_library() -> List[Tuple[str, GLattice]]:
    """Lattices over groups of order at most 12; non-permutation ones stay at rank ≤ 6."""
    c2, c3, c4, c6 = cyclic(2), cyclic(3), cyclic(4), cyclic(6)
    v4, s3, d4, a4 = klein_four(), symmetric(3), dihedral(4), alternating4()
    s3_c2 = _subgroup_of_order(s3, 2)
    c4_c2 = _subgroup_of_order(c4, 2)
    d4_c2 = _subgroup_of_order(d4, 2)
    a4_c3 = _subgroup_of_order(a4, 3)
    unimodular = IntMatrix.from_rows([[1, 1, 0], [0, 1, 0], [2, 3, 1]])
    lib = [
        ("Z over C2", trivial_lattice(c2)),
        ("sign over C2", sign_lattice(c2, [-1])),
        ("Z[C2]", regular_lattice(c2)),
        ("sign+Z over C2", direct_sum(sign_lattice(c2, [-1]), trivial_lattice(c2))),
        ("sign+sign over C2", direct_sum(sign_lattice(c2, [-1]), sign_lattice(c2, [-1]))),
        ("Z[C3]", regular_lattice(c3)),
        ("I over C3", augmentation_kernel(c3, c3.trivial_subgroup())),
        ("J over C3", norm_quotient(c3, c3.trivial_subgroup())),
        ("Z+I over C3", direct_sum(trivial_lattice(c3), augmentation_kernel(c3, c3.trivial_subgroup()))),
        ("Z[C3] conjugated", conjugate(regular_lattice(c3), unimodular)),
        ("Z[C4]", regular_lattice(c4)),
        ("Z[C4/C2]", permutation_lattice(c4, c4_c2)),
        ("J over C4", norm_quotient(c4, c4.trivial_subgroup())),
        ("Z[V4]", regular_lattice(v4)),
        ("I over V4", augmentation_kernel(v4, v4.trivial_subgroup())),
        ("J over V4", norm_quotient(v4, v4.trivial_subgroup())),
        ("Z[S3/C2]", permutation_lattice(s3, s3_c2)),
        ("I over S3/C2", augmentation_kernel(s3, s3_c2)),
        ("J over S3/C2", norm_quotient(s3, s3_c2)),
        ("sign over S3", sign_lattice(s3, [-1, 1])),
        ("Z[S3]", regular_lattice(s3)),
        ("Z[C6]", regular_lattice(c6)),
        ("Z[D4/C2]", permutation_lattice(d4, d4_c2)),
        ("Z[A4/C3]", permutation_lattice(a4, a4_c3)),
    ]
    return lib


@pytest.fixture(scope="session")
def library():
    return lattice_library()


@pytest.fixture
def fixtures_dir():
    return FIXTURES
