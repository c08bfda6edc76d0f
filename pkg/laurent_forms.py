"""
Diagonal quadratic forms over Laurent polynomial rings F_p[t_1^±, …, t_n^±].

The form Σ α_i t^{a_i} x_i² is anisotropic as soon as the exponent vectors
a_i are pairwise distinct modulo 2: the lexicographic leading monomials of
the summands then differ in parity and cannot cancel. `isotropy_search`
tests that claim against polynomial vectors of bounded degree.
"""
import logging
import os
from dataclasses import dataclass
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Poly, symbols

logger = logging.getLogger(__name__)

SEED = int(os.environ.get("SPECIAL_SEED", 20240601))
DEFAULT_CHARACTERISTIC = 7
CONSTANT_ENUMERATION_LIMIT = 4096
BATCH_SIZE = 2048


@dataclass(frozen=True)
class DiagonalFormSpec:
    num_vars: int
    exponents: Tuple[Tuple[int, ...], ...]
    coefficients: Tuple[int, ...]
    characteristic: int = DEFAULT_CHARACTERISTIC

    def __post_init__(self):
        p = self.characteristic
        if p < 3 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"characteristic {p} is not an odd prime")
        if self.num_vars < 1:
            raise ValueError("a Laurent ring needs at least one variable")
        exps = tuple(tuple(int(x) for x in a) for a in self.exponents)
        if not exps:
            raise ValueError("a diagonal form needs at least one summand")
        if len(self.coefficients) != len(exps):
            raise ValueError(f"{len(self.coefficients)} coefficients for {len(exps)} exponents")
        for a in exps:
            if len(a) != self.num_vars:
                raise ValueError(f"exponent {list(a)} has length {len(a)}, expected {self.num_vars}")
        coeffs = tuple(int(c) % p for c in self.coefficients)
        if 0 in coeffs:
            raise ValueError(f"coefficients must be nonzero modulo {p}")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def size(self) -> int:
        return len(self.exponents)

    def gens(self):
        return symbols(f"t1:{self.num_vars + 1}")


@dataclass(frozen=True)
class CriterionOutcome:
    applicable: bool
    collision: Optional[Tuple[int, int]] = None

    @property
    def anisotropic(self) -> bool:
        return self.applicable


@dataclass(frozen=True)
class NoneFound:
    trials: int


@dataclass(frozen=True)
class IsotropicWitness:
    vector: Tuple[Poly, ...]

    def to_lists(self) -> List[dict]:
        return [{str(k): int(v) for k, v in x.as_dict().items()} for x in self.vector]


SearchResult = Union[NoneFound, IsotropicWitness]


def anisotropy_criterion(spec: DiagonalFormSpec) -> CriterionOutcome:
    """Applicable iff the exponent vectors are pairwise distinct modulo 2."""
    parities = [tuple(x % 2 for x in a) for a in spec.exponents]
    for i, j in combinations(range(spec.size), 2):
        if parities[i] == parities[j]:
            return CriterionOutcome(False, (i, j))
    return CriterionOutcome(True)


# ─── Exact arithmetic ──────────────────────────────────────────────────────

def _shift(spec: DiagonalFormSpec) -> Tuple[int, ...]:
    return tuple(min(a[k] for a in spec.exponents) for k in range(spec.num_vars))


def _summand(spec: DiagonalFormSpec, i: int, x: Poly) -> Poly:
    """α_i t^{a_i} x_i², shifted so that all exponents are non-negative."""
    lo = _shift(spec)
    mono = tuple(a - l for a, l in zip(spec.exponents[i], lo))
    scale = Poly.from_dict({mono: spec.coefficients[i]}, *spec.gens(), modulus=spec.characteristic)
    return scale * x ** 2


def evaluate_form(spec: DiagonalFormSpec, xs: Sequence[Poly]) -> Poly:
    """The form at xs, multiplied by the monomial that clears negative exponents."""
    total = Poly(0, *spec.gens(), modulus=spec.characteristic)
    for i, x in enumerate(xs):
        total = total + _summand(spec, i, x)
    return total


def leading_monomials(spec: DiagonalFormSpec, xs: Sequence[Poly]) -> List[Optional[Tuple[int, ...]]]:
    """Lex leading monomial (t_1 > … > t_n) of each summand; None where x_i = 0."""
    lo = _shift(spec)
    result = []
    for i, x in enumerate(xs):
        if x.is_zero:
            result.append(None)
            continue
        top = _summand(spec, i, x).monoms(order="lex")[0]
        result.append(tuple(e + l for e, l in zip(top, lo)))
    return result


def _to_poly(spec: DiagonalFormSpec, coeffs: np.ndarray) -> Poly:
    terms = {tuple(int(k) for k in idx): int(c) for idx, c in np.ndenumerate(coeffs) if c}
    if not terms:
        return Poly(0, *spec.gens(), modulus=spec.characteristic)
    return Poly.from_dict(terms, *spec.gens(), modulus=spec.characteristic)


# ─── Vectorized search ─────────────────────────────────────────────────────

def _form_values(spec: DiagonalFormSpec, xs: np.ndarray) -> np.ndarray:
    """Coefficient grids of the form for a batch of vectors.

    xs has shape (batch, m, D, …, D) with D = degree + 1, one axis per variable.
    Squares are taken by FFT convolution along the variable axes.
    """
    p = spec.characteristic
    n = spec.num_vars
    width = xs.shape[2]
    full = 2 * width - 1
    axes = tuple(range(2, 2 + n))
    spectrum = np.fft.rfftn(xs.astype(np.float64), s=(full,) * n, axes=axes)
    squares = np.rint(np.fft.irfftn(spectrum * spectrum, s=(full,) * n, axes=axes))
    squares = squares.astype(np.int64) % p

    exps = np.array(spec.exponents, dtype=np.int64)
    lo = exps.min(axis=0)
    span = exps.max(axis=0) - lo
    total = np.zeros((xs.shape[0],) + tuple(int(full + s) for s in span), dtype=np.int64)
    for i, alpha in enumerate(spec.coefficients):
        offset = exps[i] - lo
        window = (slice(None),) + tuple(slice(int(o), int(o) + full) for o in offset)
        total[window] += alpha * squares[:, i]
    return total % p


def _verified(spec: DiagonalFormSpec, xs: np.ndarray, values: np.ndarray) -> Optional[IsotropicWitness]:
    batch = xs.shape[0]
    vanishes = ~values.reshape(batch, -1).any(axis=1)
    nonzero = xs.reshape(batch, -1).any(axis=1)
    for k in np.flatnonzero(vanishes & nonzero):
        vector = tuple(_to_poly(spec, xs[k, i]) for i in range(spec.size))
        if evaluate_form(spec, vector).is_zero:
            return IsotropicWitness(vector)
        logger.warning("vectorized search reported a false zero; discarded")
    return None


def isotropy_search(spec: DiagonalFormSpec, degree_bound: int = 3, trials: int = 10_000,
                    seed: Optional[int] = None) -> SearchResult:
    """Look for a nonzero x with entries of degree ≤ degree_bound in each variable
    and Σ α_i t^{a_i} x_i² = 0.

    Constant vectors are enumerated first when there are few of them; then
    `trials` random vectors are drawn in batches from independent streams
    split off one seed.
    """
    p, m, n = spec.characteristic, spec.size, spec.num_vars
    ran = 0
    if p ** m <= CONSTANT_ENUMERATION_LIMIT:
        constants = np.array(list(product(range(p), repeat=m))[1:], dtype=np.int64)
        xs = constants.reshape((len(constants), m) + (1,) * n)
        ran += len(constants)
        found = _verified(spec, xs, _form_values(spec, xs))
        if found is not None:
            logger.info(f"isotropic vector among constants after {ran} candidates")
            return found

    seed = SEED if seed is None else seed
    batches = -(-trials // BATCH_SIZE) if trials > 0 else 0
    streams = np.random.SeedSequence(seed).spawn(batches)
    shape = (m,) + (degree_bound + 1,) * n
    for b, stream in enumerate(streams):
        size = min(BATCH_SIZE, trials - b * BATCH_SIZE)
        rng = np.random.default_rng(stream)
        xs = rng.integers(0, p, size=(size,) + shape, dtype=np.int64)
        found = _verified(spec, xs, _form_values(spec, xs))
        ran += size
        if found is not None:
            logger.info(f"isotropic vector after {ran} candidates")
            return found
    logger.debug(f"no isotropic vector in {ran} candidates")
    return NoneFound(ran)


# ─── Forms from the type A and type C arguments ────────────────────────────

def _unit(n: int, k: int) -> Tuple[int, ...]:
    return tuple(1 if j == k else 0 for j in range(n))


def outer_form_spec(n: int, alpha: int = 1, characteristic: int = DEFAULT_CHARACTERISTIC) -> DiagonalFormSpec:
    """t_1 x_1² + … + t_{n-1} x_{n-1}² + α t_1⋯t_{n-1} x_n².

    The exponents are parity-distinct from n = 3 on; for n = 2 both summands
    carry t_1 and anisotropy depends on whether −α is a square.
    """
    if n < 2:
        raise ValueError("the outer form needs n ≥ 2")
    k = n - 1
    exps = [_unit(k, j) for j in range(k)] + [(1,) * k]
    return DiagonalFormSpec(k, tuple(exps), tuple([1] * k + [alpha]), characteristic)


def symplectic_form_spec(s: int, characteristic: int = DEFAULT_CHARACTERISTIC
                         ) -> Tuple[DiagonalFormSpec, DiagonalFormSpec]:
    """(Σ t_i x_i², −x_1² + x_2² + … + x_s²): anisotropic and isotropic forms of rank s."""
    if s < 2:
        raise ValueError("need at least two variables")
    anisotropic = DiagonalFormSpec(s, tuple(_unit(s, j) for j in range(s)), (1,) * s, characteristic)
    isotropic = DiagonalFormSpec(s, ((0,) * s,) * s, (-1,) + (1,) * (s - 1), characteristic)
    return anisotropic, isotropic
