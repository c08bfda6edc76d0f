"""
Exact integer matrix algebra.

Hermite and Smith normal forms, integer kernels, Diophantine solving and
the saturation test. Row-vector convention throughout: a lattice is the row
span of a matrix and maps act by right multiplication.
"""
import logging
from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


class DimensionMismatch(ValueError):
    pass


class RankDeficient(ValueError):
    pass


class IntMatrix:
    """Dense immutable matrix of Python integers."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        data = [int(x) for x in entries]
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise DimensionMismatch(
                f"{len(data)} entries do not fill a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self._data = tuple(tuple(data[i * cols:(i + 1) * cols]) for i in range(rows))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"ragged row of length {len(r)}, expected {cols}")
        return cls(len(rows), cols, (x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def entries(self) -> Tuple[int, ...]:
        return tuple(x for r in self._data for x in r)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> Tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> Tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def to_lists(self) -> List[List[int]]:
        return [list(r) for r in self._data]

    def __getitem__(self, key: Tuple[int, int]) -> int:
        i, j = key
        return self._data[i][j]

    def __eq__(self, other):
        return (isinstance(other, IntMatrix) and self.rows == other.rows
                and self.cols == other.cols and self._data == other._data)

    def __hash__(self):
        return hash((self.rows, self.cols, self._data))

    def __repr__(self):
        return f"IntMatrix({self.to_lists()})"

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         (self._data[i][j] for j in range(self.cols) for i in range(self.rows)))

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose()._data
        return IntMatrix(self.rows, other.cols,
                         (sum(a * b for a, b in zip(r, c)) for r in self._data for c in cols))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {other.shape} from {self.shape}")
        return IntMatrix(self.rows, self.cols, (a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, (k * a for a in self.entries))

    def vector_times(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Row vector v times this matrix."""
        if len(v) != self.rows:
            raise DimensionMismatch(f"vector of length {len(v)} against {self.shape}")
        return tuple(sum(v[i] * self._data[i][j] for i in range(self.rows) if v[i])
                     for j in range(self.cols))

    def times_vector(self, x: Sequence[int]) -> Tuple[int, ...]:
        """This matrix times column vector x."""
        if len(x) != self.cols:
            raise DimensionMismatch(f"vector of length {len(x)} against {self.shape}")
        return tuple(sum(a * b for a, b in zip(r, x)) for r in self._data)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionMismatch(f"hstack of {self.shape} and {other.shape}")
        return IntMatrix.from_rows([a + b for a, b in zip(self._data, other._data)],
                                   self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise DimensionMismatch(f"vstack of {self.shape} and {other.shape}")
        return IntMatrix.from_rows(list(self._data) + list(other._data), self.cols)

    def select_rows(self, indices: Iterable[int]) -> "IntMatrix":
        return IntMatrix.from_rows([self._data[i] for i in indices], self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_diagonal(self) -> bool:
        return all(self._data[i][j] == 0
                   for i in range(self.rows) for j in range(self.cols) if i != j)

    def is_permutation(self) -> bool:
        if not self.is_square():
            return False
        seen = set()
        for r in self._data:
            ones = [j for j, x in enumerate(r) if x]
            if len(ones) != 1 or r[ones[0]] != 1 or ones[0] in seen:
                return False
            seen.add(ones[0])
        return True

    def permutation(self) -> Tuple[int, ...]:
        """For a permutation matrix: the image index of every row."""
        return tuple(r.index(1) for r in self._data)

    def det(self) -> int:
        """Fraction-free Bareiss elimination."""
        if not self.is_square():
            raise DimensionMismatch(f"determinant of non-square {self.shape}")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_lists()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.is_square() and abs(self.det()) == 1


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0:c0 + b.cols] = b.row(i)
        r0 += b.rows
        c0 += b.cols
    return IntMatrix.from_rows(out, cols)


# ─── Hermite normal form ───────────────────────────────────────────────────

def _sub_row(rows, i, k, q):
    rows[i] = [x - q * y for x, y in zip(rows[i], rows[k])]


def _echelon(a: List[List[int]], ncols: int, u: Optional[List[List[int]]] = None) -> List[int]:
    """In-place row-style HNF of `a`; mirrors every row operation on `u`.

    Returns the pivot columns; rows past len(pivots) are zero.
    """
    m = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        found = False
        while True:
            nz = [i for i in range(r, m) if a[i][c]]
            if not nz:
                break
            found = True
            p = min(nz, key=lambda i: abs(a[i][c]))
            if p != r:
                a[r], a[p] = a[p], a[r]
                if u is not None:
                    u[r], u[p] = u[p], u[r]
            pv = a[r][c]
            clean = True
            for i in range(r + 1, m):
                if a[i][c]:
                    q = a[i][c] // pv
                    _sub_row(a, i, r, q)
                    if u is not None:
                        _sub_row(u, i, r, q)
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        pv = a[r][c]
        for i in range(r):
            q = a[i][c] // pv
            if q:
                _sub_row(a, i, r, q)
                if u is not None:
                    _sub_row(u, i, r, q)
        pivots.append(c)
        r += 1
    return pivots


def hnf(A: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns (H, U) with U·A = H."""
    a = A.to_lists()
    u = IntMatrix.identity(A.rows).to_lists()
    _echelon(a, A.cols, u)
    return IntMatrix.from_rows(a, A.cols), IntMatrix.from_rows(u, A.rows)


def hnf_basis(A: IntMatrix) -> IntMatrix:
    """Canonical basis (nonzero HNF rows) of the row span of A."""
    a = A.to_lists()
    pivots = _echelon(a, A.cols)
    return IntMatrix.from_rows(a[:len(pivots)], A.cols)


def rank(A: IntMatrix) -> int:
    return len(_echelon(A.to_lists(), A.cols))


def _reduce(h: List[List[int]], pivots: List[int], v: Sequence[int]):
    """Write v = z·h + residual greedily along the pivots; z is exact where possible."""
    res = list(v)
    z = []
    for k, c in enumerate(pivots):
        q, rem = divmod(res[c], h[k][c])
        if rem:
            return None, res
        if q:
            res = [x - q * y for x, y in zip(res, h[k])]
        z.append(q)
    if any(res):
        return None, res
    return z, res


def in_row_span(rows: IntMatrix, v: Sequence[int]) -> bool:
    if len(v) != rows.cols:
        raise DimensionMismatch(f"vector of length {len(v)} against {rows.cols} columns")
    a = rows.to_lists()
    pivots = _echelon(a, rows.cols)
    z, _ = _reduce(a, pivots, v)
    return z is not None


# ─── Kernels and linear systems ────────────────────────────────────────────

def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Saturated basis (rows, in HNF) of {x : x·A = 0}."""
    a = A.to_lists()
    u = IntMatrix.identity(A.rows).to_lists()
    pivots = _echelon(a, A.cols, u)
    kernel = IntMatrix.from_rows(u[len(pivots):], A.rows)
    return hnf_basis(kernel)


def solve_linear(A: IntMatrix, b: Sequence[int]) -> Optional[List[int]]:
    """Some integer x with A·x = b, or None when there is none."""
    if len(b) != A.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {A.rows} equations")
    at = A.transpose()
    h = at.to_lists()
    u = IntMatrix.identity(at.rows).to_lists()
    pivots = _echelon(h, at.cols, u)
    z, _ = _reduce(h, pivots, b)
    if z is None:
        return None
    x = [0] * A.cols
    for k, zk in enumerate(z):
        if zk:
            x = [xi + zk * ui for xi, ui in zip(x, u[k])]
    if list(A.times_vector(x)) != list(b):
        raise AssertionError("solve_linear produced a non-solution")
    return x


@dataclass(frozen=True)
class DiophantineCertificate:
    """y with y·A ≡ 0 and y·b ≢ 0 modulo `modulus` (0: exactly, over Z)."""
    multiplier: Tuple[int, ...]
    modulus: int

    def check(self, A: IntMatrix, b: Sequence[int]) -> bool:
        ya = A.vector_times(self.multiplier)
        yb = sum(y * x for y, x in zip(self.multiplier, b))
        if self.modulus == 0:
            return not any(ya) and yb != 0
        return all(x % self.modulus == 0 for x in ya) and yb % self.modulus != 0


# ─── Smith normal form ─────────────────────────────────────────────────────

@dataclass(frozen=True)
class SmithDecomposition:
    left: IntMatrix
    diag: IntMatrix
    right: IntMatrix
    invariant_factors: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def snf(A: IntMatrix) -> SmithDecomposition:
    """U·A·V = S with S diagonal and each invariant factor dividing the next."""
    m, n = A.rows, A.cols
    s = A.to_lists()
    u = IntMatrix.identity(m).to_lists()
    v = IntMatrix.identity(n).to_lists()

    def col_op(j, t, q):
        # column j -= q * column t, on S and V
        for row in s:
            row[j] -= q * row[t]
        for row in v:
            row[j] -= q * row[t]

    def swap_cols(j, t):
        for row in s:
            row[j], row[t] = row[t], row[j]
        for row in v:
            row[j], row[t] = row[t], row[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (best is None or abs(s[i][j]) < abs(s[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            s[t], s[i] = s[i], s[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            swap_cols(j, t)
        pv = s[t][t]
        clean = True
        for i in range(t + 1, m):
            if s[i][t]:
                q = s[i][t] // pv
                _sub_row(s, i, t, q)
                _sub_row(u, i, t, q)
                clean = clean and not s[i][t]
        for j in range(t + 1, n):
            if s[t][j]:
                col_op(j, t, s[t][j] // pv)
                clean = clean and not s[t][j]
        if not clean:
            continue
        bad = next((i for i in range(t + 1, m)
                    if any(s[i][j] % pv for j in range(t + 1, n))), None)
        if bad is not None:
            s[t] = [x + y for x, y in zip(s[t], s[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
            continue
        if pv < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    factors = tuple(s[i][i] for i in range(min(m, n)) if s[i][i])
    logger.debug(f"Smith form of a {m}x{n} matrix: {factors}")
    return SmithDecomposition(
        left=IntMatrix.from_rows(u, m),
        diag=IntMatrix.from_rows(s, n),
        right=IntMatrix.from_rows(v, n),
        invariant_factors=factors,
    )


def diophantine_certificate(A: IntMatrix, b: Sequence[int]) -> Optional[DiophantineCertificate]:
    """Infeasibility data for A·x = b, or None when the system is solvable."""
    if len(b) != A.rows:
        raise DimensionMismatch(f"right-hand side of length {len(b)} for {A.rows} equations")
    dec = snf(A)
    c = dec.left.times_vector(b)
    for i, ci in enumerate(c):
        if i < dec.rank:
            if ci % dec.invariant_factors[i]:
                return DiophantineCertificate(dec.left.row(i), dec.invariant_factors[i])
        elif ci:
            return DiophantineCertificate(dec.left.row(i), 0)
    return None


# ─── Saturation ────────────────────────────────────────────────────────────

def _full_rank_snf(rows: IntMatrix) -> SmithDecomposition:
    dec = snf(rows)
    if dec.rank < rows.rows:
        raise RankDeficient(f"{rows.rows} rows span a lattice of rank {dec.rank}")
    return dec


def is_saturated(rows: IntMatrix) -> bool:
    """True iff the row lattice has torsion-free quotient (all invariant factors 1)."""
    dec = _full_rank_snf(rows)
    return all(f == 1 for f in dec.invariant_factors)


def saturation_witness(rows: IntMatrix) -> Optional[Tuple[Tuple[int, ...], int]]:
    """Primitive c and divisor d ≥ 2 with c·rows ≡ 0 (mod d); None if saturated."""
    dec = _full_rank_snf(rows)
    for k, f in enumerate(dec.invariant_factors):
        if f > 1:
            return dec.left.row(k), f
    return None


def content(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def inverse_unimodular(P: IntMatrix) -> IntMatrix:
    if not P.is_unimodular():
        raise RankDeficient("matrix is not invertible over the integers")
    h, u = hnf(P)
    # the HNF of a unimodular matrix is the identity
    if h != IntMatrix.identity(P.rows):
        raise AssertionError("unimodular matrix with non-identity HNF")
    return u
