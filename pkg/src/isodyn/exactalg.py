"""Exact rational scalars and dense matrices.

Scalars are :class:`fractions.Fraction`; the stdlib type already keeps
every value in lowest terms with a positive denominator.  Matrices are
small (at most 4x4 here), so a plain row-major tuple representation with
straightforward Gaussian elimination is all that is needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DegenerateFrame, SingularMatrix

Rat = Fraction


class _Infinity:
    """The point at infinity of the projective line (also the pole z = infinity)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def rat(value) -> Fraction:
    """Coerce ints, Fractions and strings like ``"-3/7"`` to a Rat."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


class RatMat:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        entries = tuple(tuple(rat(v) for v in row) for row in data)
        nrows = len(entries)
        if nrows:
            ncols = len(entries[0])
            if any(len(r) != ncols for r in entries):
                raise ValueError("ragged matrix rows")
        else:
            ncols = cols or 0
        _set = object.__setattr__
        _set(self, "rows", nrows)
        _set(self, "cols", ncols)
        _set(self, "_e", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RatMat is immutable")

    # construction helpers
    @classmethod
    def _raw(cls, entries: tuple, rows: int, cols: int) -> "RatMat":
        m = object.__new__(cls)
        object.__setattr__(m, "rows", rows)
        object.__setattr__(m, "cols", cols)
        object.__setattr__(m, "_e", entries)
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMat":
        z = Fraction(0)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "RatMat":
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "RatMat":
        vals = [rat(v) for v in values]
        n = len(vals)
        return cls([[vals[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def column(cls, values: Sequence) -> "RatMat":
        return cls([[v] for v in values], cols=1)

    @classmethod
    def row_vector(cls, values: Sequence) -> "RatMat":
        return cls([list(values)])

    @classmethod
    def from_columns(cls, columns: Sequence["RatMat"], rows: int | None = None) -> "RatMat":
        if not columns:
            return cls.zeros(rows or 0, 0)
        n = columns[0].rows
        return cls._raw(
            tuple(tuple(c._e[i][0] for c in columns) for i in range(n)), n, len(columns)
        )

    @classmethod
    def from_rows(cls, row_mats: Sequence["RatMat"], cols: int | None = None) -> "RatMat":
        if not row_mats:
            return cls.zeros(0, cols or 0)
        return cls._raw(tuple(r._e[0] for r in row_mats), len(row_mats), row_mats[0].cols)

    # access
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, idx):
        i, j = idx
        return self._e[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def row(self, i: int) -> "RatMat":
        return RatMat._raw((self._e[i],), 1, self.cols)

    def col(self, j: int) -> "RatMat":
        return RatMat._raw(tuple((r[j],) for r in self._e), self.rows, 1)

    def columns(self) -> list["RatMat"]:
        return [self.col(j) for j in range(self.cols)]

    def row_list(self) -> list["RatMat"]:
        return [self.row(i) for i in range(self.rows)]

    def flat(self) -> list[Fraction]:
        return [v for r in self._e for v in r]

    def with_entry(self, i: int, j: int, value) -> "RatMat":
        data = self.tolist()
        data[i][j] = rat(value)
        return RatMat(data, cols=self.cols)

    # arithmetic
    def _check_same(self, other: "RatMat"):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RatMat") -> "RatMat":
        self._check_same(other)
        return RatMat._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)),
            self.rows, self.cols,
        )

    def __sub__(self, other: "RatMat") -> "RatMat":
        self._check_same(other)
        return RatMat._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)),
            self.rows, self.cols,
        )

    def __neg__(self) -> "RatMat":
        return RatMat._raw(tuple(tuple(-a for a in r) for r in self._e), self.rows, self.cols)

    def scale(self, s) -> "RatMat":
        s = rat(s)
        return RatMat._raw(tuple(tuple(s * a for a in r) for r in self._e), self.rows, self.cols)

    def __mul__(self, s) -> "RatMat":
        if isinstance(s, RatMat):
            raise TypeError("use @ for matrix products")
        return self.scale(s)

    __rmul__ = __mul__

    def __truediv__(self, s) -> "RatMat":
        s = rat(s)
        if s == 0:
            raise ZeroDivisionError("matrix divided by zero")
        return self.scale(1 / s)

    def __matmul__(self, other: "RatMat") -> "RatMat":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = list(zip(*other._e)) if other.rows else [()] * other.cols
        return RatMat._raw(
            tuple(
                tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in ocols)
                for r in self._e
            ),
            self.rows, other.cols,
        )

    @property
    def T(self) -> "RatMat":
        return RatMat._raw(tuple(zip(*self._e)) if self.rows else (), self.cols, self.rows)

    def trace(self) -> Fraction:
        return sum((self._e[i][i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def is_zero(self) -> bool:
        return all(v == 0 for r in self._e for v in r)

    def scalar(self) -> Fraction:
        """The single entry of a 1x1 matrix (e.g. an inner product)."""
        if self.shape != (1, 1):
            raise ValueError(f"expected a 1x1 matrix, got {self.shape}")
        return self._e[0][0]

    def __eq__(self, other) -> bool:
        return isinstance(other, RatMat) and self.shape == other.shape and self._e == other._e

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._e))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(v) for v in r) for r in self._e)
        return f"RatMat[{body}]"


def dot(u: RatMat, v: RatMat) -> Fraction:
    """Pairing of two vectors given as rows or columns of equal length."""
    a, b = u.flat(), v.flat()
    if len(a) != len(b):
        raise ValueError("length mismatch in dot product")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def outer(col: RatMat, row: RatMat) -> RatMat:
    return RatMat.column(col.flat()) @ RatMat.row_vector(row.flat())


def cross(u: RatMat, v: RatMat) -> RatMat:
    """Cross product of two 3-vectors, returned as a column."""
    a, b = u.flat(), v.flat()
    if len(a) != 3 or len(b) != 3:
        raise ValueError("cross product needs 3-vectors")
    return RatMat.column([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def _row_reduce(data: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place reduced row echelon form over the first ``ncols`` columns.

    Pivots are the first nonzero entry found scanning down a column.
    Returns the pivot column indices.
    """
    pivots = []
    r = 0
    nrows = len(data)
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if data[i][c] != 0), None)
        if p is None:
            continue
        data[r], data[p] = data[p], data[r]
        inv = 1 / data[r][c]
        data[r] = [v * inv for v in data[r]]
        for i in range(nrows):
            if i != r and data[i][c] != 0:
                f = data[i][c]
                data[i] = [a - f * b for a, b in zip(data[i], data[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(a: RatMat) -> int:
    return len(_row_reduce(a.tolist(), a.cols))


def solve_linear(a: RatMat, b: RatMat) -> RatMat:
    """Unique solution x of a @ x = b (b may have several columns)."""
    if a.rows != a.cols:
        raise ValueError("solve_linear needs a square matrix")
    if b.rows != a.rows:
        raise ValueError("right-hand side has the wrong number of rows")
    n = a.rows
    aug = [ra + rb for ra, rb in zip(a.tolist(), b.tolist())]
    pivots = _row_reduce(aug, n)
    if len(pivots) < n:
        raise SingularMatrix("matrix is singular")
    return RatMat([row[n:] for row in aug], cols=b.cols)


def mat_inverse(a: RatMat) -> RatMat:
    return solve_linear(a, RatMat.identity(a.rows))


def nullspace(a: RatMat) -> list[RatMat]:
    """Basis of the right kernel, one column per free variable."""
    data = a.tolist()
    pivots = _row_reduce(data, a.cols)
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * a.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -data[r][fc]
        basis.append(RatMat.column(v))
    return basis


def left_nullspace(a: RatMat) -> list[RatMat]:
    """Basis of row vectors y with y @ a = 0."""
    return [v.T for v in nullspace(a.T)]


def det(a: RatMat) -> Fraction:
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    data = a.tolist()
    n = a.rows
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if data[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            data[c], data[p] = data[p], data[c]
            result = -result
        piv = data[c][c]
        result *= piv
        for i in range(c + 1, n):
            if data[i][c] != 0:
                f = data[i][c] / piv
                data[i] = [x - f * y for x, y in zip(data[i], data[c])]
    return result


def charpoly(a: RatMat) -> list[Fraction]:
    """Coefficients of det(t I - a), highest degree first (monic).

    Faddeev-LeVerrier recursion; exact over the rationals.
    """
    n = a.rows
    coeffs = [Fraction(1)]
    ident = RatMat.identity(n)
    m = RatMat.zeros(n, n)
    for k in range(1, n + 1):
        m = a @ m + ident.scale(coeffs[-1])
        coeffs.append(-(a @ m).trace() / k)
    return coeffs


def poly_from_roots(roots: Sequence) -> list[Fraction]:
    """Monic coefficients (highest first) of prod (t - r)."""
    coeffs = [Fraction(1)]
    for r in roots:
        r = rat(r)
        nxt = coeffs + [Fraction(0)]
        for i in range(1, len(nxt)):
            nxt[i] -= r * coeffs[i - 1]
        coeffs = nxt
    return coeffs


def eigenspace(a: RatMat, value) -> list[RatMat]:
    """Right eigenvectors of ``a`` for the exact eigenvalue ``value``."""
    return nullspace(a - RatMat.identity(a.rows).scale(value))


def projective_frame(vectors: Sequence[RatMat]) -> RatMat:
    """Similarity sending v_1..v_m onto coordinate directions and v_{m+1} to all-ones.

    With T = [v_1 .. v_m] and w = T^-1 v_{m+1}, the result is diag(w)^-1 T^-1.
    """
    if len(vectors) < 2:
        raise DegenerateFrame("need m+1 vectors")
    m = len(vectors) - 1
    if any(v.shape != (m, 1) for v in vectors):
        raise DegenerateFrame(f"expected {m + 1} columns of length {m}")
    frame = RatMat.from_columns(list(vectors[:m]))
    try:
        frame_inv = mat_inverse(frame)
    except SingularMatrix:
        raise DegenerateFrame("first m vectors are linearly dependent") from None
    weights = (frame_inv @ vectors[m]).flat()
    if any(w == 0 for w in weights):
        raise DegenerateFrame("last vector has a zero coordinate in the frame basis")
    return RatMat.diag([1 / w for w in weights]) @ frame_inv


@dataclass(frozen=True)
class SamplePlan:
    sample_count: int = 20
    seed: int = 0
    excluded_points: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError("sample_count must be positive")
        object.__setattr__(self, "excluded_points", tuple(rat(p) for p in self.excluded_points))

    def points(self) -> list[Fraction]:
        """The deterministic list of sample points for this plan."""
        rng = random.Random(self.seed)
        excluded = set(self.excluded_points)
        out: list[Fraction] = []
        seen = set()
        while len(out) < self.sample_count:
            z = Fraction(rng.randint(1, 10**6), rng.randint(1, 10**6))
            if rng.random() < 0.5:
                z = -z
            if z in excluded or z in seen:
                continue
            seen.add(z)
            out.append(z)
        return out


def rational_identity_zero(evaluator: Callable[[Fraction], RatMat], plan: SamplePlan) -> bool:
    """True iff ``evaluator`` returns the zero matrix at every sample of ``plan``."""
    return all(evaluator(z).is_zero() for z in plan.points())
