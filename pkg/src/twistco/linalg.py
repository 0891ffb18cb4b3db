"""Exact linear algebra over labeled tensor-product spaces.

Two kinds of ground field are supported: the rationals (numpy object arrays of
``fractions.Fraction``) and prime fields GF(p) with p < 2**31 (int64 arrays
reduced mod p).  Basis vectors of a tensor product are enumerated row-major,
leftmost factor most significant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, FieldMismatch, LabelMismatch

MAX_PRIME = 1 << 31


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


class Field:
    """The ground field: ``Field()`` is Q, ``Field(p)`` is GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if p >= MAX_PRIME or not _is_prime(p):
                raise ValueError(f"expected a prime below 2**31, got {p}")
        object.__setattr__(self, "p", p)

    def __setattr__(self, key, value):
        raise AttributeError("Field is immutable")

    def __reduce__(self):
        return (Field, (self.p,))

    @classmethod
    def parse(cls, desc) -> "Field":
        if isinstance(desc, Field):
            return desc
        if desc is None or desc in ("Q", "rational", "QQ"):
            return cls()
        if isinstance(desc, int):
            return cls(desc)
        if isinstance(desc, Mapping) and "prime" in desc:
            return cls(int(desc["prime"]))
        if isinstance(desc, str):
            s = desc.strip()
            if s.upper().startswith("GF(") and s.endswith(")"):
                return cls(int(s[3:-1]))
            if s.upper().startswith("F") and s[1:].isdigit():
                return cls(int(s[1:]))
            if s.isdigit():
                return cls(int(s))
        raise ValueError(f"unrecognised field descriptor {desc!r}")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"GF({self.p})"

    def __repr__(self) -> str:
        return f"Field({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    @property
    def dtype(self):
        return object if self.p is None else np.int64

    # -- scalars -----------------------------------------------------------

    def coerce(self, x):
        """Canonical representative of ``x`` (int, Fraction, or ``"a/b"`` string)."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatch(f"{x.field.name} scalar used over {self.name}")
            return x.value
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, (np.integer,)):
            x = int(x)
        if isinstance(x, float):
            raise TypeError("floating-point scalars are not exact")
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator {x.denominator} vanishes in {self.name}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def inv(self, x):
        x = self.coerce(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x if self.p is None else pow(int(x), -1, self.p)

    def fmt(self, x) -> str:
        x = self.coerce(x)
        if self.p is None:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(int(x))

    # -- arrays ------------------------------------------------------------

    def array(self, data) -> np.ndarray:
        if self.p is None:
            arr = np.asarray(data, dtype=object)
            out = np.empty(arr.shape, dtype=object)
            flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
            for i, v in enumerate(flat_in):
                flat_out[i] = self.coerce(v)
            return out
        arr = np.asarray(data)
        if arr.dtype.kind in "iub":
            return (arr.astype(np.int64) % self.p).astype(np.int64)
        out = np.empty(arr.shape, dtype=np.int64)
        flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
        for i, v in enumerate(flat_in):
            flat_out[i] = self.coerce(v)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.p is None:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0))
            return out
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        if self.p is None:
            return _frac_matmul(a, b)
        return _kernels.matmul_mod(a, b, self.p)

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.p is None:
            out = self.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
            rb, cb = b.shape
            for i, j in zip(*np.nonzero(a != 0)):
                out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = a[i, j] * b
            return out
        return np.kron(a, b) % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def scale(self, c, a):
        c = self.coerce(c)
        return c * a if self.p is None else (int(c) * a) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p


def _frac_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of Fraction matrices, skipping zero entries of ``a``."""
    out = np.empty((a.shape[0], b.shape[1]), dtype=object)
    out.fill(Fraction(0))
    if a.size == 0 or b.size == 0:
        return out
    rows, cols = np.nonzero(a != 0)
    b_nz = [np.nonzero(b[k] != 0)[0] for k in range(b.shape[0])]
    for i, k in zip(rows, cols):
        idx = b_nz[k]
        if idx.size:
            out[i, idx] = out[i, idx] + a[i, k] * b[k, idx]
    return out


@dataclass(frozen=True)
class Scalar:
    """A field-tagged exact scalar; mixing fields raises ``FieldMismatch``."""

    value: object
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.coerce(self.value))

    def _other(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field.name} vs {other.field.name}")
            return other.value
        return self.field.coerce(other)

    def _wrap(self, v):
        return Scalar(v, self.field)

    def __add__(self, other):
        return self._wrap(self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return self._wrap(self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        v = self.value * self._other(other)
        return self._wrap(v if self.field.p is None else v % self.field.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self.field.inv(self._other(other))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except (TypeError, ValueError, ZeroDivisionError):
            return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.field.fmt(self.value)


@dataclass(frozen=True)
class TensorSpace:
    """An ordered tuple of labeled factors; the empty tuple is the ground field."""

    factors: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        facs = tuple((str(lbl), int(d)) for lbl, d in self.factors)
        for _, d in facs:
            if d < 0:
                raise ValueError("factor dimensions must be non-negative")
        object.__setattr__(self, "factors", facs)

    @classmethod
    def single(cls, label: str, dim: int) -> "TensorSpace":
        return cls(((label, dim),))

    @property
    def dim(self) -> int:
        return math.prod(d for _, d in self.factors)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.factors)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __getitem__(self, i) -> "TensorSpace":
        if isinstance(i, slice):
            return TensorSpace(self.factors[i])
        return TensorSpace((self.factors[i],))

    def __mul__(self, other: "TensorSpace") -> "TensorSpace":
        return TensorSpace(self.factors + other.factors)

    def __pow__(self, n: int) -> "TensorSpace":
        return TensorSpace(self.factors * n)

    def __str__(self) -> str:
        if not self.factors:
            return "k"
        return "⊗".join(f"{lbl}[{d}]" for lbl, d in self.factors)

    def multi_index(self, flat: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.unravel_index(flat, self.dims)) if self.factors else ()

    def flat_index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(multi), self.dims)) if self.factors else 0

    def basis(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.dims))


K = TensorSpace()


def _check_inner(outer_dom: TensorSpace, inner_cod: TensorSpace):
    if outer_dom.dim != inner_cod.dim:
        raise DimensionMismatch(f"cannot compose through {inner_cod} -> {outer_dom}")
    if outer_dom.factors and inner_cod.factors and outer_dom.labels != inner_cod.labels:
        raise LabelMismatch(f"factor labels differ: {inner_cod} vs {outer_dom}")


class LinMap:
    """An immutable linear map ``domain -> codomain`` stored as a dense matrix."""

    __slots__ = ("domain", "codomain", "field", "matrix")

    def __init__(self, domain: TensorSpace, codomain: TensorSpace, matrix, field: Field):
        mat = field.array(matrix) if not _is_canonical(matrix, field) else np.array(matrix, copy=True)
        if mat.shape != (codomain.dim, domain.dim):
            raise DimensionMismatch(
                f"matrix shape {mat.shape} does not match {codomain} <- {domain}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "codomain", codomain)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "matrix", mat)

    def __setattr__(self, key, value):
        raise AttributeError("LinMap is immutable")

    @classmethod
    def from_function(
        cls,
        domain: TensorSpace,
        codomain: TensorSpace,
        fn: Callable[[tuple[int, ...]], Mapping[tuple[int, ...], object]],
        field: Field,
    ) -> "LinMap":
        """Build a map from its action on basis multi-indices."""
        mat = field.zeros((codomain.dim, domain.dim))
        for col, src in enumerate(domain.basis()):
            for dst, coeff in fn(src).items():
                row = codomain.flat_index(dst)
                mat[row, col] = field.add(mat[row, col], field.coerce(coeff))
        return cls(domain, codomain, mat, field)

    @property
    def shape(self):
        return self.matrix.shape

    def __repr__(self) -> str:
        return f"LinMap({self.domain} -> {self.codomain} over {self.field.name})"

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return compose(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return (
            self.field == other.field
            and self.matrix.shape == other.matrix.shape
            and bool(np.all(self.matrix == other.matrix))
        )

    __hash__ = None

    def _same(self, other: "LinMap"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")
        if self.matrix.shape != other.matrix.shape:
            raise DimensionMismatch(f"{self} vs {other}")

    def __add__(self, other: "LinMap") -> "LinMap":
        self._same(other)
        return LinMap(self.domain, self.codomain, self.field.add(self.matrix, other.matrix), self.field)

    def __sub__(self, other: "LinMap") -> "LinMap":
        self._same(other)
        return LinMap(self.domain, self.codomain, self.field.sub(self.matrix, other.matrix), self.field)

    def __neg__(self) -> "LinMap":
        return LinMap(self.domain, self.codomain, self.field.neg(self.matrix), self.field)

    def scale(self, c) -> "LinMap":
        return LinMap(self.domain, self.codomain, self.field.scale(c, self.matrix), self.field)

    @property
    def T(self) -> "LinMap":
        return LinMap(self.codomain, self.domain, self.matrix.T, self.field)

    def relabel(self, domain: TensorSpace | None = None, codomain: TensorSpace | None = None) -> "LinMap":
        domain = domain or self.domain
        codomain = codomain or self.codomain
        return LinMap(domain, codomain, self.matrix, self.field)

    def apply(self, vector) -> np.ndarray:
        v = self.field.array(vector).reshape(-1, 1)
        return self.field.matmul(self.matrix, v).reshape(-1)

    def entry(self, out_multi: Sequence[int], in_multi: Sequence[int]) -> Scalar:
        r = self.codomain.flat_index(out_multi)
        c = self.domain.flat_index(in_multi)
        return Scalar(self.matrix[r, c], self.field)

    def is_zero(self) -> bool:
        return not bool(np.any(self.matrix != 0))

    def first_difference(self, other: "LinMap"):
        """``None`` if equal, else ``(input multi-index, output multi-index, lhs, rhs)``."""
        self._same(other)
        diff = np.nonzero(self.matrix != other.matrix)
        if diff[0].size == 0:
            return None
        r, c = int(diff[0][0]), int(diff[1][0])
        return (
            self.domain.multi_index(c),
            self.codomain.multi_index(r),
            self.field.fmt(self.matrix[r, c]),
            self.field.fmt(other.matrix[r, c]),
        )


def _is_canonical(matrix, field: Field) -> bool:
    if not isinstance(matrix, np.ndarray):
        return False
    if field.p is None:
        return matrix.dtype == object and all(type(x) is Fraction for x in matrix.flat)
    return matrix.dtype == np.int64 and (matrix.size == 0 or (matrix.min() >= 0 and matrix.max() < field.p))


def compose(*maps: LinMap) -> LinMap:
    """``compose(f, g, h) = f∘g∘h``."""
    if not maps:
        raise ValueError("compose needs at least one map")
    out = maps[-1]
    for f in reversed(maps[:-1]):
        if f.field != out.field:
            raise FieldMismatch(f"{f.field.name} vs {out.field.name}")
        _check_inner(f.domain, out.codomain)
        out = LinMap(out.domain, f.codomain, f.field.matmul(f.matrix, out.matrix), f.field)
    return out


def tensor(*maps: LinMap) -> LinMap:
    if not maps:
        raise ValueError("tensor needs at least one map")
    out = maps[0]
    for g in maps[1:]:
        if g.field != out.field:
            raise FieldMismatch(f"{out.field.name} vs {g.field.name}")
        out = LinMap(
            out.domain * g.domain,
            out.codomain * g.codomain,
            out.field.kron(out.matrix, g.matrix),
            out.field,
        )
    return out


def identity(space: TensorSpace, field: Field) -> LinMap:
    return LinMap(space, space, field.eye(space.dim), field)


def zero_map(domain: TensorSpace, codomain: TensorSpace, field: Field) -> LinMap:
    return LinMap(domain, codomain, field.zeros((codomain.dim, domain.dim)), field)


def permute(space: TensorSpace, order: Sequence[int], field: Field) -> LinMap:
    """The map ``V_0⊗…⊗V_{n-1} -> V_{order[0]}⊗…⊗V_{order[n-1]}`` on basis tensors."""
    order = tuple(order)
    if sorted(order) != list(range(len(space))):
        raise ValueError(f"{order} is not a permutation of {len(space)} factors")
    target = TensorSpace(tuple(space.factors[i] for i in order))
    n = space.dim
    mat = field.zeros((n, n))
    if n:
        src = np.arange(n).reshape(space.dims) if space.factors else np.arange(1)
        moved = np.transpose(src, order).reshape(-1) if space.factors else src
        one = field.one()
        for row, col in enumerate(moved):
            mat[row, col] = one
    return LinMap(space, target, mat, field)


def flip(U: TensorSpace, V: TensorSpace, field: Field) -> LinMap:
    """The swap ``U⊗V -> V⊗U``; each of U, V may itself have several factors."""
    nu, nv = len(U), len(V)
    order = tuple(range(nu, nu + nv)) + tuple(range(nu))
    return permute(U * V, order, field)


# -- elimination ------------------------------------------------------------


def rref(matrix: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    if field.p is not None:
        r, piv = _kernels.rref_mod(matrix, field.p)
        return r, [int(x) for x in piv]
    m = np.array(matrix, dtype=object, copy=True)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if m[i, c] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def _as_matrix(a) -> tuple[np.ndarray, Field | None]:
    if isinstance(a, LinMap):
        return a.matrix, a.field
    return a, None


def _resolve_field(field: Field | None, inferred: Field | None) -> Field:
    if field is not None and inferred is not None and field != inferred:
        raise FieldMismatch(f"{field.name} vs {inferred.name}")
    f = field or inferred
    if f is None:
        raise ValueError("field must be given for bare matrices")
    return f


def rank(a, field: Field | None = None) -> int:
    mat, inferred = _as_matrix(a)
    return len(rref(mat, _resolve_field(field, inferred))[1])


def solve_linear(a, b, field: Field | None = None) -> np.ndarray | None:
    """A solution ``x`` of ``A x = b`` (free variables set to zero), or ``None``."""
    mat, inferred = _as_matrix(a)
    f = _resolve_field(field, inferred)
    rhs = f.array(b).reshape(-1, 1)
    if rhs.shape[0] != mat.shape[0]:
        raise DimensionMismatch(f"rhs length {rhs.shape[0]} vs {mat.shape[0]} equations")
    aug = np.concatenate([f.array(mat) if mat.dtype != f.dtype else mat, rhs], axis=1)
    red, piv = rref(aug, f)
    ncols = mat.shape[1]
    if ncols in piv:
        return None
    x = f.zeros(ncols)
    for row, c in enumerate(piv):
        x[c] = red[row, ncols]
    return x


def kernel(a, field: Field | None = None) -> list[np.ndarray]:
    """A basis of the null space of ``A``."""
    mat, inferred = _as_matrix(a)
    f = _resolve_field(field, inferred)
    red, piv = rref(mat, f)
    ncols = mat.shape[1]
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for fc in free:
        v = f.zeros(ncols)
        v[fc] = f.one()
        for row, pc in enumerate(piv):
            v[pc] = f.neg(red[row, fc])
        basis.append(v)
    return basis


def invert(a, field: Field | None = None):
    """Inverse of a square matrix or ``LinMap``; ``None`` when singular."""
    mat, inferred = _as_matrix(a)
    f = _resolve_field(field, inferred)
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise DimensionMismatch(f"cannot invert a {mat.shape} matrix")
    aug = np.concatenate([mat, f.eye(n)], axis=1)
    red, piv = rref(aug, f)
    if piv[:n] != list(range(n)):
        return None
    inv = red[:, n:]
    if isinstance(a, LinMap):
        return LinMap(a.codomain, a.domain, inv, f)
    return inv
