"""Exact linear algebra over the rationals and prime fields.

Vectors are plain tuples of field elements: ``Fraction`` over Q, ``int`` in
``[0, p)`` over F_p.  A :class:`Subspace` is stored as the reduced row-echelon
basis of its row span, so two subspaces are equal exactly when their stored
bases are equal.
"""

from __future__ import annotations

import random
from functools import cached_property
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple

DEFAULT_PRIME = 1009


class AmbientMismatch(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """The ground field: ``p is None`` means Q, otherwise F_p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @classmethod
    def parse(cls, spec: str) -> "Field":
        """Accepts ``q``, ``Q``, ``fp:<p>`` or ``Fp <p>``."""
        s = spec.strip()
        if s.lower() == "q":
            return cls(None)
        low = s.lower().replace(" ", ":")
        if low.startswith("fp:"):
            return cls(int(low[3:]))
        raise ValueError(f"unknown field spec {spec!r}")

    @property
    def is_rational(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "Q" if self.p is None else f"Fp {self.p}"

    def cli_name(self) -> str:
        return "q" if self.p is None else f"fp:{self.p}"

    # -- element handling --------------------------------------------------

    def __call__(self, x) -> int | Fraction:
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        if isinstance(x, str):
            return self(Fraction(x))
        return int(x) % self.p

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def random(self, rng: random.Random, nonzero: bool = False):
        """Uniform over F_p; small integers over Q."""
        if self.p is None:
            lo = 1 if nonzero else 0
            v = rng.randint(lo, 9)
            return Fraction(v if rng.random() < 0.5 else -v)
        if nonzero:
            return rng.randrange(1, self.p)
        return rng.randrange(self.p)

    def fmt(self, x) -> str:
        if self.p is None:
            x = Fraction(x)
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x)


Q = Field(None)


def vec(fld: Field, values: Iterable) -> Vector:
    return tuple(fld(v) for v in values)


def unit_vector(fld: Field, d: int, i: int) -> Vector:
    return tuple(fld.one if k == i else fld.zero for k in range(d))


def rref(fld: Field, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row-echelon form; returns (nonzero rows, pivot columns)."""
    p = fld.p
    m = [list(r) for r in rows]
    pivots: list[int] = []
    prow = 0
    nrows = len(m)
    for c in range(ncols):
        if prow == nrows:
            break
        sel = None
        for i in range(prow, nrows):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            continue
        m[prow], m[sel] = m[sel], m[prow]
        pr = m[prow]
        iv = fld.inv(pr[c])
        if p is None:
            pr = [x * iv for x in pr]
        else:
            pr = [x * iv % p for x in pr]
        m[prow] = pr
        for i in range(nrows):
            if i == prow:
                continue
            row = m[i]
            f = row[c]
            if not f:
                continue
            if p is None:
                m[i] = [x - f * y for x, y in zip(row, pr)]
            else:
                m[i] = [(x - f * y) % p for x, y in zip(row, pr)]
        pivots.append(c)
        prow += 1
    return m[:prow], pivots


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.nrows * self.ncols:
            raise ValueError("entries length must equal rows * cols")

    @classmethod
    def from_rows(cls, fld: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [vec(fld, r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(fld, len(rows), ncols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, fld: Field, n: int) -> "Matrix":
        return cls.from_rows(fld, [unit_vector(fld, n, i) for i in range(n)], n)

    @classmethod
    def zeros(cls, fld: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(fld, nrows, ncols, (fld.zero,) * (nrows * ncols))

    def rows(self) -> list[Vector]:
        n = self.ncols
        return [self.entries[i * n:(i + 1) * n] for i in range(self.nrows)]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.ncols:(i + 1) * self.ncols]

    def transpose(self) -> "Matrix":
        rows = self.rows()
        cols = [tuple(r[j] for r in rows) for j in range(self.ncols)]
        return Matrix(self.field, self.ncols, self.nrows, tuple(x for c in cols for x in c))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        p = self.field.p
        ocols = other.transpose().rows()
        out = []
        for r in self.rows():
            for c in ocols:
                s = sum(x * y for x, y in zip(r, c))
                out.append(s % p if p is not None else s)
        return Matrix(self.field, self.nrows, other.ncols, tuple(out))


def rank(m: Matrix) -> int:
    return len(rref(m.field, m.rows(), m.ncols)[1])


def rank_of_rows(fld: Field, rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(fld, rows, ncols)[1])


def det(fld: Field, rows: Sequence[Sequence]) -> int | Fraction:
    """Determinant by elimination."""
    n = len(rows)
    if n == 0:
        return fld.one
    p = fld.p
    m = [list(r) for r in rows]
    out = fld.one
    for c in range(n):
        sel = next((i for i in range(c, n) if m[i][c]), None)
        if sel is None:
            return fld.zero
        if sel != c:
            m[c], m[sel] = m[sel], m[c]
            out = -out
        piv = m[c][c]
        out = out * piv
        iv = fld.inv(piv)
        for i in range(c + 1, n):
            f = m[i][c]
            if f:
                f = f * iv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
                if p is not None:
                    m[i] = [x % p for x in m[i]]
        if p is not None:
            out %= p
    return out


@dataclass(frozen=True)
class Subspace:
    """Row span of ``rows`` inside ``field^ambient_dim``; ``rows`` is in RREF."""

    field: Field
    ambient_dim: int
    rows: tuple = dc_field(default=())

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Matrix:
        return Matrix(self.field, self.dim, self.ambient_dim, tuple(x for r in self.rows for x in r))

    @property
    def pivots(self) -> list[int]:
        return [next(i for i, x in enumerate(r) if x) for r in self.rows]

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def __contains__(self, v) -> bool:
        return contains_vector(self, v)

    def contains(self, other: "Subspace") -> bool:
        return contains(self, other)

    def annihilator(self) -> "Subspace":
        """Linear forms vanishing on the subspace, as row vectors."""
        return self._annihilator

    @cached_property
    def _annihilator(self) -> "Subspace":
        return kernel_of_rows(self.field, self.rows, self.ambient_dim)

    @cached_property
    def pivot_set(self) -> frozenset:
        return frozenset(self.pivots)

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of ``v`` in the stored basis; ``v`` must lie in the span."""
        return tuple(v[c] for c in self.pivots)

    def from_coordinates(self, coords: Sequence) -> Vector:
        p = self.field.p
        out = [self.field.zero] * self.ambient_dim
        for c, r in zip(coords, self.rows):
            if c:
                out = [x + c * y for x, y in zip(out, r)]
        if p is not None:
            out = [x % p for x in out]
        return tuple(out)


def span(fld: Field, vectors: Iterable[Sequence], ambient_dim: int) -> Subspace:
    if fld.p is None:
        vs = [vec(fld, v) for v in vectors]
    else:
        vs = [tuple(x % fld.p for x in v) for v in vectors]
    rows, _ = rref(fld, vs, ambient_dim)
    return Subspace(fld, ambient_dim, tuple(tuple(r) for r in rows))


def zero_space(fld: Field, d: int) -> Subspace:
    return Subspace(fld, d, ())


def full_space(fld: Field, d: int) -> Subspace:
    return Subspace(fld, d, tuple(unit_vector(fld, d, i) for i in range(d)))


def kernel_of_rows(fld: Field, rows: Sequence[Sequence], ncols: int) -> Subspace:
    red, pivots = rref(fld, rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [fld.zero] * ncols
        v[f] = fld.one
        for r, pc in zip(red, pivots):
            v[pc] = -r[f] if fld.p is None else (-r[f]) % fld.p
        basis.append(v)
    return span(fld, basis, ncols)


def kernel(m: Matrix) -> Subspace:
    """Right kernel ``{v : m v = 0}`` as a subspace of ``field^cols``."""
    return kernel_of_rows(m.field, m.rows(), m.ncols)


def _check(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim or u.field != v.field:
        raise AmbientMismatch(
            f"subspaces live in different spaces: {u.field}^{u.ambient_dim} vs {v.field}^{v.ambient_dim}"
        )


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check(u, v)
    if not v.rows:
        return u
    if not u.rows:
        return v
    rows, _ = rref(u.field, list(u.rows) + list(v.rows), u.ambient_dim)
    return Subspace(u.field, u.ambient_dim, tuple(tuple(r) for r in rows))


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check(u, v)
    if not u.rows or not v.rows:
        return zero_space(u.field, u.ambient_dim)
    if u.dim == u.ambient_dim:
        return v
    if v.dim == v.ambient_dim:
        return u
    forms = list(u.annihilator().rows) + list(v.annihilator().rows)
    return kernel_of_rows(u.field, forms, u.ambient_dim)


def meet_dim(u: Subspace, v: Subspace) -> int:
    """``dim(u ∩ v)`` without building the intersection."""
    _check(u, v)
    if not u.rows or not v.rows:
        return 0
    return u.dim + v.dim - rank_of_rows(u.field, list(u.rows) + list(v.rows), u.ambient_dim)


def contains_vector(u: Subspace, v: Sequence) -> bool:
    if len(v) != u.ambient_dim:
        raise AmbientMismatch("vector length does not match ambient dimension")
    return rank_of_rows(u.field, list(u.rows) + [tuple(v)], u.ambient_dim) == u.dim


def contains(u: Subspace, v: Subspace) -> bool:
    """True iff ``v`` is a subspace of ``u``."""
    _check(u, v)
    if v.dim > u.dim:
        return False
    return subspace_sum(u, v).dim == u.dim


def random_vector(fld: Field, d: int, rng: random.Random) -> Vector:
    return tuple(fld.random(rng) for _ in range(d))


def random_invertible(fld: Field, d: int, rng: random.Random) -> list[Vector]:
    while True:
        rows = [random_vector(fld, d, rng) for _ in range(d)]
        if rank_of_rows(fld, rows, d) == d:
            return rows


def apply_rows(fld: Field, vectors: Sequence[Sequence], g: Sequence[Sequence]) -> list[Vector]:
    """Map each row vector ``v`` to ``v g``."""
    p = fld.p
    d = len(g[0])
    out = []
    for v in vectors:
        acc = [fld.zero] * d
        for c, grow in zip(v, g):
            if c:
                acc = [x + c * y for x, y in zip(acc, grow)]
        out.append(tuple(x % p for x in acc) if p is not None else tuple(acc))
    return out


# -- text matrix format ------------------------------------------------------


def dumps_matrix(m: Matrix) -> str:
    head = "field Q" if m.field.p is None else f"field Fp {m.field.p}"
    lines = [head, f"{m.nrows} {m.ncols}"]
    lines += [" ".join(m.field.fmt(x) for x in r) for r in m.rows()]
    return "\n".join(lines) + "\n"


def loads_matrix(text: str) -> Matrix:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) < 2:
        raise ValueError("matrix text needs a field line and a shape line")
    head = lines[0].split()
    if head[0] != "field" or len(head) not in (2, 3):
        raise ValueError(f"bad field line {lines[0]!r}")
    if head[1] == "Q" and len(head) == 2:
        fld = Q
    elif head[1] == "Fp" and len(head) == 3:
        fld = Field(int(head[2]))
    else:
        raise ValueError(f"bad field line {lines[0]!r}")
    nrows, ncols = (int(x) for x in lines[1].split())
    body = lines[2:]
    if len(body) != nrows:
        raise ValueError(f"expected {nrows} rows, found {len(body)}")
    rows = []
    for ln in body:
        toks = ln.split()
        if len(toks) != ncols:
            raise ValueError(f"expected {ncols} entries in row {ln!r}")
        rows.append([fld(Fraction(t)) for t in toks])
    return Matrix.from_rows(fld, rows, ncols)
