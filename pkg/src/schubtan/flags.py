"""Complete flags indexed by codimension and the relative position of a pair.

A flag ``P`` in ``H = k^d`` has steps ``P[0] = H ⊃ P[1] ⊃ ... ⊃ P[d] = 0`` with
``codim P[i] = i``.  Permutations are tuples in one-line notation on
``{1, ..., d}``: ``sigma[l - 1]`` is the value at ``l``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Sequence

from .exactlinalg import (
    AmbientMismatch,
    Field,
    meet_dim,
    Subspace,
    Vector,
    apply_rows,
    contains_vector,
    full_space,
    random_invertible,
    rank_of_rows,
    span,
    unit_vector,
    zero_space,
)

Perm = tuple[int, ...]


@dataclass(frozen=True)
class Flag:
    field: Field
    ambient_dim: int
    steps: tuple[Subspace, ...]

    def __post_init__(self):
        d = self.ambient_dim
        if len(self.steps) != d + 1:
            raise ValueError(f"a complete flag in dimension {d} needs {d + 1} steps")
        for i, s in enumerate(self.steps):
            if s.ambient_dim != d or s.dim != d - i:
                raise ValueError(f"step {i} has dimension {s.dim}, expected {d - i}")
        for i in range(d):
            if not self.steps[i].contains(self.steps[i + 1]):
                raise ValueError(f"step {i + 1} is not contained in step {i}")

    def __getitem__(self, i: int) -> Subspace:
        return self.steps[i]

    @property
    def d(self) -> int:
        return self.ambient_dim


def flag_from_basis(fld: Field, vectors: Sequence[Sequence]) -> Flag:
    """Flag with ``steps[i] = span(v_{i+1}, ..., v_d)`` (1-based ``v``)."""
    d = len(vectors)
    if any(len(v) != d for v in vectors):
        raise ValueError("flag_from_basis needs d vectors of length d")
    if rank_of_rows(fld, [tuple(fld(x) for x in v) for v in vectors], d) != d:
        raise ValueError("flag basis vectors are linearly dependent")
    steps = [span(fld, vectors[i:], d) for i in range(d)] + [zero_space(fld, d)]
    return Flag(fld, d, tuple(steps))


def flag_from_chain(fld: Field, d: int, chain: Sequence[Subspace]) -> Flag:
    """Complete flag from a descending chain that may repeat subspaces."""
    steps: list[Subspace] = []
    for s in chain:
        if not steps or s != steps[-1]:
            steps.append(s)
    if not steps or steps[0].dim != d:
        steps.insert(0, full_space(fld, d))
    if steps[-1].dim != 0:
        steps.append(zero_space(fld, d))
    return Flag(fld, d, tuple(steps))


def standard_flag(fld: Field, d: int) -> Flag:
    return flag_from_basis(fld, [unit_vector(fld, d, i) for i in range(d)])


def opposite_flag(fld: Field, d: int) -> Flag:
    return flag_from_basis(fld, [unit_vector(fld, d, d - 1 - i) for i in range(d)])


# -- permutations -------------------------------------------------------------


def is_permutation(perm: Sequence[int]) -> bool:
    return sorted(perm) == list(range(1, len(perm) + 1))


def inversions(perm: Sequence[int]) -> int:
    if not is_permutation(perm):
        raise ValueError(f"{tuple(perm)} is not a permutation of 1..{len(perm)}")
    n = len(perm)
    return sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])


def compose(f: Sequence[int], g: Sequence[int]) -> Perm:
    """``(f ∘ g)(i) = f(g(i))``."""
    return tuple(f[g[i] - 1] for i in range(len(g)))


def inverse(perm: Sequence[int]) -> Perm:
    out = [0] * len(perm)
    for i, v in enumerate(perm, start=1):
        out[v - 1] = i
    return tuple(out)


def longest(d: int) -> Perm:
    """The decreasing permutation ``(d, d-1, ..., 1)``."""
    return tuple(range(d, 0, -1))


def adjacent_transposition(d: int, t: int) -> Perm:
    """Swap of ``t`` and ``t + 1``."""
    out = list(range(1, d + 1))
    out[t - 1], out[t] = out[t], out[t - 1]
    return tuple(out)


def almost_transverse_perm(d: int, t: int) -> Perm:
    return compose(longest(d), adjacent_transposition(d, t))


# -- relative position ----------------------------------------------------------


def _check_pair(p: Flag, q: Flag) -> None:
    if p.ambient_dim != q.ambient_dim or p.field != q.field:
        raise AmbientMismatch("flags live in different spaces")


def dim_table(p: Flag, q: Flag) -> list[list[int]]:
    """``table[i][j] = dim(P^i ∩ Q^j)`` for ``0 <= i, j <= d``."""
    _check_pair(p, q)
    d = p.d
    return [[meet_dim(p[i], q[j]) for j in range(d + 1)] for i in range(d + 1)]


@dataclass(frozen=True)
class RelPosition:
    sigma: Perm
    basis: tuple[Vector, ...]
    table: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=512)
def relative_position(p: Flag, q: Flag) -> RelPosition:
    """The permutation sigma and a (P, Q)-basis ``e_1, ..., e_d``.

    ``e_i`` lies in ``P^{i-1} \\ P^i`` and in ``Q^{sigma(i)-1} \\ Q^{sigma(i)}``.
    sigma is read off the second differences of the intersection-dimension
    table; each ``e_i`` is the first reduced basis vector of
    ``P^{i-1} ∩ Q^{sigma(i)-1}`` outside ``P^i ∩ Q^{sigma(i)-1} + P^{i-1} ∩ Q^{sigma(i)}``.
    """
    _check_pair(p, q)
    d = p.d
    inter = [[p[i] & q[j] for j in range(d + 1)] for i in range(d + 1)]
    D = [[s.dim for s in row] for row in inter]
    sigma = []
    for i in range(1, d + 1):
        hits = [
            j
            for j in range(1, d + 1)
            if D[i - 1][j - 1] - D[i][j - 1] - D[i - 1][j] + D[i][j] == 1
        ]
        if len(hits) != 1:
            raise ArithmeticError(f"dimension table has no unique jump in row {i}: {hits}")
        sigma.append(hits[0])
    sigma = tuple(sigma)
    if not is_permutation(sigma):
        raise ArithmeticError(f"extracted {sigma} is not a permutation")

    basis = []
    for i in range(1, d + 1):
        j = sigma[i - 1]
        big = inter[i - 1][j - 1]
        small = inter[i][j - 1] + inter[i - 1][j]
        e = next(v for v in big.rows if not contains_vector(small, v))
        basis.append(tuple(v for v in e))
    return RelPosition(sigma, tuple(basis), tuple(tuple(r) for r in D))


@dataclass(frozen=True)
class FlagPairClass:
    kind: str  # "identical" | "transverse" | "almost" | "general"
    t: int | None = None
    t_prime: int | None = None

    def __str__(self) -> str:
        if self.kind == "almost":
            return f"almost(t={self.t})"
        return self.kind


def almost_transverse_index(p: Flag, q: Flag) -> int | None:
    """``t`` if ``dim P^i ∩ Q^{d-i}`` is 1 at ``i = t`` and 0 elsewhere in ``1..d-1``."""
    _check_pair(p, q)
    d = p.d
    dims = {i: meet_dim(p[i], q[d - i]) for i in range(1, d)}
    ones = [i for i, v in dims.items() if v == 1]
    if len(ones) == 1 and all(v == 0 for i, v in dims.items() if i != ones[0]):
        return ones[0]
    return None


def is_transverse(p: Flag, q: Flag) -> bool:
    d = p.d
    return all(meet_dim(p[i], q[d - i]) == 0 for i in range(1, d))


def classify(p: Flag, q: Flag) -> FlagPairClass:
    """Transverse, identical, almost-transverse or general, checked in that order.

    The order only matters for ``d <= 2``: at ``d = 1`` every pair is
    transverse, and at ``d = 2`` identical flags are also almost-transverse
    with ``t = 1``.
    """
    _check_pair(p, q)
    d = p.d
    if is_transverse(p, q):
        return FlagPairClass("transverse")
    if p == q:
        return FlagPairClass("identical")
    t = almost_transverse_index(p, q)
    if t is not None:
        return FlagPairClass("almost", t, d - t)
    return FlagPairClass("general")


# -- construction ----------------------------------------------------------------


def flags_with_sigma(fld: Field, sigma: Sequence[int], change: Sequence[Sequence] | None = None) -> tuple[Flag, Flag]:
    """A flag pair in relative position ``sigma``.

    In the basis ``f_1..f_d`` (rows of ``change``, the identity by default) the
    first flag is ``span(f_{i+1}, ..., f_d)`` and ``f_l`` sits in the second flag
    at codimension ``sigma(l) - 1``.
    """
    d = len(sigma)
    if not is_permutation(sigma):
        raise ValueError(f"{tuple(sigma)} is not a permutation")
    f = [unit_vector(fld, d, i) for i in range(d)]
    if change is not None:
        f = apply_rows(fld, f, change)
    sinv = inverse(sigma)
    p = flag_from_basis(fld, f)
    q = flag_from_basis(fld, [f[sinv[k] - 1] for k in range(d)])
    return p, q


def random_flags_with_sigma(fld: Field, sigma: Sequence[int], rng: random.Random) -> tuple[Flag, Flag]:
    return flags_with_sigma(fld, sigma, random_invertible(fld, len(sigma), rng))


def general_perms(d: int) -> list[Perm]:
    """Permutations that are not id, the longest element, or one step below it."""
    special = {tuple(range(1, d + 1)), longest(d)}
    special |= {almost_transverse_perm(d, t) for t in range(1, d)}
    return [s for s in permutations(range(1, d + 1)) if s not in special]
