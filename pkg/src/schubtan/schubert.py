"""Schubert varieties in Gr(r+1, H), their open strata and tangent spaces.

Points of the Grassmannian are :class:`~schubtan.exactlinalg.Subspace`
objects of dimension ``r + 1``.  The tangent space at ``Lam`` is identified with
``Hom(Lam, H/Lam)``, of dimension ``(r+1)(d-r-1)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .exactlinalg import Field, Subspace, meet_dim, rank_of_rows, span
from .flags import (
    Flag,
    almost_transverse_index,
    classify,
    compose,
    flag_from_chain,
    inversions,
    longest,
    relative_position,
)

GrassPoint = Subspace


class PreconditionError(ValueError):
    """The point does not lie in the required Schubert variety or stratum."""


@dataclass(frozen=True)
class SchubertIndex:
    d: int
    seq: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))
        s = self.seq
        if not s:
            raise ValueError("a Schubert index needs at least one entry")
        if s[0] < 0 or s[-1] >= self.d:
            raise ValueError(f"{s} must lie in [0, {self.d})")
        if any(x >= y for x, y in zip(s, s[1:])):
            raise ValueError(f"{s} is not strictly increasing")

    @classmethod
    def minimal(cls, d: int, r: int) -> "SchubertIndex":
        return cls(d, tuple(range(r + 1)))

    @property
    def r(self) -> int:
        return len(self.seq) - 1

    @property
    def active(self) -> tuple[int, ...]:
        s = self.seq
        return tuple(
            i for i in range(len(s)) if (i == 0 and s[0] > 0) or (i > 0 and s[i] > s[i - 1] + 1)
        )

    @property
    def codim(self) -> int:
        return sum(x - i for i, x in enumerate(self.seq))

    def __getitem__(self, i: int) -> int:
        return self.seq[i]

    def __len__(self) -> int:
        return len(self.seq)

    def dominates(self, other: "SchubertIndex") -> bool:
        return all(x >= y for x, y in zip(self.seq, other.seq))


def schubert_indices(d: int, r: int) -> list[SchubertIndex]:
    return [SchubertIndex(d, c) for c in combinations(range(d), r + 1)]


def grass_dim(d: int, r: int) -> int:
    return (r + 1) * (d - r - 1)


def expected_dim(a: SchubertIndex, b: SchubertIndex) -> int:
    """``rho - 1``: the expected dimension of the pairwise intersection."""
    return grass_dim(a.d, a.r) - a.codim - b.codim


def _check(lam: Subspace, p: Flag, a: SchubertIndex) -> None:
    if lam.ambient_dim != p.d or a.d != p.d:
        raise ValueError("point, flag and index live in different dimensions")
    if lam.dim != a.r + 1:
        raise ValueError(f"point has dimension {lam.dim}, index expects {a.r + 1}")


# -- membership ------------------------------------------------------------------


def vanishing_sequence(lam: Subspace, p: Flag) -> SchubertIndex:
    """Largest index ``a`` with ``lam`` in the Schubert variety of ``(p, a)``."""
    d, r1 = p.d, lam.dim
    dims = [meet_dim(lam, p[c]) for c in range(d + 1)]
    seq = tuple(max(c for c in range(d) if dims[c] >= r1 - i) for i in range(r1))
    return SchubertIndex(d, seq)


def in_sigma(lam: Subspace, p: Flag, a: SchubertIndex, active_only: bool = False) -> bool:
    _check(lam, p, a)
    r1 = a.r + 1
    idx = a.active if active_only else range(r1)
    return all(meet_dim(lam, p[a[i]]) >= r1 - i for i in idx)


def in_sigma_circ(lam: Subspace, p: Flag, a: SchubertIndex) -> bool:
    if not in_sigma(lam, p, a):
        raise PreconditionError("point is not in the Schubert variety")
    r1 = a.r + 1
    return all(meet_dim(lam, p[a[i]]) == r1 - i for i in a.active if i > 0)


def in_both_circ(lam: Subspace, p: Flag, a: SchubertIndex, q: Flag, b: SchubertIndex) -> bool:
    if not (in_sigma(lam, p, a) and in_sigma(lam, q, b)):
        return False
    return in_sigma_circ(lam, p, a) and in_sigma_circ(lam, q, b)


# -- tangent spaces ------------------------------------------------------------------


def tangent_dim_single(lam: Subspace, p: Flag, a: SchubertIndex) -> int:
    """Dimension of the tangent space to the Schubert variety at ``lam``.

    Only active indices with equality impose conditions.  Their subspaces
    ``lam ∩ P^{a_i}`` form a chain, so a basis adapted to the chain splits the
    conditions: each basis vector maps freely into the smallest allowed target.
    """
    if not in_sigma(lam, p, a):
        raise PreconditionError("point is not in the Schubert variety")
    d, r1 = p.d, a.r + 1
    meets = {i: lam & p[a[i]] for i in a.active}
    S = [i for i in a.active if meets[i].dim == r1 - i]
    if not S:
        return grass_dim(d, a.r)
    total = (r1 - meets[S[0]].dim) * (d - r1)
    for k, i in enumerate(S):
        deeper = meets[S[k + 1]].dim if k + 1 < len(S) else 0
        target = (p[a[i]] + lam).dim - r1
        total += (meets[i].dim - deeper) * target
    return total


@dataclass(frozen=True)
class TangentTerm:
    j: int
    m: int
    n: int
    codim: int


@dataclass(frozen=True)
class TangentReport:
    dim: int
    rho_minus_1: int
    terms: tuple[TangentTerm, ...]
    sigma_on_lambda: tuple[int, ...]
    flag_class: str
    jump: bool = False
    jump_witness: tuple[int, int, int, int] | None = None
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        out = {
            "dim": self.dim,
            "rho_minus_1": self.rho_minus_1,
            "terms": [{"j": t.j, "m": t.m, "n": t.n, "codim": t.codim} for t in self.terms],
            "sigma_on_lambda": list(self.sigma_on_lambda),
            "class": self.flag_class,
            "jump": self.jump,
            "jump_witness": list(self.jump_witness) if self.jump_witness else None,
        }
        out.update(self.extra)
        return out


def induced_flag(lam: Subspace, p: Flag) -> Flag:
    """The flag ``lam ∩ P^•`` written in the coordinates of ``lam``'s basis."""
    fld, r1 = lam.field, lam.dim
    chain = []
    for c in range(p.d + 1):
        meet = lam & p[c]
        chain.append(span(fld, [lam.coordinates(v) for v in meet.rows], r1))
    return flag_from_chain(fld, r1, chain)


def _last_active_at_most(a: SchubertIndex, j: int) -> int:
    vals = [a[i] for i in a.active if i <= j]
    return max(vals) if vals else 0


def jump_witness(lam: Subspace, p: Flag, a: SchubertIndex, q: Flag, b: SchubertIndex):
    """``(i, i', t, t')`` when all four almost-transverse jump conditions hold."""
    t = almost_transverse_index(p, q)
    if t is None:
        return None
    tp = p.d - t
    i = next((i for i in a.active if a[i] == t), None)
    ip = next((i for i in b.active if b[i] == tp), None)
    if i is None or ip is None:
        return None
    line = p[t] & q[tp]
    if not lam.contains(line) or not (p[t] + q[tp]).contains(lam):
        return None
    return (i, ip, t, tp)


def tangent_dim_pair_formula(
    lam: Subspace, p: Flag, a: SchubertIndex, q: Flag, b: SchubertIndex
) -> TangentReport:
    if not in_both_circ(lam, p, a, q, b):
        raise PreconditionError("point is not in both open strata")
    d, r = p.d, a.r
    sigma = relative_position(induced_flag(lam, p), induced_flag(lam, q)).sigma
    terms = []
    for j in range(r + 1):
        m = _last_active_at_most(a, j)
        n = _last_active_at_most(b, sigma[j] - 1)
        codim = d - (p[m] + q[n] + lam).dim
        terms.append(TangentTerm(j, m, n, codim))
    base = expected_dim(a, b)
    witness = jump_witness(lam, p, a, q, b)
    return TangentReport(
        dim=base + sum(t.codim for t in terms),
        rho_minus_1=base,
        terms=tuple(terms),
        sigma_on_lambda=sigma,
        flag_class=classify(p, q).kind,
        jump=witness is not None,
        jump_witness=witness,
    )


def coxeter_bound(lam: Subspace, p: Flag, a: SchubertIndex, q: Flag, b: SchubertIndex) -> int:
    if not in_both_circ(lam, p, a, q, b):
        raise PreconditionError("point is not in both open strata")
    tau = relative_position(p, q).sigma
    return expected_dim(a, b) + inversions(compose(longest(p.d), tau))


# -- sampling ----------------------------------------------------------------------

SAMPLE_ATTEMPTS = 64


def _combo(fld: Field, vectors: Sequence[Sequence], rng: random.Random, sparse: bool):
    d = len(vectors[0])
    p = fld.p
    while True:
        coeffs = []
        for _ in vectors:
            if sparse and rng.random() < 0.5:
                coeffs.append(fld.zero)
            else:
                coeffs.append(fld.random(rng, nonzero=True))
        if any(coeffs):
            break
    acc = [fld.zero] * d
    for c, v in zip(coeffs, vectors):
        if c:
            acc = [x + c * y for x, y in zip(acc, v)]
    return tuple(x % p for x in acc) if p is not None else tuple(acc)


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def sample_intersection_point(
    p: Flag,
    a: SchubertIndex,
    q: Flag,
    b: SchubertIndex,
    seed,
    attempts: int = SAMPLE_ATTEMPTS,
    sparse: float = 0.5,
    open_strata: bool = False,
) -> Subspace | None:
    """Random point of both Schubert varieties, or ``None`` once ``attempts`` are used.

    Each attempt picks a bijection ``pi`` of ``{0..r}`` and takes
    ``lambda_j`` in ``P^{a_j} ∩ Q^{b_{pi(j)}}``, a random combination of the
    (P, Q)-basis vectors spanning that intersection.  With probability
    ``sparse`` the coefficients are thinned out, which reaches special loci.
    With ``open_strata`` the point must also lie in both open strata.
    """
    rng = _rng(seed)
    fld, d, r1 = p.field, p.d, a.r + 1
    rel = relative_position(p, q)
    e, sigma = rel.basis, rel.sigma
    for _ in range(attempts):
        pi = list(range(r1))
        rng.shuffle(pi)
        thin = rng.random() < sparse
        vecs = []
        for j in range(r1):
            cand = [e[l - 1] for l in range(1, d + 1) if l > a[j] and sigma[l - 1] > b[pi[j]]]
            if not cand:
                break
            vecs.append(_combo(fld, cand, rng, thin))
        else:
            if rank_of_rows(fld, vecs, d) != r1:
                continue
            lam = span(fld, vecs, d)
            if not open_strata or in_both_circ(lam, p, a, q, b):
                return lam
    return None


def sample_sigma_circ_point(
    p: Flag,
    a: SchubertIndex,
    q: Flag,
    b: SchubertIndex,
    seed,
    attempts: int = SAMPLE_ATTEMPTS,
    sparse: float = 0.5,
) -> Subspace | None:
    """Random point of both open strata, or ``None`` after the retry budget."""
    return sample_intersection_point(p, a, q, b, seed, attempts, sparse, open_strata=True)


def sample_schubert_point(p: Flag, a: SchubertIndex, seed, sparse: float = 0.3) -> Subspace:
    """Random point of the Schubert variety, landing in every stratum with positive probability.

    A dominating index ``a' >= a`` is drawn first and ``lambda_j`` is taken in
    ``P^{a'_j}``; generic choices realize ``a'`` as the vanishing sequence.
    """
    rng = _rng(seed)
    fld, d, r1 = p.field, p.d, a.r + 1
    while True:
        seq = []
        lo = 0
        for i in range(r1):
            lo = max(lo, a[i])
            hi = d - (r1 - i)
            v = rng.randint(lo, hi) if rng.random() < 0.5 else lo
            seq.append(v)
            lo = v + 1
        thin = rng.random() < sparse
        vecs = []
        for c in seq:
            vecs.append(_combo(fld, p[c].rows, rng, thin))
        if rank_of_rows(fld, vecs, d) == r1:
            return span(fld, vecs, d)


def coordinate_points(p: Flag, q: Flag, r: int):
    """Spans of ``r + 1`` vectors of the (P, Q)-basis."""
    rel = relative_position(p, q)
    for S in combinations(range(p.d), r + 1):
        yield span(p.field, [rel.basis[i] for i in S], p.d)


def intersection_nonempty(p: Flag, a: SchubertIndex, q: Flag, b: SchubertIndex) -> bool:
    """Whether the two Schubert varieties meet.

    The intersection is stable under the torus acting diagonally on a
    (P, Q)-basis, so it is nonempty exactly when it contains a coordinate point.
    """
    return any(in_sigma(lam, p, a) and in_sigma(lam, q, b) for lam in coordinate_points(p, q, a.r))
