"""Brute-force Zariski tangent spaces from the determinantal equations.

Work in the affine chart of the Grassmannian around ``Lam`` whose points are
row spans of ``L + M C``: ``L`` is the reduced basis of ``Lam`` and ``C`` the
unit vectors at its non-pivot columns.  A condition ``dim(Lam ∩ P^c) >= r+1-i``
says that ``(L + M C) W^T`` has rank at most ``i``, where the rows of ``W``
span the forms vanishing on ``P^c``.  Every ``(i+1)``-minor is linearized at
``M = 0`` via its cofactor expansion; the tangent space is the common kernel.

Nothing here looks at active indices, open strata or relative position.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .exactlinalg import Field, Subspace, det, rank_of_rows
from .flags import Flag
from .schubert import PreconditionError, SchubertIndex


def _dot(fld: Field, u: Sequence, v: Sequence):
    s = sum(x * y for x, y in zip(u, v))
    return s % fld.p if fld.p is not None else s


def _cofactors(fld: Field, sub: list[list]) -> list[list]:
    s = len(sub)
    if s == 1:
        return [[fld.one]]
    out = []
    for a in range(s):
        rows = sub[:a] + sub[a + 1:]
        line = []
        for b in range(s):
            minor = [r[:b] + r[b + 1:] for r in rows]
            v = det(fld, minor)
            if (a + b) % 2:
                v = -v
                if fld.p is not None:
                    v %= fld.p
            line.append(v)
        out.append(line)
    return out


def linear_conditions(lam: Subspace, p: Flag, a: SchubertIndex) -> list[list]:
    """First-order equations on the chart coordinates imposed by one flag condition."""
    fld, d, r1 = lam.field, lam.ambient_dim, lam.dim
    if a.r + 1 != r1 or p.d != d:
        raise ValueError("dimension mismatch between point, flag and index")
    L = lam.rows
    piv = set(lam.pivots)
    comp = [c for c in range(d) if c not in piv]
    nc = len(comp)
    eqs = []
    for i, c in enumerate(a.seq):
        if c == 0:
            continue
        W = p[c].annihilator().rows
        X = [[_dot(fld, L[r], W[k]) for k in range(c)] for r in range(r1)]
        rk = rank_of_rows(fld, X, c)
        if rk > i:
            raise PreconditionError(f"rank condition {i} fails: rank {rk}")
        s = i + 1
        # all i-minors vanish when rk < i, so every cofactor does too
        if s > min(r1, c) or rk < i:
            continue
        K = [[W[k][comp[u]] for k in range(c)] for u in range(nc)]
        for R in combinations(range(r1), s):
            for C in combinations(range(c), s):
                sub = [[X[r][k] for k in C] for r in R]
                cof = _cofactors(fld, sub)
                if not any(any(row) for row in cof):
                    continue
                eq = [fld.zero] * (r1 * nc)
                for ai, r in enumerate(R):
                    for u in range(nc):
                        coef = sum(cof[ai][bi] * K[u][k] for bi, k in enumerate(C))
                        eq[r * nc + u] = coef % fld.p if fld.p is not None else coef
                eqs.append(eq)
    return eqs


def tangent_dim_oracle(lam: Subspace, conditions: Iterable[tuple[Flag, SchubertIndex]]) -> int:
    fld, d, r1 = lam.field, lam.ambient_dim, lam.dim
    nvars = r1 * (d - r1)
    eqs = []
    for p, a in conditions:
        eqs.extend(linear_conditions(lam, p, a))
    if not eqs:
        return nvars
    return nvars - rank_of_rows(fld, eqs, nvars)
