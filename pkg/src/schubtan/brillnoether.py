"""Brill-Noether numerology, genus-1 fiber models and refined chains.

The elliptic curve is never represented.  A fiber of the forgetful map to
``Pic^d`` over a line bundle ``L`` is modeled by the space of sections
``k^d`` together with the two vanishing-order flags at ``P`` and ``Q``, whose
relative position depends only on which of the special bundles ``L`` is.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .exactlinalg import DEFAULT_PRIME, Field, Subspace
from .flags import Flag, almost_transverse_perm, classify, flag_from_basis, flags_with_sigma, longest
from .oracle import tangent_dim_oracle
from .schubert import (
    SchubertIndex,
    expected_dim,
    grass_dim,
    in_both_circ,
    in_sigma_circ,
    intersection_nonempty,
    sample_intersection_point,
    tangent_dim_pair_formula,
    vanishing_sequence,
)


class UnsupportedGenus(ValueError):
    pass


class GenusMismatch(ValueError):
    pass


def _increasing(seq: Sequence[int], lo: int, hi: int) -> bool:
    return all(lo <= x <= hi for x in seq) and all(x < y for x, y in zip(seq, seq[1:]))


@dataclass(frozen=True)
class BNData:
    g: int
    r: int
    d: int
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))
        if min(self.g, self.r, self.d) < 0:
            raise ValueError("g, r, d must be nonnegative")
        for name, s in (("a", self.a), ("b", self.b)):
            if len(s) != self.r + 1:
                raise ValueError(f"{name} must have r + 1 = {self.r + 1} entries")
            if not _increasing(s, 0, self.d):
                raise ValueError(f"{name} = {s} must be strictly increasing in [0, {self.d}]")

    @classmethod
    def minimal(cls, g: int, r: int, d: int) -> "BNData":
        return cls(g, r, d, tuple(range(r + 1)), tuple(range(r + 1)))


def rho(data: BNData) -> int:
    g, r, d = data.g, data.r, data.d
    ram = sum(x - j for j, x in enumerate(data.a)) + sum(x - j for j, x in enumerate(data.b))
    return g - (r + 1) * (r + g - d) - ram


def rho_hat(data: BNData) -> int:
    g, r, d = data.g, data.r, data.d
    excess = 0
    for j in range(r + 1):
        s = data.a[j] + data.b[r - j]
        if s > d - g:
            excess += s - (d - g)
    return g - excess


def gcirc_membership(attained: Sequence[int], required: Sequence[int]) -> bool:
    """Open-locus test phrased on vanishing sequences alone.

    For each ``j > 0`` active in ``required``, exactly ``r + 1 - j`` entries
    of ``attained`` must reach ``required[j]``.
    """
    attained, required = tuple(attained), tuple(required)
    if len(attained) != len(required):
        raise ValueError("sequences of different lengths")
    if any(x < y for x, y in zip(attained, required)):
        raise ValueError(f"attained {attained} does not dominate required {required}")
    r = len(required) - 1
    for j in range(1, r + 1):
        if required[j] > required[j - 1] + 1:
            if sum(1 for x in attained if x >= required[j]) != r + 1 - j:
                return False
    return True


# -- genus-1 fibers ----------------------------------------------------------------


@dataclass(frozen=True)
class FiberKind:
    kind: str  # "generic" | "allp" | "allq" | "mixed"
    a: int | None = None

    def __post_init__(self):
        if self.kind not in ("generic", "allp", "allq", "mixed"):
            raise ValueError(f"unknown fiber kind {self.kind!r}")
        if (self.kind == "mixed") != (self.a is not None):
            raise ValueError("only the mixed kind carries a twist a")

    @classmethod
    def parse(cls, text: str) -> "FiberKind":
        text = text.strip().lower()
        if text.startswith("mixed:"):
            return cls("mixed", int(text.split(":", 1)[1]))
        return cls(text)

    def __str__(self) -> str:
        return f"mixed:{self.a}" if self.kind == "mixed" else self.kind


@dataclass(frozen=True)
class FiberModel:
    """Flags and Schubert indices describing one fiber, or an empty fiber.

    ``transverse`` models have tangent dimension ``expected`` at every point of
    both open strata; the raw almost-transverse model can jump by one.
    """

    data: BNData
    kind: FiberKind
    p: Flag | None = None
    a: SchubertIndex | None = None
    q: Flag | None = None
    b: SchubertIndex | None = None
    reindexed: bool = False
    richardson: bool = False
    empty_reason: str | None = None

    @property
    def empty(self) -> bool:
        return self.p is None

    @property
    def transverse(self) -> bool:
        return not self.empty and classify(self.p, self.q).kind == "transverse"

    @property
    def expected(self) -> int:
        """Dimension of both open strata for the model's own indices."""
        return expected_dim(self.a, self.b)


def _vanishing_to_codim(seq: Sequence[int], d: int, top_collapses: bool) -> tuple[int, ...] | None:
    """Flag codimensions for vanishing orders; ``None`` when the fiber is empty.

    Order ``d`` is only attainable on the bundle ``O(dP)`` (``top_collapses``),
    where it coincides with order ``d - 1``.
    """
    out = []
    for c in seq:
        if c < d:
            out.append(c)
        elif top_collapses:
            out.append(d - 1)
        else:
            return None
    if any(x >= y for x, y in zip(out, out[1:])):
        return None
    return tuple(out)


def genus1_fiber_model(data: BNData, kind: FiberKind, fld: Field | None = None) -> FiberModel:
    if data.g != 1:
        raise UnsupportedGenus(f"fiber models exist for genus 1 only, got g = {data.g}")
    if data.d <= 0:
        raise UnsupportedGenus("fiber models need d > 0")
    fld = fld or Field(DEFAULT_PRIME)
    d, r = data.d, data.r
    if kind.kind == "mixed" and not 0 < kind.a < d:
        raise ValueError(f"mixed twist must satisfy 0 < a < d, got {kind.a}")

    a_codim = _vanishing_to_codim(data.a, d, kind.kind == "allp")
    b_codim = _vanishing_to_codim(data.b, d, kind.kind == "allq")
    if a_codim is None or b_codim is None:
        return FiberModel(data, kind, empty_reason="vanishing order d is not attained on this bundle")
    reindexed = a_codim != data.a or b_codim != data.b

    if kind.kind == "mixed":
        t = kind.a
        p, q = flags_with_sigma(fld, almost_transverse_perm(d, t))
        js = [j for j in range(r + 1) if a_codim[j] == t and b_codim[r - j] == d - t]
        richardson = bool(js)
        if richardson:
            j = js[0]
            a_codim = a_codim[:j] + (t - 1,) + a_codim[j + 1:]
            if any(x >= y for x, y in zip(a_codim, a_codim[1:])):
                return FiberModel(data, kind, empty_reason="conditions at P collapse after re-indexing")
            p = _swap_codim_step(fld, d, t)
            reindexed = True
    else:
        richardson = False
        p, q = flags_with_sigma(fld, longest(d))

    a_idx, b_idx = SchubertIndex(d, a_codim), SchubertIndex(d, b_codim)
    if not intersection_nonempty(p, a_idx, q, b_idx):
        return FiberModel(data, kind, empty_reason="no coordinate point satisfies both conditions")
    return FiberModel(data, kind, p, a_idx, q, b_idx, reindexed, richardson)


def _swap_codim_step(fld: Field, d: int, t: int) -> Flag:
    """The first flag of the mixed model with its codimension-``t`` step moved off the defect line."""
    f = [tuple(fld.one if k == i else fld.zero for k in range(d)) for i in range(d)]
    moved = tuple(x + y for x, y in zip(f[t - 1], f[t]))
    basis = f[: t - 1] + [f[t], moved] + f[t + 1:]
    return flag_from_basis(fld, basis)


@dataclass
class FiberReport:
    data: BNData
    kind: FiberKind
    model: dict
    rho: int
    expected: list[int]
    points: list[dict] = field(default_factory=list)
    excess_points: list[dict] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        dims = sorted({pt["dim"] for pt in self.points})
        return {
            "g": self.data.g,
            "r": self.data.r,
            "d": self.data.d,
            "a": list(self.data.a),
            "b": list(self.data.b),
            "kind": str(self.kind),
            "rho": self.rho,
            "model": self.model,
            "expected_dims": self.expected,
            "observed_dims": dims,
            "samples": len(self.points),
            "jump_points": sum(1 for pt in self.points if pt["jump"]),
            "points": self.points,
            "excess_points": self.excess_points,
            "violations": self.violations,
            "ok": self.ok,
        }


def _model_summary(model: FiberModel) -> dict:
    if model.empty:
        return {"empty": True, "reason": model.empty_reason}
    return {
        "empty": False,
        "class": str(classify(model.p, model.q)),
        "a": list(model.a.seq),
        "b": list(model.b.seq),
        "reindexed": model.reindexed,
        "richardson": model.richardson,
        "expected_dim": model.expected,
    }


def analyze_genus1_fiber(
    data: BNData,
    kind: FiberKind,
    samples: int = 20,
    seed: int = 0,
    fld: Field | None = None,
    check_oracle: bool = True,
) -> FiberReport:
    model = genus1_fiber_model(data, kind, fld)
    rep = FiberReport(data, kind, _model_summary(model), rho(data), [])
    if model.empty:
        return rep
    p, a, q, b = model.p, model.a, model.q, model.b
    base = model.expected
    rep.expected = [base] if model.transverse else [base, base + 1]
    rng = random.Random(seed)

    for k in range(samples):
        lam = sample_intersection_point(p, a, q, b, rng, open_strata=True)
        if lam is None:
            break
        tr = tangent_dim_pair_formula(lam, p, a, q, b)
        pt = {"dim": tr.dim, "jump": tr.jump, "witness": list(tr.jump_witness) if tr.jump else None}
        if check_oracle:
            pt["oracle"] = tangent_dim_oracle(lam, [(p, a), (q, b)])
            if pt["oracle"] != tr.dim:
                rep.violations.append(f"sample {k}: formula {tr.dim} != oracle {pt['oracle']}")
        if tr.dim not in rep.expected:
            rep.violations.append(f"sample {k}: dim {tr.dim} outside {rep.expected}")
        if model.transverse and tr.jump:
            rep.violations.append(f"sample {k}: jump witness on a transverse model")
        if not model.transverse and (tr.dim == base + 1) != tr.jump:
            rep.violations.append(f"sample {k}: jump witness disagrees with dimension {tr.dim}")
        att_p, att_q = vanishing_sequence(lam, p).seq, vanishing_sequence(lam, q).seq
        if not (gcirc_membership(att_p, a.seq) and gcirc_membership(att_q, b.seq)):
            rep.violations.append(f"sample {k}: open-strata point fails the vanishing-sequence test")
        rep.points.append(pt)

    # points with excess vanishing: singular on a Schubert cycle
    for k in range(samples):
        lam = sample_intersection_point(p, a, q, b, rng, sparse=0.9)
        if lam is None or in_both_circ(lam, p, a, q, b):
            continue
        chk = excess_point_check(lam, model)
        rep.excess_points.append(chk)
        if chk["gcirc"] or not chk["schubert_singular"] or not chk["stratum_agrees"]:
            rep.violations.append(f"excess point {k}: {chk}")
        if model.transverse and not chk["fiber_singular"]:
            rep.violations.append(f"excess point {k}: transverse fiber not singular")
    return rep


def excess_point_check(lam: Subspace, model: FiberModel) -> dict:
    """Tangent data at a point outside the open locus.

    Such a point fails the vanishing-sequence test for at least one flag, and
    the Schubert variety of that flag has tangent dimension above its own
    dimension there.  ``fiber_singular`` compares the tangent space of the
    fiber with the model's expected dimension.
    """
    p, a, q, b = model.p, model.a, model.q, model.b
    d, r = p.d, a.r
    out = {"gcirc": True, "schubert_singular": False, "stratum_agrees": True}
    for name, flag, idx in (("P", p, a), ("Q", q, b)):
        good = gcirc_membership(vanishing_sequence(lam, flag).seq, idx.seq)
        out["stratum_agrees"] = out["stratum_agrees"] and good == in_sigma_circ(lam, flag, idx)
        if not good:
            out["gcirc"] = False
            single = tangent_dim_oracle(lam, [(flag, idx)])
            out[f"{name}_cycle_tangent"] = single
            out[f"{name}_cycle_dim"] = grass_dim(d, r) - idx.codim
            out["schubert_singular"] = out["schubert_singular"] or single > grass_dim(d, r) - idx.codim
    out["fiber_tangent"] = tangent_dim_oracle(lam, [(p, a), (q, b)])
    out["fiber_singular"] = out["fiber_tangent"] > model.expected
    return out


# -- chains of curves ------------------------------------------------------------


@dataclass(frozen=True)
class ChainAssignment:
    genera: tuple[int, ...]
    a_seqs: tuple[tuple[int, ...], ...]
    b_seqs: tuple[tuple[int, ...], ...]
    rhos: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.genera)

    @property
    def total(self) -> int:
        return sum(self.rhos)

    def to_dict(self) -> dict:
        return {
            "genera": list(self.genera),
            "a": [list(s) for s in self.a_seqs],
            "b": [list(s) for s in self.b_seqs],
            "rho": list(self.rhos),
            "total": self.total,
        }


@lru_cache(maxsize=None)
def _sequences(r: int, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(d + 1), r + 1))


@lru_cache(maxsize=None)
def _component(g: int, r: int, d: int, a: tuple, b: tuple) -> tuple[bool, int]:
    data = BNData(g, r, d, a, b)
    return rho_hat(data) >= 0, rho(data)


def enumerate_refined_chains(data: BNData, genera: Sequence[int]) -> list[ChainAssignment]:
    """All refined node assignments whose components are nonempty.

    The first component carries the imposed ``a`` at its first point and the
    last carries ``b``; node sequences satisfy ``b^i_j + a^{i+1}_{r-j} = d``.
    """
    genera = tuple(genera)
    if not genera or any(x not in (0, 1) for x in genera):
        raise ValueError("components must have genus 0 or 1")
    if sum(genera) != data.g:
        raise GenusMismatch(f"component genera sum to {sum(genera)}, expected g = {data.g}")
    r, d, n = data.r, data.d, len(genera)

    @lru_cache(maxsize=None)
    def suffixes(i: int, a_in: tuple) -> tuple:
        choices = (data.b,) if i == n - 1 else _sequences(r, d)
        out = []
        for b_out in choices:
            ok, _ = _component(genera[i], r, d, a_in, b_out)
            if not ok:
                continue
            if i == n - 1:
                out.append(((a_in, b_out),))
                continue
            a_next = tuple(d - b_out[r - j] for j in range(r + 1))
            for tail in suffixes(i + 1, a_next):
                out.append(((a_in, b_out),) + tail)
        return tuple(out)

    result = []
    for path in suffixes(0, data.a):
        a_seqs = tuple(x for x, _ in path)
        b_seqs = tuple(y for _, y in path)
        rhos = tuple(_component(g_i, r, d, x, y)[1] for g_i, (x, y) in zip(genera, path))
        result.append(ChainAssignment(genera, a_seqs, b_seqs, rhos))
    return result


@dataclass(frozen=True)
class ChainVerdict:
    data: BNData
    genera: tuple[int, ...]
    assignments: int
    nonempty: bool
    rho_hat: int
    rho: int
    max_total: int | None

    @property
    def nonempty_agrees(self) -> bool:
        return self.nonempty == (self.rho_hat >= 0)

    @property
    def dimension_agrees(self) -> bool:
        return not self.nonempty or self.max_total == self.rho

    @property
    def ok(self) -> bool:
        return self.nonempty_agrees and self.dimension_agrees

    def to_dict(self) -> dict:
        return {
            "g": self.data.g,
            "r": self.data.r,
            "d": self.data.d,
            "a": list(self.data.a),
            "b": list(self.data.b),
            "genera": list(self.genera),
            "assignments": self.assignments,
            "nonempty": self.nonempty,
            "rho_hat": self.rho_hat,
            "rho": self.rho,
            "max_total": self.max_total,
            "nonempty_agrees": self.nonempty_agrees,
            "dimension_agrees": self.dimension_agrees,
        }


def default_genera(g: int) -> tuple[int, ...]:
    """``g`` elliptic components, or a single rational one when ``g = 0``."""
    return (1,) * g if g > 0 else (0,)


def chain_dimension_check(data: BNData, genera: Sequence[int] | None = None) -> ChainVerdict:
    """Compare chain enumeration with the nonemptiness and dimension statements."""
    genera = tuple(genera) if genera is not None else default_genera(data.g)
    found = enumerate_refined_chains(data, genera)
    totals = [c.total for c in found]
    return ChainVerdict(
        data,
        genera,
        len(found),
        bool(found),
        rho_hat(data),
        rho(data),
        max(totals) if totals else None,
    )


def all_bn_data(g: int, r: int, d: int):
    for a in _sequences(r, d):
        for b in _sequences(r, d):
            yield BNData(g, r, d, a, b)
