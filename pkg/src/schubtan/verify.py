"""Seeded verification sweeps and the two-lines-in-P^3 worked example.

Every instance is a pure function of ``(seed, class, index)``, so sweeps can be
spread over processes and merged in sorted order without changing the report.
"""

from __future__ import annotations

import json
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .brillnoether import (
    BNData,
    FiberKind,
    analyze_genus1_fiber,
    chain_dimension_check,
    gcirc_membership,
    genus1_fiber_model,
    rho,
)
from .exactlinalg import DEFAULT_PRIME, Field, span
from .flags import (
    almost_transverse_perm,
    classify,
    general_perms,
    longest,
    random_flags_with_sigma,
)
from .oracle import tangent_dim_oracle
from .schubert import (
    SchubertIndex,
    coxeter_bound,
    grass_dim,
    in_both_circ,
    in_sigma_circ,
    sample_schubert_point,
    sample_sigma_circ_point,
    schubert_indices,
    tangent_dim_pair_formula,
    tangent_dim_single,
    vanishing_sequence,
)

PAIR_CLASSES = ("identical", "transverse", "almost", "general")
CLASSES = PAIR_CLASSES + ("single", "fiber", "chain")
DRAW_BUDGET = 50


@dataclass(frozen=True)
class SweepConfig:
    d_max: int = 5
    r_max: int = 2
    field: str = f"fp:{DEFAULT_PRIME}"
    instances: int = 100
    seed: int = 0
    jobs: int | None = None
    out: str | None = None
    classes: tuple[str, ...] = CLASSES

    def __post_init__(self):
        if self.r_max < 0:
            raise ValueError("r_max must be nonnegative")
        if self.d_max < self.r_max + 2:
            raise ValueError(f"d_max = {self.d_max} must be at least r_max + 2 = {self.r_max + 2}")
        if self.instances < 1:
            raise ValueError("instances per class must be at least 1")
        if self.jobs is not None and self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        unknown = set(self.classes) - set(CLASSES)
        if unknown:
            raise ValueError(f"unknown instance classes {sorted(unknown)}")
        Field.parse(self.field)

    @property
    def fld(self) -> Field:
        return Field.parse(self.field)


@dataclass
class Report:
    kind: str
    inputs: dict
    instances: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def counters(self) -> dict:
        per_class: dict[str, dict[str, int]] = {}
        for inst in self.instances:
            c = per_class.setdefault(inst["class"], {"passed": 0, "failed": 0, "skipped": 0})
            c[_outcome(inst)] += 1
        total = {k: sum(c[k] for c in per_class.values()) for k in ("passed", "failed", "skipped")}
        return {"total": len(self.instances), **total, "per_class": dict(sorted(per_class.items()))}

    @property
    def violations(self) -> list[str]:
        return [f"{i['class']}#{i['index']}: {v}" for i in self.instances for v in i["violations"]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "inputs": self.inputs,
            "counters": self.counters,
            "ok": self.ok,
            "violations": self.violations,
            "instances": self.instances,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 3)
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)


def _outcome(inst: dict) -> str:
    if inst["violations"]:
        return "failed"
    return "skipped" if inst.get("skipped") else "passed"


def _instance_rng(seed: int, cls: str, index: int) -> random.Random:
    # str seeds hash through sha512, independent of PYTHONHASHSEED
    return random.Random(f"{seed}:{cls}:{index}")


def _random_index(rng: random.Random, d: int, r: int) -> SchubertIndex:
    return rng.choice(schubert_indices(d, r))


def _pair_sigma(cls: str, d: int, rng: random.Random):
    if cls == "identical":
        return tuple(range(1, d + 1)), None
    if cls == "transverse":
        return longest(d), None
    if cls == "almost":
        t = rng.randint(1, d - 1)
        return almost_transverse_perm(d, t), t
    return rng.choice(general_perms(d)), None


def _pair_instance(cls: str, index: int, cfg: SweepConfig) -> dict:
    rng = _instance_rng(cfg.seed, cls, index)
    fld = cfg.fld
    d_lo = 3 if cls == "general" else 2
    out = {"class": cls, "index": index, "violations": []}
    if cfg.d_max < d_lo:
        out["skipped"] = f"needs d >= {d_lo}"
        return out
    for _ in range(DRAW_BUDGET):
        d = rng.randint(d_lo, cfg.d_max)
        r = rng.randint(0, min(cfg.r_max, d - 2))
        a, b = _random_index(rng, d, r), _random_index(rng, d, r)
        sigma, t = _pair_sigma(cls, d, rng)
        p, q = random_flags_with_sigma(fld, sigma, rng)
        lam = sample_sigma_circ_point(p, a, q, b, rng)
        if lam is not None:
            break
    else:
        out["skipped"] = "no point of both open strata found"
        return out

    rep = tangent_dim_pair_formula(lam, p, a, q, b)
    oracle = tangent_dim_oracle(lam, [(p, a), (q, b)])
    bound = coxeter_bound(lam, p, a, q, b)
    out.update(
        d=d, r=r, a=list(a.seq), b=list(b.seq), sigma=list(sigma),
        flag_class=str(classify(p, q)), dim=rep.dim, oracle=oracle,
        rho_minus_1=rep.rho_minus_1, bound=bound, jump=rep.jump,
    )
    v = out["violations"]
    if rep.dim != oracle:
        v.append(f"formula {rep.dim} != oracle {oracle}")
    if rep.dim > bound:
        v.append(f"dim {rep.dim} exceeds bound {bound}")
    kind = classify(p, q).kind
    if kind == "transverse" and rep.dim != rep.rho_minus_1:
        v.append(f"transverse dim {rep.dim} != rho - 1 = {rep.rho_minus_1}")
    if cls == "almost" or kind == "almost":
        if rep.dim not in (rep.rho_minus_1, rep.rho_minus_1 + 1):
            v.append(f"almost-transverse dim {rep.dim} not in {{rho - 1, rho}}")
        if rep.jump != (rep.dim == rep.rho_minus_1 + 1):
            v.append(f"jump conditions {rep.jump} disagree with dim {rep.dim}")
    return out


def _single_instance(index: int, cfg: SweepConfig) -> dict:
    rng = _instance_rng(cfg.seed, "single", index)
    fld = cfg.fld
    d = rng.randint(2, cfg.d_max)
    r = rng.randint(0, min(cfg.r_max, d - 2))
    a = _random_index(rng, d, r)
    p, _ = random_flags_with_sigma(fld, longest(d), rng)
    lam = sample_schubert_point(p, a, rng)
    smooth = in_sigma_circ(lam, p, a)
    formula = tangent_dim_single(lam, p, a)
    oracle = tangent_dim_oracle(lam, [(p, a)])
    dim = grass_dim(d, r) - a.codim
    out = {
        "class": "single", "index": index, "violations": [], "d": d, "r": r, "a": list(a.seq),
        "open_stratum": smooth, "dim": formula, "oracle": oracle, "variety_dim": dim,
    }
    if formula != oracle:
        out["violations"].append(f"formula {formula} != oracle {oracle}")
    if smooth and oracle != dim:
        out["violations"].append(f"open-stratum point has tangent dim {oracle} != {dim}")
    if not smooth and oracle <= dim:
        out["violations"].append(f"boundary point has tangent dim {oracle} <= {dim}")
    return out


def _fiber_instance(index: int, cfg: SweepConfig) -> dict:
    rng = _instance_rng(cfg.seed, "fiber", index)
    r = rng.randint(0, cfg.r_max)
    d = rng.randint(r + 1, cfg.d_max)
    seqs = [s.seq for s in schubert_indices(d + 1, r)]
    data = BNData(1, r, d, rng.choice(seqs), rng.choice(seqs))
    kinds = [FiberKind("generic"), FiberKind("allp"), FiberKind("allq")]
    kinds += [FiberKind("mixed", t) for t in range(1, d)]
    kind = rng.choice(kinds)
    rep = analyze_genus1_fiber(data, kind, samples=3, seed=rng.randrange(2**32), fld=cfg.fld)
    summary = rep.to_dict()
    out = {"class": "fiber", "index": index, "violations": list(rep.violations)}
    for k in ("r", "d", "a", "b", "kind", "rho", "model", "expected_dims", "observed_dims", "jump_points"):
        out[k] = summary[k]
    out["excess_points"] = len(rep.excess_points)
    return out


def _chain_instance(index: int, cfg: SweepConfig) -> dict:
    rng = _instance_rng(cfg.seed, "chain", index)
    g = rng.randint(0, 3)
    r = rng.randint(0, cfg.r_max)
    d = rng.randint(r, cfg.d_max + 1)
    seqs = [s.seq for s in schubert_indices(d + 1, r)]
    data = BNData(g, r, d, rng.choice(seqs), rng.choice(seqs))
    verdict = chain_dimension_check(data)
    out = {"class": "chain", "index": index, "violations": [], **verdict.to_dict()}
    if not verdict.nonempty_agrees:
        out["violations"].append(f"nonempty = {verdict.nonempty} but rho_hat = {verdict.rho_hat}")
    if not verdict.dimension_agrees:
        out["violations"].append(f"max total {verdict.max_total} != rho {verdict.rho}")
    return out


def run_instance(cls: str, index: int, cfg: SweepConfig) -> dict:
    if cls in PAIR_CLASSES:
        return _pair_instance(cls, index, cfg)
    if cls == "single":
        return _single_instance(index, cfg)
    if cls == "fiber":
        return _fiber_instance(index, cfg)
    if cls == "chain":
        return _chain_instance(index, cfg)
    raise ValueError(f"unknown instance class {cls!r}")


def _run_task(task):
    return run_instance(*task)


def run_verify(cfg: SweepConfig) -> Report:
    start = time.perf_counter()
    tasks = [(cls, k, cfg) for cls in cfg.classes for k in range(cfg.instances)]
    jobs = cfg.jobs or os.cpu_count() or 1
    if jobs == 1:
        results = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    results.sort(key=lambda inst: (CLASSES.index(inst["class"]), inst["index"]))
    inputs = {k: v for k, v in asdict(cfg).items() if k not in ("jobs", "out")}
    inputs["classes"] = list(cfg.classes)
    report = Report("verify", inputs, results)
    report.wall_time = time.perf_counter() - start
    return report


# -- lines in P^3 meeting two crossing lines ----------------------------------------


def run_example_0202(fld: Field | None = None, tangent_samples: int = 8, seed: int = 0) -> Report:
    """Genus 1, ``r = 1``, ``d = 4``, ``a = b = (0, 2)`` on ``O(2P + 2Q)``.

    The fiber is the set of lines of ``P^3`` meeting the lines ``P^2`` and
    ``Q^2``, which cross at a point ``x``.  It has two components: ``Z_1``,
    the lines through ``x``, and ``Z_2``, the lines in the plane
    ``P^2 + Q^2``.  Their intersection is a pencil; every one of its points
    is enumerated for the open-locus test (a window of it over Q), and tangent dimensions are
    computed on the two excess points and a seeded sample of the rest.
    """
    start = time.perf_counter()
    fld = fld or Field(DEFAULT_PRIME)
    rng = random.Random(seed)
    data = BNData(1, 1, 4, (0, 2), (0, 2))
    model = genus1_fiber_model(data, FiberKind("mixed", 2), fld)
    p, a, q, b = model.p, model.a, model.q, model.b
    d = p.d
    x = (p[2] & q[2]).rows[0]
    plane = p[2] + q[2]
    u = next(v for v in p[2].rows if v not in span(fld, [x], d))
    w = next(v for v in q[2].rows if v not in span(fld, [x], d))
    off_plane = next(v for v in (tuple(1 if i == k else 0 for i in range(d)) for k in range(d)) if v not in plane)

    report = Report("example-0202", {
        "g": 1, "r": 1, "d": 4, "a": [0, 2], "b": [0, 2], "kind": "mixed:2",
        "field": fld.cli_name(), "rho": rho(data), "model_class": str(classify(p, q)),
        "tangent_samples": tangent_samples, "seed": seed,
    })
    add = report.instances.append

    def point_record(cls: str, index: int, lam, expect: int | None) -> dict:
        in_open = in_both_circ(lam, p, a, q, b)
        att_p, att_q = vanishing_sequence(lam, p).seq, vanishing_sequence(lam, q).seq
        gc = gcirc_membership(att_p, a.seq) and gcirc_membership(att_q, b.seq)
        oracle = tangent_dim_oracle(lam, [(p, a), (q, b)])
        rec = {
            "class": cls, "index": index, "violations": [], "vanishing_p": list(att_p),
            "vanishing_q": list(att_q), "in_gcirc": gc, "oracle": oracle,
        }
        if gc != in_open:
            rec["violations"].append("vanishing-sequence test disagrees with open strata")
        if in_open:
            rep = tangent_dim_pair_formula(lam, p, a, q, b)
            rec.update(dim=rep.dim, jump=rep.jump)
            if rep.dim != oracle:
                rec["violations"].append(f"formula {rep.dim} != oracle {oracle}")
            if expect is not None and rep.dim != expect:
                rec["violations"].append(f"tangent dim {rep.dim}, expected {expect}")
        elif expect is not None:
            rec["violations"].append("point expected in the open locus")
        return rec

    rho_minus_1 = report.inputs["rho"] - 1
    # generic points of each component
    for k in range(tangent_samples):
        c = [fld.random(rng, nonzero=True) for _ in range(3)]
        z1 = span(fld, [x, [c[0] * s + c[1] * t + c[2] * o for s, t, o in zip(u, w, off_plane)]], d)
        add(point_record("component_z1", k, z1, rho_minus_1))
        c = [fld.random(rng, nonzero=True) for _ in range(4)]
        z2 = span(fld, [[c[0] * s + c[1] * t for s, t in zip(x, u)], [c[2] * s + c[3] * t for s, t in zip(x, w)]], d)
        add(point_record("component_z2", k, z2, rho_minus_1))

    # the pencil Z_1 ∩ Z_2: lines x + (s u + t w), one per point of P^1
    directions = [(fld.one, fld.zero)] + [(fld(s), fld.one) for s in _field_elements(fld)]
    excluded = []
    for k, (s, t) in enumerate(directions):
        lam = span(fld, [x, [s * y + t * z for y, z in zip(u, w)]], d)
        att_p, att_q = vanishing_sequence(lam, p).seq, vanishing_sequence(lam, q).seq
        if not (gcirc_membership(att_p, a.seq) and gcirc_membership(att_q, b.seq)):
            excluded.append((k, lam))
    pencil = {
        "class": "pencil", "index": 0, "violations": [], "points": len(directions),
        "excluded": [k for k, _ in excluded],
    }
    excluded_spaces = {lam for _, lam in excluded}
    if excluded_spaces != {p[2], q[2]}:
        pencil["violations"].append(f"excluded points {pencil['excluded']} are not exactly P^2 and Q^2")
    add(pencil)

    for k, (_, lam) in enumerate(excluded):
        rec = point_record("excess", k, lam, None)
        rec["is_p_line"] = lam == p[2]
        rec["is_q_line"] = lam == q[2]
        if rec["in_gcirc"]:
            rec["violations"].append("excess point passes the open-locus test")
        for name, flag, idx in (("p", p, a), ("q", q, b)):
            cycle_dim = grass_dim(d, 1) - idx.codim
            single = tangent_dim_oracle(lam, [(flag, idx)])
            rec[f"{name}_cycle_tangent"] = single
            rec[f"{name}_cycle_dim"] = cycle_dim
        if not (rec["p_cycle_tangent"] > rec["p_cycle_dim"] or rec["q_cycle_tangent"] > rec["q_cycle_dim"]):
            rec["violations"].append("no Schubert cycle is singular at the excess point")
        add(rec)

    kept = [k for k in range(len(directions)) if k not in set(pencil["excluded"])]
    for n, k in enumerate(sorted(rng.sample(kept, min(tangent_samples, len(kept))))):
        s, t = directions[k]
        lam = span(fld, [x, [s * y + t * z for y, z in zip(u, w)]], d)
        rec = point_record("intersection", n, lam, rho_minus_1 + 1)
        rec["pencil_index"] = k
        if not rec.get("jump"):
            rec["violations"].append("jump conditions fail on the component intersection")
        add(rec)

    report.wall_time = time.perf_counter() - start
    return report


RATIONAL_WINDOW = 50


def _field_elements(fld: Field):
    """All of F_p, or the integers in a window when the field is infinite."""
    if fld.p is None:
        return range(-RATIONAL_WINDOW, RATIONAL_WINDOW + 1)
    return range(fld.p)
