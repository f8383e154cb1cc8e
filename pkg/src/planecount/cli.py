"""Experiment driver: manifests, sharded runs, checkpoints, reports.

A :class:`Manifest` pins down an experiment completely — what to compute,
over which field and degree, with which strategy.  Its digest covers only
the science (kind, field, degree, mode, strategy, extras, tolerances), not
the execution layout (shard count, output paths, resume flag): two runs of
the same experiment must produce byte-identical report payloads whether
they ran in one shard or many, so layout can appear in neither the digest
nor the payload.  Reports carry exactly one volatile field, the
``generated_at`` timestamp, plus a ``payload_digest`` over everything else.

Exit codes: 0 success, 2 invalid manifest/arguments, 3 budget exceeded,
4 internal inconsistency (e.g. the fast decision and the scan oracle
disagree — that is a fatal error, never a warning).

Checkpoints are JSON-lines files, one per shard, written every
``CHECKPOINT_EVERY`` candidates; resuming replays the accumulated counts
and continues from the recorded position, and a fresh run and a resumed
run end in identical histograms.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field as dc_field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from . import ORDER_TAG, __version__
from .gf import GF, make_field, parse_field_spec
from .plane import closed_point_count, p2_size, point_count
from .poly import TernaryForm, monomial_count
from .sieve import (JetConditions, NonSurjectiveError, PointConstraint,
                    TargetSet, all_rational_points, fiber_density, jet_matrix,
                    singular_point_degree_range, smallest_surjective_d,
                    tail_bounds, uniform_target)
from .smooth import is_smooth, singular_mask, singular_scan_oracle
from .stats import (BudgetExceededError, Comparison, DEFAULT_EXHAUSTIVE_BUDGET,
                    Exhaustive, Histogram, Sampled, all_curves_model, compare,
                    comparison_csv, comparison_json, empirical_histogram,
                    scaled_central_moment, shard_ranges, smooth_model,
                    uniform_fibers_histogram)

EXIT_OK = 0
EXIT_INVALID_MANIFEST = 2
EXIT_BUDGET_EXCEEDED = 3
EXIT_INTERNAL_INCONSISTENCY = 4

CHECKPOINT_EVERY = 1 << 20

KINDS = ("distribution", "moments", "sieve-verify", "smooth-crosscheck",
         "proposition-exact", "bounds", "field-info")

_TARGET_NAMES = {
    "value-zero": PointConstraint.VALUE_ZERO,
    "value-nonzero": PointConstraint.VALUE_NONZERO,
    "jet-zero": PointConstraint.JET_ZERO,
    "jet-nonzero": PointConstraint.JET_NONZERO,
    "on-smooth": PointConstraint.ON_CURVE_SMOOTH,
    "free": PointConstraint.FREE,
}


class ManifestError(ValueError):
    """The manifest (or the flags that build one) is not valid."""


class InternalInconsistencyError(RuntimeError):
    """Two independent routes disagreed; the run must abort loudly."""


@dataclass(frozen=True)
class Manifest:
    """Complete experiment description; round-trips losslessly via JSON.

    ``shards``, ``out`` and ``resume`` describe execution, not the
    experiment, and are excluded from :meth:`digest`.
    """

    kind: str
    field: str
    degree: Optional[int] = None
    mode: Optional[str] = None
    strategy: Optional[Dict[str, object]] = None
    extras: Dict[str, object] = dc_field(default_factory=dict)
    tolerances: Dict[str, object] = dc_field(default_factory=dict)
    shards: int = 1
    out: Optional[str] = None
    resume: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ManifestError(f"unknown experiment kind {self.kind!r}")
        if self.shards < 1:
            raise ManifestError("shard count must be >= 1")
        try:
            parse_field_spec(self.field)
        except Exception as exc:
            raise ManifestError(f"bad field spec {self.field!r}: {exc}")
        if self.mode is not None and self.mode not in ("all", "smooth"):
            raise ManifestError(f"bad mode {self.mode!r}")
        if self.resume and not self.out:
            raise ManifestError("--resume needs --out (checkpoints live there)")

    # -- digest & serialization ------------------------------------------

    def science_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "field": self.field,
            "degree": self.degree,
            "mode": self.mode,
            "strategy": self.strategy,
            "extras": self.extras,
            "tolerances": self.tolerances,
        }

    def digest(self) -> str:
        return hashlib.sha256(
            canonical_json(self.science_dict()).encode()).hexdigest()

    def to_dict(self) -> Dict[str, object]:
        d = self.science_dict()
        d.update({"shards": self.shards, "out": self.out,
                  "resume": self.resume})
        return d

    @staticmethod
    def from_dict(d: Dict[str, object]) -> "Manifest":
        known = {f.name for f in dataclasses.fields(Manifest)}
        unknown = set(d) - known
        if unknown:
            raise ManifestError(f"unknown manifest keys: {sorted(unknown)}")
        return Manifest(**d)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @staticmethod
    def load(path: str) -> "Manifest":
        with open(path, encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"manifest {path} is not valid JSON: {exc}")
        return Manifest.from_dict(raw)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _strategy_of(man: Manifest):
    s = man.strategy or {"type": "exhaustive",
                         "budget": DEFAULT_EXHAUSTIVE_BUDGET}
    if s.get("type") == "exhaustive":
        return Exhaustive(int(s.get("budget", DEFAULT_EXHAUSTIVE_BUDGET)))
    if s.get("type") == "sampled":
        return Sampled(int(s["n"]), int(s.get("seed", 0)))
    raise ManifestError(f"bad strategy {s!r}")


def _field_of(man: Manifest) -> GF:
    p, k = parse_field_spec(man.field)
    return make_field(p, k)


# ---------------------------------------------------------------------------
# checkpointed counting


class _Checkpoint:
    """JSON-lines progress file for one shard of a counting run."""

    VERSION = 1

    def __init__(self, path: str, manifest_digest: str, shard: int, of: int,
                 lo: int, hi: int):
        self.path = path
        self.head = {"ckpt_version": self.VERSION, "type": "header",
                     "manifest_digest": manifest_digest,
                     "shard": shard, "of": of, "range": [lo, hi]}

    def load_progress(self) -> Optional[Tuple[int, List[int]]]:
        """(next_index, counts) recorded so far, or None if absent/foreign.

        A checkpoint written under a different manifest digest or shard
        layout is an error, not something to silently ignore.
        """
        if not os.path.exists(self.path):
            return None
        with open(self.path, encoding="utf-8") as fh:
            lines = [json.loads(ln) for ln in fh if ln.strip()]
        if not lines:
            return None
        head = lines[0]
        for key, want in self.head.items():
            if head.get(key) != want:
                raise ManifestError(
                    f"checkpoint {self.path} was written for a different "
                    f"run ({key}: {head.get(key)!r} != {want!r})")
        progress = [ln for ln in lines[1:]
                    if ln.get("type") in ("progress", "complete")]
        if not progress:
            return None
        last = progress[-1]
        done = self.head["range"][1] if last["type"] == "complete" \
            else last["done"]
        return done, list(last["counts"])

    def start(self) -> None:
        with open(self.path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(self.head, sort_keys=True) + "\n")

    def record(self, done: int, counts: List[int], complete: bool) -> None:
        line = {"ckpt_version": self.VERSION,
                "type": "complete" if complete else "progress",
                "counts": list(map(int, counts))}
        if not complete:
            line["done"] = done
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(line, sort_keys=True) + "\n")


def _auto_prescan(field: GF, d: int, mode: str):
    """A known-singular index mask when it is clearly worth building.

    Marking forms singular at a low-degree point lets the census skip the
    full decision for most candidates.  The mask changes no counts (the
    census only uses it to short-circuit), so it never shows up in
    provenance or reports.
    """
    if mode != "smooth" or field.q != 2:
        return None
    space = field.q ** monomial_count(d)
    if space <= (1 << 16) or space > (1 << 26):
        return None
    return singular_mask(field, d, range(1, 5))


def _counting_run(man: Manifest) -> Histogram:
    """Sharded, checkpointed histogram computation."""
    field = _field_of(man)
    strategy = _strategy_of(man)
    d = man.degree
    if d is None or d < 1:
        raise ManifestError("this experiment needs --degree >= 1")
    mode = man.mode or "all"
    if isinstance(strategy, Exhaustive):
        total = field.q ** monomial_count(d)
        if total > strategy.budget:
            raise BudgetExceededError(
                f"exhaustive run over {total} candidates exceeds budget "
                f"{strategy.budget}")
    else:
        total = strategy.n
    prescan = _auto_prescan(field, d, mode) \
        if isinstance(strategy, Exhaustive) else None

    merged: Optional[Histogram] = None
    for i, (lo, hi) in enumerate(shard_ranges(total, man.shards)):
        part = _shard_run(man, field, d, mode, strategy, i, lo, hi, prescan)
        merged = part if merged is None else merged.merge(part)
    assert merged is not None
    return merged


def _shard_run(man: Manifest, field: GF, d: int, mode: str, strategy,
               shard: int, lo: int, hi: int, prescan) -> Histogram:
    ckpt = None
    if man.out:
        ckpt = _Checkpoint(_ckpt_path(man.out, shard), man.digest(),
                           shard, man.shards, lo, hi)
    base = empirical_histogram(field, d, mode, strategy, span=(lo, lo),
                               singular_prescan=prescan)
    counts = [0] * len(base.counts)
    start = lo
    if ckpt is not None and man.resume:
        got = ckpt.load_progress()
        if got is not None:
            start, counts = got
    if ckpt is not None and start == lo:
        ckpt.start()
    pos = start
    while pos < hi:
        step = min(CHECKPOINT_EVERY, hi - pos)
        h = empirical_histogram(field, d, mode, strategy,
                                span=(pos, pos + step),
                                singular_prescan=prescan)
        counts = [a + b for a, b in zip(counts, h.counts)]
        pos += step
        if ckpt is not None:
            ckpt.record(pos, counts, complete=(pos >= hi))
    return dataclasses.replace(base, counts=tuple(counts))


def _ckpt_path(out: str, shard: int) -> str:
    root, _ = os.path.splitext(out)
    return f"{root}.shard{shard:03d}.ckpt"


# ---------------------------------------------------------------------------
# experiment runners (manifest -> payload dict)


def _run_distribution(man: Manifest) -> Dict[str, object]:
    field = _field_of(man)
    hist = _counting_run(man)
    model = smooth_model(field) if man.mode == "smooth" \
        else all_curves_model(field)
    comp = compare(hist, model)
    payload = comparison_json(comp)
    payload["manifest_digest"] = man.digest()
    payload["kind"] = man.kind
    return payload


def _run_moments(man: Manifest) -> Dict[str, object]:
    field = _field_of(man)
    q = field.q
    hist = _counting_run(man)
    model = smooth_model(field) if man.mode == "smooth" \
        else all_curves_model(field)
    max_k = int(man.extras.get("max_k", 4))
    rows = []
    for k in range(1, max_k + 1):
        emp = scaled_central_moment(hist, k, center=Fraction(q + 1),
                                    base=q + 1)
        mod = scaled_central_moment(model, k, center=Fraction(q + 1),
                                    base=q + 1)
        gauss = 0 if k % 2 else _double_factorial(k - 1)
        rows.append({
            "k": k,
            "empirical": _half_power_json(emp),
            "model": _half_power_json(mod),
            "gaussian_limit": gauss,
        })
    return {
        "kind": man.kind,
        "manifest_digest": man.digest(),
        "field": hist.field_spec,
        "modulus": hist.modulus,
        "degree": man.degree,
        "mode": hist.mode,
        "provenance": hist.provenance_dict(),
        "order_tag": ORDER_TAG,
        "code_version": __version__,
        "total": hist.total,
        "center": q + 1,
        "scale_base": q + 1,
        "model": {"n": model.n, "p": str(model.p)},
        "rows": rows,
        "note": ("gaussian_limit is the limiting standardized moment table; "
                 "it is not attainable at these degrees and is reported for "
                 "orientation only"),
    }


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def _half_power_json(v) -> Dict[str, object]:
    return {"numer": str(v.numer), "base": v.base,
            "half_power": v.half_power, "approx": v.approx()}


def _conditions_of(man: Manifest, field: GF) -> JetConditions:
    order = int(man.extras.get("order", 1))
    which = man.extras.get("points", "all")
    if which == "all":
        return all_rational_points(field, order)
    if which == "origin":
        from .plane import enumerate_p2
        return JetConditions.of((enumerate_p2(field)[0], order))
    raise ManifestError(f"unknown points selector {which!r}")


def _run_sieve_verify(man: Manifest) -> Dict[str, object]:
    field = _field_of(man)
    d = man.degree
    if d is None:
        raise ManifestError("sieve verification needs --degree")
    conds = _conditions_of(man, field)
    m = jet_matrix(field, d, conds)
    target_name = man.extras.get("target")
    density = None
    target_desc = None
    if target_name is not None:
        kind = _TARGET_NAMES.get(target_name)
        if kind is None:
            raise ManifestError(f"unknown target {target_name!r}")
        target = uniform_target(conds, kind)
        target_desc = target.describe()
        if m.is_surjective():
            density = str(fiber_density(field, d, conds, target))
    n_cols = monomial_count(d)
    fiber_size = (field.q ** (n_cols - m.dim)) if m.is_surjective() else None
    return {
        "kind": man.kind,
        "manifest_digest": man.digest(),
        "field": field.spec(),
        "modulus": field.modulus_str(),
        "degree": d,
        "order_tag": ORDER_TAG,
        "code_version": __version__,
        "conditions": conds.describe(),
        "conditions_digest": conds.digest(),
        "dim": m.dim,
        "rank": m.rank(),
        "surjective": m.is_surjective(),
        "fibers_uniform": m.is_surjective(),
        "fiber_size": str(fiber_size) if fiber_size is not None else None,
        "target": target_desc,
        "density": density,
        "smallest_surjective_degree":
            smallest_surjective_d(field, conds, d_max=max(d, 12)),
    }


def _run_smooth_crosscheck(man: Manifest) -> Dict[str, object]:
    field = _field_of(man)
    d = man.degree
    if d is None or d < 1:
        raise ManifestError("smooth-crosscheck needs --degree")
    strategy = _strategy_of(man)
    max_e = man.extras.get("oracle_max_e")
    max_e = int(max_e) if max_e is not None else None
    n_mono = monomial_count(d)
    space = field.q ** n_mono
    if isinstance(strategy, Exhaustive):
        if space > strategy.budget:
            raise BudgetExceededError(
                f"exhaustive crosscheck over {space} forms exceeds budget")
        indices = range(1, space)
    else:
        from .rng import sample_form_index
        indices = (sample_form_index(field, n_mono, strategy.seed, g)
                   for g in range(strategy.n))
    checked = 0
    smooth_n = 0
    witness_degrees: Dict[int, int] = {}
    for idx in indices:
        if idx == 0:
            continue
        form = TernaryForm.from_index(field, d, idx)
        fast = bool(is_smooth(form))
        bad = singular_scan_oracle(form, max_e=max_e)
        slow = not bad
        if fast != slow:
            raise InternalInconsistencyError(
                f"decision disagreement at candidate {idx} (degree {d}, "
                f"field {field.spec()}): is_smooth={fast}, "
                f"oracle singular points={bad}")
        checked += 1
        if fast:
            smooth_n += 1
        else:
            from .plane import point_degree
            degs = sorted(point_degree(field, P) for P in bad)
            witness_degrees[degs[0]] = witness_degrees.get(degs[0], 0) + 1
    return {
        "kind": man.kind,
        "manifest_digest": man.digest(),
        "field": field.spec(),
        "modulus": field.modulus_str(),
        "degree": d,
        "order_tag": ORDER_TAG,
        "code_version": __version__,
        "oracle_max_e": max_e if max_e is not None else (d - 1) ** 2,
        "checked": checked,
        "smooth": smooth_n,
        "singular": checked - smooth_n,
        "least_witness_degree_tally":
            {str(k): v for k, v in sorted(witness_degrees.items())},
        "disagreements": 0,
    }


def _run_proposition_exact(man: Manifest) -> Dict[str, object]:
    field = _field_of(man)
    d = man.degree
    if d is None:
        raise ManifestError("proposition-exact needs --degree")
    try:
        hist = uniform_fibers_histogram(field, d)
    except NonSurjectiveError as exc:
        raise ManifestError(
            f"value map not surjective at degree {d} (rank {exc.rank} of "
            f"{exc.dim}); pick a larger degree") from exc
    comp = compare(hist, all_curves_model(field))
    if comp.tv_distance != 0:
        raise InternalInconsistencyError(
            "uniform-fibers histogram deviates from the exact binomial: "
            f"tv={comp.tv_distance}")
    return {
        "kind": man.kind,
        "manifest_digest": man.digest(),
        "field": field.spec(),
        "modulus": field.modulus_str(),
        "degree": d,
        "order_tag": ORDER_TAG,
        "code_version": __version__,
        "certified_rank": dict(hist.provenance)["certified_rank"],
        "dim": p2_size(field.q),
        "counts": [str(c) for c in hist.counts],
        "total": str(hist.total),
        "tv_vs_model": str(comp.tv_distance),
        "exact_match": True,
    }


def _run_bounds(man: Manifest) -> Dict[str, object]:
    field = _field_of(man)
    d = man.degree
    if d is None:
        raise ManifestError("bounds needs --degree")
    r = int(man.extras.get("r", 1))
    medium, high = tail_bounds(field, d, r)
    lo_deg, hi_deg = singular_point_degree_range(d, r)
    window_empty = hi_deg < lo_deg
    density = None
    density_note = None
    validated: Optional[bool] = None
    strategy = _strategy_of(man)
    budget = strategy.budget if isinstance(strategy, Exhaustive) \
        else DEFAULT_EXHAUSTIVE_BUDGET
    if window_empty:
        density = Fraction(0)
        density_note = ("no closed point has degree in the empty window, "
                        "so the singular-in-window density is exactly zero")
    else:
        space = field.q ** monomial_count(d)
        if hi_deg <= 4 and space <= min(budget, 1 << 26):
            mask = singular_mask(field, d, range(lo_deg, hi_deg + 1))
            density = Fraction(int(mask.sum()), space)
            density_note = "exact, by linear-algebra marking of the window"
        else:
            density_note = ("window density not enumerated at this scale; "
                            "no validation claimed")
    if medium < 1 and density is not None:
        validated = bool(density <= medium)
        if not validated:
            raise InternalInconsistencyError(
                f"medium tail bound violated: density {density} > "
                f"bound {medium}")
    return {
        "kind": man.kind,
        "manifest_digest": man.digest(),
        "field": field.spec(),
        "modulus": field.modulus_str(),
        "degree": d,
        "order_tag": ORDER_TAG,
        "code_version": __version__,
        "r": r,
        "medium_bound": str(medium),
        "medium_vacuous": medium >= 1,
        "high_bound": str(high),
        "high_vacuous": high >= 1,
        "window": [lo_deg, hi_deg],
        "window_empty": window_empty,
        "window_density": None if density is None else str(density),
        "window_density_note": density_note,
        "validated": validated,
        "note": ("a vacuous bound (>= 1) excludes nothing at this scale; "
                 "the report flags it instead of claiming a validation"),
    }


def _run_field_info(man: Manifest) -> Dict[str, object]:
    field = _field_of(man)
    return {
        "kind": man.kind,
        "manifest_digest": man.digest(),
        "field": field.spec(),
        "p": field.p,
        "k": field.k,
        "q": field.q,
        "modulus": field.modulus_str(),
        "generator": field.gen,
        "plane_points": p2_size(field.q),
        "closed_point_counts":
            {str(e): closed_point_count(field, e) for e in range(1, 5)},
        "order_tag": ORDER_TAG,
        "code_version": __version__,
    }


_RUNNERS = {
    "distribution": _run_distribution,
    "moments": _run_moments,
    "sieve-verify": _run_sieve_verify,
    "smooth-crosscheck": _run_smooth_crosscheck,
    "proposition-exact": _run_proposition_exact,
    "bounds": _run_bounds,
    "field-info": _run_field_info,
}


def run(man: Manifest) -> Tuple[Dict[str, object], List[str]]:
    """Execute a manifest; return (report dict, written file paths)."""
    payload = _RUNNERS[man.kind](man)
    report = dict(payload)
    report["payload_digest"] = hashlib.sha256(
        canonical_json(payload).encode()).hexdigest()
    report["generated_at"] = datetime.now(timezone.utc).isoformat(
        timespec="seconds")
    written: List[str] = []
    if man.out:
        parent = os.path.dirname(os.path.abspath(man.out))
        os.makedirs(parent, exist_ok=True)
        with open(man.out, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(man.out)
        if man.kind == "distribution":
            csv_path = os.path.splitext(man.out)[0] + ".csv"
            comp_rows = payload.get("rows", [])
            with open(csv_path, "w", encoding="utf-8") as fh:
                fh.write("t,count,empirical_freq,model_pmf,diff,ci_halfwidth\n")
                for r in comp_rows:
                    ci = "" if r["ci_halfwidth"] is None \
                        else repr(r["ci_halfwidth"])
                    fh.write(f"{r['t']},{r['count']},"
                             f"{_dec(r['empirical_freq'])},"
                             f"{_dec(r['model_pmf'])},{_dec(r['diff'])},"
                             f"{ci}\n")
            written.append(csv_path)
    return report, written


def _dec(frac_str: str) -> str:
    from .stats import render_fraction
    return render_fraction(Fraction(frac_str), 12)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sp: argparse.ArgumentParser, degree: bool = True) -> None:
    sp.add_argument("--field", default="2", help="field spec, e.g. 3 or 2^2")
    if degree:
        sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--out", default=None, help="report JSON path")
    sp.add_argument("--manifest", default=None,
                    help="load a saved manifest instead of building one")
    sp.add_argument("--save-manifest", default=None,
                    help="also write the manifest built from these flags")


def _add_strategy(sp: argparse.ArgumentParser, default_sample=None) -> None:
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--sample", type=int, metavar="N")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=DEFAULT_EXHAUSTIVE_BUDGET)
    sp.add_argument("--shards", type=int, default=1)
    sp.add_argument("--resume", action="store_true")
    sp.set_defaults(default_sample=default_sample)


def _strategy_from_args(ns) -> Dict[str, object]:
    if getattr(ns, "sample", None):
        return {"type": "sampled", "n": ns.sample, "seed": ns.seed}
    if getattr(ns, "exhaustive", False) or ns.default_sample is None:
        return {"type": "exhaustive", "budget": ns.budget}
    return {"type": "sampled", "n": ns.default_sample, "seed": ns.seed}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="planecount",
        description="Exact experiments on point counts of plane curves "
                    "over small finite fields.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    f = sub.add_parser("field", help="field utilities")
    f.add_argument("action", choices=["info"])
    f.add_argument("--field", default="2")
    f.add_argument("--out", default=None)
    f.add_argument("--manifest", default=None)
    f.add_argument("--save-manifest", default=None)

    dist = sub.add_parser("dist", help="point-count histogram vs model")
    _add_common(dist)
    dist.add_argument("--mode", choices=["all", "smooth"], default="smooth")
    _add_strategy(dist)

    mom = sub.add_parser("moments", help="scaled central moments vs model")
    _add_common(mom)
    mom.add_argument("--mode", choices=["all", "smooth"], default="smooth")
    mom.add_argument("--max-k", type=int, default=4)
    _add_strategy(mom)

    sv = sub.add_parser("sieve", help="jet-map rank certificate and density")
    _add_common(sv)
    sv.add_argument("--order", type=int, choices=[1, 2], default=1)
    sv.add_argument("--points", choices=["all", "origin"], default="all")
    sv.add_argument("--target", choices=sorted(_TARGET_NAMES), default=None)

    sc = sub.add_parser("smooth-check",
                        help="cross-check the smoothness decision against "
                             "the brute-force scan oracle")
    _add_common(sc)
    sc.add_argument("--oracle-max-e", type=int, default=None)
    _add_strategy(sc, default_sample=200)

    pe = sub.add_parser("prop-exact",
                        help="exact uniform-fibers point-count identity")
    _add_common(pe)

    bd = sub.add_parser("bounds", help="tail bounds and window density")
    _add_common(bd)
    bd.add_argument("--r", type=int, default=1)
    bd.add_argument("--budget", type=int, default=DEFAULT_EXHAUSTIVE_BUDGET)

    return ap


def manifest_from_args(ns) -> Manifest:
    if getattr(ns, "manifest", None):
        return Manifest.load(ns.manifest)
    common = dict(field=ns.field, out=getattr(ns, "out", None))
    if ns.command == "field":
        return Manifest(kind="field-info", **common)
    common.update(degree=ns.degree)
    if ns.command == "dist":
        return Manifest(kind="distribution", mode=ns.mode,
                        strategy=_strategy_from_args(ns), shards=ns.shards,
                        resume=ns.resume, **common)
    if ns.command == "moments":
        return Manifest(kind="moments", mode=ns.mode,
                        strategy=_strategy_from_args(ns), shards=ns.shards,
                        resume=ns.resume, extras={"max_k": ns.max_k},
                        **common)
    if ns.command == "sieve":
        extras = {"order": ns.order, "points": ns.points}
        if ns.target:
            extras["target"] = ns.target
        return Manifest(kind="sieve-verify", extras=extras, **common)
    if ns.command == "smooth-check":
        extras = {}
        if ns.oracle_max_e is not None:
            extras["oracle_max_e"] = ns.oracle_max_e
        return Manifest(kind="smooth-crosscheck",
                        strategy=_strategy_from_args(ns), extras=extras,
                        **common)
    if ns.command == "prop-exact":
        return Manifest(kind="proposition-exact", **common)
    if ns.command == "bounds":
        return Manifest(kind="bounds", extras={"r": ns.r},
                        strategy={"type": "exhaustive", "budget": ns.budget},
                        **common)
    raise ManifestError(f"unknown command {ns.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        man = manifest_from_args(ns)
        if getattr(ns, "save_manifest", None):
            man.save(ns.save_manifest)
        report, written = run(man)
    except ManifestError as exc:
        print(f"invalid manifest: {exc}", file=sys.stderr)
        return EXIT_INVALID_MANIFEST
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET_EXCEEDED
    except InternalInconsistencyError as exc:
        print(f"INTERNAL INCONSISTENCY: {exc}", file=sys.stderr)
        return EXIT_INTERNAL_INCONSISTENCY
    if not written:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
