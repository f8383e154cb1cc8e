"""Point-count distributions: exact models, empirical histograms, comparisons.

Two sides are being compared throughout:

* **Models** — the point count of a random curve treated as a sum of
  independent per-point indicators.  For a uniformly random form the chance
  that a fixed rational point lies on it is 1/q; conditioned on smoothness
  (in the limit) it is (q+1)/(q^2+q+1).  Either way the model distribution
  is an exact binomial with rational parameters, and every model quantity
  here (pmf, moments) is an exact `fractions.Fraction`.

* **Histograms** — actual counts over the coefficient space, exhaustive or
  sampled, shardable, and mergeable as a monoid.  The zero polynomial cuts
  out no curve: exhaustive runs skip it and say so in provenance; sampled
  runs count it where its vanishing set honestly lands (every point) since
  rejecting it would bias the draw.

Moments use one code path for both sides via ``weights()``.  Deviation
moments scaled by sqrt(q+1) are irrational for odd orders, so they are
returned as :class:`HalfPowerValue` — an exact rational times a half-integer
power of the base — and rendered to floats only at the report boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import __version__ as _code_version
from . import ORDER_TAG
from .gf import GF
from .plane import p2_size, point_count
from .poly import TernaryForm, monomial_count
from .rng import sample_form_index
from .smooth import is_smooth

DEFAULT_EXHAUSTIVE_BUDGET = 1 << 30

#: two-sided 99% normal quantile, used only for report-side half-widths
_Z99 = 2.5758293035489004


class BudgetExceededError(ValueError):
    """An exhaustive run was asked to visit more candidates than allowed."""


# ---------------------------------------------------------------------------
# models


@dataclass(frozen=True)
class ModelDist:
    """Binomial(n, p) with exact rational p: the independent-points model."""

    n: int
    p: Fraction

    def __post_init__(self):
        if not (0 <= self.p <= 1):
            raise ValueError("success probability out of [0,1]")

    def pmf(self) -> Tuple[Fraction, ...]:
        p = self.p
        return tuple(math.comb(self.n, t) * p ** t * (1 - p) ** (self.n - t)
                     for t in range(self.n + 1))

    def weights(self) -> List[Tuple[int, Fraction]]:
        return list(enumerate(self.pmf()))

    def mean(self) -> Fraction:
        return self.n * self.p


def smooth_model(field: GF) -> ModelDist:
    """Point-count model for smooth curves: p = (q+1)/(q^2+q+1).

    A smooth curve in the plane has q^2-1 affine cone points over each of
    its rational points among the q^3-1 nonzero vectors, giving a per-point
    incidence probability of (q^2-1)/(q^3-1) = (q+1)/(q^2+q+1); the model
    treats the q^2+q+1 points as independent.  Its mean is exactly q+1.
    """
    q = field.q
    n = p2_size(q)
    return ModelDist(n, Fraction(q + 1, n))


def all_curves_model(field: GF) -> ModelDist:
    """Point-count model over all forms: p = 1/q per point.

    For d large enough this is not an approximation: the value map at the
    rational points becomes surjective and the per-point values are exactly
    uniform and exactly independent, so the binomial is an identity.
    """
    q = field.q
    return ModelDist(p2_size(q), Fraction(1, q))


def stirling_moment_identity(n: int, p: Fraction, k: int) -> Fraction:
    """E[(sum of n independent Bernoulli(p))^k] in closed form.

    Expanding the k-th power over the n indicators and grouping terms by how
    many *distinct* indicators appear gives

        sum over l of S(k, l) * n(n-1)...(n-l+1) * p^l,

    where S(k, l) counts the partitions of k slots into l nonempty blocks
    (indicator powers collapse since each indicator is 0/1).  Must equal the
    pmf-based raw moment exactly; tests assert that equality.
    """
    if k < 1 or n < 1:
        raise ValueError("need n, k >= 1")
    p = Fraction(p)
    total = Fraction(0)
    falling = 1
    for level in range(1, min(k, n) + 1):
        falling *= n - (level - 1)
        total += _stirling2(k, level) * falling * p ** level
    return total


def _stirling2(k: int, l: int) -> int:
    row = [1] + [0] * k
    for i in range(1, k + 1):
        new = [0] * (k + 1)
        for j in range(1, i + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
    return row[l]


# ---------------------------------------------------------------------------
# histograms


@dataclass(frozen=True)
class Histogram:
    """Counts of forms by number of rational points on the cut-out curve.

    ``counts[t]`` is the number of counted forms whose zero locus hits
    exactly t rational points; indexes run 0..q^2+q+1 inclusive (the top
    slot is reachable only by forms vanishing on the whole plane).
    Histograms with identical metadata merge by adding counts, which is
    what makes sharded runs exact rather than approximate.
    """

    field_spec: str
    modulus: str
    q: int
    d: int
    mode: str  # "all" | "smooth"
    counts: Tuple[int, ...]
    provenance: Tuple[Tuple[str, object], ...]  # sorted key/value pairs

    def __post_init__(self):
        if self.mode not in ("all", "smooth"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if len(self.counts) != p2_size(self.q) + 1:
            raise ValueError("counts must cover t = 0..q^2+q+1")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def provenance_dict(self) -> Dict[str, object]:
        return dict(self.provenance)

    def freq(self, t: int) -> Fraction:
        return Fraction(self.counts[t], self.total)

    def weights(self) -> List[Tuple[int, Fraction]]:
        total = self.total
        return [(t, Fraction(c, total)) for t, c in enumerate(self.counts)]

    def merge(self, other: "Histogram") -> "Histogram":
        if (self.field_spec, self.q, self.d, self.mode, self.provenance) != \
           (other.field_spec, other.q, other.d, other.mode, other.provenance):
            raise ValueError("histograms come from different experiments")
        summed = tuple(a + b for a, b in zip(self.counts, other.counts))
        return replace(self, counts=summed)

    def mean(self) -> Fraction:
        return sum((Fraction(t * c) for t, c in enumerate(self.counts)),
                   Fraction(0)) / self.total

    def with_zero_form(self) -> "Histogram":
        """Re-add the zero polynomial analytically (mode "all" only).

        The zero polynomial vanishes at every point, so it lands in the top
        slot.  Exact comparisons against the uniform-fibers identity need
        the full linear space, hence this adjustment.
        """
        if self.mode != "all":
            raise ValueError("only all-forms histograms can re-add the zero form")
        prov = dict(self.provenance)
        if prov.get("zero_form") == "included":
            raise ValueError("zero form already included")
        prov["zero_form"] = "included"
        counts = list(self.counts)
        counts[-1] += 1
        return replace(self, counts=tuple(counts),
                       provenance=tuple(sorted(prov.items())))


@dataclass(frozen=True)
class Exhaustive:
    budget: int = DEFAULT_EXHAUSTIVE_BUDGET


@dataclass(frozen=True)
class Sampled:
    n: int
    seed: int


Strategy = Union[Exhaustive, Sampled]


def shard_ranges(total: int, n_shards: int) -> List[Tuple[int, int]]:
    """Split [0, total) into n_shards contiguous, disjoint, covering ranges."""
    if n_shards < 1:
        raise ValueError("need at least one shard")
    return [(i * total // n_shards, (i + 1) * total // n_shards)
            for i in range(n_shards)]


def empirical_histogram(field: GF, d: int, mode: str, strategy: Strategy,
                        shard: Optional[Tuple[int, int]] = None,
                        span: Optional[Tuple[int, int]] = None,
                        backend: Optional[str] = None,
                        singular_prescan=None) -> Histogram:
    """Count forms by rational-point count, exhaustively or by sampling.

    ``shard=(i, k)`` restricts to the i-th of k contiguous index ranges —
    over candidate indexes when exhaustive, over sample numbers when
    sampled.  Merging all shards reproduces the unsharded histogram
    exactly (exhaustive trivially; sampled because the draw for sample g
    depends only on (seed, g)).  ``span=(lo, hi)`` restricts to an explicit
    index range instead; the checkpointing driver uses it to work in
    resumable chunks.  At most one of shard/span may be given.
    """
    from .kernels import census  # local import: kernels pull in numpy

    if mode not in ("all", "smooth"):
        raise ValueError(f"unknown mode {mode!r}")
    if shard is not None and span is not None:
        raise ValueError("give shard or span, not both")
    n_mono = monomial_count(d)
    space = field.q ** n_mono
    if isinstance(strategy, Exhaustive):
        if space > strategy.budget:
            raise BudgetExceededError(
                f"exhaustive run over {space} candidates exceeds budget "
                f"{strategy.budget}")
        lo, hi = (0, space)
        if shard is not None:
            lo, hi = shard_ranges(space, shard[1])[shard[0]]
        if span is not None:
            lo, hi = span
        counts = census(field, d, mode, lo, hi, mask=singular_prescan,
                        backend=backend)
        prov = {"strategy": "exhaustive", "zero_form": "excluded"}
        counts_t = tuple(int(c) for c in counts)
    else:
        lo, hi = (0, strategy.n)
        if shard is not None:
            lo, hi = shard_ranges(strategy.n, shard[1])[shard[0]]
        if span is not None:
            lo, hi = span
        tally = [0] * (p2_size(field.q) + 1)
        for g in range(lo, hi):
            idx = sample_form_index(field, n_mono, strategy.seed, g)
            if idx == 0:
                # the zero polynomial: vanishes everywhere, is not smooth
                if mode == "all":
                    tally[-1] += 1
                continue
            form = TernaryForm.from_index(field, d, idx)
            if mode == "smooth" and not is_smooth(form):
                continue
            tally[point_count(form, 1)] += 1
        prov = {"strategy": "sampled", "n": strategy.n,
                "seed": strategy.seed, "zero_form": "counted-in-top-slot"}
        counts_t = tuple(tally)
    return Histogram(field_spec=field.spec(), modulus=field.modulus_str(),
                     q=field.q, d=d, mode=mode, counts=counts_t,
                     provenance=tuple(sorted(prov.items())))


def uniform_fibers_histogram(field: GF, d: int) -> Histogram:
    """The exact all-forms histogram from the uniform-fibers identity.

    Once the value map at the rational points is surjective (certified here
    by an explicit rank computation, not assumed from a degree bound), the
    vector of values of a uniform random form is exactly uniform, so the
    number of zeros among the q^2+q+1 values is exactly binomial and each
    histogram count is the integer q^N * pmf(t).  Includes the zero form
    (it is one of the q^N forms, sitting in the top slot).
    """
    from .sieve import all_rational_points, jet_matrix, NonSurjectiveError

    conds = all_rational_points(field, 1)
    m = jet_matrix(field, d, conds)
    if not m.is_surjective():
        raise NonSurjectiveError(m.rank(), m.dim, d)
    q = field.q
    space = q ** monomial_count(d)
    model = all_curves_model(field)
    counts = []
    for t, w in enumerate(model.pmf()):
        c = space * w
        assert c.denominator == 1, "fiber counts must be integers"
        counts.append(int(c))
    prov = {"strategy": "analytic-uniform-fibers", "zero_form": "included",
            "certified_rank": m.rank()}
    return Histogram(field_spec=field.spec(), modulus=field.modulus_str(),
                     q=q, d=d, mode="all", counts=tuple(counts),
                     provenance=tuple(sorted(prov.items())))


# ---------------------------------------------------------------------------
# moments (single code path over weights())


Dist = Union[Histogram, ModelDist]


@dataclass(frozen=True)
class HalfPowerValue:
    """Exact value numer / base^(half_power/2).

    For odd half_power the value is an irrational multiple of sqrt(base);
    keeping (numer, base, half_power) exact defers all rounding to
    :meth:`approx`.  Instances are canonical (half_power reduced mod 2), so
    dataclass equality is value equality.
    """

    numer: Fraction
    base: int
    half_power: int

    def __post_init__(self):
        object.__setattr__(self, "numer", Fraction(self.numer))
        # canonicalize: pull whole powers of base out of the radical
        hp = self.half_power
        num = self.numer
        while hp >= 2:
            num /= self.base
            hp -= 2
        while hp < 0:
            num *= self.base
            hp += 2
        if num == 0:
            hp = 0
        object.__setattr__(self, "numer", num)
        object.__setattr__(self, "half_power", hp)

    def is_exact_rational(self) -> bool:
        return self.half_power == 0

    def exact_rational(self) -> Fraction:
        if not self.is_exact_rational():
            raise ValueError("value carries a square root; use approx()")
        return self.numer

    def approx(self) -> float:
        return float(self.numer) / math.sqrt(self.base) ** self.half_power


def raw_moment(dist: Dist, k: int) -> Fraction:
    """E[t^k], exactly."""
    return sum((w * Fraction(t) ** k for t, w in dist.weights()), Fraction(0))


def central_moment(dist: Dist, k: int,
                   center: Optional[Fraction] = None) -> Fraction:
    """E[(t - center)^k], exactly; center defaults to the distribution mean."""
    if center is None:
        center = dist.mean()
    center = Fraction(center)
    return sum((w * (t - center) ** k for t, w in dist.weights()), Fraction(0))


def scaled_central_moment(dist: Dist, k: int, center: Fraction,
                          base: int) -> HalfPowerValue:
    """E[((t - center)/sqrt(base))^k] as an exact half-power value.

    The comparisons in this package always center at q+1 (the smooth-model
    mean) and scale by sqrt(q+1); pass center=0 for scaled raw moments.
    """
    return HalfPowerValue(central_moment(dist, k, center), base, k)


# ---------------------------------------------------------------------------
# comparison reports


@dataclass(frozen=True)
class ComparisonRow:
    t: int
    count: int
    empirical_freq: Fraction
    model_pmf: Fraction
    diff: Fraction
    ci_halfwidth: Optional[float]


@dataclass(frozen=True)
class Comparison:
    histogram: Histogram
    model: ModelDist
    rows: Tuple[ComparisonRow, ...]
    tv_distance: Fraction
    max_abs_diff: Fraction

    def tv_str(self) -> str:
        return render_fraction(self.tv_distance, 12)


def compare(hist: Histogram, model: ModelDist) -> Comparison:
    """Exact elementwise and total-variation comparison.

    tv = (1/2) sum_t |freq(t) - pmf(t)| computed with exact rationals; the
    12-digit rendering happens only in :meth:`Comparison.tv_str` and the
    CSV/JSON emitters.  Sampled histograms get a per-row 99% binomial
    half-width (normal approximation) as a reading aid; exhaustive rows
    carry none because there is nothing random about them.
    """
    if hist.total == 0:
        raise ValueError("empty histogram")
    pmf = model.pmf()
    sampled = dict(hist.provenance).get("strategy") == "sampled"
    n_eff = hist.total
    rows = []
    tv = Fraction(0)
    worst = Fraction(0)
    for t, c in enumerate(hist.counts):
        f = Fraction(c, n_eff)
        m = pmf[t] if t < len(pmf) else Fraction(0)
        diff = f - m
        tv += abs(diff)
        worst = max(worst, abs(diff))
        hw = None
        if sampled:
            fh = float(f)
            hw = _Z99 * math.sqrt(max(fh * (1.0 - fh), 0.0) / n_eff)
        rows.append(ComparisonRow(t, c, f, m, diff, hw))
    return Comparison(hist, model, tuple(rows), tv / 2, worst)


def render_fraction(x: Fraction, places: int = 12) -> str:
    """Fixed-point decimal rendering of an exact rational."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    scaled = abs(x) * 10 ** places
    units = round(scaled)  # exact rational rounding, ties-to-even
    whole, frac = divmod(units, 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}"


def comparison_csv(comp: Comparison) -> str:
    lines = ["t,count,empirical_freq,model_pmf,diff,ci_halfwidth"]
    for r in comp.rows:
        ci = "" if r.ci_halfwidth is None else repr(r.ci_halfwidth)
        lines.append(f"{r.t},{r.count},{render_fraction(r.empirical_freq)},"
                     f"{render_fraction(r.model_pmf)},"
                     f"{render_fraction(r.diff)},{ci}")
    return "\n".join(lines) + "\n"


def comparison_json(comp: Comparison) -> Dict[str, object]:
    h = comp.histogram
    return {
        "field": h.field_spec,
        "modulus": h.modulus,
        "degree": h.d,
        "mode": h.mode,
        "provenance": {k: v for k, v in h.provenance},
        "order_tag": ORDER_TAG,
        "code_version": _code_version,
        "total": h.total,
        "model": {"n": comp.model.n, "p": str(comp.model.p)},
        "tv_distance": str(comp.tv_distance),
        "tv_distance_rendered": comp.tv_str(),
        "max_abs_diff": str(comp.max_abs_diff),
        "rows": [
            {
                "t": r.t,
                "count": r.count,
                "empirical_freq": str(r.empirical_freq),
                "model_pmf": str(r.model_pmf),
                "diff": str(r.diff),
                "ci_halfwidth": r.ci_halfwidth,
            }
            for r in comp.rows
        ],
    }
