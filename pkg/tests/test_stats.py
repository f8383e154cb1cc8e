"""Histograms, the binomial reference model, exact moments, comparisons."""

from fractions import Fraction

import pytest

from planecount.gf import make_field
from planecount.plane import point_count
from planecount.poly import TernaryForm, monomial_count
from planecount.sieve import NonSurjectiveError
from planecount.stats import (
    BudgetExceededError,
    Exhaustive,
    HalfPowerValue,
    Histogram,
    Sampled,
    all_curves_model,
    central_moment,
    compare,
    comparison_csv,
    comparison_json,
    empirical_histogram,
    raw_moment,
    render_fraction,
    scaled_central_moment,
    shard_ranges,
    smooth_model,
    stirling_moment_identity,
    uniform_fibers_histogram,
)

F2 = make_field(2)
F3 = make_field(3)

D3_SMOOTH = (0, 42, 84, 84, 84, 42, 0, 0)
D3_ALL = (8, 56, 168, 280, 280, 168, 56, 7)


# ---------------------------------------------------------------------------
# reference models
# ---------------------------------------------------------------------------


def test_model_parameters():
    m = smooth_model(F2)
    assert (m.n, m.p) == (7, Fraction(3, 7))
    assert m.mean() == 3
    a = all_curves_model(F2)
    assert (a.n, a.p) == (7, Fraction(1, 2))
    assert smooth_model(F3).p == Fraction(4, 13)
    assert all_curves_model(F3).p == Fraction(1, 3)


def test_model_pmf_is_exact_binomial():
    m = smooth_model(F2)
    pmf = m.pmf()
    assert sum(pmf) == 1
    assert pmf[0] == Fraction(4, 7) ** 7
    assert pmf[7] == Fraction(3, 7) ** 7
    assert pmf[2] == 21 * Fraction(3, 7) ** 2 * Fraction(4, 7) ** 5


@pytest.mark.parametrize("n,p", [(7, Fraction(3, 7)), (13, Fraction(4, 13)), (7, Fraction(1, 2))])
@pytest.mark.parametrize("k", range(1, 9))
def test_stirling_route_equals_pmf_route(n, p, k):
    # two independent formulas for E[t^k]: falling-factorial expansion vs
    # direct summation against the pmf
    direct = sum(Fraction(t) ** k * pmf_t for t, pmf_t in enumerate(_binom_pmf(n, p)))
    assert stirling_moment_identity(n, p, k) == direct


def test_stirling_route_rejects_trivial_orders():
    with pytest.raises(ValueError):
        stirling_moment_identity(7, Fraction(1, 2), 0)


def _binom_pmf(n, p):
    from math import comb

    return [comb(n, t) * p**t * (1 - p) ** (n - t) for t in range(n + 1)]


# ---------------------------------------------------------------------------
# histograms
# ---------------------------------------------------------------------------


def _hist(counts, mode="smooth", prov=(("strategy", "exhaustive"), ("zero_form", "excluded"))):
    return Histogram(
        field_spec="2",
        modulus="t",
        q=2,
        d=3,
        mode=mode,
        counts=tuple(counts),
        provenance=tuple(prov),
    )


def test_histogram_validation():
    with pytest.raises(ValueError):
        _hist((1, 2, 3))  # wrong slot count
    with pytest.raises(ValueError):
        _hist([0] * 8, mode="weird")


def test_histogram_basic_accessors():
    h = _hist(D3_SMOOTH)
    assert h.total == 336
    assert h.freq(1) == Fraction(42, 336) == Fraction(1, 8)
    assert h.mean() == 3
    assert dict(h.provenance)["strategy"] == "exhaustive"
    assert sum(w for _, w in h.weights()) == 1


def test_histogram_merge_requires_identical_metadata():
    a, b = _hist(D3_SMOOTH), _hist(D3_ALL)
    merged = a.merge(b)
    assert merged.counts == tuple(x + y for x, y in zip(D3_SMOOTH, D3_ALL))
    with pytest.raises(ValueError):
        a.merge(_hist(D3_SMOOTH, mode="all"))
    with pytest.raises(ValueError):
        a.merge(_hist(D3_SMOOTH, prov=(("strategy", "sampled"),)))


def test_with_zero_form_bookkeeping():
    h = _hist(D3_ALL, mode="all")
    h2 = h.with_zero_form()
    assert h2.counts[-1] == h.counts[-1] + 1
    assert h2.total == 1024
    assert dict(h2.provenance)["zero_form"] == "included"
    with pytest.raises(ValueError):
        h2.with_zero_form()  # cannot add twice
    with pytest.raises(ValueError):
        _hist(D3_SMOOTH).with_zero_form()  # smooth histograms never get it


# ---------------------------------------------------------------------------
# empirical histograms
# ---------------------------------------------------------------------------


def test_exhaustive_histograms_match_pinned_censuses():
    h = empirical_histogram(F2, 3, "smooth", Exhaustive())
    assert h.counts == D3_SMOOTH
    assert empirical_histogram(F2, 3, "all", Exhaustive()).counts == D3_ALL
    assert empirical_histogram(F2, 2, "smooth", Exhaustive()).counts == (0, 0, 0, 28, 0, 0, 0, 0)


def test_exhaustive_histogram_agrees_with_reversed_per_form_recount():
    # recount the full cubic space one form at a time, walking the
    # candidate indexes in the opposite order, with no shared kernel code
    from planecount.smooth import is_smooth

    tally = [0] * 8
    for n in range(1023, 0, -1):
        f = TernaryForm.from_index(F2, 3, n)
        if is_smooth(f).smooth:
            tally[point_count(f, 1)] += 1
    assert tuple(tally) == D3_SMOOTH


def test_exhaustive_budget_is_enforced():
    with pytest.raises(BudgetExceededError):
        empirical_histogram(F2, 3, "smooth", Exhaustive(budget=1000))


def test_shard_ranges_partition():
    assert shard_ranges(1024, 4) == [(0, 256), (256, 512), (512, 768), (768, 1024)]
    assert shard_ranges(10, 3) == [(0, 3), (3, 6), (6, 10)]
    assert shard_ranges(5, 8)[0] == (0, 0)  # empty shards are fine
    with pytest.raises(ValueError):
        shard_ranges(10, 0)


def test_exhaustive_shards_merge_to_the_whole():
    whole = empirical_histogram(F2, 3, "smooth", Exhaustive())
    parts = [empirical_histogram(F2, 3, "smooth", Exhaustive(), shard=(i, 3)) for i in range(3)]
    merged = parts[0].merge(parts[1]).merge(parts[2])
    assert merged == whole


def test_span_and_shard_are_mutually_exclusive():
    with pytest.raises(ValueError):
        empirical_histogram(F2, 3, "smooth", Exhaustive(), shard=(0, 2), span=(0, 10))


def test_sampled_histogram_is_deterministic_and_shard_invariant():
    strat = Sampled(n=400, seed=99)
    whole = empirical_histogram(F2, 3, "smooth", strat)
    again = empirical_histogram(F2, 3, "smooth", strat)
    assert whole == again
    parts = [empirical_histogram(F2, 3, "smooth", strat, shard=(i, 4)) for i in range(4)]
    merged = parts[0]
    for p in parts[1:]:
        merged = merged.merge(p)
    assert merged == whole
    assert whole.total <= 400  # singular and zero draws are dropped


def test_sampled_all_mode_counts_zero_draws_in_top_slot():
    strat = Sampled(n=300, seed=5)
    h = empirical_histogram(F3, 2, "all", strat)
    assert h.total == 300
    assert dict(h.provenance)["zero_form"] == "counted-in-top-slot"


def test_sampled_seeds_differ():
    a = empirical_histogram(F2, 3, "smooth", Sampled(n=400, seed=1))
    b = empirical_histogram(F2, 3, "smooth", Sampled(n=400, seed=2))
    assert a.counts != b.counts  # astronomically unlikely to collide


# ---------------------------------------------------------------------------
# the analytic all-forms histogram
# ---------------------------------------------------------------------------


def test_uniform_fibers_histogram_small_degree():
    # at d=3 the value map is already surjective and the exact counts are
    # reproduced by direct enumeration (after re-adding the zero form)
    analytic = uniform_fibers_histogram(F2, 3)
    enumerated = empirical_histogram(F2, 3, "all", Exhaustive()).with_zero_form()
    assert analytic.counts == enumerated.counts
    assert analytic.total == 1024
    assert dict(analytic.provenance)["certified_rank"] == 7


def test_uniform_fibers_histogram_refuses_nonsurjective_degrees():
    with pytest.raises(NonSurjectiveError):
        uniform_fibers_histogram(F2, 2)


# ---------------------------------------------------------------------------
# exact moments
# ---------------------------------------------------------------------------


def test_half_power_value_canonicalization():
    # 12/7 * 3^(-5/2) = 4/21 * 3^(-1/2)
    assert HalfPowerValue(Fraction(12, 7), 3, 5) == HalfPowerValue(Fraction(4, 21), 3, 1)
    assert HalfPowerValue(Fraction(5), 3, 4) == HalfPowerValue(Fraction(5, 9), 3, 0)
    assert HalfPowerValue(Fraction(2), 3, -2) == HalfPowerValue(Fraction(6), 3, 0)
    assert HalfPowerValue(Fraction(0), 3, 7).half_power == 0


def test_half_power_value_exactness_interface():
    even = HalfPowerValue(Fraction(7, 2), 3, 2)
    assert even.is_exact_rational() and even.exact_rational() == Fraction(7, 6)
    odd = HalfPowerValue(Fraction(1), 3, 1)
    assert not odd.is_exact_rational()
    with pytest.raises(ValueError):
        odd.exact_rational()
    assert odd.approx() == pytest.approx(1 / 3**0.5)


def test_moments_on_the_pinned_cubic_histogram():
    h = _hist(D3_SMOOTH)
    assert raw_moment(h, 1) == 3
    assert central_moment(h, 1) == 0
    assert central_moment(h, 2, Fraction(3)) == Fraction(3, 2)
    m2 = scaled_central_moment(h, 2, Fraction(3), 3)
    assert m2.is_exact_rational() and m2.exact_rational() == Fraction(1, 2)
    # the model's second scaled moment is 1 - p = 4/7 at these parameters
    model = smooth_model(F2)
    assert scaled_central_moment(model, 2, Fraction(3), 3).exact_rational() == Fraction(4, 7)
    assert abs(m2.exact_rational() - Fraction(4, 7)) == Fraction(1, 14)


def test_model_moments_agree_with_stirling_route():
    model = smooth_model(F2)
    for k in range(1, 6):
        assert raw_moment(model, k) == stirling_moment_identity(7, Fraction(3, 7), k)


def test_central_moment_defaults_to_mean():
    h = _hist(D3_SMOOTH)
    assert central_moment(h, 2) == central_moment(h, 2, Fraction(3))


# ---------------------------------------------------------------------------
# comparisons and rendering
# ---------------------------------------------------------------------------


def test_compare_identical_distributions_has_zero_tv():
    analytic = uniform_fibers_histogram(F2, 3)
    comp = compare(analytic, all_curves_model(F2))
    assert comp.tv_distance == 0
    assert comp.max_abs_diff == 0
    assert all(r.ci_halfwidth is None for r in comp.rows)


def test_compare_pinned_cubic_tv():
    comp = compare(_hist(D3_SMOOTH), smooth_model(F2))
    assert comp.tv_distance == Fraction(42867, 470596)
    assert comp.rows[1].diff == Fraction(42, 336) - 7 * Fraction(3, 7) * Fraction(4, 7) ** 6


def test_compare_sampled_histograms_carry_halfwidths():
    h = empirical_histogram(F2, 3, "smooth", Sampled(n=500, seed=3))
    comp = compare(h, smooth_model(F2))
    assert any(r.ci_halfwidth not in (None, 0.0) for r in comp.rows)


def test_render_fraction_fixed_point():
    assert render_fraction(Fraction(1, 3)) == "0.333333333333"
    assert render_fraction(Fraction(21, 64)) == "0.328125000000"
    assert render_fraction(Fraction(-1, 3)) == "-0.333333333333"
    assert render_fraction(Fraction(0)) == "0.000000000000"
    assert render_fraction(Fraction(5, 4), places=2) == "1.25"


def test_comparison_csv_layout():
    comp = compare(_hist(D3_SMOOTH), smooth_model(F2))
    lines = comparison_csv(comp).strip().split("\n")
    assert lines[0] == "t,count,empirical_freq,model_pmf,diff,ci_halfwidth"
    assert len(lines) == 9
    assert lines[1].startswith("0,0,0.000000000000,")


def test_comparison_json_payload():
    comp = compare(_hist(D3_SMOOTH), smooth_model(F2))
    payload = comparison_json(comp)
    assert payload["field"] == "2"
    assert payload["degree"] == 3
    assert payload["model"] == {"n": 7, "p": "3/7"}
    assert payload["tv_distance"] == "42867/470596"
    assert len(payload["rows"]) == 8
    assert payload["rows"][3]["count"] == 84
