import math

import pytest

from configbounds.bounds import (
    BoundCurve,
    BoundInputs,
    baseline_bound,
    build_curve,
    hoeffding_slack,
    massart_bound,
    pwc_rad_bound,
    srm_bound,
    wc_log_term,
    worst_case_bound,
)


class TestFiniteClassBounds:
    def test_massart_values(self):
        # sqrt(2 ln 7 / 14) = 0.527244880630...
        assert massart_bound(7, 14) == pytest.approx(0.52724, abs=5e-5)
        assert massart_bound(10, 100) == pytest.approx(math.sqrt(2 * math.log(10) / 100))

    def test_massart_singleton_is_zero(self):
        assert massart_bound(1, 50) == 0.0

    def test_pwc_bound_value(self):
        # sqrt(2 ln 401 / 100) = 0.346235799053...
        assert pwc_rad_bound(100, 5) == pytest.approx(0.34624, abs=5e-5)

    def test_pwc_one_piece_is_zero(self):
        assert pwc_rad_bound(1000, 1) == 0.0

    def test_monotone_in_j_and_n(self):
        assert pwc_rad_bound(100, 3) < pwc_rad_bound(100, 6)
        assert pwc_rad_bound(1000, 4) < pwc_rad_bound(100, 4)

    def test_validation(self):
        with pytest.raises(ValueError):
            massart_bound(0, 10)
        with pytest.raises(ValueError):
            massart_bound(5, 0)
        with pytest.raises(ValueError):
            pwc_rad_bound(10, 0)


class TestWorstCase:
    def test_published_operating_point(self):
        # large-sample regime where the distribution-free bound reaches ~0.1
        assert worst_case_bound(70_000_000, 400, 7314, 0.01) == pytest.approx(0.1007, abs=5e-4)

    def test_moderate_sample_is_vacuous(self):
        assert worst_case_bound(100_000, 200, 6341, 0.01) == pytest.approx(2.33, abs=0.01)

    def test_log_paths_agree_to_ten_digits_at_largest_direct_case(self):
        # the asymptotic form drops -N+1 under the log; at the largest case
        # that still fits a float64 exactly enough (kappa=10, n_vars=10) the
        # dropped part is ~1e-22 of the argument
        for n in (10, 1000, 10**6):
            exact = wc_log_term(n, 10, 10, path="exact")
            asym = wc_log_term(n, 10, 10, path="asymptotic")
            assert asym == pytest.approx(exact, rel=1e-10)

    def test_log_paths_converge_as_exponent_grows(self):
        diffs = []
        for kappa in (2, 6, 10):
            exact = wc_log_term(100, 10, kappa, path="exact")
            asym = wc_log_term(100, 10, kappa, path="asymptotic")
            diffs.append(abs(asym - exact) / exact)
        assert diffs[0] < 1e-5
        assert diffs == sorted(diffs, reverse=True)

    def test_auto_switches_without_jump(self):
        # kappa chosen so the exponent straddles the switch for n_vars=3
        lo = wc_log_term(100, 3, 17)
        hi = wc_log_term(100, 3, 19)
        assert lo < hi

    def test_huge_exponent_no_overflow(self):
        val = worst_case_bound(10**7, 400, 7314, 0.01)
        assert math.isfinite(val)

    def test_validation(self):
        with pytest.raises(ValueError):
            worst_case_bound(0, 10, 5, 0.01)
        with pytest.raises(ValueError):
            worst_case_bound(10, 1, 5, 0.01)
        with pytest.raises(ValueError):
            worst_case_bound(10, 10, 0, 0.01)
        with pytest.raises(ValueError):
            worst_case_bound(10, 10, 5, 0.0)
        with pytest.raises(ValueError):
            wc_log_term(10, 10, 5, path="fast")


class TestHoeffdingSlack:
    def test_published_value(self):
        assert hoeffding_slack(6000, 0.005) == pytest.approx(0.0210, abs=1e-4)
        assert hoeffding_slack(6000, 0.005) <= 1 / 40

    def test_shrinks_with_m(self):
        assert hoeffding_slack(24000, 0.005) == pytest.approx(hoeffding_slack(6000, 0.005) / 2)


def make_inputs(n=6000, e_hat=None, **kw):
    profile = e_hat or {1: 0.4, 2: 0.3, 4: 0.12, 8: 0.05, 16: 0.02, 32: 0.02}
    defaults = dict(
        n_samples=n, delta=0.01, n_vars=200, kappa=6341, e_hat=profile, m_profile=6000
    )
    defaults.update(kw)
    return BoundInputs(**defaults)


class TestSrm:
    def test_paper_mode_formula_symbol_for_symbol(self):
        inputs = make_inputs()
        for j, e_j in inputs.e_hat.items():
            n = inputs.n_samples
            expected = (
                2.0 * (e_j + 1.0 / 40.0)
                + 2.0 * math.sqrt(2.0 * math.log(n * (j - 1) + 1) / n)
                + math.sqrt(2.0 / n * math.log((20.0 * math.pi * j) ** 2 / 3.0))
            )
            val, best = srm_bound(inputs, [j], paper_mode=True)
            assert val == expected and best == j

    def test_generic_delta_matches_paper_at_published_budget(self):
        # delta = 0.01 split evenly reproduces the published tail constant:
        # 2/(3 * 0.005) = (20)^2/3 over pi^2 j^2 scaling
        inputs = make_inputs()
        generic, _ = srm_bound(inputs, [8], paper_mode=False)
        slack_diff = 2 * (1 / 40 - hoeffding_slack(6000, 0.005))
        paper, _ = srm_bound(inputs, [8], paper_mode=True)
        assert generic == pytest.approx(paper - slack_diff, rel=1e-12)

    def test_picks_best_j_and_breaks_ties_low(self):
        inputs = make_inputs(e_hat={2: 0.1, 3: 0.1, 50: 0.1})
        _, best = srm_bound(inputs, [50, 3, 2], paper_mode=True)
        assert best == 2

    def test_min_over_singletons(self):
        inputs = make_inputs()
        js = sorted(inputs.e_hat)
        val, best = srm_bound(inputs, js)
        singles = {j: srm_bound(inputs, [j])[0] for j in js}
        assert val == min(singles.values())
        assert singles[best] == val

    def test_missing_profile_entry(self):
        with pytest.raises(ValueError):
            srm_bound(make_inputs(), [7])

    def test_empty_j_range(self):
        with pytest.raises(ValueError):
            srm_bound(make_inputs(), [])

    def test_profile_monotonicity_enforced(self):
        with pytest.raises(ValueError):
            make_inputs(e_hat={1: 0.1, 2: 0.3})

    def test_input_validation(self):
        with pytest.raises(ValueError):
            make_inputs(n=0)
        with pytest.raises(ValueError):
            make_inputs(delta=1.5)
        with pytest.raises(ValueError):
            make_inputs(e_hat={1: 1.4})


class TestBaseline:
    @pytest.mark.parametrize("j_star", [2214, 296, 2224])
    def test_finite_and_above_slack_floor(self, j_star):
        for n in (6000, 10**5, 10**7):
            val = baseline_bound(n, j_star)
            assert math.isfinite(val)
            assert val > 0.046

    def test_decreasing_in_n(self):
        vals = [baseline_bound(n, 2214) for n in (10**3, 10**4, 10**5, 10**6, 10**8)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_custom_slack(self):
        recomputed = baseline_bound(6000, 296, est_slack=hoeffding_slack(6000, 0.005))
        assert recomputed < baseline_bound(6000, 296)


class TestCurve:
    def test_csv_shape(self):
        curve = build_curve(
            e_hat={1: 0.3, 2: 0.2, 4: 0.1},
            m_profile=50,
            j_star=12,
            n_vars=20,
            kappa=64,
            n_schedule=[100, 1000, 10000],
            j_range=[1, 2, 4],
        )
        text = curve.to_csv()
        lines = text.strip().split("\n")
        assert lines[0] == "N,worst_case,srm,srm_best_j,baseline"
        assert len(lines) == 4
        first = lines[1].split(",")
        assert first[0] == "100"
        assert len(first) == 5
        float(first[1]), float(first[2]), int(first[3]), float(first[4])

    def test_reported_is_min(self):
        curve = build_curve(
            e_hat={1: 0.3, 2: 0.2},
            m_profile=50,
            j_star=12,
            n_vars=20,
            kappa=64,
            n_schedule=[100, 10**6],
            j_range=[1, 2],
        )
        for (n, rep), row in zip(curve.reported(), curve.rows):
            assert rep == min(row.worst_case, row.srm)
            assert rep <= row.worst_case and rep <= row.srm

    def test_round_trips_from_header(self):
        assert BoundCurve(()).CSV_HEADER.startswith("N,")

    def test_empty_schedule(self):
        with pytest.raises(ValueError):
            build_curve({1: 0.1}, 10, 5, 20, 64, [], [1])
