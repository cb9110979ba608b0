#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lhb/stats.hpp"

using namespace lhb;

TEST_CASE("exhaustive permutation matches hand enumeration at n=3") {
    // diffs {1,1,-1}: |mean| = 1/3. Of the 8 sign assignments, means are
    // +-1/3 (6 ways) and +-1 (2 ways); all 8 have |mean| >= 1/3.
    CHECK(permutation_test({1, 1, -1}) == doctest::Approx(1.0));
    // diffs {1,1,1}: only the all-plus and all-minus flips reach |mean|=1.
    CHECK(permutation_test({1, 1, 1}) == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("ten all-positive diffs give the 2/1024 floor") {
    std::vector<double> diffs(10, 0.7);
    CHECK(permutation_test(diffs) == doctest::Approx(2.0 / 1024.0).epsilon(1e-12));
}

TEST_CASE("all-zero diffs are the degenerate null") {
    CHECK(permutation_test({0, 0, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("permutation p is symmetric under negation") {
    std::vector<double> diffs = {0.3, -0.1, 0.7, 0.2, -0.4};
    std::vector<double> neg;
    for (double d : diffs) neg.push_back(-d);
    CHECK(permutation_test(diffs) == doctest::Approx(permutation_test(neg)));
}

TEST_CASE("monte carlo approximates the exhaustive path") {
    Rng rng = derive_stream(kDefaultSeed, "mc-check");
    for (int trial = 0; trial < 50; ++trial) {
        auto n = static_cast<std::size_t>(rng.uniform(3, 12));
        std::vector<double> diffs;
        for (std::size_t i = 0; i < n; ++i) diffs.push_back(sample_normal(rng));
        double exact = permutation_test(diffs);

        // Same diffs padded with zeros beyond n=20 would change the statistic,
        // so force the Monte Carlo branch by calling the internals: rebuild a
        // >20-length vector whose mean/sign structure matches is not possible
        // in general. Instead compare against a fresh Monte Carlo estimate of
        // the same null via manual sign flipping.
        Rng flip = derive_stream(kDefaultSeed, "mc-flip/" + std::to_string(trial));
        int rounds = 100000;
        double observed = 0.0;
        for (double d : diffs) observed += d;
        observed = std::fabs(observed / static_cast<double>(n));
        int hits = 0;
        for (int r = 0; r < rounds; ++r) {
            double s = 0.0;
            for (double d : diffs) s += flip.uniform(0, 1) ? d : -d;
            if (std::fabs(s / static_cast<double>(n)) >= observed - 1e-12) ++hits;
        }
        double mc = static_cast<double>(hits + 1) / static_cast<double>(rounds + 1);
        CHECK(std::fabs(mc - exact) <= 0.01);
    }
}

TEST_CASE("bootstrap of a constant vector is degenerate") {
    auto [lo, hi] = bootstrap_ci({0.25, 0.25, 0.25, 0.25});
    CHECK(lo == doctest::Approx(0.25));
    CHECK(hi == doctest::Approx(0.25));
}

TEST_CASE("bootstrap is deterministic under a fixed seed") {
    std::vector<double> diffs = {0.11, 0.27, 0.35, 0.52, 0.64, 0.71, 0.88, 0.93};
    auto a = bootstrap_ci(diffs, 10000, 0.95, 99);
    auto b = bootstrap_ci(diffs, 10000, 0.95, 99);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    auto c = bootstrap_ci(diffs, 10000, 0.95, 100);
    CHECK((a.first != c.first || a.second != c.second));
}

TEST_CASE("bootstrap brackets a tightly clustered mean") {
    std::vector<double> diffs(10, 0.93);
    diffs[0] = 0.90;
    diffs[1] = 0.96;
    auto [lo, hi] = bootstrap_ci(diffs);
    CHECK(lo > 0.8);
    CHECK(hi <= 1.0);
    CHECK(lo <= 0.93);
    CHECK(hi >= 0.93);
}

TEST_CASE("bootstrap coverage on normal diffs is near nominal") {
    int covered = 0;
    const double mu = 0.3, sigma = 1.0;
    Rng rng = derive_stream(kDefaultSeed, "coverage");
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> diffs;
        for (int i = 0; i < 30; ++i) diffs.push_back(mu + sigma * sample_normal(rng));
        auto [lo, hi] = bootstrap_ci(diffs, 2000, 0.95,
                                     kDefaultSeed + static_cast<std::uint64_t>(trial));
        if (lo <= mu && mu <= hi) ++covered;
    }
    CHECK(covered >= 900);
    CHECK(covered <= 990);
}

TEST_CASE("binarize is strict above one half for graded metrics") {
    auto out = binarize({0.75, 0.5, 0.49, 0.53, 1.0, 0.0}, MetricKind::FRP);
    CHECK(out == std::vector<int>{1, 0, 0, 1, 1, 0});
    CHECK(binarize({0.53}, MetricKind::RCS) == std::vector<int>{1});
    CHECK(binarize({0, 1, 1, 0}, MetricKind::EDA) == std::vector<int>{0, 1, 1, 0});
    CHECK(binarize({1, 0}, MetricKind::CRR) == std::vector<int>{1, 0});
}

TEST_CASE("mcnemar exact matches the binomial closed form") {
    CHECK(mcnemar_exact(10, 0) == doctest::Approx(2.0 * std::pow(0.5, 10)).epsilon(1e-12));
    CHECK(mcnemar_exact(4, 1) == doctest::Approx(0.375));
    CHECK(mcnemar_exact(3, 3) == doctest::Approx(1.0));
    CHECK(mcnemar_exact(0, 0) == doctest::Approx(1.0));
    CHECK(mcnemar_exact(5, 2) == doctest::Approx(mcnemar_exact(2, 5)));
    // Strictly decreasing in the one-sided count.
    double prev = 1.1;
    for (std::size_t b = 1; b <= 12; ++b) {
        double p = mcnemar_exact(b, 0);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("cohens h closed form and antisymmetry") {
    CHECK(cohens_h(0.4, 0.4) == doctest::Approx(0.0));
    CHECK(cohens_h(1.0, 0.0) == doctest::Approx(M_PI));
    CHECK(cohens_h(0.95, 0.02) == doctest::Approx(2.41).epsilon(0.005));
    CHECK(cohens_h(0.3, 0.7) == doctest::Approx(-cohens_h(0.7, 0.3)));
    CHECK_THROWS_AS(cohens_h(1.2, 0.5), std::invalid_argument);
}

TEST_CASE("bonferroni gate is strict at the corrected threshold") {
    auto pass = bonferroni_gate({0.002, 0.063, 0.0125, 0.0124});
    CHECK(pass == std::vector<bool>{true, false, false, true});
    CHECK_THROWS_AS(bonferroni_gate({0.01, 0.02}), std::invalid_argument);
}

TEST_CASE("judge agreement on identical and inverted vectors") {
    std::vector<double> a = {0.2, 0.4, 0.6, 0.8};
    auto same = judge_agreement(a, a);
    CHECK(same.mean_abs_disagreement == doctest::Approx(0.0));
    REQUIRE(same.pearson_r.has_value());
    CHECK(*same.pearson_r == doctest::Approx(1.0));
    CHECK(same.direction_preservation == doctest::Approx(1.0));

    std::vector<double> b = {0.8, 0.6, 0.4, 0.2};  // 1 - a
    auto anti = judge_agreement(a, b);
    REQUIRE(anti.pearson_r.has_value());
    CHECK(*anti.pearson_r == doctest::Approx(-1.0));
}

TEST_CASE("constant judges have undefined correlation") {
    std::vector<double> flat = {0.5, 0.5, 0.5};
    auto rep = judge_agreement(flat, flat);
    CHECK_FALSE(rep.pearson_r.has_value());
    CHECK(rep.mean_abs_disagreement == doctest::Approx(0.0));
}

TEST_CASE("judge agreement against a hand-computed five-point oracle") {
    std::vector<double> a = {1.0, 0.5, 0.0, 0.5, 1.0};
    std::vector<double> b = {1.0, 0.5, 0.5, 0.0, 1.0};
    auto rep = judge_agreement(a, b);
    CHECK(rep.mean_abs_disagreement == doctest::Approx(0.2));
    // Means 0.6; covariance terms computed by hand.
    double cov = (0.4 * 0.4) + (-0.1 * -0.1) + (-0.6 * -0.1) + (-0.1 * -0.6) + (0.4 * 0.4);
    double var = (0.4 * 0.4) * 2 + (-0.1 * -0.1) * 2 + (-0.6 * -0.6);
    REQUIRE(rep.pearson_r.has_value());
    CHECK(*rep.pearson_r == doctest::Approx(cov / var));
}

TEST_CASE("gate check on the published deltas fails every axis") {
    std::map<std::string, double> candidate = {{"EDA", 0.60}, {"FRP", 0.30}, {"CRR", 0.48}};
    std::map<std::string, double> baseline = {{"EDA", 0.80}, {"FRP", 0.70}, {"CRR", 0.70}};
    auto out = gate_check(candidate, baseline, -0.05);
    CHECK(out.at("EDA") == GateOutcome::FAIL);   // delta -0.20
    CHECK(out.at("FRP") == GateOutcome::FAIL);   // delta -0.40
    CHECK(out.at("CRR") == GateOutcome::FAIL);   // delta -0.22
}

TEST_CASE("gate boundary is inclusive and misalignment errors") {
    auto out = gate_check({{"FRP", 0.55}}, {{"FRP", 0.60}}, -0.05);
    CHECK(out.at("FRP") == GateOutcome::PASS);
    auto up = gate_check({{"FRP", 0.70}}, {{"FRP", 0.60}}, -0.05);
    CHECK(up.at("FRP") == GateOutcome::PASS);
    CHECK_THROWS_AS(gate_check({{"FRP", 0.5}}, {{"RCS", 0.5}}, 0.0), std::invalid_argument);
}

TEST_CASE("paired stats are internally consistent") {
    PairedSample sample;
    for (int i = 0; i < 10; ++i) {
        sample.case_ids.push_back("c" + std::to_string(i));
        sample.a_scores.push_back(1.0);
        sample.b_scores.push_back(0.0);
    }
    PairedStats st = compute_paired_stats(sample, MetricKind::FRP);
    CHECK(st.n == 10);
    CHECK(st.mean_diff == doctest::Approx(1.0));
    CHECK(st.ci_lo <= st.mean_diff);
    CHECK(st.ci_hi >= st.mean_diff);
    CHECK(st.perm_p == doctest::Approx(2.0 / 1024.0));
    CHECK(st.mcnemar_p == doctest::Approx(2.0 * std::pow(0.5, 10)));
    CHECK(st.cohens_h == doctest::Approx(M_PI));
}
