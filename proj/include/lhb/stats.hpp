#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhb/rng.hpp"

namespace lhb {

constexpr std::uint64_t kDefaultSeed = 20260420ULL;
constexpr int kPermutationRounds = 10000;
constexpr int kBootstrapResamples = 10000;
constexpr double kBonferroniAlpha = 0.05;

enum class MetricKind { FRP, RCS, EDA, CRR };

inline std::string to_string(MetricKind m) {
    switch (m) {
        case MetricKind::FRP: return "FRP";
        case MetricKind::RCS: return "RCS";
        case MetricKind::EDA: return "EDA";
        case MetricKind::CRR: return "CRR";
    }
    return {};
}

inline const std::vector<MetricKind>& all_metrics() {
    static const std::vector<MetricKind> v = {MetricKind::FRP, MetricKind::RCS, MetricKind::EDA,
                                              MetricKind::CRR};
    return v;
}

struct PairedSample {
    std::vector<std::string> case_ids;
    std::vector<double> a_scores;
    std::vector<double> b_scores;
};

struct PairedStats {
    double mean_diff = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double perm_p = 1.0;
    double mcnemar_p = 1.0;
    double cohens_h = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = kDefaultSeed;
    bool bonferroni_pass = false;
};

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Two-sided sign-flip permutation p for the mean difference. Exhaustive over
// all 2^n flips for n <= 20 (removes Monte Carlo noise at pilot scale and
// explains the 2/1024 floor at n = 10); Monte Carlo with add-one correction
// beyond that.
inline double permutation_test(const std::vector<double>& diffs, int rounds = kPermutationRounds,
                               std::uint64_t seed = kDefaultSeed) {
    if (diffs.empty()) throw std::invalid_argument("permutation_test requires n >= 1");
    const std::size_t n = diffs.size();
    const double observed = std::fabs(mean_of(diffs));
    const double tol = 1e-12;

    if (n <= 20) {
        std::uint64_t total = 1ULL << n;
        std::uint64_t hits = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += (mask >> i) & 1ULL ? -diffs[i] : diffs[i];
            }
            if (std::fabs(s / static_cast<double>(n)) >= observed - tol) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(total);
    }

    Rng rng = derive_stream(seed, "perm");
    std::int64_t hits = 0;
    for (int r = 0; r < rounds; ++r) {
        double s = 0.0;
        std::uint64_t bits = 0;
        int have = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (have == 0) {
                bits = rng.next();
                have = 64;
            }
            s += bits & 1ULL ? -diffs[i] : diffs[i];
            bits >>= 1;
            --have;
        }
        if (std::fabs(s / static_cast<double>(n)) >= observed - tol) ++hits;
    }
    return static_cast<double>(hits + 1) / static_cast<double>(rounds + 1);
}

// Percentile bootstrap interval on the mean difference; deterministic given
// the seed.
inline std::pair<double, double> bootstrap_ci(const std::vector<double>& diffs,
                                              int resamples = kBootstrapResamples,
                                              double level = 0.95,
                                              std::uint64_t seed = kDefaultSeed) {
    if (diffs.empty()) throw std::invalid_argument("bootstrap_ci requires n >= 1");
    const std::size_t n = diffs.size();
    Rng rng = derive_stream(seed, "boot");
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(resamples));
    for (int r = 0; r < resamples; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += diffs[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(n) - 1))];
        }
        means.push_back(s / static_cast<double>(n));
    }
    std::sort(means.begin(), means.end());
    double alpha = (1.0 - level) / 2.0;
    auto quantile_index = [&](double q) {
        auto idx = static_cast<std::size_t>(std::llround(q * (resamples - 1)));
        return std::min(idx, means.size() - 1);
    };
    return {means[quantile_index(alpha)], means[quantile_index(1.0 - alpha)]};
}

// Threshold 0.5 for graded metrics, strictly above (0.5 itself binarizes to
// 0); EDA/CRR are already binary and pass through.
inline std::vector<int> binarize(const std::vector<double>& scores, MetricKind kind) {
    std::vector<int> out;
    out.reserve(scores.size());
    for (double s : scores) {
        if (kind == MetricKind::FRP || kind == MetricKind::RCS) {
            out.push_back(s > 0.5 ? 1 : 0);
        } else {
            out.push_back(s >= 0.5 ? 1 : 0);
        }
    }
    return out;
}

// Two-sided exact binomial: p = 2 * sum_{i <= min(b,c)} C(b+c, i) / 2^(b+c),
// capped at 1.
inline double mcnemar_exact(std::size_t b, std::size_t c) {
    std::size_t n = b + c;
    if (n == 0) return 1.0;
    std::size_t m = std::min(b, c);
    double term = std::pow(0.5, static_cast<double>(n));  // C(n,0) * (1/2)^n
    double cdf = term;
    for (std::size_t i = 1; i <= m; ++i) {
        term *= static_cast<double>(n - i + 1) / static_cast<double>(i);
        cdf += term;
    }
    return std::min(1.0, 2.0 * cdf);
}

inline double cohens_h(double p1, double p2) {
    if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) {
        throw std::invalid_argument("proportions must lie in [0, 1]");
    }
    return 2.0 * std::asin(std::sqrt(p1)) - 2.0 * std::asin(std::sqrt(p2));
}

// Family of exactly four p-values; pass iff p < alpha / 4 (strict).
inline std::vector<bool> bonferroni_gate(const std::vector<double>& p_values,
                                         double alpha = kBonferroniAlpha) {
    if (p_values.size() != 4) {
        throw std::invalid_argument("bonferroni_gate expects exactly four family members");
    }
    std::vector<bool> pass;
    for (double p : p_values) pass.push_back(p < alpha / 4.0);
    return pass;
}

struct AgreementReport {
    double mean_abs_disagreement = 0.0;
    std::optional<double> pearson_r;  // undefined under zero variance
    double direction_preservation = 0.0;
};

inline AgreementReport judge_agreement(const std::vector<double>& scores_a,
                                       const std::vector<double>& scores_b) {
    if (scores_a.size() != scores_b.size() || scores_a.size() < 2) {
        throw std::invalid_argument("judge_agreement requires case-aligned vectors, n >= 2");
    }
    const std::size_t n = scores_a.size();
    AgreementReport rep;
    double sum_abs = 0.0;
    std::size_t same_sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_abs += std::fabs(scores_a[i] - scores_b[i]);
        auto sgn = [](double x) { return x > 0.0 ? 1 : x < 0.0 ? -1 : 0; };
        if (sgn(scores_a[i]) == sgn(scores_b[i])) ++same_sign;
    }
    rep.mean_abs_disagreement = sum_abs / static_cast<double>(n);
    rep.direction_preservation = static_cast<double>(same_sign) / static_cast<double>(n);

    double ma = mean_of(scores_a);
    double mb = mean_of(scores_b);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (scores_a[i] - ma) * (scores_b[i] - mb);
        va += (scores_a[i] - ma) * (scores_a[i] - ma);
        vb += (scores_b[i] - mb) * (scores_b[i] - mb);
    }
    if (va > 0.0 && vb > 0.0) rep.pearson_r = cov / std::sqrt(va * vb);
    return rep;
}

enum class GateOutcome { PASS, FAIL };

inline std::string to_string(GateOutcome g) { return g == GateOutcome::PASS ? "PASS" : "FAIL"; }

// PASS iff (candidate - baseline) >= slack; a negative slack permits bounded
// regression and the boundary is inclusive.
inline std::map<std::string, GateOutcome> gate_check(
    const std::map<std::string, double>& candidate_means,
    const std::map<std::string, double>& baseline_means, double slack) {
    std::map<std::string, GateOutcome> out;
    for (const auto& [metric, cand] : candidate_means) {
        auto it = baseline_means.find(metric);
        if (it == baseline_means.end()) {
            throw std::invalid_argument("gate_check: metrics not aligned: " + metric);
        }
        out[metric] = (cand - it->second) >= slack ? GateOutcome::PASS : GateOutcome::FAIL;
    }
    return out;
}

inline PairedStats compute_paired_stats(const PairedSample& sample, MetricKind kind,
                                        std::uint64_t seed = kDefaultSeed,
                                        int perm_rounds = kPermutationRounds,
                                        int resamples = kBootstrapResamples) {
    if (sample.a_scores.size() != sample.b_scores.size() || sample.a_scores.empty()) {
        throw std::invalid_argument("paired sample must be case-aligned and non-empty");
    }
    PairedStats st;
    st.n = sample.a_scores.size();
    st.seed = seed;
    std::vector<double> diffs;
    for (std::size_t i = 0; i < st.n; ++i) {
        diffs.push_back(sample.a_scores[i] - sample.b_scores[i]);
    }
    st.mean_diff = mean_of(diffs);
    auto [lo, hi] = bootstrap_ci(diffs, resamples, 0.95, seed);
    st.ci_lo = lo;
    st.ci_hi = hi;
    st.perm_p = permutation_test(diffs, perm_rounds, seed);

    std::vector<int> bin_a = binarize(sample.a_scores, kind);
    std::vector<int> bin_b = binarize(sample.b_scores, kind);
    std::size_t b = 0, c = 0, a1 = 0, b1 = 0;
    for (std::size_t i = 0; i < st.n; ++i) {
        if (bin_a[i] == 1 && bin_b[i] == 0) ++b;
        if (bin_a[i] == 0 && bin_b[i] == 1) ++c;
        a1 += static_cast<std::size_t>(bin_a[i]);
        b1 += static_cast<std::size_t>(bin_b[i]);
    }
    st.mcnemar_p = mcnemar_exact(b, c);
    st.cohens_h = cohens_h(static_cast<double>(a1) / static_cast<double>(st.n),
                           static_cast<double>(b1) / static_cast<double>(st.n));
    return st;
}

// Standard normal via Box-Muller over the portable generator.
inline double sample_normal(Rng& rng) {
    double u1 = rng.uniform_real();
    double u2 = rng.uniform_real();
    if (u1 <= 0.0) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace lhb
