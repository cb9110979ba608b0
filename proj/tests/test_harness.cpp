#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "lhb/harness.hpp"

using namespace lhb;
namespace fs = std::filesystem;

namespace {

std::vector<Case> small_corpus() { return generate_corpus(20260420, 2, 2); }

std::string dump_rows(const std::vector<ResultRow>& rows) {
    std::string out;
    for (const auto& r : rows) out += to_json(r).dump() + "\n";
    return out;
}

std::vector<ResultRow> frp_rows(const std::vector<double>& frp_a, StrategyId id) {
    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < frp_a.size(); ++i) {
        ResultRow r;
        r.case_id = "c" + std::to_string(i);
        r.strategy = id;
        r.tier = Tier::MODERATE;
        r.committed = true;
        r.decision = Decision::APPROVE;
        r.frp = frp_a[i];
        r.rcs = frp_a[i];
        r.eda = frp_a[i] > 0.5 ? 1 : 0;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

TEST_CASE("run_condition emits one committed row per case") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    auto rows = run_condition(corpus, StrategyId::SUMM_ONLY, budget_for(Tier::MODERATE, corpus),
                              backend, {}, "fp");
    REQUIRE(rows.size() == corpus.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].committed);
        CHECK(rows[i].error.empty());
        CHECK(rows[i].frp.has_value());
        CHECK(rows[i].view_chars <= budget_for(Tier::MODERATE, corpus).char_budget);
        if (i > 0) CHECK(rows[i - 1].case_id < rows[i].case_id);
    }
}

TEST_CASE("rationale preview is always a prefix of the full rationale") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    for (StrategyId id : {StrategyId::SUMM_ONLY, StrategyId::RETR_ONLY, StrategyId::VM}) {
        auto rows = run_condition(corpus, id, budget_for(Tier::LOOSE, corpus), backend, {}, "fp");
        for (const auto& r : rows) {
            CHECK(r.rationale_preview.size() <= kRationalePreviewChars);
            CHECK(r.full_rationale.rfind(r.rationale_preview, 0) == 0);
        }
    }
}

TEST_CASE("worker count never changes the rows") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    auto serial = run_condition(corpus, StrategyId::TYPED_TOPK, budget_for(Tier::MODERATE, corpus),
                                backend, {}, "fp", 1);
    auto parallel = run_condition(corpus, StrategyId::TYPED_TOPK,
                                  budget_for(Tier::MODERATE, corpus), backend, {}, "fp", 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(to_json(serial[i]).dump() == to_json(parallel[i]).dump());
    }
}

TEST_CASE("vm rows that abstain carry no decision") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    StrategyConfig sc;
    sc.vm_strictness = Strictness::STRICT;
    auto rows = run_condition(corpus, StrategyId::VM, BudgetTier{Tier::TIGHT, 0.05, 80}, backend,
                              sc, "fp");
    for (const auto& r : rows) {
        CHECK_FALSE(r.committed);
        CHECK_FALSE(r.decision.has_value());
        CHECK_FALSE(r.frp.has_value());
        CHECK_FALSE(r.eda.has_value());
    }
}

TEST_CASE("reference runs are byte-identical across invocations") {
    auto corpus = small_corpus();
    RunConfig config;
    config.strategies = {StrategyId::SUMM_ONLY, StrategyId::RETR_ONLY, StrategyId::VM};
    config.tiers = {Tier::MODERATE, Tier::TIGHT};
    ReferenceBackend b1, b2;
    auto r1 = run_all(corpus, config, b1);
    auto r2 = run_all(corpus, config, b2);
    CHECK(dump_rows(r1) == dump_rows(r2));
}

TEST_CASE("self-comparison is null on every metric") {
    auto rows = frp_rows({1, 0, 1, 1, 0, 1, 0, 1, 1, 1}, StrategyId::SUMM_ONLY);
    auto comparisons = compare(rows, rows, "self");
    for (const auto& mc : comparisons) {
        if (!mc.defined) continue;
        CHECK(mc.stats.mean_diff == doctest::Approx(0.0));
        CHECK(mc.stats.perm_p == doctest::Approx(1.0));
        CHECK(mc.stats.cohens_h == doctest::Approx(0.0));
        CHECK(mc.stats.mcnemar_p == doctest::Approx(1.0));
    }
}

TEST_CASE("unanimous wins hit the closed-form floor") {
    auto a = frp_rows(std::vector<double>(10, 1.0), StrategyId::SUMM_ONLY);
    auto b = frp_rows(std::vector<double>(10, 0.0), StrategyId::RETR_ONLY);
    auto comparisons = compare(a, b, "unanimous");
    const auto& frp = comparisons[0];
    REQUIRE(frp.metric == MetricKind::FRP);
    REQUIRE(frp.defined);
    CHECK(frp.stats.n == 10);
    CHECK(frp.stats.mean_diff == doctest::Approx(1.0));
    CHECK(frp.stats.mcnemar_p == doctest::Approx(2.0 / 1024.0));
    CHECK(frp.stats.bonferroni_pass);
}

TEST_CASE("pairs missing a metric are dropped from that metric only") {
    auto a = frp_rows({1, 1, 1, 1}, StrategyId::SUMM_ONLY);
    auto b = frp_rows({0, 0, 0, 0}, StrategyId::RETR_ONLY);
    a[1].crr = 1;  // CRR defined on one side only: still dropped
    a[2].crr = 1;
    b[2].crr = 0;
    auto comparisons = compare(a, b, "partial");
    CHECK(comparisons[0].stats.n == 4);   // FRP
    REQUIRE(comparisons[3].metric == MetricKind::CRR);
    CHECK(comparisons[3].defined);
    CHECK(comparisons[3].stats.n == 1);
}

TEST_CASE("mismatched case sets are rejected") {
    auto a = frp_rows({1, 1}, StrategyId::SUMM_ONLY);
    auto b = frp_rows({0, 0, 0}, StrategyId::RETR_ONLY);
    CHECK_THROWS_AS(compare(a, b, "bad"), std::invalid_argument);
    auto c = frp_rows({0, 0}, StrategyId::RETR_ONLY);
    c[1].case_id = "other";
    CHECK_THROWS_AS(compare(a, c, "bad2"), std::invalid_argument);
}

TEST_CASE("comparison statistics depend on the comparison id stream") {
    auto a = frp_rows({1, 0, 1, 0, 1, 1, 0, 1}, StrategyId::SUMM_ONLY);
    auto b = frp_rows({0, 0, 1, 0, 0, 1, 0, 0}, StrategyId::RETR_ONLY);
    auto c1 = compare(a, b, "one");
    auto c2 = compare(a, b, "one");
    CHECK(c1[0].stats.ci_lo == c2[0].stats.ci_lo);
    CHECK(c1[0].stats.ci_hi == c2[0].stats.ci_hi);
}

TEST_CASE("vm sweep is monotone with a fully committed baseline") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    auto table = vm_sweep(corpus, budget_for(Tier::TIGHT, corpus),
                          {Strictness::STRICT, Strictness::MODERATE, Strictness::PERMISSIVE},
                          backend);
    REQUIRE(table.size() == 4);
    CHECK(table[0].label == "STRICT");
    CHECK(table[3].label == "SUMM_ONLY");
    CHECK(table[0].car.commit_rate <= table[1].car.commit_rate);
    CHECK(table[1].car.commit_rate <= table[2].car.commit_rate);
    CHECK(table[3].car.commit_rate == doctest::Approx(1.0));
    for (const auto& row : table) {
        if (row.car.cond_accuracy) {
            CHECK(row.car.commit_all_acc ==
                  doctest::Approx(row.car.commit_rate * *row.car.cond_accuracy));
        }
    }
    CHECK_THROWS_AS(vm_sweep(corpus, budget_for(Tier::TIGHT, corpus), {}, backend),
                    std::invalid_argument);
}

TEST_CASE("identical judges agree perfectly in the split") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    auto rows = run_condition(corpus, StrategyId::SUMM_ONLY, budget_for(Tier::LOOSE, corpus),
                              backend, {}, "fp");
    ReferenceBackend judge_a, judge_b;
    auto report = judge_split(corpus, rows, judge_a, judge_b);
    CHECK(report.excluded == 0);
    REQUIRE(report.rcs.has_value());
    CHECK(report.rcs->mean_abs_disagreement == doctest::Approx(0.0));
    CHECK(report.rcs->direction_preservation == doctest::Approx(1.0));
}

TEST_CASE("a perturbed judge disagrees deterministically") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    auto rows = run_condition(corpus, StrategyId::SUMM_ONLY, budget_for(Tier::TIGHT, corpus),
                              backend, {}, "fp");
    ReferenceBackend judge_a;
    AllPhraseJudge judge_b;
    auto r1 = judge_split(corpus, rows, judge_a, judge_b);
    auto r2 = judge_split(corpus, rows, judge_a, judge_b);
    REQUIRE(r1.rcs.has_value());
    CHECK(r1.rcs->mean_abs_disagreement == r2.rcs->mean_abs_disagreement);
}

TEST_CASE("rows round-trip through jsonl persistence") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    auto rows = run_condition(corpus, StrategyId::TYPED_TOPK, budget_for(Tier::MODERATE, corpus),
                              backend, {}, "fp");
    std::string path = "rows_roundtrip_test.jsonl";
    write_rows(rows, path);
    auto back = load_rows(path);
    CHECK(dump_rows(back) == dump_rows(rows));
    fs::remove(path);
}

TEST_CASE("transcript replay reproduces rows without the original backend") {
    auto corpus = small_corpus();
    RunConfig config;
    config.strategies = {StrategyId::SUMM_ONLY, StrategyId::VM};
    config.tiers = {Tier::MODERATE};

    ReferenceBackend inner;
    RecordingBackend recorder(inner);
    auto original = run_all(corpus, config, recorder);
    std::string path = "transcript_replay_test.jsonl";
    recorder.save(path);

    ReplayBackend replay(path);
    auto replayed = run_all(corpus, config, replay);
    CHECK(dump_rows(replayed) == dump_rows(original));

    // A request outside the transcript is a hard error.
    CHECK_THROWS_AS(replay.decide("unseen context", Domain::LOAN), std::runtime_error);
    fs::remove(path);
}

TEST_CASE("run config round-trips and fingerprints its content") {
    RunConfig config;
    config.corpus_path = "corpus.jsonl";
    config.strategies = {StrategyId::SUMM_ONLY, StrategyId::SAM};
    config.tiers = {Tier::LOOSE, Tier::TIGHT};
    config.k = 3;
    config.seed = 777;
    config.vm_strictness = {Strictness::MODERATE};

    RunConfig back = run_config_from_json(to_json(config));
    CHECK(config_fingerprint(back) == config_fingerprint(config));
    CHECK(back.strategies == config.strategies);
    CHECK(back.k == 3);

    RunConfig other = config;
    other.seed = 778;
    CHECK(config_fingerprint(other) != config_fingerprint(config));
}

TEST_CASE("report writes the tabular artifacts") {
    auto corpus = small_corpus();
    ReferenceBackend backend;
    RunConfig config;
    config.strategies = {StrategyId::SUMM_ONLY, StrategyId::RETR_ONLY};
    config.tiers = {Tier::MODERATE};
    auto rows = run_all(corpus, config, backend);

    fs::path dir = "report_test_dir";
    fs::create_directories(dir);
    write_rows(rows, (dir / "results.jsonl").string());
    auto rows_a = std::vector<ResultRow>(rows.begin(), rows.begin() + corpus.size());
    auto rows_b = std::vector<ResultRow>(rows.begin() + corpus.size(), rows.end());
    write_stats(compare(rows_a, rows_b, "SUMM_ONLY_vs_RETR_ONLY@MODERATE"), json::object(),
                (dir / "stats.jsonl").string());

    std::string digest = report(dir.string());
    CHECK(digest.find("rows") != std::string::npos);
    CHECK(fs::exists(dir / "condition_means.tsv"));
    CHECK(fs::exists(dir / "stats.tsv"));
    fs::remove_all(dir);
}

TEST_CASE("report refuses an empty results directory") {
    fs::path dir = "report_empty_dir";
    fs::create_directories(dir);
    CHECK_THROWS_AS(report(dir.string()), std::runtime_error);
    fs::remove_all(dir);
}
