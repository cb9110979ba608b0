// Command-line front end: corpus generation, condition runs, paired
// statistics, gate evaluation, VM strictness sweeps, judge splitting, and
// report generation.

#include <cstdio>
#include <filesystem>
#include <memory>

#include <CLI11.hpp>

#include "lhb/harness.hpp"
#include "lhb/remote.hpp"

namespace fs = std::filesystem;

namespace {

std::unique_ptr<lhb::Backend> make_backend(const lhb::BackendProfile& profile) {
    if (profile.kind == lhb::BackendKind::REMOTE) {
        return std::make_unique<lhb::RemoteBackend>(profile);
    }
    return std::make_unique<lhb::ReferenceBackend>();
}

std::vector<lhb::ResultRow> load_condition(const std::string& results_dir,
                                           const std::string& strategy, lhb::Tier tier) {
    auto rows = lhb::load_rows((fs::path(results_dir) / "results.jsonl").string());
    std::vector<lhb::ResultRow> out;
    for (auto& r : rows) {
        if (lhb::to_string(r.strategy) == strategy && r.tier == tier) out.push_back(std::move(r));
    }
    if (out.empty()) {
        throw std::runtime_error("no rows for " + strategy + " at " + lhb::to_string(tier));
    }
    return out;
}

std::map<std::string, double> means_by_metric(const std::vector<lhb::ResultRow>& rows) {
    std::map<std::string, double> out;
    for (const auto& m : lhb::condition_means(rows)) {
        if (m.frp) out["FRP"] = *m.frp;
        if (m.rcs) out["RCS"] = *m.rcs;
        if (m.eda) out["EDA"] = *m.eda;
        if (m.crr) out["CRR"] = *m.crr;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"long-horizon decision agent evaluation harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "synthesize a seeded corpus");
    std::uint64_t gen_seed = lhb::kDefaultSeed;
    int n_loans = 5, n_claims = 5;
    std::string gen_out = "corpus.jsonl";
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--loans", n_loans, "number of loan cases");
    gen->add_option("--claims", n_claims, "number of claim cases");
    gen->add_option("--out", gen_out, "output corpus path");

    // run
    auto* run = app.add_subcommand("run", "run configured conditions over a corpus");
    std::string run_config_path;
    std::string replay_path;
    run->add_option("--config", run_config_path, "run configuration file")->required();
    run->add_option("--replay", replay_path, "serve backend calls from this transcript");

    // stats
    auto* stats = app.add_subcommand("stats", "paired statistics for two conditions");
    std::string stats_dir = "out", stats_a, stats_b, stats_tier = "MODERATE";
    std::uint64_t stats_seed = lhb::kDefaultSeed;
    stats->add_option("--results", stats_dir, "results directory");
    stats->add_option("--a", stats_a, "condition A strategy")->required();
    stats->add_option("--b", stats_b, "condition B strategy")->required();
    stats->add_option("--tier", stats_tier, "budget tier");
    stats->add_option("--seed", stats_seed, "statistics seed");

    // gate
    auto* gate = app.add_subcommand("gate", "slack gate of candidate vs baseline");
    std::string gate_dir = "out", gate_candidate, gate_baseline, gate_tier = "MODERATE";
    double gate_slack = -0.05;
    gate->add_option("--results", gate_dir, "results directory");
    gate->add_option("--candidate", gate_candidate, "candidate strategy")->required();
    gate->add_option("--baseline", gate_baseline, "baseline strategy")->required();
    gate->add_option("--tier", gate_tier, "budget tier");
    gate->add_option("--slack", gate_slack, "signed slack allowance");

    // sweep-vm
    auto* sweep = app.add_subcommand("sweep-vm", "CAR across completeness strictness levels");
    std::string sweep_corpus = "corpus.jsonl", sweep_tier = "MODERATE", sweep_out = "out";
    std::size_t sweep_k = 5;
    sweep->add_option("--corpus", sweep_corpus, "corpus path");
    sweep->add_option("--tier", sweep_tier, "budget tier");
    sweep->add_option("--k", sweep_k, "retrieval depth");
    sweep->add_option("--out", sweep_out, "output directory");

    // judge-split
    auto* split = app.add_subcommand("judge-split", "agreement between two judges");
    std::string split_dir = "out", split_corpus = "corpus.jsonl", split_text = "full";
    split->add_option("--results", split_dir, "results directory");
    split->add_option("--corpus", split_corpus, "corpus path");
    split->add_option("--text", split_text, "judged text field: full|preview")
        ->check(CLI::IsMember({"full", "preview"}));

    // report
    auto* rep = app.add_subcommand("report", "tabular summaries of a results directory");
    std::string rep_dir = "out";
    rep->add_option("--results", rep_dir, "results directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto corpus = lhb::generate_corpus(gen_seed, n_loans, n_claims);
            for (const auto& c : corpus) {
                auto violations = lhb::validate_derivability(c);
                for (const auto& v : violations) {
                    std::fprintf(stderr, "%s: %s\n", c.case_id.c_str(), v.c_str());
                }
                if (!violations.empty()) return 1;
            }
            lhb::save_corpus(corpus, gen_out);
            std::printf("%zu cases -> %s (fingerprint %s)\n", corpus.size(), gen_out.c_str(),
                        lhb::corpus_fingerprint(corpus).c_str());
        } else if (run->parsed()) {
            lhb::RunConfig config = lhb::load_run_config(run_config_path);
            auto corpus = lhb::load_corpus(config.corpus_path);
            config.corpus_hash = lhb::corpus_fingerprint(corpus);
            fs::create_directories(config.output_dir);

            std::vector<lhb::ResultRow> rows;
            if (!replay_path.empty()) {
                lhb::ReplayBackend backend(replay_path);
                rows = lhb::run_all(corpus, config, backend);
            } else {
                auto inner = make_backend(config.backend);
                lhb::RecordingBackend backend(*inner);
                rows = lhb::run_all(corpus, config, backend);
                backend.save((fs::path(config.output_dir) / "transcript.jsonl").string());
            }
            lhb::write_rows(rows, (fs::path(config.output_dir) / "results.jsonl").string());
            lhb::write_timing_log(rows, (fs::path(config.output_dir) / "timing.log").string());
            std::ofstream cf(fs::path(config.output_dir) / "run_config.json");
            cf << lhb::to_json(config).dump(2) << '\n';
            std::printf("%zu rows -> %s (config %s)\n", rows.size(), config.output_dir.c_str(),
                        lhb::config_fingerprint(config).c_str());
        } else if (stats->parsed()) {
            auto tier = lhb::tier_from_string(stats_tier);
            if (!tier) throw std::runtime_error("unknown tier: " + stats_tier);
            auto rows_a = load_condition(stats_dir, stats_a, *tier);
            auto rows_b = load_condition(stats_dir, stats_b, *tier);
            std::string comparison_id = stats_a + "_vs_" + stats_b + "@" + stats_tier;
            auto comparisons = lhb::compare(rows_a, rows_b, comparison_id, stats_seed);

            lhb::json provenance;
            provenance["corpus_hash"] = rows_a.front().config_fingerprint;
            provenance["strategy_a"] = stats_a;
            provenance["strategy_b"] = stats_b;
            provenance["tier"] = stats_tier;
            provenance["seed"] = stats_seed;
            lhb::write_stats(comparisons, provenance,
                             (fs::path(stats_dir) / "stats.jsonl").string());
            for (const auto& mc : comparisons) {
                if (!mc.defined) {
                    std::printf("%s: undefined (no shared pairs)\n",
                                lhb::to_string(mc.metric).c_str());
                    continue;
                }
                std::printf("%s: n=%zu mean_diff=%+.4f ci=[%+.4f,%+.4f] perm_p=%.4f "
                            "mcnemar_p=%.4f h=%+.4f %s\n",
                            lhb::to_string(mc.metric).c_str(), mc.stats.n, mc.stats.mean_diff,
                            mc.stats.ci_lo, mc.stats.ci_hi, mc.stats.perm_p, mc.stats.mcnemar_p,
                            mc.stats.cohens_h,
                            mc.stats.bonferroni_pass ? "bonferroni-pass" : "bonferroni-fail");
            }
        } else if (gate->parsed()) {
            auto tier = lhb::tier_from_string(gate_tier);
            if (!tier) throw std::runtime_error("unknown tier: " + gate_tier);
            auto cand = means_by_metric(load_condition(gate_dir, gate_candidate, *tier));
            auto base_all = means_by_metric(load_condition(gate_dir, gate_baseline, *tier));
            // Only metrics present on both sides are gated.
            std::map<std::string, double> base;
            for (auto it = cand.begin(); it != cand.end();) {
                auto b = base_all.find(it->first);
                if (b == base_all.end()) it = cand.erase(it);
                else { base[it->first] = b->second; ++it; }
            }
            auto table = lhb::gate_table(cand, base, gate_slack);
            lhb::write_gate(table, (fs::path(gate_dir) / "gate.jsonl").string());
            bool all_pass = true;
            for (const auto& g : table) {
                std::printf("%s: candidate=%.4f baseline=%.4f delta=%+.4f slack=%+.4f -> %s\n",
                            g.metric.c_str(), g.candidate, g.baseline, g.delta, g.slack,
                            lhb::to_string(g.outcome).c_str());
                all_pass = all_pass && g.outcome == lhb::GateOutcome::PASS;
            }
            return all_pass ? 0 : 2;
        } else if (sweep->parsed()) {
            auto tier = lhb::tier_from_string(sweep_tier);
            if (!tier) throw std::runtime_error("unknown tier: " + sweep_tier);
            auto corpus = lhb::load_corpus(sweep_corpus);
            lhb::ReferenceBackend backend;
            auto table = lhb::vm_sweep(
                corpus, lhb::budget_for(*tier, corpus),
                {lhb::Strictness::STRICT, lhb::Strictness::MODERATE, lhb::Strictness::PERMISSIVE},
                backend, sweep_k);
            fs::create_directories(sweep_out);
            lhb::write_sweep(table, (fs::path(sweep_out) / "sweep.jsonl").string());
            for (const auto& r : table) {
                std::printf("%-10s commit_rate=%.2f cond_accuracy=%s commit_all_acc=%.2f\n",
                            r.label.c_str(), r.car.commit_rate,
                            r.car.cond_accuracy
                                ? lhb::detail::fmt(*r.car.cond_accuracy).c_str()
                                : "NA",
                            r.car.commit_all_acc);
            }
        } else if (split->parsed()) {
            auto corpus = lhb::load_corpus(split_corpus);
            auto rows = lhb::load_rows((fs::path(split_dir) / "results.jsonl").string());
            lhb::ReferenceBackend judge_a;
            lhb::AllPhraseJudge judge_b;
            auto report = lhb::judge_split(corpus, rows, judge_a, judge_b,
                                           split_text == "full" ? lhb::TextTarget::FULL
                                                                : lhb::TextTarget::PREVIEW);
            auto show = [](const char* label, const std::optional<lhb::AgreementReport>& a,
                           std::size_t n) {
                if (!a) {
                    std::printf("%s: insufficient pairs (n=%zu)\n", label, n);
                    return;
                }
                std::printf("%s: n=%zu mean_abs=%.4f pearson=%s direction=%.2f\n", label, n,
                            a->mean_abs_disagreement,
                            a->pearson_r ? lhb::detail::fmt(*a->pearson_r).c_str() : "UNDEFINED",
                            a->direction_preservation);
            };
            show("RCS", report.rcs, report.rcs_n);
            show("CRR", report.crr, report.crr_n);
            if (report.excluded > 0) {
                std::printf("excluded %zu rows on judge failure\n", report.excluded);
            }
        } else if (rep->parsed()) {
            std::printf("%s", lhb::report(rep_dir).c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
