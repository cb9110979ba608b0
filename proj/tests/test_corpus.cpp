#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lhb/corpus.hpp"

using namespace lhb;

TEST_CASE("generation is a pure function of the seed") {
    auto a = generate_corpus(20260420, 2, 2);
    auto b = generate_corpus(20260420, 2, 2);
    CHECK(serialize_corpus(a) == serialize_corpus(b));
    auto c = generate_corpus(20260421, 2, 2);
    CHECK(serialize_corpus(a) != serialize_corpus(c));
}

TEST_CASE("per-case streams are independent of corpus composition") {
    auto small = generate_corpus(20260420, 1, 0);
    auto large = generate_corpus(20260420, 3, 2);
    CHECK(to_json(small[0]).dump() == to_json(large[0]).dump());
}

TEST_CASE("size and shape envelopes hold") {
    auto corpus = generate_corpus(20260420, 5, 5);
    REQUIRE(corpus.size() == 10);
    for (const auto& c : corpus) {
        CHECK(c.char_length >= 25000);
        CHECK(c.char_length <= 30000);
        CHECK(c.chunks.size() >= 72);
        CHECK(c.chunks.size() <= 96);
        std::int64_t total = 0;
        for (std::size_t i = 0; i < c.chunks.size(); ++i) {
            CHECK(c.chunks[i].index == static_cast<int>(i));
            total += static_cast<std::int64_t>(c.chunks[i].text.size());
        }
        CHECK(total == c.char_length);
    }
}

TEST_CASE("decision mix per five-case slice is 3:2") {
    auto corpus = generate_corpus(20260420, 5, 5);
    int loan_approve = 0, loan_deny = 0, claim_pay = 0, claim_deny = 0;
    for (const auto& c : corpus) {
        if (c.domain == Domain::LOAN) {
            if (c.ground_truth.decision == Decision::APPROVE) ++loan_approve;
            else ++loan_deny;
        } else {
            if (is_denial(c.ground_truth.decision)) ++claim_deny;
            else ++claim_pay;
        }
    }
    CHECK(loan_approve == 3);
    CHECK(loan_deny == 2);
    CHECK(claim_pay == 3);
    CHECK(claim_deny == 2);
}

TEST_CASE("every case is derivable by construction") {
    for (const auto& c : generate_corpus(20260420, 5, 5)) {
        auto violations = validate_derivability(c);
        for (const auto& v : violations) INFO(c.case_id << ": " << v);
        CHECK(violations.empty());
    }
}

TEST_CASE("anchors canonicalize consistently with their display form") {
    for (const auto& c : generate_corpus(20260420, 3, 3)) {
        for (const auto& anchor : c.ground_truth.facts) {
            CHECK(canonicalize(anchor.display_form) == anchor.value);
        }
    }
}

TEST_CASE("denial cases carry provisions, others none") {
    for (const auto& c : generate_corpus(20260420, 5, 5)) {
        if (is_denial(c.ground_truth.decision)) {
            CHECK_FALSE(c.ground_truth.standard.required_provisions.empty());
        } else {
            CHECK(c.ground_truth.standard.required_provisions.empty());
        }
    }
}

TEST_CASE("budget tiers follow the declared ratios") {
    auto corpus = generate_corpus(20260420, 5, 5);
    std::int64_t total = 0;
    for (const auto& c : corpus) total += c.char_length;
    double mean = static_cast<double>(total) / static_cast<double>(corpus.size());

    auto loose = budget_for(Tier::LOOSE, corpus);
    auto moderate = budget_for(Tier::MODERATE, corpus);
    auto tight = budget_for(Tier::TIGHT, corpus);
    CHECK(loose.char_budget == static_cast<std::int64_t>(std::llround(0.5 * mean)));
    CHECK(moderate.char_budget == static_cast<std::int64_t>(std::llround(0.2 * mean)));
    CHECK(tight.char_budget == static_cast<std::int64_t>(std::llround(0.05 * mean)));
    CHECK(loose.char_budget > moderate.char_budget);
    CHECK(moderate.char_budget > tight.char_budget);
}

TEST_CASE("moderate budget on a 26760-char-mean corpus is 5352 exactly") {
    // Two synthetic cases whose mean char_length is 26,760.
    Case a, b;
    a.char_length = 26000;
    b.char_length = 27520;
    auto tier = budget_for(Tier::MODERATE, {a, b});
    CHECK(tier.char_budget == 5352);
}

TEST_CASE("budget_for rejects an empty corpus") {
    CHECK_THROWS_WITH_AS(budget_for(Tier::MODERATE, {}), "no cases", std::invalid_argument);
}

TEST_CASE("json round trip preserves every field") {
    auto corpus = generate_corpus(20260420, 2, 2);
    for (const auto& c : corpus) {
        Case back = case_from_json(to_json(c));
        CHECK(to_json(back).dump() == to_json(c).dump());
    }
}

TEST_CASE("serialized corpus round trips through disk") {
    auto corpus = generate_corpus(20260420, 1, 1);
    std::string path = "corpus_roundtrip_test.jsonl";
    save_corpus(corpus, path);
    auto back = load_corpus(path);
    CHECK(serialize_corpus(back) == serialize_corpus(corpus));
    CHECK(corpus_fingerprint(back) == corpus_fingerprint(corpus));
    std::remove(path.c_str());
}

TEST_CASE("ground truth record scores as the ideal output") {
    // Spot-check containment: every anchor display form appears in the
    // rationale next to its cue label.
    auto corpus = generate_corpus(20260420, 1, 1);
    for (const auto& c : corpus) {
        auto r = ground_truth_record(c);
        CHECK(r.committed);
        CHECK(*r.decision == c.ground_truth.decision);
        for (const auto& anchor : c.ground_truth.facts) {
            CHECK(r.rationale.find(anchor.display_form) != std::string::npos);
        }
        for (const auto& point : c.ground_truth.reasoning) {
            CHECK(r.rationale.find(point.statement) != std::string::npos);
        }
        if (is_denial(c.ground_truth.decision)) {
            REQUIRE(r.notice.has_value());
            for (const auto& p : c.ground_truth.standard.required_provisions) {
                CHECK(r.notice->find(p) != std::string::npos);
            }
        } else {
            CHECK_FALSE(r.notice.has_value());
        }
    }
}
