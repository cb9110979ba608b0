#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lhb/corpus.hpp"
#include "lhb/metrics.hpp"

using namespace lhb;

namespace {

std::vector<FactAnchor> two_anchors() {
    return {{"loan_amount", canonicalize("$147,500"), "$147,500"},
            {"dti", canonicalize("33.4%"), "33.4%"}};
}

DecisionRecord committed(std::string rationale) {
    DecisionRecord r;
    r.case_id = "t";
    r.committed = true;
    r.decision = Decision::APPROVE;
    r.rationale = std::move(rationale);
    return r;
}

}  // namespace

TEST_CASE("scoring ground truth output is a fixpoint on every case") {
    ReferenceBackend backend;
    for (const auto& c : generate_corpus(20260420, 5, 5)) {
        auto record = ground_truth_record(c);
        AxisScores s = score_axes(record, c, backend);
        INFO(c.case_id);
        CHECK(*s.frp == doctest::Approx(1.0));
        CHECK(*s.rcs == doctest::Approx(1.0));
        CHECK(*s.eda == 1);
        if (is_denial(c.ground_truth.decision)) {
            REQUIRE(s.crr.has_value());
            CHECK(*s.crr == 1);
        } else {
            CHECK_FALSE(s.crr.has_value());
        }
    }
}

TEST_CASE("exact match passes, paraphrase and omission fail") {
    auto anchors = two_anchors();
    CHECK(score_frp(committed("Loan amount $147,500 at DTI 33.4%."), anchors) ==
          doctest::Approx(1.0));
    // Equivalent surface form still matches canonically.
    CHECK(score_frp(committed("Loan amount 147500 USD at DTI 33.4%."), anchors) ==
          doctest::Approx(1.0));
    // Paraphrase ("about $147k") and omission both miss.
    CHECK(score_frp(committed("Loan amount roughly $147,000 at DTI 33.4%."), anchors) ==
          doctest::Approx(0.5));
    CHECK(score_frp(committed("DTI 33.4% with no amount stated."), anchors) ==
          doctest::Approx(0.5));
    CHECK(score_frp(committed("Nothing relevant."), anchors) == doctest::Approx(0.0));
}

TEST_CASE("values outside the cue window do not count") {
    auto anchors = two_anchors();
    std::string far = "Loan amount is stated later." + std::string(200, 'x') + " $147,500.";
    auto extracted = extract_referenced_values(committed(far), anchors);
    CHECK_FALSE(extracted.at("loan_amount").has_value());
}

TEST_CASE("extraction distinguishes omission from distortion") {
    auto anchors = two_anchors();
    auto extracted =
        extract_referenced_values(committed("Loan amount $99,999 at DTI 33.4%."), anchors);
    REQUIRE(extracted.at("loan_amount").has_value());
    CHECK(extracted.at("loan_amount")->number == 9999900);  // distorted, present
    REQUIRE(extracted.at("dti").has_value());
    CHECK_FALSE(extracted.at("loan_amount") == anchors[0].value);
}

TEST_CASE("the notice is scanned along with the rationale") {
    auto anchors = two_anchors();
    DecisionRecord r = committed("DTI 33.4% noted.");
    r.notice = "Notice: loan amount $147,500 referenced here.";
    CHECK(score_frp(r, anchors) == doctest::Approx(1.0));
}

TEST_CASE("axis scores are undefined on abstention") {
    DecisionRecord r;
    r.committed = false;
    CHECK_THROWS_AS(score_frp(r, two_anchors()), std::invalid_argument);
    ReferenceBackend backend;
    std::vector<ReasoningPoint> pts = {{"r1", "s", {"x"}}};
    CHECK_THROWS_AS(score_rcs(r, pts, backend), std::invalid_argument);
    GroundTruth gt;
    CHECK_THROWS_AS(score_eda(r, gt), std::invalid_argument);
}

TEST_CASE("rcs is the entailed fraction under the judge") {
    ReferenceBackend backend;
    std::vector<ReasoningPoint> points = {{"r1", "s1", {"employment gap", "medical leave"}},
                                          {"r2", "s2", {"gift letter"}}};
    auto r = committed("The employment gap is explained by medical leave.");
    CHECK(score_rcs(r, points, backend) == doctest::Approx(0.5));
    auto full = committed("employment gap, medical leave, and a signed gift letter.");
    CHECK(score_rcs(full, points, backend) == doctest::Approx(1.0));
}

TEST_CASE("eda requires the exact label and partial-pay amount") {
    GroundTruth gt;
    gt.decision = Decision::PARTIAL_PAY;
    gt.amount_cents = 900000;

    DecisionRecord r = committed("");
    r.decision = Decision::PARTIAL_PAY;
    r.amount_cents = 900000;
    CHECK(score_eda(r, gt) == 1);

    r.amount_cents = 900001;
    CHECK(score_eda(r, gt) == 0);
    r.amount_cents.reset();
    CHECK(score_eda(r, gt) == 0);

    r.decision = Decision::PAY;
    r.amount_cents = 900000;
    CHECK(score_eda(r, gt) == 0);

    GroundTruth plain;
    plain.decision = Decision::APPROVE;
    DecisionRecord a = committed("");
    a.decision = Decision::APPROVE;
    CHECK(score_eda(a, plain) == 1);
}

TEST_CASE("crr is nullopt off the denial class and zero on a missed denial") {
    ReferenceBackend backend;
    RegulatoryStandard applies{StandardId::STATE_INS_DENIAL, {"Exclusion 9"}};
    RegulatoryStandard not_applicable{StandardId::STATE_INS_DENIAL, {}};

    DecisionRecord approved = committed("rationale");
    CHECK_FALSE(score_crr(approved, not_applicable, backend).has_value());

    // Ground truth says deny; the agent approved: automatic fail.
    auto missed = score_crr(approved, applies, backend);
    REQUIRE(missed.has_value());
    CHECK(*missed == 0);

    DecisionRecord denied = committed("rationale");
    denied.decision = Decision::DENY;
    denied.notice = "Denied under Exclusion 9. Repair estimate $16,000.";
    auto good = score_crr(denied, applies, backend);
    REQUIRE(good.has_value());
    CHECK(*good == 1);

    DecisionRecord abstained;
    abstained.committed = false;
    CHECK_FALSE(score_crr(abstained, applies, backend).has_value());
}

TEST_CASE("crr aggregates over denial-only and all-case bases") {
    AxisScores denial_pass;
    denial_pass.crr = 1;
    AxisScores denial_fail;
    denial_fail.crr = 0;
    AxisScores approval;  // crr nullopt, committed
    AxisScores abstention;
    abstention.committed = false;

    auto agg = aggregate_crr({denial_pass, denial_fail, approval, abstention});
    REQUIRE(agg.denial_only.has_value());
    CHECK(*agg.denial_only == doctest::Approx(0.5));
    REQUIRE(agg.all_case.has_value());
    CHECK(*agg.all_case == doctest::Approx(2.0 / 3.0));

    auto none = aggregate_crr({approval});
    CHECK_FALSE(none.denial_only.has_value());
    CHECK(*none.all_case == doctest::Approx(1.0));
}

TEST_CASE("car identity holds exactly on the table fixture") {
    // 10 cases, 2 commits, both correct.
    std::vector<DecisionRecord> records;
    std::vector<GroundTruth> truths(10);
    std::vector<const GroundTruth*> truth_ptrs;
    for (int i = 0; i < 10; ++i) {
        truths[i].decision = Decision::APPROVE;
        DecisionRecord r;
        r.case_id = "c" + std::to_string(i);
        if (i < 2) {
            r.committed = true;
            r.decision = Decision::APPROVE;
        } else {
            r.committed = false;
        }
        records.push_back(std::move(r));
        truth_ptrs.push_back(&truths[i]);
    }
    CarReading car = score_car(records, truth_ptrs);
    CHECK(car.commit_rate == doctest::Approx(0.20));
    REQUIRE(car.cond_accuracy.has_value());
    CHECK(*car.cond_accuracy == doctest::Approx(1.00));
    CHECK(car.commit_all_acc == doctest::Approx(0.20));
    CHECK(car.commit_all_acc == car.commit_rate * *car.cond_accuracy);
    CHECK(car.abstentions == 8);
}

TEST_CASE("car with zero commits has undefined conditional accuracy") {
    GroundTruth gt;
    gt.decision = Decision::APPROVE;
    DecisionRecord r;
    r.committed = false;
    CarReading car = score_car({r}, {&gt});
    CHECK(car.commit_rate == doctest::Approx(0.0));
    CHECK_FALSE(car.cond_accuracy.has_value());
    CHECK(car.commit_all_acc == doctest::Approx(0.0));
}
