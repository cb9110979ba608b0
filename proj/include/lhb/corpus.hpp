#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lhb/canonical.hpp"
#include "lhb/record.hpp"
#include "lhb/rng.hpp"
#include "lhb/textscan.hpp"

namespace lhb {

using json = nlohmann::ordered_json;

constexpr int kCharsPerToken = 4;

enum class Domain { LOAN, CLAIM };

inline std::string to_string(Domain d) { return d == Domain::LOAN ? "LOAN" : "CLAIM"; }

enum class ContentClass { FACT, REASONING, MIXED };

inline std::string to_string(ContentClass c) {
    switch (c) {
        case ContentClass::FACT: return "FACT";
        case ContentClass::REASONING: return "REASONING";
        case ContentClass::MIXED: return "MIXED";
    }
    return {};
}

enum class DocKind {
    IDENTITY,
    W2,
    PAYSTUB,
    TAX_RETURN,
    BANK_STMT,
    CREDIT_REPORT,
    APPRAISAL,
    PURCHASE_CONTRACT,
    HOI_BINDER,
    LOAN_TERMS,
    CORRESPONDENCE,
    POLICY,
    FNOL,
    ADJUSTER_NOTE,
    ESTIMATE,
    NARRATIVE
};

inline std::string to_string(DocKind k) {
    switch (k) {
        case DocKind::IDENTITY: return "IDENTITY";
        case DocKind::W2: return "W2";
        case DocKind::PAYSTUB: return "PAYSTUB";
        case DocKind::TAX_RETURN: return "TAX_RETURN";
        case DocKind::BANK_STMT: return "BANK_STMT";
        case DocKind::CREDIT_REPORT: return "CREDIT_REPORT";
        case DocKind::APPRAISAL: return "APPRAISAL";
        case DocKind::PURCHASE_CONTRACT: return "PURCHASE_CONTRACT";
        case DocKind::HOI_BINDER: return "HOI_BINDER";
        case DocKind::LOAN_TERMS: return "LOAN_TERMS";
        case DocKind::CORRESPONDENCE: return "CORRESPONDENCE";
        case DocKind::POLICY: return "POLICY";
        case DocKind::FNOL: return "FNOL";
        case DocKind::ADJUSTER_NOTE: return "ADJUSTER_NOTE";
        case DocKind::ESTIMATE: return "ESTIMATE";
        case DocKind::NARRATIVE: return "NARRATIVE";
    }
    return {};
}

struct FactAnchor {
    std::string key;
    Canonical value;
    std::string display_form;
};

struct ReasoningPoint {
    std::string id;
    std::string statement;
    std::vector<std::string> evidence_phrases;  // 1-4, each verbatim in some chunk
};

enum class StandardId { ECOA_REG_B, STATE_INS_DENIAL };

inline std::string to_string(StandardId s) {
    return s == StandardId::ECOA_REG_B ? "ECOA_REG_B" : "STATE_INS_DENIAL";
}

struct RegulatoryStandard {
    StandardId id = StandardId::ECOA_REG_B;
    std::vector<std::string> required_provisions;  // empty iff non-denial ground truth
};

struct GroundTruth {
    Decision decision = Decision::APPROVE;
    std::optional<std::int64_t> amount_cents;
    std::vector<FactAnchor> facts;
    std::vector<ReasoningPoint> reasoning;
    RegulatoryStandard standard;
};

struct DocumentChunk {
    int index = 0;
    std::string text;
    ContentClass content_class = ContentClass::FACT;
    DocKind doc_kind = DocKind::NARRATIVE;
};

struct Case {
    std::string case_id;
    Domain domain = Domain::LOAN;
    std::vector<DocumentChunk> chunks;
    GroundTruth ground_truth;
    std::int64_t char_length = 0;
};

enum class Tier { LOOSE, MODERATE, TIGHT };

inline std::string to_string(Tier t) {
    switch (t) {
        case Tier::LOOSE: return "LOOSE";
        case Tier::MODERATE: return "MODERATE";
        case Tier::TIGHT: return "TIGHT";
    }
    return {};
}

inline std::optional<Tier> tier_from_string(const std::string& s) {
    if (s == "LOOSE") return Tier::LOOSE;
    if (s == "MODERATE") return Tier::MODERATE;
    if (s == "TIGHT") return Tier::TIGHT;
    return std::nullopt;
}

inline double tier_ratio(Tier t) {
    switch (t) {
        case Tier::LOOSE: return 0.5;
        case Tier::MODERATE: return 0.2;
        case Tier::TIGHT: return 0.05;
    }
    return 0.0;
}

struct BudgetTier {
    Tier name = Tier::MODERATE;
    double ratio = 0.2;
    std::int64_t char_budget = 0;
};

inline BudgetTier budget_for(Tier tier, const std::vector<Case>& corpus) {
    if (corpus.empty()) throw std::invalid_argument("no cases");
    std::int64_t total = 0;
    for (const auto& c : corpus) total += c.char_length;
    double mean = static_cast<double>(total) / static_cast<double>(corpus.size());
    BudgetTier b;
    b.name = tier;
    b.ratio = tier_ratio(tier);
    b.char_budget = static_cast<std::int64_t>(std::llround(b.ratio * mean));
    return b;
}

// Lexical cues the extractor and reference decider use to locate an anchor's
// value in free text.
inline std::vector<std::string> cues_for_key(const std::string& key) {
    static const std::map<std::string, std::vector<std::string>> table = {
        {"income_2025", {"income", "gross annual wages"}},
        {"fico_score", {"FICO", "credit score"}},
        {"appraised_value", {"appraised", "appraisal"}},
        {"loan_amount", {"loan amount"}},
        {"dti", {"DTI", "debt-to-income"}},
        {"locked_rate", {"locked rate", "rate"}},
        {"policy_number", {"policy"}},
        {"dwelling_limit", {"dwelling limit"}},
        {"repair_estimate", {"repair estimate", "estimate"}},
        {"deductible", {"deductible"}},
        {"date_of_loss", {"date of loss", "loss occurred"}},
        {"net_payment", {"net claim payment", "net payment"}},
        {"denial_provision", {"Exclusion", "under"}},
    };
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    // Fallback: the key's own words.
    std::string joined;
    std::vector<std::string> cues;
    for (const auto& term : tokenize_terms(key)) {
        if (detail::all_digits(term)) continue;
        if (!joined.empty()) joined += ' ';
        joined += term;
    }
    if (!joined.empty()) cues.push_back(joined);
    return cues;
}

// Label written in front of an anchor value when the reference decider or the
// ground-truth record renders it; always contains one of the key's cues.
inline std::string label_for_key(const std::string& key) {
    static const std::map<std::string, std::string> table = {
        {"income_2025", "Verified income"},
        {"fico_score", "FICO"},
        {"appraised_value", "Appraised value"},
        {"loan_amount", "Loan amount"},
        {"dti", "DTI"},
        {"locked_rate", "Locked rate"},
        {"policy_number", "Policy"},
        {"dwelling_limit", "Dwelling limit"},
        {"repair_estimate", "Repair estimate"},
        {"deductible", "Deductible"},
        {"date_of_loss", "Date of loss"},
        {"net_payment", "Net claim payment"},
        {"denial_provision", "Denied under"},
    };
    auto it = table.find(key);
    return it != table.end() ? it->second : key;
}

namespace gen {

inline const std::vector<std::string>& first_names() {
    static const std::vector<std::string> v = {"Jane",  "Marcus", "Priya", "Elena", "Tomas",
                                               "Aisha", "Derek",  "Mina",  "Oscar", "Ruth",
                                               "Caleb", "Ingrid"};
    return v;
}

inline const std::vector<std::string>& last_names() {
    static const std::vector<std::string> v = {"Doe",     "Whitfield", "Raman",  "Kovacs",
                                               "Alvarez", "Okafor",    "Lindqvist", "Serrano",
                                               "Novak",   "Barnes",    "Ferreira",  "Huang"};
    return v;
}

inline const std::vector<std::string>& employers() {
    static const std::vector<std::string> v = {"Meridian Logistics", "Harbor Health Systems",
                                               "Cobalt Analytics",   "Stonebridge Foods",
                                               "Northgate Utilities", "Pinewood Schools"};
    return v;
}

inline const std::vector<std::string>& streets() {
    static const std::vector<std::string> v = {"Maple Ave", "Birch Ct",   "Juniper Ln",
                                               "Hollis St", "Carmine Rd", "Weldon Dr"};
    return v;
}

inline const std::vector<std::string>& cities() {
    static const std::vector<std::string> v = {"Chicago IL",  "Columbus OH", "Tacoma WA",
                                               "Mesa AZ",     "Durham NC",   "Albany NY"};
    return v;
}

inline const std::vector<std::string>& loan_filler() {
    static const std::vector<std::string> v = {
        "The neighborhood shows stable turnover with typical marketing times under sixty days.",
        "File notes indicate all disclosures were delivered within the required window.",
        "No flood zone determination issues were identified for the subject property.",
        "The processor confirmed receipt of the signed borrower authorization form.",
        "Routine verification of employment was ordered through the standard vendor channel.",
        "Title search returned no open liens or judgments against the applicant.",
        "The file reflects ordinary seasoning on all deposit accounts reviewed.",
        "Servicing transfer disclosures were acknowledged by the applicant at intake.",
        "Homeowners association documents were reviewed and show no special assessments.",
        "The closing protection letter was requested from the settlement agent.",
        "Ordinary utility service records were confirmed for the subject address.",
        "No undisclosed debts surfaced during the soft refresh of the credit file.",
        "The welcome package and initial escrow analysis were queued for mailing.",
        "Survey exceptions were reviewed and deemed standard for the jurisdiction.",
    };
    return v;
}

inline const std::vector<std::string>& claim_filler() {
    static const std::vector<std::string> v = {
        "Weather service records for the loss date were pulled and attached to the file.",
        "The claimant was reminded of mitigation duties under the policy conditions.",
        "Contents inventory forms were mailed with instructions for completion.",
        "No prior claims at this location appear in the loss-history database.",
        "The mortgagee listed on the declarations page was noticed per standard practice.",
        "Photographs of the exterior elevations were uploaded to the claim file.",
        "A reservation of rights was not considered necessary at this stage.",
        "The contractor of record confirmed licensing and insurance certificates.",
        "Temporary repairs were authorized to prevent further damage to the dwelling.",
        "Claim diary updated; next follow-up scheduled within the regulatory window.",
        "Recorded statement transcription was reviewed for consistency with the FNOL.",
        "Subrogation potential was evaluated and closed as not applicable.",
        "The claimant's preferred contact method was updated to electronic mail.",
        "Catastrophe coding was reviewed and removed as inapplicable to this loss.",
    };
    return v;
}

inline std::string iso_date(Rng& rng, int year) {
    int mm = static_cast<int>(rng.uniform(1, 12));
    int dd = static_cast<int>(rng.uniform(1, 28));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, mm, dd);
    return buf;
}

// Distractor money distinct from every anchor after canonicalization.
inline std::int64_t distinct_money(Rng& rng, const std::set<std::int64_t>& avoid_cents,
                                   std::int64_t lo_dollars, std::int64_t hi_dollars) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::int64_t cents = rng.uniform(lo_dollars, hi_dollars) * 100;
        if (!avoid_cents.count(cents)) return cents;
    }
    return (hi_dollars + 7) * 100 + 1300;
}

struct ChunkDraft {
    std::string text;
    ContentClass cls;
    DocKind kind;
};

inline void finalize_case(Case& c, std::vector<ChunkDraft> core_front,
                          std::vector<ChunkDraft> core_back, Rng& rng,
                          const std::vector<std::string>& filler_bank,
                          const std::set<std::int64_t>& avoid_cents) {
    std::int64_t target_chars = rng.uniform(25200, 29800);
    std::int64_t target_chunks = rng.uniform(72, 96);

    std::int64_t core_chars = 0;
    for (const auto& d : core_front) core_chars += static_cast<std::int64_t>(d.text.size());
    for (const auto& d : core_back) core_chars += static_cast<std::int64_t>(d.text.size());
    std::int64_t n_core = static_cast<std::int64_t>(core_front.size() + core_back.size());
    std::int64_t n_fill = std::max<std::int64_t>(8, target_chunks - n_core);
    std::int64_t remaining = std::max<std::int64_t>(120 * n_fill, target_chars - core_chars);

    std::vector<ChunkDraft> filler;
    for (std::int64_t i = 0; i < n_fill; ++i) {
        // Redistribute what is left so the case total tracks the target
        // instead of overshooting by a sentence per chunk.
        std::int64_t per = std::max<std::int64_t>(120, remaining / (n_fill - i));
        std::string text;
        while (static_cast<std::int64_t>(text.size()) < per) {
            const std::string& piece = rng.pick(filler_bank);
            if (!text.empty() &&
                static_cast<std::int64_t>(text.size() + 1 + piece.size()) > per + 40) {
                break;
            }
            if (!text.empty()) text += ' ';
            text += piece;
        }
        // Occasional near-miss number that never collides with an anchor.
        if (i % 6 == 3) {
            std::int64_t cents = distinct_money(rng, avoid_cents, 500, 9500);
            text += " A routine vendor invoice of " + display_money(cents) +
                    " was logged against the administrative ledger.";
        }
        remaining -= static_cast<std::int64_t>(text.size());
        filler.push_back({std::move(text), ContentClass::MIXED, DocKind::NARRATIVE});
    }

    std::vector<ChunkDraft> ordered;
    ordered.reserve(core_front.size() + filler.size() + core_back.size());
    for (auto& d : core_front) ordered.push_back(std::move(d));
    for (auto& d : filler) ordered.push_back(std::move(d));
    for (auto& d : core_back) ordered.push_back(std::move(d));

    c.chunks.clear();
    c.char_length = 0;
    int idx = 0;
    for (auto& d : ordered) {
        DocumentChunk chunk;
        chunk.index = idx++;
        chunk.text = std::move(d.text);
        chunk.content_class = d.cls;
        chunk.doc_kind = d.kind;
        c.char_length += static_cast<std::int64_t>(chunk.text.size());
        c.chunks.push_back(std::move(chunk));
    }
}

inline Case synthesize_loan(int ordinal, Rng& rng) {
    Case c;
    char idbuf[24];
    std::snprintf(idbuf, sizeof(idbuf), "loan_L%02d", ordinal);
    c.case_id = idbuf;
    c.domain = Domain::LOAN;

    int pos = (ordinal - 1) % 5;
    bool approve = pos < 3;

    std::string name = rng.pick(first_names()) + " " + rng.pick(last_names());
    std::string employer = rng.pick(employers());
    std::string address = std::to_string(rng.uniform(100, 999)) + " " + rng.pick(streets()) + ", " +
                          rng.pick(cities());

    std::int64_t income_cents = rng.uniform(120, 500) * 500 * 100;
    std::int64_t fico = approve ? rng.uniform(680, 820) : rng.uniform(620, 780);
    std::int64_t appraised_cents = rng.uniform(250, 900) * 1000 * 100;
    std::int64_t loan_cents =
        ((appraised_cents / 100) * rng.uniform(60, 90) / 100 + 500) / 1000 * 1000 * 100;
    std::int64_t dti_bp = (approve ? rng.uniform(200, 429) : rng.uniform(440, 550)) * 10;
    std::int64_t rate_bp = rng.uniform(500, 800);

    GroundTruth& gt = c.ground_truth;
    gt.decision = approve ? Decision::APPROVE : Decision::DENY;
    gt.standard.id = StandardId::ECOA_REG_B;
    if (!approve) gt.standard.required_provisions = {"Reg B 1002.9(a)(2)"};

    auto anchor = [&gt](std::string key, std::string display) {
        gt.facts.push_back({std::move(key), canonicalize(display), display});
    };
    anchor("income_2025", display_money(income_cents));
    anchor("fico_score", std::to_string(fico));
    anchor("appraised_value", display_money(appraised_cents));
    anchor("loan_amount", display_money(loan_cents));
    anchor("dti", display_percent(dti_bp));
    anchor("locked_rate", display_percent(rate_bp));

    std::string dti_s = display_percent(dti_bp);
    std::string fico_s = std::to_string(fico);
    bool gift_point = rng.uniform(0, 1) == 1;
    if (approve) {
        gt.reasoning.push_back(
            {"r1",
             "The 2024 employment gap is explained by documented FMLA medical leave, not income "
             "instability.",
             {"documented FMLA medical leave", "employment gap"}});
        gt.reasoning.push_back({"r2",
                                "DTI of " + dti_s + " and FICO " + fico_s +
                                    " are the primary quantitative factors in the decision.",
                                {"DTI of " + dti_s, "FICO " + fico_s}});
        if (gift_point) {
            gt.reasoning.push_back({"r3",
                                    "The large deposit on the March statement was resolved as a "
                                    "documented gift accompanied by a signed gift letter.",
                                    {"signed gift letter", "large deposit"}});
        }
    } else {
        gt.reasoning.push_back({"r1",
                                "DTI of " + dti_s +
                                    " exceeds the qualified-mortgage guideline and is the "
                                    "controlling adverse factor.",
                                {"DTI of " + dti_s, "controlling adverse factor"}});
        gt.reasoning.push_back({"r2",
                                "The adverse action notice must state the specific principal "
                                "reasons for denial.",
                                {"specific principal reasons"}});
        if (gift_point) {
            gt.reasoning.push_back(
                {"r3",
                 "The 2024 employment gap is explained by documented FMLA medical leave, not "
                 "income instability.",
                 {"documented FMLA medical leave", "employment gap"}});
        }
    }

    std::set<std::int64_t> avoid = {income_cents, appraised_cents, loan_cents};
    std::int64_t agi_cents = income_cents - rng.uniform(2000, 9000) * 100;
    std::int64_t price_cents = appraised_cents - rng.uniform(1, 9) * 1000 * 100;
    std::int64_t premium_cents = rng.uniform(900, 3200) * 100;
    avoid.insert(agi_cents);
    avoid.insert(price_cents);
    avoid.insert(premium_cents);

    std::vector<ChunkDraft> front;
    auto F = [&front](std::string text, ContentClass cls, DocKind kind) {
        front.push_back({std::move(text), cls, kind});
    };

    F("Uniform Residential Loan Application. Applicant: " + name + ". Date of birth 1987-0" +
          std::to_string(rng.uniform(1, 9)) + "-1" + std::to_string(rng.uniform(0, 9)) +
          ". SSN ending " + std::to_string(rng.uniform(1000, 9999)) + ". Current address " +
          address + ".",
      ContentClass::FACT, DocKind::IDENTITY);
    F("Employment header. Applicant " + name + " lists employer " + employer +
          " with tenure of " + std::to_string(rng.uniform(3, 14)) +
          " years. Phone on file ending " + std::to_string(rng.uniform(1000, 9999)) + ".",
      ContentClass::FACT, DocKind::IDENTITY);
    F("W-2 Wage and Tax Statement, tax year 2025. Employer: " + employer + ". Employee: " + name +
          ". Box 1 gross annual wages of " + display_money(income_cents) +
          " reported as taxable income for the year.",
      ContentClass::FACT, DocKind::W2);
    F("W-2 supplemental detail, tax year 2024. Federal withholding and state figures consistent "
      "with the 2025 statement. No amended filings on record.",
      ContentClass::FACT, DocKind::W2);
    F("Payroll statement for period ending " + iso_date(rng, 2026) +
          ". Gross pay this period consistent with the annualized salary on file. Direct deposit "
          "to the checking account of record.",
      ContentClass::FACT, DocKind::PAYSTUB);
    F("Payroll statement, prior period. Year-to-date figures tracking the stated annual salary. "
      "No garnishments or irregular deductions observed.",
      ContentClass::FACT, DocKind::PAYSTUB);
    F("Form 1040, tax year 2025. Line 11 adjusted gross figure " + display_money(agi_cents) +
          " with the standard deduction applied. No Schedule C activity.",
      ContentClass::FACT, DocKind::TAX_RETURN);
    F("Tax transcript match: IRS transcript consistent with the filed return for 2025. No "
      "outstanding balance due.",
      ContentClass::FACT, DocKind::TAX_RETURN);
    F("Credit report summary. FICO score " + fico_s + " as of " + iso_date(rng, 2026) +
          ". Revolving utilization at twenty-three percent of available limits.",
      ContentClass::FACT, DocKind::CREDIT_REPORT);
    F("Tradeline detail: " + std::to_string(rng.uniform(5, 14)) +
          " open accounts, zero late payments in the last twenty-four months. Oldest tradeline "
          "opened in 2014.",
      ContentClass::FACT, DocKind::CREDIT_REPORT);
    F("Uniform Residential Appraisal Report. Subject property appraised value " +
          display_money(appraised_cents) + " as of " + iso_date(rng, 2026) +
          ". Comparable sales support the conclusion.",
      ContentClass::FACT, DocKind::APPRAISAL);
    F("Appraisal addendum: condition rating C3, no repairs required. Site value consistent with "
      "the neighborhood range.",
      ContentClass::FACT, DocKind::APPRAISAL);
    F("Purchase contract executed. Contract price " + display_money(price_cents) +
          " with closing scheduled " + iso_date(rng, 2026) +
          ". Earnest deposit held in escrow.",
      ContentClass::FACT, DocKind::PURCHASE_CONTRACT);
    F("Homeowners insurance binder HOI-" + std::to_string(rng.uniform(100000, 999999)) +
          ". Annual premium " + display_money(premium_cents) +
          " with dwelling coverage bound effective at closing.",
      ContentClass::FACT, DocKind::HOI_BINDER);

    static const char* months[] = {"January", "February", "March", "April", "May", "June"};
    for (int i = 0; i < 6; ++i) {
        std::int64_t bal_cents = distinct_money(rng, avoid, 2000, 60000);
        std::string narrative =
            (i == 2 && gift_point)
                ? "A large deposit posted mid-month; see correspondence regarding the documented "
                  "source."
                : "Payroll credits and routine household debits; no irregular activity flagged.";
        F(std::string("Bank statement, ") + months[i] + " 2026, page " + std::to_string(i + 1) +
              ". Ending balance " + display_money(bal_cents) + ". " + narrative,
          ContentClass::MIXED, DocKind::BANK_STMT);
    }

    std::vector<ChunkDraft> back;
    auto B = [&back](std::string text, ContentClass cls, DocKind kind) {
        back.push_back({std::move(text), cls, kind});
    };
    B("Underwriter note: " + gt.reasoning[0].statement, ContentClass::REASONING,
      DocKind::CORRESPONDENCE);
    B("Processor correspondence: " + gt.reasoning[1].statement, ContentClass::REASONING,
      DocKind::CORRESPONDENCE);
    if (gt.reasoning.size() > 2) {
        B("Customer letter summary: " + gt.reasoning[2].statement, ContentClass::REASONING,
          DocKind::CORRESPONDENCE);
    }
    if (!approve) {
        B("Compliance checklist: any adverse action notice must cite the specific principal "
          "reasons under Reg B 1002.9(a)(2) before issuance.",
          ContentClass::REASONING, DocKind::CORRESPONDENCE);
    }
    B("Loan terms worksheet. Loan amount " + display_money(loan_cents) +
          " against appraised value " + display_money(appraised_cents) + ". Locked rate " +
          display_percent(rate_bp) + " set on " + iso_date(rng, 2026) + ".",
      ContentClass::FACT, DocKind::LOAN_TERMS);
    std::string computation =
        "Underwriting computation: DTI calculated at " + dti_s + " using verified income " +
        display_money(income_cents) + " and the proposed housing payment. FICO " + fico_s +
        " on file.";
    if (!approve) computation += " The ratio exceeds the qualified-mortgage guideline.";
    B(computation, ContentClass::MIXED, DocKind::LOAN_TERMS);

    finalize_case(c, std::move(front), std::move(back), rng, loan_filler(), avoid);
    return c;
}

inline Case synthesize_claim(int ordinal, Rng& rng) {
    Case c;
    char idbuf[24];
    std::snprintf(idbuf, sizeof(idbuf), "claim_C%02d", ordinal);
    c.case_id = idbuf;
    c.domain = Domain::CLAIM;

    int pos = (ordinal - 1) % 5;
    Decision decision = pos < 2 ? Decision::PAY : pos == 2 ? Decision::PARTIAL_PAY : Decision::DENY;
    bool deny = decision == Decision::DENY;
    bool foundation = pos == 3;  // the other deny slot is wear-and-tear

    std::string name = rng.pick(first_names()) + " " + rng.pick(last_names());
    std::string address = std::to_string(rng.uniform(100, 999)) + " " + rng.pick(streets()) + ", " +
                          rng.pick(cities());
    std::string pol = "POL-" + std::to_string(rng.uniform(100000, 999999));

    std::int64_t limit_cents = rng.uniform(20, 60) * 10000 * 100;
    std::int64_t est_cents = rng.uniform(16, 120) * 500 * 100;
    static const std::vector<std::int64_t> deductibles = {100000, 150000, 200000, 250000};
    std::int64_t ded_cents = rng.pick(deductibles);
    std::string dol = iso_date(rng, 2026);

    std::int64_t dep_cents = 0;
    std::int64_t net_cents = 0;
    if (decision == Decision::PAY) {
        net_cents = est_cents - ded_cents;
    } else if (decision == Decision::PARTIAL_PAY) {
        dep_cents = est_cents / 4 / 10000 * 10000;  // 25%, rounded to $100
        net_cents = est_cents - ded_cents - dep_cents;
    }
    std::string provision = foundation ? "Exclusion 9" : "Exclusion 3";

    GroundTruth& gt = c.ground_truth;
    gt.decision = decision;
    gt.amount_cents = net_cents;
    gt.standard.id = StandardId::STATE_INS_DENIAL;
    if (deny) gt.standard.required_provisions = {provision};

    auto anchor = [&gt](std::string key, std::string display) {
        gt.facts.push_back({std::move(key), canonicalize(display), display});
    };
    anchor("policy_number", pol);
    anchor("dwelling_limit", display_money(limit_cents));
    anchor("repair_estimate", display_money(est_cents));
    anchor("deductible", display_money(ded_cents));
    anchor("date_of_loss", dol);
    anchor("net_payment", display_money(net_cents));
    if (deny) anchor("denial_provision", provision);

    std::string peril = deny ? (foundation ? "foundation cracking" : "roof surface deterioration")
                             : "a sudden water discharge from a burst supply line";

    if (deny) {
        gt.reasoning.push_back(
            {"r1",
             foundation
                 ? "Engineer report attributes cracking to long-term settlement rather than a "
                   "sudden peril."
                 : "Inspection attributes the roof damage to gradual wear and tear rather than a "
                   "sudden peril.",
             foundation ? std::vector<std::string>{"long-term settlement", "sudden peril"}
                        : std::vector<std::string>{"wear and tear", "sudden peril"}});
        gt.reasoning.push_back({"r2",
                                "The loss is denied in full under " + provision + ".",
                                {"denied in full", provision}});
    } else {
        gt.reasoning.push_back({"r1",
                                "The loss resulted from a sudden and accidental discharge of "
                                "water, a covered peril under Coverage A.",
                                {"sudden and accidental", "covered peril"}});
        gt.reasoning.push_back({"r2",
                                "Net claim payment of " + display_money(net_cents) +
                                    " reflects the repair estimate less the " +
                                    display_money(ded_cents) + " deductible.",
                                {"Net claim payment of " + display_money(net_cents), "deductible"}});
        if (decision == Decision::PARTIAL_PAY) {
            gt.reasoning.push_back({"r3",
                                    "Recoverable depreciation of " + display_money(dep_cents) +
                                        " is withheld pending completion of repairs.",
                                    {"Recoverable depreciation", "withheld pending completion"}});
        }
    }

    std::set<std::int64_t> avoid = {limit_cents, est_cents, ded_cents, net_cents, dep_cents};

    std::vector<ChunkDraft> front;
    auto F = [&front](std::string text, ContentClass cls, DocKind kind) {
        front.push_back({std::move(text), cls, kind});
    };
    F("Homeowners Policy HO-3 number " + pol + ". Named insured " + name +
          ". Coverage A dwelling limit " + display_money(limit_cents) + ". Policy period " +
          iso_date(rng, 2025) + " through " + iso_date(rng, 2026) + ".",
      ContentClass::FACT, DocKind::POLICY);
    F("Deductibles: all-peril deductible " + display_money(ded_cents) +
          " per occurrence. Loss settlement on a replacement cost basis subject to policy "
          "conditions.",
      ContentClass::FACT, DocKind::POLICY);
    F("Coverage conditions: duties after loss include prompt notice, protection of the property, "
      "and submission of a signed proof of loss.",
      ContentClass::FACT, DocKind::POLICY);
    F("First Notice of Loss. Claim reported for " + peril + " at " + address +
          ". Date of loss " + dol + ". Claimant statement recorded at intake.",
      ContentClass::MIXED, DocKind::FNOL);
    F("Intake detail: claimant " + name +
          " describes the onset and scope of the damage. No injuries reported. Mitigation steps "
          "initiated the same day.",
      ContentClass::MIXED, DocKind::FNOL);
    for (int k = 1; k <= 3; ++k) {
        F("Adjuster note " + std::to_string(k) + " dated " + iso_date(rng, 2026) +
              ". Site inspection of the affected areas completed; photographs uploaded to the "
              "claim file. Scope walkthrough with the contractor of record.",
          ContentClass::MIXED, DocKind::ADJUSTER_NOTE);
    }
    F("Adjuster analysis: " + gt.reasoning[0].statement, ContentClass::REASONING,
      DocKind::ADJUSTER_NOTE);
    F("Contractor estimate. Repair estimate total " + display_money(est_cents) +
          " covering demolition, materials, and labor. Line items reviewed for scope accuracy.",
      ContentClass::FACT, DocKind::ESTIMATE);
    F("Estimate reconciliation: pricing database alignment verified; no supplement requested at "
      "this time.",
      ContentClass::FACT, DocKind::ESTIMATE);

    std::vector<ChunkDraft> back;
    auto B = [&back](std::string text, ContentClass cls, DocKind kind) {
        back.push_back({std::move(text), cls, kind});
    };
    B("Adjuster correspondence to claimant: " + gt.reasoning[1].statement, ContentClass::REASONING,
      DocKind::CORRESPONDENCE);
    if (gt.reasoning.size() > 2) {
        B("Adjuster correspondence, follow-up: " + gt.reasoning[2].statement,
          ContentClass::REASONING, DocKind::CORRESPONDENCE);
    }
    if (deny) {
        B("Coverage determination: the loss is denied in full under " + provision +
              ". Net claim payment " + display_money(0) + ". Policy " + pol +
              " remains in force.",
          ContentClass::REASONING, DocKind::ADJUSTER_NOTE);
    } else {
        std::string pay_note = "Payment computation. Net claim payment of " +
                               display_money(net_cents) + " after the " + display_money(ded_cents) +
                               " deductible applied to the repair estimate.";
        if (decision == Decision::PARTIAL_PAY) {
            pay_note += " Recoverable depreciation of " + display_money(dep_cents) +
                        " is withheld pending completion of repairs.";
        }
        B(pay_note, ContentClass::REASONING, DocKind::ADJUSTER_NOTE);
    }

    finalize_case(c, std::move(front), std::move(back), rng, claim_filler(), avoid);
    return c;
}

}  // namespace gen

inline Case synthesize_case(Domain domain, int ordinal, Rng& rng) {
    return domain == Domain::LOAN ? gen::synthesize_loan(ordinal, rng)
                                  : gen::synthesize_claim(ordinal, rng);
}

// Pure function of (seed, n_loan, n_claim); each case derives its generator
// stream from (seed, domain, ordinal) only.
inline std::vector<Case> generate_corpus(std::uint64_t seed, int n_loan, int n_claim) {
    std::vector<Case> corpus;
    for (int i = 1; i <= n_loan; ++i) {
        Rng rng = derive_stream(seed, "loan/" + std::to_string(i));
        corpus.push_back(synthesize_case(Domain::LOAN, i, rng));
    }
    for (int i = 1; i <= n_claim; ++i) {
        Rng rng = derive_stream(seed, "claim/" + std::to_string(i));
        corpus.push_back(synthesize_case(Domain::CLAIM, i, rng));
    }
    return corpus;
}

// Violations are data, not faults: empty report means every anchor display
// form and evidence phrase occurs in some chunk and denial provisions are
// named somewhere.
inline std::vector<std::string> validate_derivability(const Case& c) {
    std::vector<std::string> violations;
    auto in_some_chunk = [&c](const std::string& needle) {
        for (const auto& chunk : c.chunks) {
            if (chunk.text.find(needle) != std::string::npos) return true;
        }
        return false;
    };
    for (const auto& anchor : c.ground_truth.facts) {
        if (!in_some_chunk(anchor.display_form)) {
            violations.push_back("anchor not derivable: " + anchor.key);
        }
    }
    for (const auto& point : c.ground_truth.reasoning) {
        for (const auto& phrase : point.evidence_phrases) {
            if (!in_some_chunk(phrase)) {
                violations.push_back("evidence phrase not derivable: " + point.id + ": " + phrase);
            }
        }
    }
    if (is_denial(c.ground_truth.decision)) {
        for (const auto& provision : c.ground_truth.standard.required_provisions) {
            if (!in_some_chunk(provision)) {
                violations.push_back("provision not named: " + provision);
            }
        }
    }
    return violations;
}

// The ideal committed output for a case, rendered from ground truth. Used by
// the self-scoring fixpoint and as the reference for metric tests.
inline DecisionRecord ground_truth_record(const Case& c) {
    DecisionRecord r;
    r.case_id = c.case_id;
    r.committed = true;
    r.decision = c.ground_truth.decision;
    r.amount_cents = c.ground_truth.amount_cents;

    std::string rationale = "Decision " + to_string(c.ground_truth.decision) + ".";
    for (const auto& anchor : c.ground_truth.facts) {
        rationale += " " + label_for_key(anchor.key) + " " + anchor.display_form + ".";
    }
    for (const auto& point : c.ground_truth.reasoning) {
        rationale += " " + point.statement;
    }
    r.rationale = rationale;

    if (is_denial(c.ground_truth.decision)) {
        std::string notice = c.domain == Domain::LOAN
                                 ? "Adverse action notice: the application is denied."
                                 : "Denial letter: the claim is denied in full.";
        for (const auto& provision : c.ground_truth.standard.required_provisions) {
            notice += " Cited provision: " + provision + ".";
        }
        // The auditor's specificity proxy wants at least one concrete value.
        for (const auto& anchor : c.ground_truth.facts) {
            if (anchor.value.kind == Canonical::Kind::Money ||
                anchor.value.kind == Canonical::Kind::Percent) {
                notice += " " + label_for_key(anchor.key) + " " + anchor.display_form + ".";
                break;
            }
        }
        r.notice = notice;
    }
    for (const auto& anchor : c.ground_truth.facts) {
        r.referenced_values[anchor.key] = anchor.value;
    }
    return r;
}

// ---- serialization ----------------------------------------------------------

inline json to_json(const Canonical& v) {
    json j;
    switch (v.kind) {
        case Canonical::Kind::Money: j["kind"] = "money"; j["cents"] = v.number; break;
        case Canonical::Kind::Percent: j["kind"] = "percent"; j["bp"] = v.number; break;
        case Canonical::Kind::Date: j["kind"] = "date"; j["iso"] = v.text; break;
        case Canonical::Kind::Text: j["kind"] = "text"; j["value"] = v.text; break;
    }
    return j;
}

inline Canonical canonical_from_json(const json& j) {
    Canonical v;
    std::string kind = j.at("kind");
    if (kind == "money") { v.kind = Canonical::Kind::Money; v.number = j.at("cents"); }
    else if (kind == "percent") { v.kind = Canonical::Kind::Percent; v.number = j.at("bp"); }
    else if (kind == "date") { v.kind = Canonical::Kind::Date; v.text = j.at("iso"); }
    else { v.kind = Canonical::Kind::Text; v.text = j.at("value"); }
    return v;
}

inline json to_json(const Case& c) {
    json j;
    j["case_id"] = c.case_id;
    j["domain"] = to_string(c.domain);
    json chunks = json::array();
    for (const auto& chunk : c.chunks) {
        json cj;
        cj["index"] = chunk.index;
        cj["text"] = chunk.text;
        cj["content_class"] = to_string(chunk.content_class);
        cj["doc_kind"] = to_string(chunk.doc_kind);
        chunks.push_back(std::move(cj));
    }
    j["chunks"] = std::move(chunks);

    json gt;
    gt["decision"] = to_string(c.ground_truth.decision);
    if (c.ground_truth.amount_cents) gt["amount_cents"] = *c.ground_truth.amount_cents;
    else gt["amount_cents"] = nullptr;
    json facts = json::array();
    for (const auto& a : c.ground_truth.facts) {
        json aj;
        aj["key"] = a.key;
        aj["value"] = to_json(a.value);
        aj["display_form"] = a.display_form;
        facts.push_back(std::move(aj));
    }
    gt["facts"] = std::move(facts);
    json reasoning = json::array();
    for (const auto& p : c.ground_truth.reasoning) {
        json pj;
        pj["id"] = p.id;
        pj["statement"] = p.statement;
        pj["evidence_phrases"] = p.evidence_phrases;
        reasoning.push_back(std::move(pj));
    }
    gt["reasoning"] = std::move(reasoning);
    json standard;
    standard["id"] = to_string(c.ground_truth.standard.id);
    standard["required_provisions"] = c.ground_truth.standard.required_provisions;
    gt["standard"] = std::move(standard);
    j["ground_truth"] = std::move(gt);
    j["char_length"] = c.char_length;
    return j;
}

inline Case case_from_json(const json& j) {
    Case c;
    c.case_id = j.at("case_id");
    c.domain = j.at("domain") == "LOAN" ? Domain::LOAN : Domain::CLAIM;
    for (const auto& cj : j.at("chunks")) {
        DocumentChunk chunk;
        chunk.index = cj.at("index");
        chunk.text = cj.at("text");
        std::string cls = cj.at("content_class");
        chunk.content_class = cls == "FACT" ? ContentClass::FACT
                              : cls == "REASONING" ? ContentClass::REASONING
                                                   : ContentClass::MIXED;
        std::string kind = cj.at("doc_kind");
        chunk.doc_kind = DocKind::NARRATIVE;
        for (int k = 0; k <= static_cast<int>(DocKind::NARRATIVE); ++k) {
            if (to_string(static_cast<DocKind>(k)) == kind) {
                chunk.doc_kind = static_cast<DocKind>(k);
                break;
            }
        }
        c.char_length += static_cast<std::int64_t>(chunk.text.size());
        c.chunks.push_back(std::move(chunk));
    }
    const json& gt = j.at("ground_truth");
    c.ground_truth.decision = *decision_from_string(gt.at("decision"));
    if (!gt.at("amount_cents").is_null()) c.ground_truth.amount_cents = gt.at("amount_cents");
    for (const auto& aj : gt.at("facts")) {
        c.ground_truth.facts.push_back(
            {aj.at("key"), canonical_from_json(aj.at("value")), aj.at("display_form")});
    }
    for (const auto& pj : gt.at("reasoning")) {
        ReasoningPoint p;
        p.id = pj.at("id");
        p.statement = pj.at("statement");
        for (const auto& ph : pj.at("evidence_phrases")) p.evidence_phrases.push_back(ph);
        c.ground_truth.reasoning.push_back(std::move(p));
    }
    c.ground_truth.standard.id =
        gt.at("standard").at("id") == "ECOA_REG_B" ? StandardId::ECOA_REG_B
                                                   : StandardId::STATE_INS_DENIAL;
    for (const auto& p : gt.at("standard").at("required_provisions")) {
        c.ground_truth.standard.required_provisions.push_back(p);
    }
    c.char_length = j.at("char_length");
    return c;
}

inline std::string serialize_corpus(const std::vector<Case>& corpus) {
    std::string out;
    for (const auto& c : corpus) {
        out += to_json(c).dump();
        out += '\n';
    }
    return out;
}

inline void save_corpus(const std::vector<Case>& corpus, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << serialize_corpus(corpus);
}

inline std::vector<Case> load_corpus(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open corpus: " + path);
    std::vector<Case> corpus;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        corpus.push_back(case_from_json(json::parse(line)));
    }
    return corpus;
}

inline std::string corpus_fingerprint(const std::vector<Case>& corpus) {
    std::uint64_t h = fnv1a64(serialize_corpus(corpus));
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lhb
