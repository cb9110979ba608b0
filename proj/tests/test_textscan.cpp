#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lhb/textscan.hpp"

using namespace lhb;

TEST_CASE("scan_values finds typed tokens in order") {
    auto tokens = scan_values("Loan amount $147,500 at 6.03% closing 2026-03-14, score 712.");
    REQUIRE(tokens.size() == 4);
    CHECK(tokens[0].form == ValueToken::Form::Money);
    CHECK(tokens[0].value.number == 14750000);
    CHECK(tokens[1].form == ValueToken::Form::Percent);
    CHECK(tokens[1].value.number == 603);
    CHECK(tokens[2].form == ValueToken::Form::Date);
    CHECK(tokens[2].value.text == "2026-03-14");
    CHECK(tokens[3].form == ValueToken::Form::Integer);
    CHECK(tokens[3].surface == "712");
}

TEST_CASE("scan_values strips trailing punctuation") {
    auto tokens = scan_values("The estimate was $16,000.");
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].surface == "$16,000");
    CHECK(tokens[0].value.number == 1600000);
}

TEST_CASE("find_cue is whole-word and case-insensitive") {
    CHECK(find_cue("the locked rate is set", "rate").size() == 1);
    CHECK(find_cue("an accurate figure", "rate").empty());
    CHECK(find_cue("FICO and fico", "FICO").size() == 2);
    CHECK(find_cue("pro-rated", "rated").empty());
}

TEST_CASE("value_near_cue picks the nearest token of the right kind") {
    std::string text = "Deductible $1,500 applies. Unrelated figure $9,999 far away from cues.";
    auto tok = value_near_cue(text, {"deductible"}, Canonical::Kind::Money);
    REQUIRE(tok.has_value());
    CHECK(tok->value.number == 150000);
}

TEST_CASE("value_near_cue respects the window") {
    std::string text = "deductible mentioned here." + std::string(200, 'x') + " $1,500 later.";
    CHECK_FALSE(value_near_cue(text, {"deductible"}, Canonical::Kind::Money).has_value());
}

TEST_CASE("value_near_cue serves provision identifiers for text kind") {
    std::string text = "The claim is denied in full under Exclusion 9.";
    auto tok = value_near_cue(text, {"under", "Exclusion"}, Canonical::Kind::Text);
    REQUIRE(tok.has_value());
    CHECK(tok->value.text == "exclusion 9");
}

TEST_CASE("split_sentences keeps numeric periods intact") {
    auto s = split_sentences("Total was $1,500.25 today. Reg B 1002.9 applies.\nNext line");
    REQUIRE(s.size() == 3);
    CHECK(s[0] == "Total was $1,500.25 today.");
    CHECK(s[1] == "Reg B 1002.9 applies.");
    CHECK(s[2] == "Next line");
}

TEST_CASE("tokenize_terms folds case and splits on non-alnum") {
    auto terms = tokenize_terms("Loan-Amount: $147,500!");
    REQUIRE(terms.size() == 4);
    CHECK(terms[0] == "loan");
    CHECK(terms[1] == "amount");
    CHECK(terms[2] == "147");
    CHECK(terms[3] == "500");
}

TEST_CASE("find_provisions extracts both identifier families") {
    auto p = find_provisions("Cited under Exclusion 9 and Reg B 1002.9(a)(2). Exclusion 9 again.");
    REQUIRE(p.size() == 2);
    CHECK(p[0] == "Exclusion 9");
    CHECK(p[1] == "Reg B 1002.9(a)(2)");
}

TEST_CASE("applied exclusions require application context") {
    CHECK(find_applied_exclusions("The policy lists Exclusion 3 among standard terms.").empty());
    auto a = find_applied_exclusions("The loss is denied in full under Exclusion 9.");
    REQUIRE(a.size() == 1);
    CHECK(a[0] == "Exclusion 9");
    auto b = find_applied_exclusions("Exclusion 3 applies to this loss.");
    REQUIRE(b.size() == 1);
    CHECK(b[0] == "Exclusion 3");
}
