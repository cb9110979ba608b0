#pragma once

#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lhb/canonical.hpp"

namespace lhb {

// One value-bearing token found in free text, with its position and surface.
struct ValueToken {
    enum class Form { Money, Percent, Date, Integer, Identifier };

    std::size_t pos = 0;
    std::string surface;
    Form form = Form::Identifier;
    Canonical value;
};

namespace detail {

inline bool is_token_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '$' || c == '%' || c == '.' || c == ',' || c == '-' ||
           c == '(' || c == ')' || c == '/';
}

inline bool has_digit(std::string_view s) {
    for (char c : s)
        if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return false;
}

inline bool has_alpha(std::string_view s) {
    for (char c : s)
        if (std::isalpha(static_cast<unsigned char>(c))) return true;
    return false;
}

}  // namespace detail

// Hand-rolled scanner (std::regex is too slow for the volume of text the
// summarizer touches). Emits money, percent, date, bare-integer, and
// identifier tokens in document order.
inline std::vector<ValueToken> scan_values(std::string_view text) {
    std::vector<ValueToken> out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        if (!detail::is_token_char(text[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < n && detail::is_token_char(text[i])) ++i;
        std::string_view raw = text.substr(start, i - start);
        // Trailing sentence punctuation is not part of the token.
        while (!raw.empty() && (raw.back() == '.' || raw.back() == ',' || raw.back() == '-' ||
                                raw.back() == '/')) {
            raw.remove_suffix(1);
        }
        if (raw.empty() || !detail::has_digit(raw)) continue;

        ValueToken tok;
        tok.pos = start;
        tok.surface = std::string(raw);
        Canonical c = canonicalize(raw);
        // A bare number followed by "USD" is a money token spanning both runs.
        if (c.kind == Canonical::Kind::Text && !detail::has_alpha(raw) && i + 4 <= n &&
            text.substr(i, 4) == " USD" && (i + 4 == n || !std::isalnum(static_cast<unsigned char>(text[i + 4])))) {
            std::string with_suffix = std::string(raw) + " USD";
            Canonical money = canonicalize(with_suffix);
            if (money.kind == Canonical::Kind::Money) {
                tok.surface = std::move(with_suffix);
                c = money;
                i += 4;
            }
        }
        switch (c.kind) {
            case Canonical::Kind::Money: tok.form = ValueToken::Form::Money; break;
            case Canonical::Kind::Percent: tok.form = ValueToken::Form::Percent; break;
            case Canonical::Kind::Date: tok.form = ValueToken::Form::Date; break;
            case Canonical::Kind::Text:
                tok.form = detail::has_alpha(raw) || raw.find_first_of(".,()-") != std::string_view::npos
                               ? ValueToken::Form::Identifier
                               : ValueToken::Form::Integer;
                break;
        }
        tok.value = c;
        out.push_back(std::move(tok));
    }
    return out;
}

// Whole-word, case-insensitive occurrences of `cue` (which may contain spaces).
inline std::vector<std::size_t> find_cue(std::string_view text, std::string_view cue) {
    std::vector<std::size_t> hits;
    if (cue.empty() || cue.size() > text.size()) return hits;
    auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
    auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '-'; };
    for (std::size_t i = 0; i + cue.size() <= text.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < cue.size(); ++j) {
            if (lower(text[i + j]) != lower(cue[j])) {
                match = false;
                break;
            }
        }
        if (!match) continue;
        if (i > 0 && is_word(text[i - 1]) && is_word(cue.front())) continue;
        std::size_t end = i + cue.size();
        if (end < text.size() && is_word(text[end]) && is_word(cue.back())) continue;
        hits.push_back(i);
    }
    return hits;
}

inline bool contains_ci(std::string_view text, std::string_view phrase) {
    if (phrase.empty()) return true;
    if (phrase.size() > text.size()) return false;
    auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
    for (std::size_t i = 0; i + phrase.size() <= text.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < phrase.size(); ++j) {
            if (lower(text[i + j]) != lower(phrase[j])) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

// Multi-word provision identifiers ("Exclusion 9", "Reg B 1002.9(a)(2)") as
// positioned tokens, since scan_values only sees single runs.
inline std::vector<ValueToken> scan_provision_tokens(std::string_view text) {
    std::vector<ValueToken> out;
    for (std::size_t pos : find_cue(text, "Exclusion")) {
        std::size_t i = pos + 9;
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t d = i;
        while (d < text.size() && std::isdigit(static_cast<unsigned char>(text[d]))) ++d;
        if (d == i) continue;
        ValueToken tok;
        tok.pos = pos;
        tok.surface = "Exclusion " + std::string(text.substr(i, d - i));
        tok.form = ValueToken::Form::Identifier;
        tok.value = canonicalize(tok.surface);
        out.push_back(std::move(tok));
    }
    for (std::size_t pos : find_cue(text, "Reg B")) {
        std::size_t i = pos + 5;
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t d = i;
        while (d < text.size() && detail::is_token_char(text[d]) && text[d] != ',' && text[d] != '$') ++d;
        std::string_view sec = text.substr(i, d - i);
        while (!sec.empty() && sec.back() == '.') sec.remove_suffix(1);
        if (sec.empty() || !detail::has_digit(sec)) continue;
        ValueToken tok;
        tok.pos = pos;
        tok.surface = "Reg B " + std::string(sec);
        tok.form = ValueToken::Form::Identifier;
        tok.value = canonicalize(tok.surface);
        out.push_back(std::move(tok));
    }
    return out;
}

// Nearest token of the wanted canonical kind within `window` chars of any cue
// occurrence. Integer, identifier, and provision tokens all satisfy a
// Text-kind request.
inline std::optional<ValueToken> value_near_cue(std::string_view text,
                                                const std::vector<std::string>& cues,
                                                Canonical::Kind kind,
                                                std::size_t window = 120) {
    std::vector<ValueToken> tokens = scan_values(text);
    if (kind == Canonical::Kind::Text) {
        for (auto& tok : scan_provision_tokens(text)) tokens.push_back(std::move(tok));
    }
    std::optional<ValueToken> best;
    std::size_t best_dist = window + 1;
    for (const auto& cue : cues) {
        for (std::size_t cue_pos : find_cue(text, cue)) {
            for (const auto& tok : tokens) {
                bool kind_ok = tok.value.kind == kind;
                if (kind == Canonical::Kind::Text) {
                    kind_ok = tok.form == ValueToken::Form::Integer ||
                              tok.form == ValueToken::Form::Identifier;
                }
                if (!kind_ok) continue;
                // Distance is measured from the cue span, not its first char,
                // so a labeled value just after the cue beats a stray value
                // from the preceding sentence.
                std::size_t cue_end = cue_pos + cue.size();
                std::size_t tok_end = tok.pos + tok.surface.size();
                std::size_t dist = tok.pos >= cue_end ? tok.pos - cue_end
                                   : tok_end <= cue_pos ? cue_pos - tok_end
                                                        : 0;
                if (dist <= window && dist < best_dist) {
                    best_dist = dist;
                    best = tok;
                }
            }
        }
    }
    return best;
}

// Sentence boundaries: ., !, ? followed by whitespace, or a newline. Periods
// inside numbers ("$147,500.00", "1002.9") do not split.
inline std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool boundary = false;
        if (c == '\n') {
            boundary = true;
        } else if ((c == '.' || c == '!' || c == '?') &&
                   (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
            boundary = true;
        }
        if (boundary) {
            std::string_view s = text.substr(start, i + 1 - start);
            std::string trimmed = detail::trim(s);
            if (!trimmed.empty()) out.push_back(std::move(trimmed));
            start = i + 1;
        }
    }
    if (start < text.size()) {
        std::string trimmed = detail::trim(text.substr(start));
        if (!trimmed.empty()) out.push_back(std::move(trimmed));
    }
    return out;
}

// Case-folded alphanumeric terms, for BM25 indexing and querying.
inline std::vector<std::string> tokenize_terms(std::string_view text) {
    std::vector<std::string> terms;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            terms.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) terms.push_back(cur);
    return terms;
}

// Regulatory provision identifiers: "Exclusion <n>" and "Reg B <section>".
inline std::vector<std::string> find_provisions(std::string_view text) {
    std::vector<std::string> out;
    auto push_unique = [&out](std::string s) {
        for (const auto& e : out)
            if (e == s) return;
        out.push_back(std::move(s));
    };
    for (std::size_t pos : find_cue(text, "Exclusion")) {
        std::size_t i = pos + 9;
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t d = i;
        while (d < text.size() && std::isdigit(static_cast<unsigned char>(text[d]))) ++d;
        if (d > i) push_unique("Exclusion " + std::string(text.substr(i, d - i)));
    }
    for (std::size_t pos : find_cue(text, "Reg B")) {
        std::size_t i = pos + 5;
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t d = i;
        while (d < text.size() && detail::is_token_char(text[d]) && text[d] != ',' && text[d] != '$') ++d;
        std::string_view sec = text.substr(i, d - i);
        while (!sec.empty() && sec.back() == '.') sec.remove_suffix(1);
        if (!sec.empty() && detail::has_digit(sec)) push_unique("Reg B " + std::string(sec));
    }
    return out;
}

// A provision counts as applied only when the text invokes it ("under
// Exclusion 9", "Exclusion 9 applies", "denied ... Exclusion 9"), not when a
// policy document merely lists it.
inline std::vector<std::string> find_applied_exclusions(std::string_view text) {
    std::vector<std::string> out;
    for (std::size_t pos : find_cue(text, "Exclusion")) {
        std::size_t i = pos + 9;
        while (i < text.size() && text[i] == ' ') ++i;
        std::size_t d = i;
        while (d < text.size() && std::isdigit(static_cast<unsigned char>(text[d]))) ++d;
        if (d == i) continue;
        std::string id = "Exclusion " + std::string(text.substr(i, d - i));
        std::size_t lo = pos > 60 ? pos - 60 : 0;
        std::string_view before = text.substr(lo, pos - lo);
        std::string_view after = text.substr(d, std::min<std::size_t>(40, text.size() - d));
        bool applied = contains_ci(before, "under") || contains_ci(before, "denied") ||
                       contains_ci(before, "per ") || contains_ci(after, "applies") ||
                       contains_ci(after, "applied");
        if (!applied) continue;
        bool dup = false;
        for (const auto& e : out) dup = dup || e == id;
        if (!dup) out.push_back(std::move(id));
    }
    return out;
}

}  // namespace lhb
