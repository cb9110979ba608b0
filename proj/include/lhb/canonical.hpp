#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lhb {

// Canonical scalar: money in integer cents, percentages in basis points,
// dates as ISO-8601, everything else a case-folded trimmed string.
struct Canonical {
    enum class Kind { Money, Percent, Date, Text };

    Kind kind = Kind::Text;
    std::int64_t number = 0;  // cents or basis points
    std::string text;         // ISO date or folded text

    bool operator==(const Canonical&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline std::string fold(std::string_view s) {
    std::string out = trim(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// "147,500" / "147500" / "147500.25" -> cents. Rejects malformed grouping.
inline std::optional<std::int64_t> parse_cents(std::string_view s) {
    std::string digits;
    std::string frac;
    bool in_frac = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == ',') {
            if (in_frac) return std::nullopt;
            continue;
        }
        if (c == '.') {
            if (in_frac) return std::nullopt;
            in_frac = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        (in_frac ? frac : digits) += c;
    }
    if (digits.empty() || frac.size() > 2) return std::nullopt;
    std::int64_t whole = 0;
    for (char c : digits) whole = whole * 10 + (c - '0');
    std::int64_t cents = whole * 100;
    if (frac.size() == 1) cents += (frac[0] - '0') * 10;
    if (frac.size() == 2) cents += (frac[0] - '0') * 10 + (frac[1] - '0');
    return cents;
}

inline std::optional<std::string> parse_iso_date(std::string_view s) {
    // YYYY-MM-DD
    if (s.size() == 10 && s[4] == '-' && s[7] == '-' && all_digits(s.substr(0, 4)) &&
        all_digits(s.substr(5, 2)) && all_digits(s.substr(8, 2))) {
        return std::string(s);
    }
    // MM/DD/YYYY
    if (s.size() == 10 && s[2] == '/' && s[5] == '/' && all_digits(s.substr(0, 2)) &&
        all_digits(s.substr(3, 2)) && all_digits(s.substr(6, 4))) {
        return std::string(s.substr(6, 4)) + "-" + std::string(s.substr(0, 2)) + "-" +
               std::string(s.substr(3, 2));
    }
    return std::nullopt;
}

}  // namespace detail

// Normalizes one surface form. Money requires a "$" prefix or "USD" suffix so
// bare numbers (credit scores, chunk counts) stay plain strings.
inline Canonical canonicalize(std::string_view surface) {
    std::string s = detail::trim(surface);

    bool money = false;
    std::string body = s;
    if (!body.empty() && body.front() == '$') {
        money = true;
        body = detail::trim(body.substr(1));
    } else if (body.size() > 3 && (body.ends_with("USD") || body.ends_with("usd"))) {
        money = true;
        body = detail::trim(body.substr(0, body.size() - 3));
    }
    if (money) {
        if (auto cents = detail::parse_cents(body)) {
            return {Canonical::Kind::Money, *cents, {}};
        }
    }

    if (!s.empty() && s.back() == '%') {
        if (auto hundredths = detail::parse_cents(s.substr(0, s.size() - 1))) {
            // "6.03%" -> 603 bp: percent value times 100.
            return {Canonical::Kind::Percent, *hundredths, {}};
        }
    }

    if (auto iso = detail::parse_iso_date(s)) {
        return {Canonical::Kind::Date, 0, *iso};
    }

    return {Canonical::Kind::Text, 0, detail::fold(s)};
}

inline std::string display_money(std::int64_t cents) {
    std::int64_t whole = cents / 100;
    std::int64_t frac = cents % 100;
    std::string digits = std::to_string(whole);
    std::string grouped;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count && count % 3 == 0) grouped += ',';
        grouped += *it;
        ++count;
    }
    std::reverse(grouped.begin(), grouped.end());
    std::string out = "$" + grouped;
    if (frac != 0) {
        out += '.';
        out += static_cast<char>('0' + frac / 10);
        out += static_cast<char>('0' + frac % 10);
    }
    return out;
}

inline std::string display_percent(std::int64_t basis_points) {
    std::int64_t whole = basis_points / 100;
    std::int64_t frac = basis_points % 100;
    std::string out = std::to_string(whole);
    if (frac != 0) {
        out += '.';
        out += static_cast<char>('0' + frac / 10);
        if (frac % 10 != 0) out += static_cast<char>('0' + frac % 10);
    }
    return out + "%";
}

inline std::string to_string(const Canonical& c) {
    switch (c.kind) {
        case Canonical::Kind::Money: return display_money(c.number);
        case Canonical::Kind::Percent: return display_percent(c.number);
        case Canonical::Kind::Date: return c.text;
        case Canonical::Kind::Text: return c.text;
    }
    return {};
}

}  // namespace lhb
