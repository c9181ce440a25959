#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "text.hpp"

namespace wcidx {

// *{min,max}: matches any string whose length lies in [min, max].  A plain
// wildcard is the gap {1,1}.
struct gap_bounds {
    length_type min = 1;
    length_type max = 1;

    friend bool operator==(const gap_bounds&, const gap_bounds&) = default;
};

// p_0 *{a_1,b_1} p_1 ... *{a_j,b_j} p_j.
//
// Runs of gaps separated only by empty subpatterns are merged on construction
// by summing their bounds, so empty subpatterns survive only at the two ends.
class gap_pattern {
public:
    gap_pattern() = default;

    gap_pattern(std::vector<symbol_string> subpatterns, std::vector<gap_bounds> gaps)
    {
        if (subpatterns.size() != gaps.size() + 1)
            throw invalid_argument("a pattern with j gaps needs j + 1 subpatterns");
        for (const auto& g : gaps)
            if (g.min > g.max) throw invalid_argument("gap lower bound exceeds upper bound");
        for (const auto& s : subpatterns)
            for (symbol c : s)
                if (c == sentinel) throw invalid_argument("pattern contains the reserved sentinel symbol");

        subpatterns_.assign(1, std::move(subpatterns[0]));
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            const bool interior_empty = subpatterns_.back().empty() && !gaps_.empty();
            if (interior_empty) {
                gaps_.back().min += gaps[i].min;
                gaps_.back().max += gaps[i].max;
                subpatterns_.back() = std::move(subpatterns[i + 1]);
            } else {
                gaps_.push_back(gaps[i]);
                subpatterns_.push_back(std::move(subpatterns[i + 1]));
            }
        }

        if (m() == 0) throw invalid_argument("pattern must contain at least one symbol");
    }

    const std::vector<symbol_string>& subpatterns() const noexcept { return subpatterns_; }
    const std::vector<gap_bounds>& gaps() const noexcept { return gaps_; }

    // Number of symbols.
    std::size_t m() const noexcept
    {
        std::size_t total = 0;
        for (const auto& s : subpatterns_) total += s.size();
        return total;
    }

    // Number of gaps.
    std::size_t j() const noexcept { return gaps_.size(); }

    // Sum of lower / upper gap bounds: the normal and (B - A) optional wildcards.
    std::size_t min_gap_total() const noexcept { return prefix_min(j()); }
    std::size_t max_gap_total() const noexcept { return prefix_max(j()); }

    // A_i and B_i: bounds summed over the first i gaps (those preceding p_i).
    std::size_t prefix_min(std::size_t i) const noexcept
    {
        std::size_t total = 0;
        for (std::size_t r = 0; r < i; ++r) total += gaps_[r].min;
        return total;
    }
    std::size_t prefix_max(std::size_t i) const noexcept
    {
        std::size_t total = 0;
        for (std::size_t r = 0; r < i; ++r) total += gaps_[r].max;
        return total;
    }

    // True when every gap is a plain wildcard; such queries report start positions only.
    bool wildcard_only() const noexcept
    {
        for (const auto& g : gaps_)
            if (g.min != 1 || g.max != 1) return false;
        return true;
    }

    friend bool operator==(const gap_pattern&, const gap_pattern&) = default;

private:
    std::vector<symbol_string> subpatterns_{symbol_string{}};
    std::vector<gap_bounds> gaps_;
};

namespace detail {

inline bool is_meta(char c) { return c == '*' || c == '{' || c == '}' || c == '\\'; }

inline length_type parse_bound(std::string_view text, std::size_t& i, char terminator)
{
    const std::size_t begin = i;
    while (i < text.size() && text[i] != terminator && text[i] != ',' && text[i] != '}') ++i;
    if (i == begin) throw parse_error(begin, "missing gap bound");
    length_type value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + begin, text.data() + i, value);
    if (ec == std::errc::result_out_of_range) throw parse_error(begin, "gap bound out of range");
    if (ec != std::errc() || ptr != text.data() + i) throw parse_error(begin, "non-numeric gap bound");
    if (i >= text.size() || text[i] != terminator)
        throw parse_error(i, std::string("expected '") + terminator + "' in gap");
    ++i;
    return value;
}

} // namespace detail

// Pattern meta-syntax: literal bytes, `*` for a wildcard, `*{a,b}` for a
// variable length gap, and backslash escapes for `*`, `{`, `}` and `\`.
inline gap_pattern parse_pattern(std::string_view text)
{
    if (text.empty()) throw parse_error(0, "empty pattern");

    std::vector<symbol_string> subpatterns(1);
    std::vector<gap_bounds> gaps;

    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\\') {
            if (i + 1 >= text.size()) throw parse_error(i, "dangling escape");
            if (!detail::is_meta(text[i + 1])) throw parse_error(i, "unknown escape sequence");
            subpatterns.back().push_back(static_cast<unsigned char>(text[i + 1]));
            i += 2;
        } else if (c == '*') {
            gap_bounds g{1, 1};
            const std::size_t star = i;
            ++i;
            if (i < text.size() && text[i] == '{') {
                ++i;
                g.min = detail::parse_bound(text, i, ',');
                g.max = detail::parse_bound(text, i, '}');
                if (g.min > g.max) throw parse_error(star, "gap lower bound exceeds upper bound");
            }
            gaps.push_back(g);
            subpatterns.emplace_back();
        } else if (c == '{' || c == '}') {
            throw parse_error(i, std::string("unescaped '") + c + "'");
        } else {
            subpatterns.back().push_back(static_cast<unsigned char>(c));
            ++i;
        }
    }

    std::size_t m = 0;
    for (const auto& s : subpatterns) m += s.size();
    if (m == 0) throw parse_error(0, "pattern has no symbols");
    return gap_pattern(std::move(subpatterns), std::move(gaps));
}

// Canonical text form; parse_pattern(render(p)) == p.
inline std::string render(const gap_pattern& p)
{
    std::string out;
    auto emit = [&](const symbol_string& s) {
        for (symbol c : s) {
            if (c < 256 && detail::is_meta(static_cast<char>(c))) out.push_back('\\');
            out.push_back(static_cast<char>(c));
        }
    };
    emit(p.subpatterns()[0]);
    for (std::size_t i = 0; i < p.j(); ++i) {
        const auto& g = p.gaps()[i];
        out.push_back('*');
        if (g.min != 1 || g.max != 1)
            out += "{" + std::to_string(g.min) + "," + std::to_string(g.max) + "}";
        emit(p.subpatterns()[i + 1]);
    }
    return out;
}

} // namespace wcidx
