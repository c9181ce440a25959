#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "error.hpp"
#include "pattern.hpp"
#include "search.hpp"
#include "text.hpp"

namespace wcidx {

struct oracle_result {
    occurrence_set occurrences;
    // One gap-length assignment per reported occurrence, same order.
    std::vector<std::vector<length_type>> witnesses;
    // Number of (start, gap lengths) combinations that matched.
    std::uint64_t matches = 0;
};

// Product of (b_i - a_i + 1) over all gaps, saturating.
inline std::uint64_t gap_product(const gap_pattern& p)
{
    std::uint64_t prod = 1;
    for (const auto& g : p.gaps()) {
        const std::uint64_t f = std::uint64_t{g.max} - g.min + 1;
        prod = prod > std::numeric_limits<std::uint64_t>::max() / f ? std::numeric_limits<std::uint64_t>::max()
                                                                   : prod * f;
    }
    return prod;
}

inline constexpr std::uint64_t default_oracle_cap = 4096;

// Exhaustive matcher: every start and every gap-length tuple.
inline oracle_result oracle_match(const indexed_text& t, const gap_pattern& p, std::uint64_t cap = default_oracle_cap)
{
    if (gap_product(p) > cap) throw resource_error("gap-length product exceeds the oracle cap", gap_product(p));
    const std::size_t n = t.size();
    const auto& subs = p.subpatterns();
    const auto& gaps = p.gaps();

    std::map<occurrence, std::vector<length_type>> found;
    std::uint64_t matches = 0;
    std::vector<length_type> lens(p.j(), 0);

    auto fits = [&](std::size_t at, const symbol_string& s) {
        if (at + s.size() > n + 1) return false;
        for (std::size_t r = 0; r < s.size(); ++r)
            if (t[static_cast<position>(at + r)] != s[r]) return false;
        return true;
    };
    // at = next text position to read; i = subpattern to match there.
    auto rec = [&](auto&& self, position start, std::size_t at, std::size_t i) -> void {
        if (!fits(at, subs[i])) return;
        at += subs[i].size();
        if (i == p.j()) {
            if (at - 1 < start || at - 1 > n) return;
            ++matches;
            found.try_emplace(occurrence{start, static_cast<position>(at - 1)}, lens);
            return;
        }
        for (length_type len = gaps[i].min; len <= gaps[i].max; ++len) {
            if (at + len > n + 1) break;
            lens[i] = len;
            self(self, start, at + len, i + 1);
        }
    };
    for (position l = 1; l <= n; ++l) rec(rec, l, l, 0);

    oracle_result out;
    out.matches = matches;
    out.occurrences.starts_only = p.wildcard_only();
    for (auto& [occ, w] : found) {
        out.occurrences.items.push_back(occ);
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

} // namespace wcidx
