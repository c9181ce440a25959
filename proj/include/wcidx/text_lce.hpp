#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <vector>

#include "sparse_table.hpp"
#include "text.hpp"

namespace wcidx {

// Suffix array of t$ (prefix doubling), Kasai LCP array and an RMQ over it.
// Answers longest-common-extension queries between two positions of t$ in O(1)
// and orders arbitrary substrings of t$.
class text_lce {
public:
    text_lce() = default;

    explicit text_lce(const indexed_text& t) : text_(&t)
    {
        const auto s = t.with_sentinel();
        const std::size_t len = s.size();

        std::vector<std::uint32_t> rank(len), tmp(len);
        sa_.resize(len);
        std::iota(sa_.begin(), sa_.end(), 0u);
        for (std::size_t i = 0; i < len; ++i) rank[i] = s[i] == sentinel ? 0xffffffffu : s[i];

        // Ranks of distinct symbols are compressed so the pair comparison stays cheap.
        {
            std::vector<std::uint32_t> keys(rank);
            std::sort(keys.begin(), keys.end());
            keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
            for (auto& r : rank) r = static_cast<std::uint32_t>(std::lower_bound(keys.begin(), keys.end(), r) - keys.begin());
        }

        for (std::size_t step = 1;; step <<= 1) {
            auto key = [&](std::uint32_t i) {
                const std::uint64_t second = i + step < len ? rank[i + step] + 1ull : 0ull;
                return (std::uint64_t(rank[i]) << 32) | second;
            };
            std::sort(sa_.begin(), sa_.end(), [&](std::uint32_t a, std::uint32_t b) { return key(a) < key(b); });
            tmp[sa_[0]] = 0;
            for (std::size_t i = 1; i < len; ++i)
                tmp[sa_[i]] = tmp[sa_[i - 1]] + (key(sa_[i - 1]) < key(sa_[i]) ? 1 : 0);
            rank.swap(tmp);
            if (rank[sa_[len - 1]] == len - 1) break;
        }

        inverse_.resize(len);
        for (std::size_t i = 0; i < len; ++i) inverse_[sa_[i]] = static_cast<std::uint32_t>(i);

        // lcp[r] = lcp(sa[r-1], sa[r]); lcp[0] = 0.
        std::vector<std::uint32_t> lcp(len, 0);
        std::uint32_t h = 0;
        for (std::size_t i = 0; i < len; ++i) {
            const std::uint32_t r = inverse_[i];
            if (r == 0) {
                h = 0;
                continue;
            }
            const std::uint32_t j = sa_[r - 1];
            while (i + h < len && j + h < len && s[i + h] == s[j + h] && s[i + h] != sentinel) ++h;
            lcp[r] = h;
            if (h > 0) --h;
        }
        lcp_ = sparse_table<std::uint32_t>(std::move(lcp));
    }

    const indexed_text& text() const noexcept { return *text_; }

    // Starting positions (1-indexed) of the suffixes of t$ in lexicographic order.
    position suffix_at_rank(std::size_t r) const noexcept { return sa_[r] + 1; }
    std::size_t rank_of(position p) const noexcept { return inverse_[p - 1]; }
    std::uint32_t adjacent_lcp(std::size_t r) const noexcept { return lcp_.values()[r]; }
    std::size_t size() const noexcept { return sa_.size(); }

    // Length of the longest common prefix of t$[a..] and t$[b..].
    length_type lce(position a, position b) const noexcept
    {
        if (a == b) return static_cast<length_type>(sa_.size() - (a - 1));
        auto ra = inverse_[a - 1], rb = inverse_[b - 1];
        if (ra > rb) std::swap(ra, rb);
        return lcp_.min(ra + 1, rb);
    }

    // Three-way comparison of two substrings of t$ (sentinel sorts last).
    int compare(const substring_ref& x, const substring_ref& y) const noexcept
    {
        const length_type lx = x.length(), ly = y.length();
        const length_type l = std::min({lce(x.start, y.start), lx, ly});
        if (l == lx || l == ly) return lx == ly ? 0 : (lx < ly ? -1 : 1);
        const symbol a = (*text_)[x.start + l], b = (*text_)[y.start + l];
        return a < b ? -1 : 1;
    }

    length_type common_prefix(const substring_ref& x, const substring_ref& y) const noexcept
    {
        return std::min({lce(x.start, y.start), x.length(), y.length()});
    }

private:
    const indexed_text* text_ = nullptr;
    std::vector<std::uint32_t> sa_;
    std::vector<std::uint32_t> inverse_;
    sparse_table<std::uint32_t> lcp_;
};

} // namespace wcidx
