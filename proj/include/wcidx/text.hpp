#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace wcidx {

// Symbols are opaque code points compared by equality (and, for deterministic
// child ordering, by value).  Texts read from files use one symbol per byte.
using symbol = std::uint32_t;

// 1-indexed text position; n + 1 addresses the sentinel.
using position = std::uint32_t;
using length_type = std::uint32_t;

// Internal terminator, strictly greater than every alphabet symbol.
inline constexpr symbol sentinel = std::numeric_limits<symbol>::max();

using symbol_string = std::vector<symbol>;

inline symbol_string to_symbols(std::string_view bytes)
{
    symbol_string out;
    out.reserve(bytes.size());
    for (unsigned char c : bytes) out.push_back(c);
    return out;
}

// Byte rendering for diagnostics and tests; the sentinel prints as '$'.
inline std::string to_display(std::span<const symbol> s)
{
    std::string out;
    out.reserve(s.size());
    for (symbol c : s) {
        if (c == sentinel) out.push_back('$');
        else if (c < 256) out.push_back(static_cast<char>(c));
        else out.append("\\u{" + std::to_string(c) + "}");
    }
    return out;
}

// Inclusive, 1-indexed reference into t$.
struct substring_ref {
    position start = 1;
    position end = 0;

    length_type length() const noexcept { return end >= start ? end - start + 1 : 0; }
    friend bool operator==(const substring_ref&, const substring_ref&) = default;
};

class indexed_text {
public:
    indexed_text() = default;

    explicit indexed_text(symbol_string chars) : data_(std::move(chars))
    {
        if (data_.empty()) throw invalid_argument("text must contain at least one symbol");
        if (data_.size() >= std::numeric_limits<position>::max() - 1)
            throw invalid_argument("text too long for 32-bit positions");
        for (symbol c : data_)
            if (c == sentinel) throw invalid_argument("text contains the reserved sentinel symbol");

        symbol_string sorted = data_;
        std::sort(sorted.begin(), sorted.end());
        alphabet_.assign(sorted.begin(), std::unique(sorted.begin(), sorted.end()));
        data_.push_back(sentinel);
    }

    explicit indexed_text(std::string_view bytes) : indexed_text(to_symbols(bytes)) {}

    // Length excluding the sentinel.
    length_type size() const noexcept { return static_cast<length_type>(data_.empty() ? 0 : data_.size() - 1); }
    std::size_t sigma() const noexcept { return alphabet_.size(); }
    const symbol_string& alphabet() const noexcept { return alphabet_; }

    // Position i in [1, n+1]; n+1 is the sentinel.
    symbol operator[](position i) const noexcept { return data_[i - 1]; }

    // t$ as a contiguous span, 0-indexed.
    std::span<const symbol> with_sentinel() const noexcept { return data_; }
    std::span<const symbol> chars() const noexcept { return std::span<const symbol>(data_).first(size()); }

    bool contains_symbol(symbol c) const { return std::binary_search(alphabet_.begin(), alphabet_.end(), c); }

    bool valid(const substring_ref& r) const noexcept
    {
        return r.start >= 1 && r.start <= r.end && r.end <= size() + 1;
    }

private:
    symbol_string data_;
    symbol_string alphabet_;
};

// t[i, j] over t$ with the usual clamping: i < 1 reads from 1, j past the end
// reads to the sentinel, and i > j is the empty string.
inline symbol_string substring(const indexed_text& t, std::int64_t i, std::int64_t j)
{
    const std::int64_t last = static_cast<std::int64_t>(t.size()) + 1;
    i = std::max<std::int64_t>(i, 1);
    j = std::min<std::int64_t>(j, last);
    if (i > j) return {};
    auto all = t.with_sentinel();
    return symbol_string(all.begin() + (i - 1), all.begin() + j);
}

inline symbol_string substring(const indexed_text& t, const substring_ref& r)
{
    return substring(t, r.start, r.end);
}

} // namespace wcidx
