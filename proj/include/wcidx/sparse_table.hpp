#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace wcidx {

// Static range-arg-min over a sequence, O(n log n) words, O(1) query.
template <typename T, typename Less = std::less<T>>
class sparse_table {
public:
    sparse_table() = default;

    explicit sparse_table(std::vector<T> values, Less less = Less{})
        : values_(std::move(values)), less_(less)
    {
        const std::size_t n = values_.size();
        if (n == 0) return;
        const std::size_t levels = std::bit_width(n);
        table_.resize(levels);
        table_[0].resize(n);
        for (std::size_t i = 0; i < n; ++i) table_[0][i] = static_cast<std::uint32_t>(i);
        for (std::size_t k = 1; k < levels; ++k) {
            const std::size_t span = std::size_t{1} << k;
            table_[k].resize(n - span + 1);
            for (std::size_t i = 0; i + span <= n; ++i)
                table_[k][i] = pick(table_[k - 1][i], table_[k - 1][i + span / 2]);
        }
    }

    // Index of a minimum in the closed range [lo, hi]; ties go to the leftmost.
    std::uint32_t argmin(std::size_t lo, std::size_t hi) const
    {
        const std::size_t k = std::bit_width(hi - lo + 1) - 1;
        return pick(table_[k][lo], table_[k][hi + 1 - (std::size_t{1} << k)]);
    }

    const T& min(std::size_t lo, std::size_t hi) const { return values_[argmin(lo, hi)]; }

    std::size_t size() const noexcept { return values_.size(); }
    const std::vector<T>& values() const noexcept { return values_; }

private:
    std::uint32_t pick(std::uint32_t a, std::uint32_t b) const
    {
        return less_(values_[b], values_[a]) ? b : a;
    }

    std::vector<T> values_;
    Less less_;
    std::vector<std::vector<std::uint32_t>> table_;
};

} // namespace wcidx
