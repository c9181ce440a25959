#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "decomposition.hpp"
#include "error.hpp"
#include "search.hpp"
#include "trie.hpp"

namespace wcidx {

// T_beta^k(C'): a compressed trie in which every internal vertex v of a
// level-i component (i < k) has a STAR edge to T_beta^{k-i-1} over the
// suffixes (first symbol dropped) of the strings below v's light edges in a
// heavy (beta - 1)-tree decomposition.
struct wildcard_tree {
    compressed_trie trie;
    std::uint32_t beta = 1;
    std::uint32_t k = 0;
    std::vector<std::uint8_t> heavy;             // per vertex: edge into it is heavy
    std::vector<std::uint32_t> component_level;  // STAR edges above each component
    std::vector<std::uint64_t> level_strings;    // stored strings per level
    std::uint32_t light_height = 0;              // H: max light height over all components

    std::uint64_t input_strings() const { return level_strings.empty() ? 0 : level_strings[0]; }
    std::uint64_t stored_strings() const { return trie.leaf_count(); }
    std::uint32_t wildcard_height(vertex_id v) const { return component_level[trie.component(v)]; }

    // |C'| * sum_{j=0..k} H^j, saturating.
    std::uint64_t stored_bound() const
    {
        return saturating_bound(input_strings(), light_height, k);
    }

    static std::uint64_t saturating_bound(std::uint64_t base, std::uint64_t h, std::uint32_t k)
    {
        constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
        std::uint64_t sum = 0, term = 1;
        for (std::uint32_t j = 0; j <= k; ++j) {
            sum = sum > cap - term ? cap : sum + term;
            term = h != 0 && term > cap / h ? cap : term * h;
        }
        return base != 0 && sum > cap / base ? cap : sum * base;
    }
};

// 64 * |C'| * (1 + ceil(log2 |C'|))^k, saturating.
inline std::uint64_t default_wildcard_guard(std::uint64_t strings, std::uint32_t k)
{
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t f = 1 + (strings <= 1 ? 0 : std::bit_width(strings - 1));
    std::uint64_t g = 64 * strings;
    for (std::uint32_t i = 0; i < k; ++i) g = g > cap / f ? cap : g * f;
    return g;
}

// guard == 0 selects default_wildcard_guard.  Throws resource_error once the
// number of stored strings would exceed the guard.
inline wildcard_tree build_wildcard_tree(const text_lce& lce, std::vector<labeled_string> strings,
                                         std::uint32_t beta, std::uint32_t k, std::uint64_t guard = 0)
{
    if (beta < 1) throw invalid_argument("wildcard tree parameter beta must be at least 1");
    if (strings.empty()) throw invalid_argument("cannot build a wildcard tree over an empty string set");
    for (const auto& s : strings)
        if (!lce.text().valid(s.ref)) throw invalid_argument("wildcard tree string is not a substring of the text");

    wildcard_tree wt;
    wt.beta = beta;
    wt.k = k;
    wt.level_strings.assign(k + 1, 0);

    trie_assembler assembler(lce.text());
    auto lcp = sort_and_merge(lce, strings);
    if (guard == 0) guard = default_wildcard_guard(strings.size(), k);
    std::uint64_t stored = strings.size();
    if (stored > guard) throw resource_error("wildcard tree guard exceeded", stored);
    wt.level_strings[0] = strings.size();

    std::deque<vertex_id> todo{assembler.append_component(strings, lcp)};
    wt.component_level.push_back(0);
    std::vector<std::uint8_t> heavy;
    while (!todo.empty()) {
        const vertex_id root = todo.front();
        todo.pop_front();
        const auto& trie = assembler.trie();
        const std::uint32_t level = wt.component_level[trie.component(root)];
        const auto d = heavy_alpha_decompose(trie, beta - 1, root);
        wt.light_height = std::max(wt.light_height, d.light_height());
        const vertex_id end = trie.subtree_end(root);
        if (heavy.size() < end) heavy.resize(end, 0);
        for (vertex_id v = root; v < end; ++v) heavy[v] = d.is_heavy(v) && v != root;
        if (level == k) continue;

        for (vertex_id v = root; v < end; ++v) {
            if (assembler.trie().children(v).empty()) continue;
            auto sub = lightstrings_suffixes(assembler.trie(), v, d);
            if (sub.empty()) continue;
            auto sub_lcp = sort_and_merge(lce, sub);
            stored += sub.size();
            if (stored > guard) throw resource_error("wildcard tree guard exceeded", stored);
            wt.level_strings[level + 1] += sub.size();
            todo.push_back(assembler.append_component(sub, sub_lcp, v));
            wt.component_level.push_back(level + 1);
        }
    }
    wt.trie = std::move(assembler).finish();
    heavy.resize(wt.trie.vertex_count(), 0);
    wt.heavy = std::move(heavy);
    return wt;
}

// Recomputes the per-vertex metadata of a wildcard tree from its trie alone
// (used when a tree is loaded from disk).
inline wildcard_tree adopt_wildcard_tree(compressed_trie trie, std::uint32_t beta, std::uint32_t k)
{
    if (beta < 1) throw invalid_argument("wildcard tree parameter beta must be at least 1");
    wildcard_tree wt;
    wt.beta = beta;
    wt.k = k;
    wt.level_strings.assign(k + 1, 0);
    wt.heavy.assign(trie.vertex_count(), 0);
    for (std::uint32_t c = 0; c < trie.component_count(); ++c) {
        const vertex_id root = trie.component_root(c);
        const std::uint32_t level = c == 0 ? 0 : wt.component_level[trie.component(trie.parent(root))] + 1;
        if (level > k) throw invalid_argument("wildcard tree is deeper than its level budget");
        wt.component_level.push_back(level);
        const auto d = heavy_alpha_decompose(trie, beta - 1, root);
        wt.light_height = std::max(wt.light_height, d.light_height());
        for (vertex_id v = root; v < trie.subtree_end(root); ++v) {
            wt.heavy[v] = d.is_heavy(v) && v != root;
            if (trie.children(v).empty()) ++wt.level_strings[level];
        }
    }
    wt.trie = std::move(trie);
    return wt;
}

// Search without LCP support: subpatterns are read symbol by symbol.  Every
// gap must be a plain wildcard and there may be at most k of them.
inline std::pair<std::vector<location>, query_stats> wildcard_tree_search(const wildcard_tree& wt,
                                                                          const gap_pattern& p)
{
    if (!p.wildcard_only()) throw invalid_argument("wildcard tree search takes plain wildcards only");
    if (p.j() > wt.k)
        throw budget_error("pattern has " + std::to_string(p.j()) + " wildcards, index supports k=" +
                           std::to_string(wt.k));
    query_stats stats;
    const branch_policy policy{branch_policy::kind::star_and_heavy, &wt.heavy};
    auto match = [&](const location& l, std::size_t i) -> std::optional<location> {
        const auto& sub = p.subpatterns()[i];
        const auto [stop, matched] = descend(wt.trie, l, sub);
        if (matched < sub.size()) return std::nullopt;
        return stop;
    };
    auto finals = frontier_search(wt.trie, p, policy, match, stats);
    return {std::move(finals), stats};
}

} // namespace wcidx
