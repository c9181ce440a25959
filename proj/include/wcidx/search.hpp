#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pattern.hpp"
#include "trie.hpp"

namespace wcidx {

enum class route : std::uint8_t { none, special, fallback };

inline std::string_view to_string(route r)
{
    switch (r) {
    case route::special: return "SPECIAL";
    case route::fallback: return "FALLBACK";
    default: return "n/a";
    }
}

struct query_stats {
    std::uint64_t lcp_queries = 0;
    std::uint64_t branch_events = 0;       // wildcard steps that produced more than one location
    std::uint64_t locations_explored = 0;  // locations produced by wildcard steps
    std::uint64_t active_location_peak = 0;
    std::uint64_t heavy_hops_total = 0;
    std::uint64_t predecessor_lookups = 0;
    std::uint64_t dedup_removed = 0;
    route routed_to = route::none;
    // Locations from which subpattern p_i was searched.
    std::vector<std::uint64_t> subpattern_starts;
};

struct occurrence {
    position start = 0;
    position end = 0; // inclusive

    friend bool operator==(const occurrence&, const occurrence&) = default;
    friend auto operator<=>(const occurrence&, const occurrence&) = default;
};

// Sorted, distinct occurrences.  With starts_only the end is implied by the
// pattern (m + j - 1 symbols after the start) and is not reported.
struct occurrence_set {
    bool starts_only = true;
    std::vector<occurrence> items;

    friend bool operator==(const occurrence_set&, const occurrence_set&) = default;
};

// A gap *{a,b} as a normal wildcards followed by b - a optional ones.
struct gap_schedule {
    std::vector<length_type> normal;
    std::vector<length_type> optional;
};

inline gap_schedule vlg_expand(const gap_pattern& p)
{
    gap_schedule s;
    for (const auto& g : p.gaps()) {
        s.normal.push_back(g.min);
        s.optional.push_back(g.max - g.min);
    }
    return s;
}

// How a wildcard leaves an explicit vertex: to every child, or (wildcard
// trees) to the STAR child plus the first location of each heavy edge.
struct branch_policy {
    enum class kind : std::uint8_t { all_children, star_and_heavy } rule = kind::all_children;
    const std::vector<std::uint8_t>* heavy = nullptr;
};

namespace detail {

inline void dedup(std::vector<location>& v, query_stats& stats)
{
    std::sort(v.begin(), v.end());
    const auto before = v.size();
    v.erase(std::unique(v.begin(), v.end()), v.end());
    stats.dedup_removed += before - v.size();
}

inline void wildcard_step(const compressed_trie& trie, const branch_policy& policy, const location& l,
                          std::vector<location>& out, query_stats& stats)
{
    if (!trie.is_explicit(l)) {
        if (trie.next_symbol(l) != sentinel) {
            out.push_back(trie.advance(l));
            ++stats.locations_explored;
        }
        return;
    }
    const std::size_t before = out.size();
    const vertex_id v = l.vertex;
    if (policy.rule == branch_policy::kind::star_and_heavy && trie.star_child(v) != no_vertex)
        out.push_back(trie.at_vertex(trie.star_child(v)));
    for (vertex_id c : trie.children(v)) {
        if (trie.first_symbol(c) == sentinel) continue;
        if (policy.rule == branch_policy::kind::star_and_heavy && !(*policy.heavy)[c]) continue;
        out.push_back({c, 1});
    }
    const std::size_t made = out.size() - before;
    stats.locations_explored += made;
    if (made > 1) ++stats.branch_events;
}

} // namespace detail

// Breadth-first search over the wildcard/optional schedule of p.  `match`
// maps (location, subpattern index) to the location reached after reading
// that (non-empty) subpattern, or nullopt when it does not match fully.
// Returns the distinct final locations.
template <typename Match>
std::vector<location> frontier_search(const compressed_trie& trie, const gap_pattern& p,
                                      const branch_policy& policy, Match&& match, query_stats& stats)
{
    const auto schedule = vlg_expand(p);
    std::vector<location> frontier{trie.root_location()};
    std::vector<location> next;
    stats.subpattern_starts.assign(p.j() + 1, 0);
    stats.active_location_peak = std::max<std::uint64_t>(stats.active_location_peak, 1);

    for (std::size_t i = 0; i <= p.j(); ++i) {
        if (i > 0) {
            for (length_type w = 0; w < schedule.normal[i - 1] && !frontier.empty(); ++w) {
                next.clear();
                for (const auto& l : frontier) detail::wildcard_step(trie, policy, l, next, stats);
                frontier.swap(next);
                detail::dedup(frontier, stats);
                stats.active_location_peak = std::max<std::uint64_t>(stats.active_location_peak, frontier.size());
            }
            for (length_type w = 0; w < schedule.optional[i - 1] && !frontier.empty(); ++w) {
                next = frontier; // consume none
                for (const auto& l : frontier) detail::wildcard_step(trie, policy, l, next, stats);
                frontier.swap(next);
                detail::dedup(frontier, stats);
                stats.active_location_peak = std::max<std::uint64_t>(stats.active_location_peak, frontier.size());
            }
        }
        stats.subpattern_starts[i] = frontier.size();
        if (p.subpatterns()[i].empty()) continue;
        next.clear();
        for (const auto& l : frontier)
            if (auto r = match(l, i)) next.push_back(*r);
        frontier.swap(next);
        detail::dedup(frontier, stats);
        if (frontier.empty()) break;
    }
    return frontier;
}

// Occurrences below the final locations of a search for p.
inline occurrence_set report(const compressed_trie& trie, const std::vector<location>& finals, const gap_pattern& p)
{
    occurrence_set out;
    out.starts_only = p.wildcard_only();
    for (const auto& l : finals) {
        const length_type depth = trie.depth(l);
        for (position s : collect_occurrences(trie, l)) out.items.push_back({s, s + depth - 1});
    }
    std::sort(out.items.begin(), out.items.end());
    out.items.erase(std::unique(out.items.begin(), out.items.end()), out.items.end());
    return out;
}

} // namespace wcidx
