#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decomposition.hpp"
#include "error.hpp"
#include "lcp.hpp"
#include "pattern.hpp"
#include "search.hpp"
#include "text.hpp"
#include "text_lce.hpp"
#include "trie.hpp"
#include "wildcard_tree.hpp"

namespace wcidx {

enum class variant_kind : std::uint8_t { simple = 0, art_linear = 1, tradeoff = 2, linear_time = 3 };

inline std::string_view to_string(variant_kind v)
{
    switch (v) {
    case variant_kind::simple: return "simple";
    case variant_kind::art_linear: return "art";
    case variant_kind::tradeoff: return "tradeoff";
    case variant_kind::linear_time: return "linear";
    }
    return "?";
}

inline variant_kind parse_variant(std::string_view s)
{
    if (s == "simple") return variant_kind::simple;
    if (s == "art") return variant_kind::art_linear;
    if (s == "tradeoff") return variant_kind::tradeoff;
    if (s == "linear") return variant_kind::linear_time;
    throw invalid_argument("unknown index variant '" + std::string(s) + "'");
}

struct index_params {
    variant_kind kind = variant_kind::simple;
    std::uint32_t beta = 2;              // tradeoff
    std::uint32_t k = 1;                 // tradeoff, linear_time
    std::optional<std::uint32_t> opt;    // optional-wildcard budget; default 0 (tradeoff), k (linear_time)
    std::uint32_t chi = 0;               // 0: max(1, ceil(log2 n))
    std::uint32_t g = 0;                 // 0: sigma^k * max(1, ceil(log2 max(2, log2 n)))
    std::uint64_t guard = 0;             // 0: default wildcard-tree guard
    bool any_beta = false;               // accept beta >= sigma (sweeps)
};

struct query_options {
    std::optional<route> force_route;    // linear_time only
};

struct query_result {
    occurrence_set occurrences;
    query_stats stats;
};

inline std::uint32_t default_chi(std::size_t n)
{
    return n <= 1 ? 1 : static_cast<std::uint32_t>(std::bit_width(n - 1));
}

// sigma^k * max(1, ceil(log2 max(2, log2 n))), saturating at 2^32 - 1.
inline std::uint32_t default_g(std::size_t sigma, std::uint32_t k, std::size_t n)
{
    const double loglog = std::log2(std::max(2.0, std::log2(static_cast<double>(n))));
    const auto factor = static_cast<std::uint64_t>(std::max(1.0, std::ceil(loglog - 1e-12)));
    std::uint64_t g = factor;
    for (std::uint32_t i = 0; i < k; ++i) {
        g *= sigma;
        if (g > std::numeric_limits<std::uint32_t>::max()) return std::numeric_limits<std::uint32_t>::max();
    }
    return static_cast<std::uint32_t>(g);
}

// The four index variants behind one query interface.  Tries keep pointers to
// the text, so the members live on the heap and the index is move-only.
class wildcard_index {
public:
    wildcard_index(indexed_text text, const index_params& params)
        : text_(std::make_unique<indexed_text>(std::move(text))), lce_(std::make_unique<text_lce>(*text_))
    {
        init(params);
        suffix_tree_ = std::make_unique<compressed_trie>(build_suffix_tree(*lce_));
        build_components();
    }

    struct loaded_tries {
        compressed_trie suffix_tree;
        std::optional<wildcard_tree> wildcard;
    };

    // Rebuilds an index around tries loaded from disk.  `load` receives the
    // index's own text and must build both tries against it.
    wildcard_index(indexed_text text, const index_params& params,
                   const std::function<loaded_tries(const text_lce&)>& load)
        : text_(std::make_unique<indexed_text>(std::move(text))), lce_(std::make_unique<text_lce>(*text_))
    {
        init(params);
        auto tries = load(*lce_);
        const bool wants_wt = kind() == variant_kind::tradeoff || kind() == variant_kind::linear_time;
        if (&tries.suffix_tree.text() != text_.get() || (tries.wildcard && &tries.wildcard->trie.text() != text_.get()))
            throw invalid_argument("loaded tries must be built over the index text");
        if (wants_wt != tries.wildcard.has_value())
            throw invalid_argument("loaded tries do not match the index variant");
        suffix_tree_ = std::make_unique<compressed_trie>(std::move(tries.suffix_tree));
        if (tries.wildcard) wt_ = std::make_unique<wildcard_tree>(std::move(*tries.wildcard));
        build_components();
    }

    wildcard_index(wildcard_index&&) noexcept = default;
    wildcard_index& operator=(wildcard_index&&) noexcept = default;

    const indexed_text& text() const noexcept { return *text_; }
    const text_lce& lce() const noexcept { return *lce_; }
    const index_params& params() const noexcept { return params_; }
    variant_kind kind() const noexcept { return params_.kind; }
    std::uint32_t beta() const noexcept { return params_.beta; }
    std::uint32_t k() const noexcept { return params_.k; }
    std::uint32_t opt() const noexcept { return *params_.opt; }
    std::uint32_t chi() const noexcept { return params_.chi; }
    std::uint32_t g() const noexcept { return params_.g; }

    const compressed_trie& suffix_tree() const noexcept { return *suffix_tree_; }
    // The TRADEOFF wildcard tree, or the LINEAR_TIME special index.
    const wildcard_tree* wildcard() const noexcept { return wt_.get(); }
    const art_decomposition* art() const noexcept { return art_ ? &*art_ : nullptr; }
    const lcp_structure* lcp() const noexcept { return lcp_.get(); }

    std::uint64_t stored_strings() const
    {
        return wt_ ? wt_->stored_strings() + (kind() == variant_kind::linear_time ? suffix_tree_->leaf_count() : 0)
                   : suffix_tree_->leaf_count();
    }
    std::uint64_t vertex_count() const
    {
        return suffix_tree_->vertex_count() + (wt_ ? wt_->trie.vertex_count() : 0);
    }

    // SPECIAL iff m + B <= G.
    route route_for(const gap_pattern& p) const
    {
        if (kind() != variant_kind::linear_time) return route::none;
        return p.m() + p.max_gap_total() <= params_.g ? route::special : route::fallback;
    }

    void check_budget(const gap_pattern& p) const
    {
        if (kind() != variant_kind::tradeoff && kind() != variant_kind::linear_time) return;
        const std::size_t a = p.min_gap_total(), opt = p.max_gap_total() - a;
        if (a > params_.k || opt > *params_.opt)
            throw budget_error("pattern needs A=" + std::to_string(a) + " wildcards and B-A=" + std::to_string(opt) +
                               " optional wildcards; index supports k=" + std::to_string(params_.k) +
                               ", o=" + std::to_string(*params_.opt));
    }

    query_result query(const gap_pattern& p, const query_options& options = {}) const
    {
        check_budget(p);
        query_result r;
        switch (kind()) {
        case variant_kind::simple: r = run_simple(p); break;
        case variant_kind::art_linear: r = run_art(p); break;
        case variant_kind::tradeoff: r = run_tradeoff(p); break;
        case variant_kind::linear_time: {
            const route to = options.force_route.value_or(route_for(p));
            if (to == route::special && route_for(p) != route::special)
                throw invalid_argument("pattern spans up to m+B=" + std::to_string(p.m() + p.max_gap_total()) +
                                       " symbols but the special index stores substrings of length G=" +
                                       std::to_string(params_.g));
            r = to == route::special ? run_special(p) : run_art(p);
            r.stats.routed_to = to;
            break;
        }
        }
        return r;
    }

private:
    void init(const index_params& params)
    {
        params_ = params;
        const std::size_t n = text_->size(), sigma = text_->sigma();
        if (params_.chi == 0) params_.chi = default_chi(n);
        if (params_.g == 0) params_.g = default_g(sigma, params_.k, n);
        if (!params_.opt) params_.opt = params_.kind == variant_kind::linear_time ? params_.k : 0;
        if (params_.kind == variant_kind::tradeoff) {
            if (params_.beta < 1 || (!params_.any_beta && params_.beta >= sigma))
                throw invalid_argument("tradeoff index needs 1 <= beta < sigma (beta=" + std::to_string(params_.beta) +
                                       ", sigma=" + std::to_string(sigma) + ")");
        }
        if (params_.kind == variant_kind::linear_time) params_.beta = 1;
        if (params_.kind == variant_kind::simple || params_.kind == variant_kind::art_linear) {
            params_.beta = 0;
            params_.k = 0;
            params_.opt = 0;
        }
    }

    void build_components()
    {
        const auto levels = params_.k + *params_.opt;
        if (kind() == variant_kind::tradeoff && !wt_) {
            std::vector<labeled_string> suffixes;
            for (position p = 1; p <= text_->size() + 1; ++p) suffixes.push_back({{p, text_->size() + 1}, {p}});
            wt_ = std::make_unique<wildcard_tree>(
                build_wildcard_tree(*lce_, std::move(suffixes), params_.beta, levels, params_.guard));
        }
        if (kind() == variant_kind::linear_time && !wt_) {
            // Prefixes of length G + 1: a wildcard that consumes symbol G of
            // an occurrence must still leave a non-empty suffix to branch on.
            std::vector<labeled_string> prefixes;
            const position end = text_->size() + 1;
            for (position p = 1; p <= end; ++p) {
                const std::uint64_t last = std::uint64_t{p} + params_.g;
                prefixes.push_back({{p, static_cast<position>(std::min<std::uint64_t>(last, end))}, {p}});
            }
            wt_ = std::make_unique<wildcard_tree>(build_wildcard_tree(*lce_, std::move(prefixes), 1, levels, params_.guard));
        }

        if (kind() == variant_kind::simple) return;
        lcp_ = std::make_unique<lcp_structure>(*suffix_tree_);
        if (kind() == variant_kind::tradeoff) {
            regions_ = lcp_->register_trie(wt_->trie, lcp_mode::full);
            return;
        }
        // ART part (art_linear, and the linear_time fallback).
        const auto& st = *suffix_tree_;
        art_ = art_decompose(st, params_.chi);
        if (art_->is_bottom_root(st.root())) {
            lcp_->register_region(st, st.root(), lcp_mode::light, [](vertex_id) { return true; });
            return;
        }
        const auto& art = *art_;
        top_region_ = lcp_->register_region(st, st.root(), lcp_mode::full, [&](vertex_id v) { return art.is_top(v); });
        for (vertex_id b : art.bottom_roots) {
            const vertex_id end = st.subtree_end(b);
            lcp_->register_region(st, st.parent(b), lcp_mode::light,
                                  [b, end](vertex_id v) { return v >= b && v < end; });
        }
    }

    static void add(query_stats& stats, const lcp_answer& a)
    {
        ++stats.lcp_queries;
        stats.heavy_hops_total += a.hops;
        stats.predecessor_lookups += a.predecessor_lookups;
    }

    query_result run_simple(const gap_pattern& p) const
    {
        return run_descend(*suffix_tree_, branch_policy{}, p);
    }

    query_result run_special(const gap_pattern& p) const
    {
        return run_descend(wt_->trie, branch_policy{branch_policy::kind::star_and_heavy, &wt_->heavy}, p);
    }

    static query_result run_descend(const compressed_trie& trie, const branch_policy& policy, const gap_pattern& p)
    {
        query_result r;
        auto match = [&](const location& l, std::size_t i) -> std::optional<location> {
            const auto& sub = p.subpatterns()[i];
            const auto [stop, matched] = descend(trie, l, sub);
            if (matched < sub.size()) return std::nullopt;
            return stop;
        };
        const auto finals = frontier_search(trie, p, policy, match, r.stats);
        r.occurrences = report(trie, finals, p);
        return r;
    }

    std::vector<preprocessed_pattern> preprocess(const gap_pattern& p) const
    {
        std::vector<preprocessed_pattern> pps;
        for (const auto& s : p.subpatterns()) pps.push_back(lcp_->preprocess(s));
        return pps;
    }

    query_result run_tradeoff(const gap_pattern& p) const
    {
        query_result r;
        const auto pps = preprocess(p);
        const auto& trie = wt_->trie;
        auto match = [&](const location& l, std::size_t i) -> std::optional<location> {
            const auto ans = lcp_->query(pps[i], 0, regions_[trie.component(l.vertex)], l);
            add(r.stats, ans);
            if (trie.depth(ans.loc) - trie.depth(l) < pps[i].size()) return std::nullopt;
            return ans.loc;
        };
        const auto finals =
            frontier_search(trie, p, branch_policy{branch_policy::kind::star_and_heavy, &wt_->heavy}, match, r.stats);
        r.occurrences = report(trie, finals, p);
        return r;
    }

    query_result run_art(const gap_pattern& p) const
    {
        query_result r;
        const auto pps = preprocess(p);
        const auto& st = *suffix_tree_;
        auto match = [&](const location& l, std::size_t i) -> std::optional<location> {
            const auto& pp = pps[i];
            const auto region = lcp_->region_of(st, l.vertex);
            auto ans = lcp_->query(pp, 0, region, l);
            add(r.stats, ans);
            std::size_t used = st.depth(ans.loc) - st.depth(l);
            if (used < pp.size() && top_region_ && region == *top_region_ && st.is_explicit(ans.loc)) {
                // The top tree ends here; continue into the bottom tree below.
                const vertex_id c = st.child_by_symbol(ans.loc.vertex, pp.x[used]);
                if (c != no_vertex) {
                    ans = lcp_->query(pp, used + 1, lcp_->region_of(st, c), {c, 1});
                    add(r.stats, ans);
                    used = st.depth(ans.loc) - st.depth(l);
                }
            }
            if (used < pp.size()) return std::nullopt;
            return ans.loc;
        };
        const auto finals = frontier_search(st, p, branch_policy{}, match, r.stats);
        r.occurrences = report(st, finals, p);
        return r;
    }

    std::unique_ptr<indexed_text> text_;
    std::unique_ptr<text_lce> lce_;
    index_params params_;
    std::unique_ptr<compressed_trie> suffix_tree_;
    std::unique_ptr<wildcard_tree> wt_;
    std::unique_ptr<lcp_structure> lcp_;
    std::optional<art_decomposition> art_;
    std::optional<lcp_structure::region_id> top_region_;
    std::vector<lcp_structure::region_id> regions_;
};

} // namespace wcidx
