#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "decomposition.hpp"
#include "error.hpp"
#include "trie.hpp"

namespace wcidx {

// LIGHT: heavy paths, a hash of explicit depths and binary-search predecessor.
// FULL: additionally a dense depth index per heavy path, so locating a depth
// on the final path is a table lookup.
enum class lcp_mode : std::uint8_t { light, full };

struct lcp_answer {
    location loc;
    std::uint32_t hops = 0;                // heavy paths examined
    std::uint32_t predecessor_lookups = 0; // binary searches on a path

    bool used_predecessor() const noexcept { return predecessor_lookups > 0; }
};

// A pattern x with, for each suffix x[s..], an anchor (q, L): L is the length
// of the longest prefix of x[s..] occurring in t and q a text position where
// it occurs.  lce(x[s..], t$[p..]) = min(L, lce(q, p)) for every p.
struct preprocessed_pattern {
    symbol_string x;
    std::vector<position> anchor_pos;
    std::vector<length_type> anchor_len;

    std::size_t size() const noexcept { return x.size(); }
};

class lcp_structure {
public:
    using region_id = std::uint32_t;

    // `suffix_tree` is T(C) for C = suff(t$) and must outlive the structure,
    // as must every registered trie.
    explicit lcp_structure(const compressed_trie& suffix_tree) : st_(&suffix_tree), nca_(suffix_tree)
    {
        const auto& t = suffix_tree.text();
        const std::size_t count = suffix_tree.subtree_end(0);
        leaf_of_.assign(t.size() + 2, no_vertex);
        first_label_.assign(count, 0);
        for (vertex_id v = static_cast<vertex_id>(count); v-- > 0;) {
            const auto kids = suffix_tree.children(v);
            if (kids.empty()) {
                for (position p : suffix_tree.labels(v)) leaf_of_[p] = v;
                first_label_[v] = suffix_tree.labels(v)[0];
            } else {
                first_label_[v] = first_label_[kids[0]];
            }
        }
        const std::size_t levels = std::bit_width(count);
        up_.assign(levels, std::vector<vertex_id>(count));
        for (vertex_id v = 0; v < count; ++v) up_[0][v] = v == 0 ? 0 : suffix_tree.parent(v);
        for (std::size_t j = 1; j < levels; ++j)
            for (vertex_id v = 0; v < count; ++v) up_[j][v] = up_[j - 1][up_[j - 1][v]];
    }

    lcp_structure(const lcp_structure&) = delete;
    lcp_structure& operator=(const lcp_structure&) = delete;

    const compressed_trie& reference() const noexcept { return *st_; }

    // Registers the region made of rho plus every vertex reachable from it
    // through children accepted by `in_region`.  Returns the region id.
    template <typename InRegion>
    region_id register_region(const compressed_trie& trie, vertex_id rho, lcp_mode mode, InRegion in_region)
    {
        if (&trie.text() != &st_->text()) throw invalid_argument("trie does not store substrings of the indexed text");
        const std::uint32_t e = entry_for(trie);
        auto& ent = entries_[e];
        const auto id = static_cast<region_id>(regions_.size());
        if (ent.region_of[rho] == none) ent.region_of[rho] = id;

        std::vector<vertex_id> todo{rho};
        while (!todo.empty()) {
            const vertex_id v = todo.back();
            todo.pop_back();
            for (vertex_id c : trie.children(v)) {
                if (!in_region(c)) continue;
                if (ent.region_of[c] != none) throw invalid_argument("vertex registered in two regions");
                ent.region_of[c] = id;
                todo.push_back(c);
            }
        }

        region r;
        r.entry = e;
        r.rho = rho;
        r.mode = mode;
        r.leaf_count = 0;
        for (vertex_id c : trie.children(rho))
            if (ent.region_of[c] == id) r.leaf_count += trie.weight(c);
        if (r.leaf_count == 0) r.leaf_count = 1;

        auto heavy_child = [&](vertex_id v) {
            vertex_id best = no_vertex;
            for (vertex_id c : trie.children(v))
                if (ent.region_of[c] == id && (best == no_vertex || trie.weight(c) > trie.weight(best))) best = c;
            return best;
        };
        // Heavy paths: one from rho, then one from every light child.
        std::vector<std::pair<vertex_id, bool>> heads{{rho, true}};
        while (!heads.empty()) {
            const auto [head, is_root] = heads.back();
            heads.pop_back();
            const auto pid = static_cast<std::uint32_t>(paths_.size());
            heavy_path p;
            p.trie = &trie;
            p.mode = mode;
            p.first = static_cast<std::uint32_t>(path_vertices_.size());
            p.base = is_root ? trie.depth(rho) : trie.depth(trie.parent(head)) + 1;
            for (vertex_id v = head; v != no_vertex;) {
                path_vertices_.push_back(v);
                if (!(is_root && v == head)) ent.path_of[v] = pid;
                if (mode == lcp_mode::light) explicit_[key(pid, trie.depth(v))] = v;
                const vertex_id h = heavy_child(v);
                for (vertex_id c : trie.children(v))
                    if (ent.region_of[c] == id && c != h) heads.push_back({c, false});
                v = h;
            }
            p.count = static_cast<std::uint32_t>(path_vertices_.size()) - p.first;
            if (mode == lcp_mode::full) build_dense(p);
            paths_.push_back(p);
            if (is_root) r.root_path = pid;
        }
        regions_.push_back(r);
        return id;
    }

    // One region per component of `trie`, in component order.
    std::vector<region_id> register_trie(const compressed_trie& trie, lcp_mode mode)
    {
        std::vector<region_id> ids;
        for (std::uint32_t c = 0; c < trie.component_count(); ++c)
            ids.push_back(register_region(trie, trie.component_root(c), mode, [](vertex_id) { return true; }));
        return ids;
    }

    std::size_t region_count() const noexcept { return regions_.size(); }
    vertex_id region_root(region_id r) const { return regions_.at(r).rho; }
    lcp_mode region_mode(region_id r) const { return regions_.at(r).mode; }
    std::uint32_t region_leaf_count(region_id r) const { return regions_.at(r).leaf_count; }

    // Region owning the edge into v (or v itself when it is a region root
    // that belongs to no other region).
    region_id region_of(const compressed_trie& trie, vertex_id v) const
    {
        for (const auto& e : entries_)
            if (e.trie == &trie) return e.region_of.at(v);
        throw invalid_argument("trie is not registered");
    }

    preprocessed_pattern preprocess(std::span<const symbol> x) const
    {
        preprocessed_pattern pp;
        pp.x.assign(x.begin(), x.end());
        pp.anchor_pos.resize(x.size());
        pp.anchor_len.resize(x.size());
        location loc = st_->root_location();
        length_type len = 0;
        position q = 1;
        for (std::size_t s = 0; s < x.size(); ++s) {
            if (s > 0) {
                if (len > 1) {
                    --len;
                    loc = level_ancestor(leaf_of_[q + 1], len);
                } else {
                    len = 0;
                    loc = st_->root_location();
                }
            }
            const auto [stop, matched] = descend(*st_, loc, x.subspan(s + len));
            len += static_cast<length_type>(matched);
            loc = stop;
            q = len > 0 ? first_label_[loc.vertex] : 1;
            pp.anchor_pos[s] = q;
            pp.anchor_len[s] = len;
        }
        return pp;
    }

    // lce of x[s..] and t$[p..].
    length_type lce(const preprocessed_pattern& pp, std::size_t s, position p) const
    {
        const length_type len = pp.anchor_len[s];
        if (len == 0) return 0;
        return std::min(len, nca_.string_depth(leaf_of_[pp.anchor_pos[s]], leaf_of_[p]));
    }

    // Where the search for x[s..] stops when started at `from` in region r.
    lcp_answer query(const preprocessed_pattern& pp, std::size_t s, region_id r, location from) const
    {
        if (r >= regions_.size()) throw invalid_argument("unknown LCP region");
        if (s > pp.size()) throw invalid_argument("pattern suffix start out of range");
        const region& g = regions_[r];
        const entry& ent = entries_[g.entry];
        const compressed_trie& trie = *ent.trie;
        if (!trie.valid(from)) throw invalid_argument("location is not valid in the trie");

        lcp_answer ans;
        ans.loc = from;
        if (s == pp.size()) return ans;

        std::uint32_t pid;
        if (from.vertex == g.rho && trie.is_explicit(from)) {
            pid = g.root_path;
        } else {
            if (ent.region_of[from.vertex] != r) throw invalid_argument("location lies outside the LCP region");
            pid = ent.path_of[from.vertex];
        }
        length_type d = trie.depth(from);
        for (;;) {
            ++ans.hops;
            const heavy_path& p = paths_[pid];
            const vertex_id bottom = path_vertices_[p.first + p.count - 1];
            const length_type rem = trie.depth(bottom) - d;
            const length_type h = rem == 0 ? 0 : std::min(rem, lce(pp, s, trie.origin(bottom) + d));
            s += h;
            d += h;
            if (h == rem) {
                ans.loc = trie.at_vertex(bottom);
                return ans;
            }
            if (s == pp.size()) {
                ans.loc = locate(p, d, ans);
                return ans;
            }
            const vertex_id u = explicit_at(pid, p, d);
            if (u == no_vertex) {
                ans.loc = locate(p, d, ans);
                return ans;
            }
            const vertex_id c = trie.child_by_symbol(u, pp.x[s]);
            if (c == no_vertex || ent.region_of[c] != r) {
                ans.loc = trie.at_vertex(u);
                return ans;
            }
            ++s;
            ++d;
            if (s == pp.size()) {
                ans.loc = {c, 1};
                return ans;
            }
            pid = ent.path_of[c];
        }
    }

private:
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    struct entry {
        const compressed_trie* trie;
        std::vector<std::uint32_t> region_of;
        std::vector<std::uint32_t> path_of;
    };
    struct region {
        std::uint32_t entry = 0;
        vertex_id rho = 0;
        lcp_mode mode = lcp_mode::light;
        std::uint32_t root_path = 0;
        std::uint32_t leaf_count = 0;
    };
    // Vertices head..bottom; locations on the path have depth >= base.
    struct heavy_path {
        const compressed_trie* trie = nullptr;
        lcp_mode mode = lcp_mode::light;
        std::uint32_t first = 0;
        std::uint32_t count = 0;
        length_type base = 0;
        std::uint32_t dense_first = 0;
        std::uint32_t dense_count = 0;
    };

    static std::uint64_t key(std::uint32_t pid, length_type depth)
    {
        return (static_cast<std::uint64_t>(pid) << 32) | depth;
    }

    std::uint32_t entry_for(const compressed_trie& trie)
    {
        for (std::uint32_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].trie == &trie) return i;
        entries_.push_back({&trie, std::vector<std::uint32_t>(trie.vertex_count(), none),
                            std::vector<std::uint32_t>(trie.vertex_count(), none)});
        return static_cast<std::uint32_t>(entries_.size() - 1);
    }

    // dense_[base + i] = index within the path of the first vertex at depth >= base + i,
    // for depths up to the last vertex before the bottom.
    void build_dense(heavy_path& p)
    {
        p.dense_first = static_cast<std::uint32_t>(dense_.size());
        if (p.count < 2) return;
        const vertex_id last_inner = path_vertices_[p.first + p.count - 2];
        const length_type top = p.trie->depth(last_inner);
        std::uint32_t idx = 0;
        for (length_type depth = p.base; depth <= top; ++depth) {
            while (p.trie->depth(path_vertices_[p.first + idx]) < depth) ++idx;
            dense_.push_back(idx);
        }
        p.dense_count = static_cast<std::uint32_t>(dense_.size()) - p.dense_first;
    }

    std::uint32_t dense_index(const heavy_path& p, length_type depth) const
    {
        const length_type i = depth - p.base;
        return i < p.dense_count ? dense_[p.dense_first + i] : p.count - 1;
    }

    vertex_id explicit_at(std::uint32_t pid, const heavy_path& p, length_type depth) const
    {
        if (p.mode == lcp_mode::full) {
            const vertex_id v = path_vertices_[p.first + dense_index(p, depth)];
            return p.trie->depth(v) == depth ? v : no_vertex;
        }
        auto it = explicit_.find(key(pid, depth));
        return it == explicit_.end() ? no_vertex : it->second;
    }

    location locate(const heavy_path& p, length_type depth, lcp_answer& ans) const
    {
        std::uint32_t idx;
        if (p.mode == lcp_mode::full) {
            idx = dense_index(p, depth);
        } else {
            ++ans.predecessor_lookups;
            const auto* begin = path_vertices_.data() + p.first;
            const auto* it = std::lower_bound(begin, begin + p.count, depth,
                                              [&](vertex_id v, length_type dd) { return p.trie->depth(v) < dd; });
            idx = static_cast<std::uint32_t>(it - begin);
        }
        const vertex_id v = path_vertices_[p.first + idx];
        if (p.trie->parent(v) == no_vertex || p.trie->depth(v) == depth) return p.trie->at_vertex(v);
        return {v, depth - p.trie->depth(p.trie->parent(v))};
    }

    // Location at string depth `depth` on the path from the root to `leaf`.
    location level_ancestor(vertex_id leaf, length_type depth) const
    {
        vertex_id v = leaf;
        for (std::size_t j = up_.size(); j-- > 0;)
            if (st_->depth(up_[j][v]) >= depth) v = up_[j][v];
        return {v, depth - st_->depth(st_->parent(v))};
    }

    const compressed_trie* st_;
    nca_structure nca_;
    std::vector<vertex_id> leaf_of_;
    std::vector<position> first_label_;
    std::vector<std::vector<vertex_id>> up_;

    std::vector<entry> entries_;
    std::vector<region> regions_;
    std::vector<heavy_path> paths_;
    std::vector<vertex_id> path_vertices_;
    std::vector<std::uint32_t> dense_;
    std::unordered_map<std::uint64_t, vertex_id> explicit_;
};

} // namespace wcidx
