#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"
#include "text.hpp"
#include "text_lce.hpp"

namespace wcidx {

using vertex_id = std::uint32_t;
inline constexpr vertex_id no_vertex = std::numeric_limits<vertex_id>::max();

enum class edge_kind : std::uint8_t { none = 0, substring = 1, star = 2 };

// A substring of t$ together with the text positions it stands for.
struct labeled_string {
    substring_ref ref;
    std::vector<position> labels;
};

// A point in a trie: `offset` symbols down the edge entering `vertex`.
// offset == edge length means the explicit vertex itself; the root is {root, 0}.
struct location {
    vertex_id vertex = 0;
    length_type offset = 0;

    friend bool operator==(const location&, const location&) = default;
    friend auto operator<=>(const location&, const location&) = default;
};

// Compressed trie whose edge labels are references into t$.
//
// Vertices are numbered in preorder within each component, so the subtree of
// v inside its component is the id range [v, subtree_end(v)).  A component is
// a plain compressed trie; components are linked by STAR edges (wildcard
// trees).  Every vertex v carries an origin o(v): for every location on the
// path to v at string depth e, the symbol there is t$[o(v) + e - 1].  A STAR
// edge consumes exactly one (unnamed) symbol, so depths count it too.
class compressed_trie {
public:
    compressed_trie() = default;

    const indexed_text& text() const noexcept { return *text_; }

    std::size_t vertex_count() const noexcept { return parent_.size(); }
    vertex_id root() const noexcept { return 0; }

    vertex_id parent(vertex_id v) const noexcept { return parent_[v]; }
    length_type depth(vertex_id v) const noexcept { return depth_[v]; }
    position origin(vertex_id v) const noexcept { return origin_[v]; }
    edge_kind kind(vertex_id v) const noexcept { return kind_[v]; }

    length_type edge_length(vertex_id v) const noexcept
    {
        return parent_[v] == no_vertex ? 0 : depth_[v] - depth_[parent_[v]];
    }

    // Label of the substring edge entering v.
    substring_ref edge_ref(vertex_id v) const noexcept
    {
        return {origin_[v] + depth_[parent_[v]], origin_[v] + depth_[v] - 1};
    }

    // Non-star children, ordered by first symbol.
    std::span<const vertex_id> children(vertex_id v) const noexcept
    {
        return {child_list_.data() + child_offset_[v], child_count_[v]};
    }
    vertex_id star_child(vertex_id v) const noexcept { return star_child_[v]; }

    bool is_leaf(vertex_id v) const noexcept { return child_count_[v] == 0 && star_child_[v] == no_vertex; }

    std::span<const position> labels(vertex_id v) const noexcept
    {
        return {label_list_.data() + label_offset_[v], label_count_[v]};
    }

    // Symbol at string depth e (1-based) on the path to v.
    symbol symbol_at(vertex_id v, length_type e) const noexcept { return (*text_)[origin_[v] + e - 1]; }

    // First symbol of the substring edge entering c.
    symbol first_symbol(vertex_id c) const noexcept { return symbol_at(c, depth_[parent_[c]] + 1); }

    vertex_id child_by_symbol(vertex_id v, symbol c) const noexcept
    {
        auto kids = children(v);
        auto it = std::lower_bound(kids.begin(), kids.end(), c,
                                   [&](vertex_id x, symbol s) { return first_symbol(x) < s; });
        return it != kids.end() && first_symbol(*it) == c ? *it : no_vertex;
    }

    // Leaf count of v's subtree within its component.
    std::uint32_t weight(vertex_id v) const noexcept { return weight_[v]; }
    vertex_id subtree_end(vertex_id v) const noexcept { return subtree_end_[v]; }

    std::uint32_t component(vertex_id v) const noexcept { return component_[v]; }
    std::size_t component_count() const noexcept { return component_root_.size(); }
    vertex_id component_root(std::uint32_t c) const noexcept { return component_root_[c]; }

    // Number of leaves (stored strings) over all components.
    std::size_t leaf_count() const noexcept { return leaf_count_; }
    std::size_t label_total() const noexcept { return label_list_.size(); }

    // ---- locations -------------------------------------------------------

    location root_location() const noexcept { return {root(), 0}; }
    location at_vertex(vertex_id v) const noexcept { return {v, edge_length(v)}; }

    length_type depth(const location& l) const noexcept
    {
        return parent_[l.vertex] == no_vertex ? 0 : depth_[parent_[l.vertex]] + l.offset;
    }
    bool is_explicit(const location& l) const noexcept { return l.offset == edge_length(l.vertex); }

    // Symbol right below an implicit location.
    symbol next_symbol(const location& l) const noexcept { return symbol_at(l.vertex, depth(l) + 1); }

    // Location `step` symbols further along the edge of an implicit location.
    location advance(const location& l, length_type step = 1) const noexcept { return {l.vertex, l.offset + step}; }

    bool valid(const location& l) const noexcept
    {
        return l.vertex < vertex_count() && l.offset <= edge_length(l.vertex) &&
               (l.offset > 0 || parent_[l.vertex] == no_vertex);
    }

private:
    friend class trie_assembler;

    const indexed_text* text_ = nullptr;
    std::vector<vertex_id> parent_;
    std::vector<length_type> depth_;
    std::vector<position> origin_;
    std::vector<edge_kind> kind_;
    std::vector<std::uint32_t> child_offset_;
    std::vector<std::uint16_t> child_count_;
    std::vector<vertex_id> child_list_;
    std::vector<vertex_id> star_child_;
    std::vector<std::uint32_t> label_offset_;
    std::vector<std::uint32_t> label_count_;
    std::vector<position> label_list_;
    std::vector<vertex_id> subtree_end_;
    std::vector<std::uint32_t> weight_;
    std::vector<std::uint32_t> component_;
    std::vector<vertex_id> component_root_;
    std::size_t leaf_count_ = 0;
};

// Appends components to a trie.  A component is built from strings already
// sorted and deduplicated, plus the lcp of each string with its predecessor.
class trie_assembler {
public:
    explicit trie_assembler(const indexed_text& t) { trie_.text_ = &t; }

    const compressed_trie& trie() const noexcept { return trie_; }

    // Adds T(strings) as a new component.  With star_parent == no_vertex the
    // component becomes the root component (must be the first one); otherwise
    // it hangs below star_parent via a STAR edge at depth(star_parent) + 1.
    vertex_id append_component(std::span<const labeled_string> sorted, std::span<const length_type> lcp,
                               vertex_id star_parent = no_vertex)
    {
        if (sorted.empty()) throw invalid_argument("cannot build a trie over an empty string set");
        const bool is_root = star_parent == no_vertex;
        if (is_root != trie_.parent_.empty()) throw invalid_argument("root component must be appended first");
        const length_type base = is_root ? 0 : trie_.depth_[star_parent] + 1;

        build_local(sorted, lcp, base);
        return emit(sorted, star_parent);
    }

    compressed_trie finish() &&
    {
        return std::move(trie_);
    }

private:
    struct local_node {
        std::uint32_t parent;
        length_type depth;
        position origin;
        std::uint32_t source; // index into `sorted` for leaves, npos otherwise
        std::vector<std::uint32_t> children;
    };
    static constexpr std::uint32_t npos = std::numeric_limits<std::uint32_t>::max();

    void build_local(std::span<const labeled_string> sorted, std::span<const length_type> lcp, length_type base)
    {
        nodes_.clear();
        nodes_.push_back({npos, base, 0, npos, {}});
        std::vector<std::uint32_t> stack{0};
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            const length_type len = sorted[i].ref.length();
            if (len == 0) throw invalid_argument("trie strings must be non-empty");
            const length_type l = i == 0 ? 0 : lcp[i];
            if (i > 0 && (l >= len || l >= sorted[i - 1].ref.length()))
                throw invalid_argument("trie string set is not prefix-free");

            std::uint32_t last = npos;
            while (nodes_[stack.back()].depth > base + l) {
                last = stack.back();
                stack.pop_back();
            }
            if (nodes_[stack.back()].depth < base + l) {
                const std::uint32_t top = stack.back();
                const auto w = static_cast<std::uint32_t>(nodes_.size());
                nodes_.push_back({top, base + l, nodes_[last].origin, npos, {last}});
                nodes_[top].children.back() = w;
                nodes_[last].parent = w;
                stack.push_back(w);
            }
            const std::uint32_t top = stack.back();
            const auto leaf = static_cast<std::uint32_t>(nodes_.size());
            nodes_.push_back({top, base + len, sorted[i].ref.start - base, static_cast<std::uint32_t>(i), {}});
            nodes_[top].children.push_back(leaf);
            stack.push_back(leaf);
        }
        nodes_[0].origin = nodes_[nodes_[0].children.front()].origin;
    }

    vertex_id emit(std::span<const labeled_string> sorted, vertex_id star_parent)
    {
        auto& t = trie_;
        const auto first = static_cast<vertex_id>(t.parent_.size());
        const auto comp = static_cast<std::uint32_t>(t.component_root_.size());
        t.component_root_.push_back(first);

        // Preorder numbering.
        order_.clear();
        std::vector<std::uint32_t> todo{0};
        while (!todo.empty()) {
            const std::uint32_t x = todo.back();
            todo.pop_back();
            order_.push_back(x);
            const auto& kids = nodes_[x].children;
            for (auto it = kids.rbegin(); it != kids.rend(); ++it) todo.push_back(*it);
        }
        global_.assign(nodes_.size(), 0);
        for (std::size_t i = 0; i < order_.size(); ++i) global_[order_[i]] = first + static_cast<vertex_id>(i);

        const std::size_t count = order_.size();
        const std::size_t grow = t.parent_.size() + count;
        t.parent_.reserve(grow);
        for (std::uint32_t x : order_) {
            const local_node& node = nodes_[x];
            const bool is_root = x == 0;
            t.parent_.push_back(is_root ? star_parent : global_[node.parent]);
            t.depth_.push_back(node.depth);
            t.origin_.push_back(node.origin);
            t.kind_.push_back(is_root ? (star_parent == no_vertex ? edge_kind::none : edge_kind::star)
                                      : edge_kind::substring);
            if (node.children.size() > std::numeric_limits<std::uint16_t>::max())
                throw invalid_argument("vertex fan-out exceeds 65535");
            t.child_offset_.push_back(static_cast<std::uint32_t>(t.child_list_.size()));
            t.child_count_.push_back(static_cast<std::uint16_t>(node.children.size()));
            for (std::uint32_t c : node.children) t.child_list_.push_back(global_[c]);
            t.star_child_.push_back(no_vertex);
            t.label_offset_.push_back(static_cast<std::uint32_t>(t.label_list_.size()));
            if (node.source != npos) {
                const auto& labels = sorted[node.source].labels;
                t.label_list_.insert(t.label_list_.end(), labels.begin(), labels.end());
                t.label_count_.push_back(static_cast<std::uint32_t>(labels.size()));
                ++t.leaf_count_;
            } else {
                t.label_count_.push_back(0);
            }
            t.component_.push_back(comp);
        }

        // Subtree ends and weights, children before parents.
        t.subtree_end_.resize(grow);
        t.weight_.resize(grow);
        for (std::size_t i = count; i-- > 0;) {
            const vertex_id v = first + static_cast<vertex_id>(i);
            std::uint32_t w = t.child_count_[v] == 0 ? 1 : 0;
            vertex_id end = v + 1;
            for (vertex_id c : t.children(v)) {
                w += t.weight_[c];
                end = std::max(end, t.subtree_end_[c]);
            }
            t.weight_[v] = w;
            t.subtree_end_[v] = end;
        }
        if (star_parent != no_vertex) t.star_child_[star_parent] = first;
        return first;
    }

    compressed_trie trie_;
    std::vector<local_node> nodes_;
    std::vector<std::uint32_t> order_;
    std::vector<vertex_id> global_;
};

// Sorts labeled strings by content, merges duplicates (concatenating their
// label lists) and computes adjacent lcps.
inline std::vector<length_type> sort_and_merge(const text_lce& lce, std::vector<labeled_string>& strings)
{
    std::sort(strings.begin(), strings.end(), [&](const labeled_string& a, const labeled_string& b) {
        const int c = lce.compare(a.ref, b.ref);
        return c != 0 ? c < 0 : a.labels < b.labels;
    });
    std::vector<labeled_string> merged;
    std::vector<length_type> lcp;
    merged.reserve(strings.size());
    lcp.reserve(strings.size());
    for (auto& s : strings) {
        if (!merged.empty()) {
            const length_type l = lce.common_prefix(merged.back().ref, s.ref);
            if (l == s.ref.length() && l == merged.back().ref.length()) {
                auto& into = merged.back().labels;
                into.insert(into.end(), s.labels.begin(), s.labels.end());
                continue;
            }
            lcp.push_back(l);
        } else {
            lcp.push_back(0);
        }
        merged.push_back(std::move(s));
    }
    for (auto& s : merged) std::sort(s.labels.begin(), s.labels.end());
    strings = std::move(merged);
    return lcp;
}

// T(S) for a labeled set of substrings of t$.  The set must be prefix-free
// once duplicates are merged.
inline compressed_trie build_trie(const text_lce& lce, std::vector<labeled_string> strings)
{
    if (strings.empty()) throw invalid_argument("cannot build a trie over an empty string set");
    for (const auto& s : strings)
        if (!lce.text().valid(s.ref)) throw invalid_argument("trie string is not a substring of the text");
    const auto lcp = sort_and_merge(lce, strings);
    trie_assembler assembler(lce.text());
    assembler.append_component(strings, lcp);
    return std::move(assembler).finish();
}

// Suffix tree T(suff(t$)): leaf i is labeled with position i.  Built from the
// suffix array, so no symbol comparisons are repeated.
inline compressed_trie build_suffix_tree(const text_lce& lce)
{
    const std::size_t len = lce.size();
    const position end = static_cast<position>(len);
    std::vector<labeled_string> strings(len);
    std::vector<length_type> lcp(len);
    for (std::size_t r = 0; r < len; ++r) {
        const position p = lce.suffix_at_rank(r);
        strings[r] = {{p, end}, {p}};
        lcp[r] = lce.adjacent_lcp(r);
    }
    trie_assembler assembler(lce.text());
    assembler.append_component(strings, lcp);
    return std::move(assembler).finish();
}

// Walks s symbol by symbol from `from`, never following STAR edges.
inline std::pair<location, std::size_t> descend(const compressed_trie& trie, location from,
                                                std::span<const symbol> s)
{
    std::size_t matched = 0;
    while (matched < s.size()) {
        if (trie.is_explicit(from)) {
            const vertex_id c = trie.child_by_symbol(from.vertex, s[matched]);
            if (c == no_vertex) break;
            from = {c, 1};
        } else {
            if (trie.next_symbol(from) != s[matched]) break;
            from = trie.advance(from);
        }
        ++matched;
    }
    return {from, matched};
}

// Labels of every leaf below l within its component, sorted and distinct.
inline std::vector<position> collect_occurrences(const compressed_trie& trie, const location& l)
{
    std::vector<position> out;
    const vertex_id end = trie.subtree_end(l.vertex);
    for (vertex_id v = l.vertex; v < end; ++v) {
        auto labels = trie.labels(v);
        out.insert(out.end(), labels.begin(), labels.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct trie_stats {
    std::size_t leaf_count = 0;
    std::size_t vertex_count = 0;
    // Edges on a longest root-to-leaf path.
    std::size_t height = 0;
    // String depth of the deepest leaf.
    std::size_t max_string_depth = 0;
};

// Statistics of the component rooted at `root`.
inline trie_stats stats(const compressed_trie& trie, vertex_id root = 0)
{
    trie_stats s;
    const vertex_id end = trie.subtree_end(root);
    std::vector<std::size_t> edges(end - root, 0);
    for (vertex_id v = root; v < end; ++v) {
        if (v != root) edges[v - root] = edges[trie.parent(v) - root] + 1;
        ++s.vertex_count;
        if (trie.children(v).empty()) {
            ++s.leaf_count;
            s.height = std::max(s.height, edges[v - root]);
            s.max_string_depth = std::max<std::size_t>(s.max_string_depth, trie.depth(v) - trie.depth(root));
        }
    }
    return s;
}

} // namespace wcidx
