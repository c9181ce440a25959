#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "error.hpp"
#include "sparse_table.hpp"
#include "trie.hpp"

namespace wcidx {

// Heavy alpha-tree decomposition of one component: the edges to the alpha
// heaviest children of every vertex are heavy, all others light.
struct heavy_alpha_decomposition {
    std::uint32_t alpha = 0;
    vertex_id root = 0;
    std::vector<std::uint8_t> heavy;       // edge entering root + i
    std::vector<std::uint32_t> lightdepth; // light edges between root + i and root

    bool is_heavy(vertex_id v) const { return heavy[v - root] != 0; }
    std::uint32_t light_depth(vertex_id v) const { return lightdepth[v - root]; }
    std::uint32_t light_height() const
    {
        return lightdepth.empty() ? 0 : *std::max_element(lightdepth.begin(), lightdepth.end());
    }
};

// Works on any tree whose subtrees are contiguous preorder id ranges and
// which exposes parent(), children(), weight() and subtree_end().  Ties on
// weight keep the children order (first symbol for tries).
template <typename Tree>
heavy_alpha_decomposition heavy_alpha_decompose(const Tree& tree, std::uint32_t alpha, vertex_id root = 0)
{
    heavy_alpha_decomposition d;
    d.alpha = alpha;
    d.root = root;
    const std::size_t count = tree.subtree_end(root) - root;
    d.heavy.assign(count, 0);
    d.lightdepth.assign(count, 0);

    std::vector<vertex_id> kids;
    for (vertex_id v = root; v < root + count; ++v) {
        const auto span = tree.children(v);
        kids.assign(span.begin(), span.end());
        const std::size_t h = std::min<std::size_t>(alpha, kids.size());
        std::stable_sort(kids.begin(), kids.end(),
                         [&](vertex_id a, vertex_id b) { return tree.weight(a) > tree.weight(b); });
        for (std::size_t i = 0; i < h; ++i) d.heavy[kids[i] - root] = 1;
        // Parents precede children in preorder, so lightdepth(v) is final here.
        for (vertex_id c : span) d.lightdepth[c - root] = d.lightdepth[v - root] + (d.heavy[c - root] ? 0 : 1);
    }
    return d;
}

// ART decomposition with parameter chi: bottom roots are the minimal-depth
// vertices whose subtree holds at most chi leaves; everything above them is
// the top tree.
struct art_decomposition {
    std::uint32_t chi = 1;
    vertex_id root = 0;
    std::vector<vertex_id> bottom_roots;     // ascending
    std::vector<std::uint8_t> top;           // root + i is a top vertex
    std::vector<vertex_id> bottom_root_of;   // root + i -> its bottom root, or no_vertex
    std::size_t top_vertex_count = 0;
    std::size_t top_leaf_count = 0;          // top vertices without a top child

    bool is_top(vertex_id v) const { return top[v - root] != 0; }
    bool is_bottom_root(vertex_id v) const { return bottom_root_of[v - root] == v; }
    vertex_id bottom_root(vertex_id v) const { return bottom_root_of[v - root]; }
};

inline art_decomposition art_decompose(const compressed_trie& trie, std::uint32_t chi, vertex_id root = 0)
{
    if (chi < 1) throw invalid_argument("ART parameter chi must be at least 1");
    art_decomposition d;
    d.chi = chi;
    d.root = root;
    const std::size_t count = trie.subtree_end(root) - root;
    d.top.assign(count, 0);
    d.bottom_root_of.assign(count, no_vertex);

    for (vertex_id v = root; v < root + count; ++v) {
        const std::size_t i = v - root;
        const bool parent_top = v != root && d.top[trie.parent(v) - root];
        if (v != root && !parent_top) {
            d.bottom_root_of[i] = d.bottom_root_of[trie.parent(v) - root];
        } else if (trie.weight(v) <= chi) {
            d.bottom_root_of[i] = v;
            d.bottom_roots.push_back(v);
        } else {
            d.top[i] = 1;
            ++d.top_vertex_count;
        }
    }
    for (vertex_id v = root; v < root + count; ++v) {
        if (!d.is_top(v)) continue;
        const auto kids = trie.children(v);
        if (std::none_of(kids.begin(), kids.end(), [&](vertex_id c) { return d.is_top(c); })) ++d.top_leaf_count;
    }
    return d;
}

// Nearest common ancestors in one component via an Euler tour and a sparse
// table over tour levels.
class nca_structure {
public:
    nca_structure() = default;

    explicit nca_structure(const compressed_trie& trie, vertex_id root = 0) : trie_(&trie), root_(root)
    {
        const std::size_t count = trie.subtree_end(root) - root;
        first_.assign(count, 0);
        std::vector<std::uint32_t> levels;
        levels.reserve(2 * count);
        euler_.reserve(2 * count);

        struct frame {
            vertex_id v;
            std::uint32_t next_child;
            std::uint32_t level;
        };
        std::vector<frame> stack{{root, 0, 0}};
        first_[0] = 0;
        euler_.push_back(root);
        levels.push_back(0);
        while (!stack.empty()) {
            frame& f = stack.back();
            const auto kids = trie.children(f.v);
            if (f.next_child == kids.size()) {
                stack.pop_back();
                if (!stack.empty()) {
                    euler_.push_back(stack.back().v);
                    levels.push_back(stack.back().level);
                }
                continue;
            }
            const vertex_id c = kids[f.next_child++];
            const std::uint32_t level = f.level + 1;
            first_[c - root] = static_cast<std::uint32_t>(euler_.size());
            euler_.push_back(c);
            levels.push_back(level);
            stack.push_back({c, 0, level});
        }
        levels_ = sparse_table<std::uint32_t>(std::move(levels));
    }

    vertex_id nca(vertex_id u, vertex_id v) const
    {
        std::uint32_t a = first_[u - root_], b = first_[v - root_];
        if (a > b) std::swap(a, b);
        return euler_[levels_.argmin(a, b)];
    }

    length_type string_depth(vertex_id u, vertex_id v) const { return trie_->depth(nca(u, v)); }

private:
    const compressed_trie* trie_ = nullptr;
    vertex_id root_ = 0;
    std::vector<vertex_id> euler_;
    std::vector<std::uint32_t> first_;
    sparse_table<std::uint32_t> levels_;
};

// suff_2(lightstrings(v)): for each leaf below a light child of v, the string
// from depth |v| + 2 to the leaf, keeping the leaf's labels.  Strings that
// become empty are dropped; a lone sentinel is kept, since it still witnesses
// an occurrence ending right before the text end.
inline std::vector<labeled_string> lightstrings_suffixes(const compressed_trie& trie, vertex_id v,
                                                         const heavy_alpha_decomposition& d)
{
    std::vector<labeled_string> out;
    const length_type base = trie.depth(v);
    for (vertex_id c : trie.children(v)) {
        if (d.is_heavy(c)) continue;
        for (vertex_id leaf = c; leaf < trie.subtree_end(c); ++leaf) {
            if (!trie.children(leaf).empty()) continue;
            const length_type len = trie.depth(leaf) - base - 1;
            if (len == 0) continue;
            const position start = trie.origin(leaf) + base + 1;
            const auto labels = trie.labels(leaf);
            out.push_back({{start, start + len - 1}, {labels.begin(), labels.end()}});
        }
    }
    return out;
}

} // namespace wcidx
