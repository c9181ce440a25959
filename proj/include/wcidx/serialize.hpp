#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "error.hpp"
#include "index.hpp"

namespace wcidx {

// Index file layout, all integers little-endian:
//   "WCIDX1"
//   descriptor: u8 variant, u32 beta, u32 k, u32 o, u32 chi, u32 G, u32 sigma, u32 n
//   text: n x u32 symbols
//   u32 trie count, then per trie:
//     u32 vertex count
//     (vertex count - 1) edge records: u32 parent, u32 child, u8 kind (1 SUB, 2 STAR), u32 start, u32 end
//     u32 leaf count, then per leaf: u32 vertex, u32 label count, labels as u32
// Trie 0 is the suffix tree; trie 1, if present, the wildcard tree.

inline constexpr char index_magic[] = "WCIDX";
inline constexpr char index_version = '1';

namespace detail {

class writer {
public:
    explicit writer(std::ostream& out) : out_(out) {}
    void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
    void u32(std::uint32_t v)
    {
        std::array<char, 4> b{};
        for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
        out_.write(b.data(), 4);
    }

private:
    std::ostream& out_;
};

class reader {
public:
    explicit reader(std::istream& in) : in_(in) {}
    std::uint8_t u8()
    {
        const int c = in_.get();
        if (c == std::char_traits<char>::eof()) throw format_error("index file is truncated");
        return static_cast<std::uint8_t>(c);
    }
    std::uint32_t u32()
    {
        std::array<char, 4> b{};
        if (!in_.read(b.data(), 4)) throw format_error("index file is truncated");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
        return v;
    }
    // Counts guard allocations against corrupt headers.
    std::uint32_t count(std::uint64_t limit, const char* what)
    {
        const std::uint32_t c = u32();
        if (c > limit) throw format_error(std::string("implausible ") + what + " in index file");
        return c;
    }

private:
    std::istream& in_;
};

inline void write_trie(writer& w, const compressed_trie& trie)
{
    w.u32(static_cast<std::uint32_t>(trie.vertex_count()));
    std::uint32_t leaves = 0;
    for (vertex_id v = 1; v < trie.vertex_count(); ++v) {
        w.u32(trie.parent(v));
        w.u32(v);
        const bool star = trie.kind(v) == edge_kind::star;
        w.u8(star ? 2 : 1);
        const auto ref = star ? substring_ref{0, 0} : trie.edge_ref(v);
        w.u32(ref.start);
        w.u32(ref.end);
    }
    for (vertex_id v = 0; v < trie.vertex_count(); ++v) leaves += trie.labels(v).empty() ? 0 : 1;
    w.u32(leaves);
    for (vertex_id v = 0; v < trie.vertex_count(); ++v) {
        const auto labels = trie.labels(v);
        if (labels.empty()) continue;
        w.u32(v);
        w.u32(static_cast<std::uint32_t>(labels.size()));
        for (position p : labels) w.u32(p);
    }
}

struct edge_record {
    vertex_id parent;
    edge_kind kind;
    substring_ref ref;
};

// Rebuilds the trie component by component from its leaves, then checks that
// the result reproduces every stored record.
inline compressed_trie read_trie(reader& r, const text_lce& lce)
{
    const auto& text = lce.text();
    const std::uint64_t limit = std::uint64_t{1} << 31;
    const std::uint32_t count = r.count(limit, "vertex count");
    if (count == 0) throw format_error("index file holds an empty trie");
    std::vector<edge_record> edges(count, {no_vertex, edge_kind::none, {0, 0}});
    std::vector<length_type> depth(count, 0);
    std::vector<vertex_id> roots{0};
    for (std::uint32_t i = 1; i < count; ++i) {
        const vertex_id parent = r.u32(), child = r.u32();
        const std::uint8_t kind = r.u8();
        const position start = r.u32(), end = r.u32();
        if (child != i || parent >= child) throw format_error("edge records out of order");
        if (kind == 1) {
            if (!text.valid({start, end})) throw format_error("edge label outside the text");
            edges[child] = {parent, edge_kind::substring, {start, end}};
            depth[child] = depth[parent] + (end - start + 1);
        } else if (kind == 2) {
            if (start != 0 || end != 0) throw format_error("STAR edge carries a label");
            edges[child] = {parent, edge_kind::star, {0, 0}};
            depth[child] = depth[parent] + 1;
            roots.push_back(child);
        } else {
            throw format_error("unknown edge kind");
        }
    }
    std::vector<std::vector<position>> labels(count);
    const std::uint32_t leaves = r.count(count, "leaf count");
    for (std::uint32_t i = 0; i < leaves; ++i) {
        const vertex_id v = r.u32();
        if (v >= count) throw format_error("leaf record names an unknown vertex");
        const std::uint32_t n = r.count(text.size() + 1, "label count");
        for (std::uint32_t j = 0; j < n; ++j) labels[v].push_back(r.u32());
    }

    std::vector<std::uint8_t> internal(count, 0);
    for (std::uint32_t i = 1; i < count; ++i) internal[edges[i].parent] = 1;

    trie_assembler assembler(text);
    roots.push_back(count);
    for (std::size_t c = 0; c + 1 < roots.size(); ++c) {
        const vertex_id root = roots[c], end = roots[c + 1];
        std::vector<labeled_string> strings;
        for (vertex_id v = root; v < end; ++v) {
            if (labels[v].empty()) {
                if (internal[v]) continue;
                throw format_error("trie leaf has no labels");
            }
            if (v == root || edges[v].kind != edge_kind::substring) throw format_error("labels on a non-string vertex");
            const length_type len = depth[v] - depth[root];
            const position last = edges[v].ref.end;
            if (len == 0 || last < len) throw format_error("trie leaf has an impossible depth");
            strings.push_back({{last - len + 1, last}, labels[v]});
        }
        if (strings.empty()) throw format_error("trie component has no leaves");
        std::vector<length_type> lcp(strings.size(), 0);
        for (std::size_t i = 1; i < strings.size(); ++i) lcp[i] = lce.common_prefix(strings[i - 1].ref, strings[i].ref);
        try {
            assembler.append_component(strings, lcp, c == 0 ? no_vertex : edges[root].parent);
        } catch (const invalid_argument& e) {
            throw format_error(std::string("trie component does not rebuild: ") + e.what());
        }
    }
    auto trie = std::move(assembler).finish();

    if (trie.vertex_count() != count) throw format_error("trie records do not match the rebuilt trie");
    for (vertex_id v = 1; v < count; ++v) {
        const bool same = trie.parent(v) == edges[v].parent && trie.kind(v) == edges[v].kind &&
                          (edges[v].kind == edge_kind::star || (trie.edge_ref(v).start == edges[v].ref.start &&
                                                                  trie.edge_ref(v).end == edges[v].ref.end));
        if (!same) throw format_error("trie records do not match the rebuilt trie");
    }
    for (vertex_id v = 0; v < count; ++v)
        if (!std::equal(labels[v].begin(), labels[v].end(), trie.labels(v).begin(), trie.labels(v).end()))
            throw format_error("trie leaf labels are not canonical");
    return trie;
}

// Every suffix of t$ must sit at its own labeled vertex.
inline void check_suffix_tree(const compressed_trie& st)
{
    const position end = st.text().size() + 1;
    if (st.component_count() != 1 || st.leaf_count() != end || st.label_total() != end)
        throw format_error("suffix tree does not hold every suffix");
    for (vertex_id v = 1; v < st.vertex_count(); ++v) {
        const auto labels = st.labels(v);
        if (labels.empty()) continue;
        if (labels.size() != 1 || st.origin(v) != labels[0] || st.edge_ref(v).end != end)
            throw format_error("suffix tree leaf does not match its label");
    }
}

} // namespace detail

inline void save_index(const wildcard_index& idx, std::ostream& out)
{
    out.write(index_magic, 5);
    out.put(index_version);
    detail::writer w(out);
    const auto& t = idx.text();
    w.u8(static_cast<std::uint8_t>(idx.kind()));
    w.u32(idx.beta());
    w.u32(idx.k());
    w.u32(idx.opt());
    w.u32(idx.chi());
    w.u32(idx.g());
    w.u32(static_cast<std::uint32_t>(t.sigma()));
    w.u32(t.size());
    for (position p = 1; p <= t.size(); ++p) w.u32(t[p]);
    const bool has_wt = idx.wildcard() != nullptr;
    w.u32(has_wt ? 2 : 1);
    detail::write_trie(w, idx.suffix_tree());
    if (has_wt) detail::write_trie(w, idx.wildcard()->trie);
    if (!out) throw io_error("failed to write index");
}

inline wildcard_index load_index(std::istream& in)
{
    char magic[6] = {};
    if (!in.read(magic, 6)) throw format_error("not an index file");
    if (std::string(magic, 5) != index_magic) throw format_error("not an index file");
    if (magic[5] != index_version)
        throw version_error(std::string("unsupported index format version '") + magic[5] + "'");

    detail::reader r(in);
    const std::uint8_t tag = r.u8();
    if (tag > static_cast<std::uint8_t>(variant_kind::linear_time)) throw format_error("unknown index variant tag");
    index_params params;
    params.kind = static_cast<variant_kind>(tag);
    params.beta = r.u32();
    params.k = r.u32();
    params.opt = r.u32();
    params.chi = r.u32();
    params.g = r.u32();
    params.any_beta = true;
    const std::uint32_t sigma = r.u32();
    const std::uint32_t n = r.count(std::uint64_t{1} << 31, "text length");
    symbol_string chars;
    chars.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) chars.push_back(r.u32());
    if (params.chi == 0 || params.g == 0) throw format_error("index descriptor has a zero parameter");
    const bool plain = params.kind == variant_kind::simple || params.kind == variant_kind::art_linear;
    if (plain && (params.beta != 0 || params.k != 0 || *params.opt != 0))
        throw format_error("index descriptor sets wildcard parameters on a plain variant");
    if (params.kind == variant_kind::linear_time && params.beta != 1)
        throw format_error("index descriptor sets beta on a linear-time index");
    if (params.kind == variant_kind::tradeoff && params.beta == 0) throw format_error("index descriptor has beta = 0");

    indexed_text text = [&] {
        try {
            return indexed_text(std::move(chars));
        } catch (const error& e) {
            throw format_error(std::string("index text is invalid: ") + e.what());
        }
    }();
    if (text.sigma() != sigma) throw format_error("index descriptor does not match its text");

    const std::uint32_t trie_count = r.u32();
    const bool wants_wt = params.kind == variant_kind::tradeoff || params.kind == variant_kind::linear_time;
    if (trie_count != (wants_wt ? 2u : 1u)) throw format_error("index holds the wrong number of tries");
    const std::uint32_t wt_beta = params.kind == variant_kind::linear_time ? 1 : params.beta;
    const std::uint32_t levels = params.k + *params.opt;

    auto load = [&](const text_lce& lce) {
        wildcard_index::loaded_tries out{detail::read_trie(r, lce), std::nullopt};
        detail::check_suffix_tree(out.suffix_tree);
        if (wants_wt) {
            try {
                out.wildcard = adopt_wildcard_tree(detail::read_trie(r, lce), wt_beta, levels);
            } catch (const invalid_argument& e) {
                throw format_error(e.what());
            }
        }
        if (in.peek() != std::char_traits<char>::eof()) throw format_error("trailing bytes after index");
        return out;
    };
    try {
        return wildcard_index(std::move(text), params, load);
    } catch (const invalid_argument& e) {
        throw format_error(std::string("index does not load: ") + e.what());
    }
}

inline void save_index_file(const wildcard_index& idx, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    save_index(idx, out);
    out.flush();
    if (!out) throw io_error("failed to write '" + path + "'");
}

inline wildcard_index load_index_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    return load_index(in);
}

} // namespace wcidx
