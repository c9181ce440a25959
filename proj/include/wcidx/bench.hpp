#pragma once

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "index.hpp"
#include "pattern.hpp"
#include "text.hpp"
#include "wildcard_tree.hpp"

namespace wcidx {

struct corpus_spec {
    std::uint64_t seed = 1;
    std::vector<std::size_t> lengths{64, 256};
    std::vector<std::size_t> sigmas{2, 4};
    bool uniform = true;
    bool zipf = true;
    bool periodic = true; // a^n and (ab)^(n/2), once per length
};

struct corpus_text {
    std::string name; // uniform-s4-n64, zipf-s2-n256, a-n64, ab-n64, ...
    std::string chars;
};

struct sweep_grid {
    std::vector<variant_kind> variants{variant_kind::simple, variant_kind::art_linear, variant_kind::tradeoff,
                                       variant_kind::linear_time};
    std::vector<std::uint32_t> betas{1, 2, 3}; // tradeoff
    std::vector<std::uint32_t> ks{0, 1, 2};    // tradeoff, linear_time (linear_time skips k = 0)
    std::uint32_t opt = 0;                     // optional wildcards per row
    std::uint32_t queries_per_row = 20;
    std::uint64_t guard = 0;
};

struct sweep_row {
    std::string text;
    variant_kind variant = variant_kind::simple;
    std::uint32_t beta = 0, k = 0, opt = 0;
    std::size_t n = 0, sigma = 0;
    // Unset when construction hit the guard.
    std::optional<std::uint64_t> stored_strings, vertex_count, bound_value;
    std::optional<double> mean_lcp_queries;
    std::optional<std::uint64_t> max_branch_events;
    bool bound_satisfied = false;
    std::string status = "ok"; // or "guard_exceeded:<count>"
};

struct sweep_report {
    std::uint64_t seed = 0;
    std::vector<sweep_row> rows;
};

inline std::vector<corpus_text> make_corpus(const corpus_spec& spec)
{
    std::vector<corpus_text> out;
    std::mt19937_64 rng(spec.seed);
    for (std::size_t n : spec.lengths) {
        for (std::size_t sigma : spec.sigmas) {
            if (spec.uniform) {
                std::uniform_int_distribution<std::size_t> pick(0, sigma - 1);
                std::string s(n, 'a');
                for (auto& c : s) c = static_cast<char>('a' + pick(rng));
                out.push_back({"uniform-s" + std::to_string(sigma) + "-n" + std::to_string(n), s});
            }
            if (spec.zipf) {
                std::vector<double> w;
                for (std::size_t r = 1; r <= sigma; ++r) w.push_back(1.0 / static_cast<double>(r));
                std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
                std::string s(n, 'a');
                for (auto& c : s) c = static_cast<char>('a' + pick(rng));
                out.push_back({"zipf-s" + std::to_string(sigma) + "-n" + std::to_string(n), s});
            }
        }
        if (spec.periodic) {
            out.push_back({"a-n" + std::to_string(n), std::string(n, 'a')});
            std::string ab;
            for (std::size_t i = 0; i < n; ++i) ab.push_back(i % 2 ? 'b' : 'a');
            out.push_back({"ab-n" + std::to_string(n), ab});
        }
    }
    return out;
}

namespace detail {

inline std::uint64_t height_bound(std::uint64_t strings, std::uint64_t h, std::uint32_t levels)
{
    return wildcard_tree::saturating_bound(strings, h, levels);
}

// ceil(log_beta x) for beta >= 2.
inline std::uint64_t ceil_log(std::uint64_t x, std::uint64_t beta)
{
    std::uint64_t e = 0, p = 1;
    while (p < x) {
        p *= beta;
        ++e;
    }
    return e;
}

// Wildcard-only pattern read from the text with up to j wildcards.
inline gap_pattern sweep_pattern(std::mt19937_64& rng, const std::string& t, std::uint32_t max_j)
{
    const std::size_t j = max_j == 0 ? 0 : rng() % (max_j + 1);
    std::string q;
    std::size_t at = rng() % t.size();
    const std::size_t len = 1 + j + rng() % 4;
    for (std::size_t r = 0; r < len; ++r) q.push_back(at + r < t.size() ? t[at + r] : 'a');
    for (std::size_t w = 0; w < j; ++w) q[rng() % (q.size() - 1) + 1] = '*';
    while (q.back() == '*') q.pop_back();
    return parse_pattern(q);
}

} // namespace detail

// A-priori space bound for a built index:
//   simple, art: n + 1 suffix tree leaves
//   tradeoff, beta >= 2: (n+1) * sum_{j<=L} ceil(log_beta(n+1))^j
//   tradeoff, beta = 1: (n+1) * sum_{j<=L} h^j, h = suffix tree height
//   linear_time: n + 1 plus the beta = 1 bound over pref_G
// with L = k + o wildcard levels.
inline std::uint64_t space_bound(const wildcard_index& idx)
{
    const std::uint64_t leaves = idx.text().size() + 1;
    const std::uint32_t levels = idx.k() + idx.opt();
    const std::uint64_t h = stats(idx.suffix_tree()).height;
    switch (idx.kind()) {
    case variant_kind::simple:
    case variant_kind::art_linear: return leaves;
    case variant_kind::tradeoff:
        return detail::height_bound(leaves, idx.beta() == 1 ? h : detail::ceil_log(leaves, idx.beta()), levels);
    case variant_kind::linear_time: {
        const auto b = detail::height_bound(leaves, h, levels);
        return b == std::numeric_limits<std::uint64_t>::max() ? b : b + leaves;
    }
    }
    return 0;
}

inline sweep_row run_row(const corpus_text& t, const index_params& params, const sweep_grid& grid,
                         std::uint64_t row_seed)
{
    const indexed_text text(t.chars);
    sweep_row row;
    row.text = t.name;
    row.variant = params.kind;
    row.n = text.size();
    row.sigma = text.sigma();
    try {
        wildcard_index idx(text, params);
        row.beta = idx.beta();
        row.k = idx.k();
        row.opt = idx.opt();
        row.stored_strings = idx.stored_strings();
        row.vertex_count = idx.vertex_count();
        row.bound_value = space_bound(idx);
        row.bound_satisfied = *row.stored_strings <= *row.bound_value;

        std::mt19937_64 rng(row_seed);
        const std::uint32_t max_j = params.kind == variant_kind::tradeoff || params.kind == variant_kind::linear_time
                                        ? idx.k()
                                        : 2;
        std::uint64_t lcp_total = 0, branch_max = 0;
        for (std::uint32_t q = 0; q < grid.queries_per_row; ++q) {
            const auto r = idx.query(detail::sweep_pattern(rng, t.chars, max_j));
            lcp_total += r.stats.lcp_queries;
            branch_max = std::max(branch_max, r.stats.branch_events);
        }
        row.mean_lcp_queries =
            grid.queries_per_row ? static_cast<double>(lcp_total) / grid.queries_per_row : 0.0;
        row.max_branch_events = branch_max;
    } catch (const resource_error& e) {
        row.beta = params.beta;
        row.k = params.k;
        row.opt = params.opt.value_or(0);
        row.status = "guard_exceeded:" + std::to_string(e.count());
    }
    return row;
}

// One row per (text, variant, parameters), in corpus order then grid order.
// A row whose stored-string count breaks its bound aborts the sweep.
inline sweep_report run_sweep(const corpus_spec& corpus, const sweep_grid& grid)
{
    sweep_report report;
    report.seed = corpus.seed;
    std::uint64_t row_seed = corpus.seed;
    auto add = [&](const corpus_text& t, index_params params) {
        params.guard = grid.guard;
        params.any_beta = true;
        auto row = run_row(t, params, grid, ++row_seed * 0x9e3779b97f4a7c15ULL);
        if (row.status == "ok" && !row.bound_satisfied) {
            std::ostringstream msg;
            msg << "space bound violated on " << row.text << " variant=" << to_string(row.variant)
                << " beta=" << row.beta << " k=" << row.k << ": stored=" << *row.stored_strings
                << " bound=" << *row.bound_value;
            throw error(msg.str());
        }
        report.rows.push_back(std::move(row));
    };
    for (const auto& t : make_corpus(corpus)) {
        for (variant_kind v : grid.variants) {
            index_params params;
            params.kind = v;
            params.opt = grid.opt;
            if (v == variant_kind::simple || v == variant_kind::art_linear) {
                add(t, params);
            } else if (v == variant_kind::tradeoff) {
                for (std::uint32_t beta : grid.betas)
                    for (std::uint32_t k : grid.ks) {
                        params.beta = beta;
                        params.k = k;
                        add(t, params);
                    }
            } else {
                for (std::uint32_t k : grid.ks) {
                    if (k == 0) continue;
                    params.k = k;
                    add(t, params);
                }
            }
        }
    }
    return report;
}

inline constexpr const char* sweep_csv_header =
    "text,variant,beta,k,opt,n,sigma,stored_strings,vertex_count,bound_value,bound_satisfied,"
    "mean_lcp_queries,max_branch_events,status";

inline void write_csv(const sweep_report& report, std::ostream& out)
{
    out << "# seed=" << report.seed << '\n' << sweep_csv_header << '\n';
    auto opt = [](const auto& v) {
        std::ostringstream s;
        if (v) s << std::fixed << std::setprecision(3) << *v;
        return s.str();
    };
    auto count = [](const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : std::string(); };
    for (const auto& r : report.rows) {
        out << r.text << ',' << to_string(r.variant) << ',' << r.beta << ',' << r.k << ',' << r.opt << ',' << r.n
            << ',' << r.sigma << ',' << count(r.stored_strings) << ',' << count(r.vertex_count) << ','
            << count(r.bound_value) << ',' << (r.status == "ok" ? (r.bound_satisfied ? "true" : "false") : "") << ','
            << opt(r.mean_lcp_queries) << ',' << count(r.max_branch_events) << ',' << r.status << '\n';
    }
}

} // namespace wcidx
