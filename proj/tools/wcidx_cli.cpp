// wcidx: build, query, verify and inspect gapped-pattern indexes.
//
// Exit codes: 0 ok, 1 usage or parse error, 2 budget, 3 resource limit or
// refusal, 4 I/O or corrupt index, 5 verify found a divergence.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <wcidx/wcidx.hpp>

namespace {

using namespace wcidx;

enum exit_code : int { ok = 0, usage = 1, budget = 2, refused = 3, io = 4, diverged = 5 };

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "'");
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw io_error("failed to read '" + path + "'");
    return s;
}

struct build_options {
    std::string variant = "simple";
    std::uint32_t beta = 2;
    std::uint32_t k = 1;
    std::optional<std::uint32_t> opt;
    std::uint32_t chi = 0;
    std::uint32_t g = 0;
    std::uint64_t guard = 0;
};

index_params to_params(const build_options& o)
{
    index_params p;
    p.kind = parse_variant(o.variant);
    p.beta = o.beta;
    p.k = o.k;
    p.opt = o.opt;
    p.chi = o.chi;
    p.g = o.g;
    p.guard = o.guard;
    return p;
}

void print_summary(const wildcard_index& idx, std::ostream& out)
{
    out << "variant=" << to_string(idx.kind()) << '\n'
        << "n=" << idx.text().size() << '\n'
        << "sigma=" << idx.text().sigma() << '\n'
        << "beta=" << idx.beta() << '\n'
        << "k=" << idx.k() << '\n'
        << "opt=" << idx.opt() << '\n'
        << "chi=" << idx.chi() << '\n'
        << "G=" << idx.g() << '\n'
        << "stored_strings=" << idx.stored_strings() << '\n'
        << "vertex_count=" << idx.vertex_count() << '\n'
        << "suffix_tree_leaves=" << idx.suffix_tree().leaf_count() << '\n';
    if (const auto* wt = idx.wildcard()) {
        out << "wildcard_levels=" << wt->k << '\n'
            << "light_height=" << wt->light_height << '\n'
            << "space_bound=" << space_bound(idx) << '\n';
    }
}

void print_stats(const query_stats& s, std::ostream& err)
{
    err << "lcp_queries=" << s.lcp_queries << '\n'
        << "branch_events=" << s.branch_events << '\n'
        << "locations_explored=" << s.locations_explored << '\n'
        << "active_location_peak=" << s.active_location_peak << '\n'
        << "heavy_hops_total=" << s.heavy_hops_total << '\n'
        << "predecessor_lookups=" << s.predecessor_lookups << '\n'
        << "dedup_removed=" << s.dedup_removed << '\n'
        << "routed_to=" << to_string(s.routed_to) << '\n'
        << "subpattern_starts=";
    for (std::size_t i = 0; i < s.subpattern_starts.size(); ++i) err << (i ? "," : "") << s.subpattern_starts[i];
    err << '\n';
}

void print_occurrences(const occurrence_set& occ, const std::string& format, std::ostream& out)
{
    if (format == "tabular") out << (occ.starts_only ? "start\n" : "start\tend\n");
    const char sep = format == "tabular" ? '\t' : ' ';
    for (const auto& o : occ.items) {
        out << o.start;
        if (!occ.starts_only) out << sep << o.end;
        out << '\n';
    }
}

std::optional<route> parse_route(const std::string& s)
{
    if (s.empty() || s == "auto") return std::nullopt;
    if (s == "special") return route::special;
    if (s == "fallback") return route::fallback;
    throw invalid_argument("unknown route '" + s + "' (auto, special, fallback)");
}

std::string describe(const occurrence& o, bool starts_only)
{
    return starts_only ? std::to_string(o.start) : std::to_string(o.start) + " " + std::to_string(o.end);
}

// Index result against the exhaustive matcher; prints the first divergence.
bool verify_one(const wildcard_index& idx, const gap_pattern& p, std::uint64_t cap, const query_options& qo)
{
    const auto got = idx.query(p, qo).occurrences;
    const auto want = oracle_match(idx.text(), p, cap).occurrences;
    if (got == want) return true;
    std::cout << "pattern " << render(p) << ": divergence\n";
    std::size_t i = 0;
    while (i < got.items.size() && i < want.items.size() && got.items[i] == want.items[i]) ++i;
    if (i < want.items.size() && (i == got.items.size() || want.items[i] < got.items[i]))
        std::cout << "missing " << describe(want.items[i], want.starts_only) << '\n';
    else if (i < got.items.size())
        std::cout << "unexpected " << describe(got.items[i], got.starts_only) << '\n';
    return false;
}

// Random patterns inside the index budget, read off the text.
gap_pattern random_budget_pattern(std::mt19937_64& rng, const wildcard_index& idx)
{
    const auto& t = idx.text();
    const bool budgeted = idx.kind() == variant_kind::tradeoff || idx.kind() == variant_kind::linear_time;
    const std::uint32_t max_a = budgeted ? idx.k() : 3, max_o = budgeted ? idx.opt() : 3;
    const std::size_t j = rng() % 4;
    std::vector<symbol_string> subs(j + 1);
    std::vector<gap_bounds> gaps(j);
    std::uint32_t a_left = max_a, o_left = max_o;
    position at = static_cast<position>(1 + rng() % t.size());
    for (std::size_t i = 0; i <= j; ++i) {
        const std::size_t len = 1 + rng() % 3;
        for (std::size_t r = 0; r < len; ++r) subs[i].push_back(at <= t.size() && rng() % 6 ? t[at++] : t.alphabet()[rng() % t.sigma()]);
        if (i < j) {
            const std::uint32_t a = std::min<std::uint32_t>(a_left, rng() % 3);
            const std::uint32_t o = std::min<std::uint32_t>(o_left, rng() % 3);
            a_left -= a;
            o_left -= o;
            gaps[i] = {a, a + o};
            at += a;
        }
    }
    return gap_pattern(subs, gaps);
}

int run(int argc, char** argv)
{
    CLI::App app{"Index a text and search it for patterns with wildcards and variable-length gaps."};
    app.require_subcommand(1);

    build_options bo;
    std::string text_path, index_path, pattern, format = "lines", route_name;
    bool with_stats = false;
    std::uint64_t cap = default_oracle_cap, random_count = 0, seed = 1;

    auto* build = app.add_subcommand("build", "Build an index over a text file and save it");
    build->add_option("text", text_path, "Text file, read verbatim")->required();
    build->add_option("index", index_path, "Output index file")->required();
    build->add_option("--variant", bo.variant, "simple | art | tradeoff | linear")
        ->check(CLI::IsMember({"simple", "art", "tradeoff", "linear"}));
    build->add_option("--beta", bo.beta, "tradeoff: branching bound, 1 <= beta < sigma");
    build->add_option("--k", bo.k, "tradeoff, linear: wildcard budget");
    build->add_option("--opt", bo.opt, "tradeoff, linear: optional-wildcard budget");
    build->add_option("--chi", bo.chi, "ART bottom-tree leaf bound (default ceil(log2 n))");
    build->add_option("--g", bo.g, "linear: special-index threshold G");
    build->add_option("--guard", bo.guard, "wildcard-tree stored-string guard");

    auto* query = app.add_subcommand("query", "Report the occurrences of a pattern");
    query->add_option("index", index_path, "Index file")->required();
    query->add_option("pattern", pattern, "Pattern, e.g. 'b*{0,4}cc*{3,5}d'")->required();
    query->add_flag("--stats", with_stats, "Print query counters to stderr");
    query->add_option("--format", format, "lines | tabular")->check(CLI::IsMember({"lines", "tabular"}));
    query->add_option("--route", route_name, "linear: auto | special | fallback");

    auto* verify = app.add_subcommand("verify", "Compare index answers with the exhaustive matcher");
    verify->add_option("index", index_path, "Index file")->required();
    verify->add_option("text", text_path, "Text file the index was built from")->required();
    auto* verify_pattern = verify->add_option("pattern", pattern, "Pattern to check");
    verify->add_option("--random", random_count, "Also check this many random in-budget patterns");
    verify->add_option("--seed", seed, "Seed for --random");
    verify->add_option("--cap", cap, "Largest gap-length product the matcher accepts");
    verify->add_option("--route", route_name, "linear: auto | special | fallback");

    auto* stats_cmd = app.add_subcommand("stats", "Describe an index");
    stats_cmd->add_option("index", index_path, "Index file")->required();

    corpus_spec corpus;
    sweep_grid grid;
    std::vector<std::string> variant_names;
    auto* sweep = app.add_subcommand("sweep", "Space and counter sweep over a generated corpus, as CSV");
    sweep->add_option("--seed", corpus.seed, "Corpus seed");
    sweep->add_option("--n", corpus.lengths, "Text lengths");
    sweep->add_option("--sigma", corpus.sigmas, "Alphabet sizes");
    sweep->add_option("--variant", variant_names, "Variants to include")
        ->check(CLI::IsMember({"simple", "art", "tradeoff", "linear"}));
    sweep->add_option("--beta", grid.betas, "tradeoff betas");
    sweep->add_option("--k", grid.ks, "wildcard budgets");
    sweep->add_option("--opt", grid.opt, "optional-wildcard budget");
    sweep->add_option("--queries", grid.queries_per_row, "Random queries per row");
    sweep->add_option("--guard", grid.guard, "wildcard-tree stored-string guard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    if (build->parsed()) {
        auto idx = wildcard_index(indexed_text(read_text_file(text_path)), to_params(bo));
        save_index_file(idx, index_path);
        print_summary(idx, std::cout);
        return ok;
    }
    if (stats_cmd->parsed()) {
        print_summary(load_index_file(index_path), std::cout);
        return ok;
    }
    if (query->parsed()) {
        const auto p = parse_pattern(pattern);
        const auto idx = load_index_file(index_path);
        const auto r = idx.query(p, query_options{parse_route(route_name)});
        print_occurrences(r.occurrences, format, std::cout);
        if (with_stats) print_stats(r.stats, std::cerr);
        return ok;
    }
    if (verify->parsed()) {
        const auto idx = load_index_file(index_path);
        const indexed_text given(read_text_file(text_path));
        if (!std::ranges::equal(given.with_sentinel(), idx.text().with_sentinel()))
            throw invalid_argument("text file does not match the text stored in the index");
        if (verify_pattern->count() == 0 && random_count == 0)
            throw invalid_argument("verify needs a pattern or --random");
        const query_options qo{parse_route(route_name)};
        std::uint64_t checked = 0;
        if (verify_pattern->count()) {
            if (!verify_one(idx, parse_pattern(pattern), cap, qo)) return diverged;
            ++checked;
        }
        std::mt19937_64 rng(seed);
        for (std::uint64_t i = 0; i < random_count; ++i) {
            const auto p = random_budget_pattern(rng, idx);
            if (qo.force_route == route::special && idx.route_for(p) != route::special) continue;
            if (!verify_one(idx, p, cap, qo)) return diverged;
            ++checked;
        }
        std::cout << "ok " << checked << " pattern" << (checked == 1 ? "" : "s") << '\n';
        return ok;
    }
    if (sweep->parsed()) {
        if (!variant_names.empty()) {
            grid.variants.clear();
            for (const auto& v : variant_names) grid.variants.push_back(parse_variant(v));
        }
        write_csv(run_sweep(corpus, grid), std::cout);
        return ok;
    }
    return usage;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (const budget_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return budget;
    } catch (const resource_error& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return refused;
    } catch (const version_error& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return refused;
    } catch (const format_error& e) {
        std::cerr << "error: corrupt index: " << e.what() << '\n';
        return io;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io;
    } catch (const wcidx::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
}
