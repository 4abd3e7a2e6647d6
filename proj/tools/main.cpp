#include <CLI11.hpp>

#include <cotspaces/driver.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using cotspaces::RunConfig;

std::vector<std::vector<std::uint64_t>> parse_blocks(const std::string& s, char outer) {
    std::vector<std::vector<std::uint64_t>> out;
    std::stringstream blocks(s);
    std::string block;
    while (std::getline(blocks, block, outer)) {
        std::vector<std::uint64_t> col;
        std::stringstream items(block);
        std::string item;
        while (std::getline(items, item, ',')) {
            if (item.empty()) throw CLI::ValidationError("empty entry in list: " + s);
            col.push_back(std::stoull(item));
        }
        if (!col.empty()) out.push_back(std::move(col));
    }
    if (out.empty()) throw CLI::ValidationError("empty grid: " + s);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cotspaces: exact cyclotomic verification of cotangent-value spans and the linear "
        "independence of Dirichlet L-values"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--precision", cfg.precision, "working precision in bits")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "output format: json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "parallel workers for suites (0 = all cores)")
        ->capture_default_str();
    app.add_option("--max-phi", cfg.max_phi, "refuse fields with phi(N) above this bound")
        ->capture_default_str();

    std::string grid_str, rows_str;

    auto* cot = app.add_subcommand("cot", "exact C_k(a,q) with route and numeric checks");
    cot->add_option("--k", cfg.k)->required();
    cot->add_option("--a", cfg.a)->required();
    cot->add_option("--q", cfg.q)->required();

    auto* chars = app.add_subcommand("chars", "character table mod q");
    chars->add_option("--q", cfg.q)->required();

    auto* gens = app.add_subcommand("gens", "generators of V+(q) or of a product space");
    gens->add_option("--k", cfg.k);
    gens->add_option("--q", cfg.q);
    gens->add_option("--ks", cfg.ks, "per-factor k values for products")->delimiter(',');
    gens->add_option("--qs", cfg.moduli, "per-factor moduli for products")->delimiter(',');

    auto* rank = app.add_subcommand("rank", "dimension of sum_j V+_k(q_j)");
    rank->add_option("--k", cfg.k)->required();
    rank->add_option("--q", cfg.moduli, "comma-separated moduli")->required()->delimiter(',');
    long expected_in = 0;
    auto* rank_expected =
        rank->add_option("--expected", expected_in, "override the expected value (assertion aid)");

    auto* kernel = app.add_subcommand("kernel", "kernel of the summation map");
    kernel->add_option("--k", cfg.k)->required();
    kernel->add_option("--q", cfg.moduli)->required()->delimiter(',');

    auto* intersect = app.add_subcommand("intersect", "dim of V+(q1) /\\ V+(q2)");
    intersect->add_option("--k", cfg.k)->required();
    intersect->add_option("--q1", cfg.q1)->required();
    intersect->add_option("--q2", cfg.q2)->required();

    auto* verify = app.add_subcommand("verify", "verify a named theorem instance");
    verify->add_option("id", cfg.sub,
                       "cor1|cor3|prop1|thm1|thm2|leminterm|propinterm|thm9|thm10")
        ->required();
    verify->add_option("--k", cfg.k);
    verify->add_option("--q", cfg.moduli)->delimiter(',');
    verify->add_option("--ks", cfg.ks)->delimiter(',');
    verify->add_option("--grid", grid_str, "columns q_j, e.g. 3,4;5,7");
    verify->add_option("--rows", rows_str, "rows q_{t,*}, e.g. 3,5|4");
    std::uint64_t m_in = 0;
    auto* verify_m = verify->add_option("--m", m_in, "K-side cyclotomic index");

    auto* suite = app.add_subcommand("suite", "run a named verification battery");
    suite->add_option("name", cfg.sub, "okada|cor1|kernels|products|theorems|numerics-bridge")
        ->required();

    auto* numeric = app.add_subcommand("numeric", "high-precision evaluations");
    numeric->add_option("fn", cfg.sub, "hurwitz|l|cot|bridge")->required();
    numeric->add_option("--k", cfg.k);
    numeric->add_option("--a", cfg.a);
    numeric->add_option("--q", cfg.q);
    numeric->add_option("--x", cfg.x, "rational argument, e.g. 1/2");
    unsigned chi_in = 0;
    auto* chi_opt = numeric->add_option("--char", chi_in, "character index (canonical order)");
    numeric->add_option("--kind", cfg.bridge_kind, "reflection|rep|l-value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return cotspaces::kExitUsage;
    }

    for (auto* sub : {cot, chars, gens, rank, kernel, intersect, verify, suite, numeric}) {
        if (sub->parsed()) cfg.command = sub->get_name();
    }
    if (rank_expected->count() > 0) cfg.expected_override = expected_in;
    if (verify_m->count() > 0) cfg.m = m_in;
    if (chi_opt->count() > 0) cfg.char_index = chi_in;
    try {
        if (!grid_str.empty()) cfg.grid = parse_blocks(grid_str, ';');
        if (!rows_str.empty()) cfg.rows = parse_blocks(rows_str, '|');
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return cotspaces::kExitUsage;
    }

    try {
        cotspaces::RunResult result = cotspaces::run(cfg);
        std::cout << result.output;
        return result.exit_code;
    } catch (const cotspaces::PhiGuardError& e) {
        std::cerr << e.what() << "\n";
        return cotspaces::kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return cotspaces::kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << e.what() << "\n";
        return cotspaces::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return cotspaces::kExitInternal;
    }
}
