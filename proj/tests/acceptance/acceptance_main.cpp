#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "nchodge/acceptance.hpp"

// Prints one PASS/FAIL line per criterion; exits nonzero if any fails.
int main(int argc, char** argv) {
    CLI::App app{"nchodge acceptance suite"};
    std::string scalar = "rational";
    nchodge::AcceptanceOptions opts;
    app.add_option("--scalar", scalar, "rational, gaussian or float");
    app.add_option("--seed", opts.seed, "seed for the randomized checks");
    app.add_option("--jobs", opts.jobs, "worker threads");
    CLI11_PARSE(app, argc, argv);

    try {
        opts.mode = nchodge::parse_scalar_mode(scalar);
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    opts.on_result = [](const nchodge::CriterionResult& r) {
        std::cout << nchodge::format_result(r) << '\n' << std::flush;
    };
    const auto results = nchodge::run_acceptance(opts);
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.passed ? 1 : 0;
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    return passed == results.size() ? 0 : 1;
}
