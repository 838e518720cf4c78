#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entwit/random.hpp"

namespace entwit::cli {

struct Tolerances {
    double rel = 1e-11;    // see-saw relative improvement threshold
    double outer = 1e-9;   // slope-search improvement threshold
};

struct LambdaGrid {
    double min = -5;
    double max = 5;
    int steps = 201;
};

// Knobs shared by the subcommands. validate() enforces positive restarts and
// threads, tolerances strictly inside (0, 1), and a usable lambda grid.
struct RunConfig {
    std::uint64_t seed = kDefaultSeed;
    int restarts = 64;
    int threads = 1;
    Tolerances tolerances;
    LambdaGrid grid;
    std::string out_path;  // empty: stdout only
    bool json = false;

    void validate() const;  // throws ValidationError
};

// Exit codes: 0 success, 2 usage error, 3 validation error, 4 infeasible
// problem, 5 non-convergence. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entwit::cli
