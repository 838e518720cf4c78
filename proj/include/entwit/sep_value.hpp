#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "entwit/bipartite.hpp"
#include "entwit/random.hpp"

namespace entwit {

struct SepOptions {
    int restarts = 64;
    int max_iterations = 500;
    double rel_tol = 1e-11;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
    int primal_restarts = 48;  // simplex starts for the two-product mixture
    double mu_cap = 1e3;
    double mu_xtol = 1e-10;
};

struct SepTerm {
    double weight = 1;
    Vec local_a, local_b;
};

struct SepOptResult {
    double value = 0;
    std::vector<SepTerm> optimizer;  // at most two product terms
    int restarts = 0;
    std::optional<double> certified_gap;  // dual minus primal, when both exist
    bool boundary = false;  // constraint sits on the edge of the reachable range
    bool ansatz = false;    // dims where separability certification is out of scope
    bool found = true;      // a feasible optimizer was located
};

struct DualScan {
    double mu_star = 0;
    double dual_value = 0;
    std::pair<double, double> bracket{0, 0};
    int iterations = 0;
    std::vector<std::pair<double, double>> trace;  // evaluated (mu, value)
    bool convex_trace_ok = true;
};

struct WitnessReport {
    double sep_min = 0;
    double min_eigenvalue = 0;
    bool is_witness = false;
};

// Largest <ab|X|ab> over product states: see-saw alternating the top
// eigenvector of the partially contracted operator on each side. The
// returned value never exceeds the true maximum.
SepOptResult sep_max(const BipartiteOperator& x, const SepOptions& opt = {});

// w is a witness when its separable minimum is non-negative (within 1e-9)
// while its spectrum dips below -1e-9.
WitnessReport is_witness(const BipartiteOperator& w, const SepOptions& opt = {});

struct ConstrainedSepResult {
    SepOptResult primal;
    DualScan dual;
};

// sup Tr(sigma L) over separable sigma with Tr(sigma C) = c. Dual:
// inf_mu [sep_max(L + mu C) - mu c], bracketed by doubling and minimized by
// golden section. Primal: two-product mixture with the weight eliminated by
// the constraint (extreme points of the sliced separable set involve at most
// two products).
ConstrainedSepResult constrained_sep_max(const BipartiteOperator& l_op,
                                         const BipartiteOperator& c_op, double c,
                                         const SepOptions& opt = {});

// Same maximization restricted to a single pure product state; quadratic
// penalty stages followed by projection onto the constraint and tangent
// polish. found = false when no product state meets the constraint.
SepOptResult pure_constrained_sep_max(const BipartiteOperator& l_op,
                                      const BipartiteOperator& c_op, double c,
                                      const SepOptions& opt = {});

struct HyperplaneResult {
    double value = 0;
    bool boundary = false;
    DualScan dual;
};

// min Tr(rho W) over all states with Tr(rho C) = c, via the concave dual
// max_mu [lambda_min(W - mu C) + mu c].
HyperplaneResult hyperplane_min(const BipartiteOperator& w, const BipartiteOperator& c_op,
                                double c);

struct UewReport {
    double c = 0;
    std::optional<double> l;
    double g_c = 0;          // constrained separable bound (dual value)
    double primal_value = 0;
    double certified_gap = 0;
    BipartiteOperator witness;  // g_c * identity - L
    double hyperplane_minimum = 0;
    std::optional<bool> detected;  // l > g_c, when l was supplied
};

UewReport uew_evaluate(const BipartiteOperator& l_op, const BipartiteOperator& c_op, double c,
                       std::optional<double> l, const SepOptions& opt = {});

}  // namespace entwit
