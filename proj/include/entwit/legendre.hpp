#pragma once

#include <cstdint>
#include <vector>

#include "entwit/bipartite.hpp"
#include "entwit/random.hpp"

namespace entwit {

struct LegendreOptions {
    int restarts = 50;
    int max_iterations = 500;
    double rel_tol = 1e-11;
    std::uint64_t seed = kDefaultSeed;
    int threads = 1;
};

struct LegendreResult {
    double value = 0;
    PureState optimizer_psi;
    PureState optimizer_product;
    int restarts_used = 0;
    bool converged = false;
};

// Closed form of the transform sup_psi { <psi|X|psi> - E_G(psi) } for a
// two-qubit X diagonal in the Bell basis, given its two largest diagonal
// values lambda1 >= lambda2.
double bell_diag_legendre(double lambda1, double lambda2);

// See-saw estimate of the same transform for a general Hermitian X: the
// psi-step takes the top eigenvector of X + |phi><phi|, the phi-step the top
// Schmidt product of psi. Multi-start; the estimate never exceeds the true
// supremum.
LegendreResult legendre_gm(const BipartiteOperator& x, const LegendreOptions& opt = {});

struct BoundOptions {
    LegendreOptions inner;
    double outer_tol = 1e-9;
    int max_outer = 60;
    double initial_bracket = 8.0;
    double slope_cap = 1e6;
    double coord_xtol = 1e-10;
    bool disable_analytic = false;  // force the see-saw path (used by tests)
};

struct BoundResult {
    double epsilon = 0;
    double alpha_star = 0, beta_star = 0;
    int evaluations = 0;
    bool certified = false;  // transform evaluated in closed form throughout
    bool feasible = true;    // (c, l) inside the observables' spectral ranges
};

// Lower bound on the geometric measure compatible with the measured
// expectation values <C> = c, <L> = l: coordinate ascent over slopes
// (alpha, beta) of  alpha*c + beta*l - sup_psi{...}. The line-search bracket
// doubles whenever the optimum lands on its edge, up to slope_cap.
BoundResult eps_bound(double c, double l, const BipartiteOperator& c_op,
                      const BipartiteOperator& l_op, const BoundOptions& opt = {});

// The bound specialized to C = sigma_z x sigma_z, L = sigma_x x sigma_x:
// zero for |c| + |l| <= 1, else (1 - sqrt(1 - (|c|+|l|-1)^2)) / 2.
double xxzz_closed_form(double c, double l);

struct Fig1Row {
    double c = 0, l = 0, epsilon = 0;
};
// Closed-form bound tabulated on a resolution x resolution grid over
// [-1, 1]^2, c-major then l.
std::vector<Fig1Row> fig1_grid(int resolution);

// True when op is two-qubit and diagonal in the Bell basis within tol; the
// diagonal is written to *diag when given (order: phi+, phi-, psi+, psi-).
bool bell_diagonal(const BipartiteOperator& op, std::vector<double>* diag = nullptr,
                   double tol = 1e-12);

}  // namespace entwit
