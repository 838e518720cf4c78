#pragma once

#include <functional>
#include <vector>

namespace entwit {

struct ScalarOpt {
    double x = 0;
    double value = 0;
    int evaluations = 0;
};

// Golden-section minimum of a unimodal f on [lo, hi], run until the bracket
// width drops below xtol. Returns the best evaluated point.
ScalarOpt golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol);
ScalarOpt golden_max(const std::function<double(double)>& f, double lo, double hi, double xtol);

struct Bracket {
    double lo = 0, hi = 0;
    bool sealed = false;  // one-sided slopes straddle an interior minimum
    int evaluations = 0;
};

// Doubles [lo, hi] outward until the secant slopes at the ends change sign
// (interior minimum bracketed) or |mu| reaches cap.
Bracket expand_bracket_min(const std::function<double(double)>& f, double lo, double hi,
                           double cap);

struct SimplexOpt {
    std::vector<double> x;
    double value = 0;
    int evaluations = 0;
    bool converged = false;
};

struct SimplexOptions {
    int max_evaluations = 6000;
    double ftol = 1e-12;
    double init_step = 0.5;
};

// Nelder-Mead minimum from x0. Derivative-free; adequate for the smooth
// low-dimensional product-state parametrizations used here.
SimplexOpt simplex_min(const std::function<double(const std::vector<double>&)>& f,
                       std::vector<double> x0, const SimplexOptions& opt = {});

}  // namespace entwit
