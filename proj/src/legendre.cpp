#include "entwit/legendre.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "entwit/errors.hpp"
#include "entwit/optimize.hpp"
#include "entwit/parallel.hpp"
#include "entwit/spectrum.hpp"

namespace entwit {

namespace {

struct SeesawRun {
    double value = -std::numeric_limits<double>::infinity();
    Vec psi, a, b;
    bool converged = false;
};

SeesawRun legendre_restart(const BipartiteOperator& x, Rng rng, int max_iterations,
                           double rel_tol) {
    const Dims dims = x.dims();
    SeesawRun run;
    run.a = rng.haar_vector(dims.a);
    run.b = rng.haar_vector(dims.b);
    Vec phi = kron(run.a, run.b);
    Vec psi = phi;
    double value = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iterations; ++iter) {
        Mat h = x.matrix();
        h += outer(phi, phi);
        const auto spec = eigh(h);
        psi = top_eigenvector(spec, psi);
        const double next = spec.eigenvalues.back() - 1.0;
        const auto sd = schmidt(PureState(dims, psi));
        run.a = sd.basis_a.front();
        run.b = sd.basis_b.front();
        phi = kron(run.a, run.b);
        if (iter > 0 && std::abs(next - value) <= rel_tol * std::max(1.0, std::abs(next))) {
            value = next;
            run.converged = true;
            break;
        }
        value = next;
    }
    // Attained objective at the final pair, so the reported value is exact
    // for the returned optimizers.
    const auto sd = schmidt(PureState(dims, psi));
    const double c1 = sd.coefficients.front();
    run.psi = psi;
    run.value = expectation(x.matrix(), psi) + c1 * c1 - 1.0;
    return run;
}

}  // namespace

double bell_diag_legendre(double lambda1, double lambda2) {
    if (lambda1 < lambda2)
        throw ValidationError("bell transform: diagonal values must be ordered");
    const double d = lambda1 - lambda2;
    return 0.5 * (lambda1 + lambda2 - 1.0) + 0.5 * std::sqrt(d * d + 1.0);
}

LegendreResult legendre_gm(const BipartiteOperator& x, const LegendreOptions& opt) {
    if (opt.restarts < 1 || opt.max_iterations < 1)
        throw ValidationError("legendre_gm: restarts and iterations must be positive");
    const Rng base(opt.seed);
    const auto runs = run_indexed<SeesawRun>(opt.restarts, opt.threads, [&](int r) {
        return legendre_restart(x, base.fork(static_cast<std::uint64_t>(r)), opt.max_iterations,
                                opt.rel_tol);
    });
    const SeesawRun* best = &runs.front();
    for (const auto& run : runs)
        if (run.value > best->value) best = &run;
    return {best->value, PureState(x.dims(), best->psi),
            product_state(x.dims(), best->a, best->b), opt.restarts, best->converged};
}

bool bell_diagonal(const BipartiteOperator& op, std::vector<double>* diag, double tol) {
    if (op.dims() != Dims{2, 2}) return false;
    const double rt = 1.0 / std::sqrt(2.0);
    const std::array<Vec, 4> bell = {
        Vec{rt, 0, 0, rt},
        Vec{rt, 0, 0, -rt},
        Vec{0, rt, rt, 0},
        Vec{0, rt, -rt, 0},
    };
    const double scale = std::max(1.0, max_abs(op.matrix()));
    std::vector<double> d(4);
    for (int i = 0; i < 4; ++i) {
        const Vec col = op.matrix() * bell[i];
        for (int j = 0; j < 4; ++j) {
            const cplx e = inner(bell[j], col);
            if (i == j)
                d[i] = e.real();
            else if (std::abs(e) > tol * scale)
                return false;
        }
    }
    if (diag) *diag = std::move(d);
    return true;
}

namespace {

// Transform evaluator for the slope search: closed form on the Bell-diagonal
// path, see-saw otherwise.
struct TransformEval {
    bool analytic = false;
    std::vector<double> c_diag, l_diag;
    const BipartiteOperator* c_op = nullptr;
    const BipartiteOperator* l_op = nullptr;
    LegendreOptions inner;
    int evaluations = 0;

    double operator()(double alpha, double beta) {
        ++evaluations;
        if (analytic) {
            std::array<double, 4> v;
            for (int k = 0; k < 4; ++k) v[k] = alpha * c_diag[k] + beta * l_diag[k];
            std::sort(v.begin(), v.end(), std::greater<>());
            return bell_diag_legendre(v[0], v[1]);
        }
        Mat m = c_op->matrix();
        m *= alpha;
        Mat lm = l_op->matrix();
        lm *= beta;
        m += lm;
        return legendre_gm(BipartiteOperator(c_op->dims(), m), inner).value;
    }
};

}  // namespace

BoundResult eps_bound(double c, double l, const BipartiteOperator& c_op,
                      const BipartiteOperator& l_op, const BoundOptions& opt) {
    if (c_op.dims() != l_op.dims()) throw ValidationError("eps_bound: operator dims differ");

    TransformEval legendre;
    legendre.c_op = &c_op;
    legendre.l_op = &l_op;
    legendre.inner = opt.inner;
    legendre.analytic = !opt.disable_analytic && bell_diagonal(c_op, &legendre.c_diag) &&
                        bell_diagonal(l_op, &legendre.l_diag);

    BoundResult out;
    out.certified = legendre.analytic;
    {
        const auto sc = eigh(c_op.matrix()).eigenvalues;
        const auto sl = eigh(l_op.matrix()).eigenvalues;
        out.feasible = c >= sc.front() - 1e-9 && c <= sc.back() + 1e-9 &&
                       l >= sl.front() - 1e-9 && l <= sl.back() + 1e-9;
    }

    auto objective = [&](double alpha, double beta) {
        return alpha * c + beta * l - legendre(alpha, beta);
    };

    // The objective is concave with kinks (an affine term minus a sup of
    // affine functions), and coordinate ascent stalls on kinks where no
    // single-axis move improves. A simplex stage picks the region first.
    double alpha = 0, beta = 0;
    double value = objective(alpha, beta);
    {
        SimplexOptions so;
        so.max_evaluations = 1600;
        so.ftol = 1e-13;
        so.init_step = 0.5 * opt.initial_bracket;
        const double s = 0.25 * opt.initial_bracket;
        const double starts[5][2] = {{0, 0}, {s, s}, {-s, s}, {s, -s}, {-s, -s}};
        for (const auto& st : starts) {
            const auto r = simplex_min(
                [&](const std::vector<double>& x) { return -objective(x[0], x[1]); },
                {st[0], st[1]}, so);
            // Slopes beyond the cap only add cancellation noise.
            const double a = std::clamp(r.x[0], -opt.slope_cap, opt.slope_cap);
            const double b = std::clamp(r.x[1], -opt.slope_cap, opt.slope_cap);
            const double v = objective(a, b);
            if (v > value) {
                value = v;
                alpha = a;
                beta = b;
            }
        }
    }
    double width = opt.initial_bracket;
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        const double before = value;
        for (int coord = 0; coord < 2; ++coord) {
            double& x = coord == 0 ? alpha : beta;
            const auto line = [&](double t) {
                return coord == 0 ? objective(t, beta) : objective(alpha, t);
            };
            double w = width;
            for (;;) {
                const double lo = std::max(x - w, -opt.slope_cap);
                const double hi = std::min(x + w, opt.slope_cap);
                const auto r = golden_max(line, lo, hi, opt.coord_xtol);
                const bool on_edge = std::min(r.x - lo, hi - r.x) < 0.02 * (hi - lo);
                if (on_edge && w < opt.slope_cap) {
                    w = std::min(4 * w, opt.slope_cap);
                    continue;
                }
                x = r.x;
                value = r.value;
                break;
            }
        }
        width = std::max(width / 2, 64 * opt.coord_xtol);
        if (outer > 0 && value - before <= opt.outer_tol) break;
    }

    // Zero slopes are always admissible, so the bound is never negative.
    out.epsilon = std::max(value, 0.0);
    out.alpha_star = alpha;
    out.beta_star = beta;
    out.evaluations = legendre.evaluations;
    return out;
}

double xxzz_closed_form(double c, double l) {
    if (std::abs(c) > 1 + 1e-12 || std::abs(l) > 1 + 1e-12)
        throw ValidationError("closed form: expectation values must lie in [-1, 1]");
    const double s = std::min(1.0, std::abs(c)) + std::min(1.0, std::abs(l));
    if (s <= 1.0) return 0.0;
    const double r = s - 1.0;
    return 0.5 * (1.0 - std::sqrt(1.0 - r * r));
}

std::vector<Fig1Row> fig1_grid(int resolution) {
    if (resolution < 2) throw ValidationError("grid: resolution must be at least 2");
    std::vector<Fig1Row> rows;
    rows.reserve(static_cast<std::size_t>(resolution) * resolution);
    for (int i = 0; i < resolution; ++i) {
        const double c = -1.0 + 2.0 * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double l = -1.0 + 2.0 * j / (resolution - 1);
            rows.push_back({c, l, xxzz_closed_form(c, l)});
        }
    }
    return rows;
}

}  // namespace entwit
