#include "entwit/sep_value.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "entwit/errors.hpp"
#include "entwit/optimize.hpp"
#include "entwit/parallel.hpp"
#include "entwit/spectrum.hpp"

namespace entwit {

namespace {

constexpr double kFeasibilityMargin = 1e-9;

// (1 (x) <b|) X (1 (x) |b>)
Mat contract_b(const Mat& x, Dims dims, const Vec& b) {
    Mat m(dims.a, dims.a);
    for (std::size_t i = 0; i < dims.a; ++i)
        for (std::size_t j = 0; j < dims.a; ++j) {
            cplx s = 0;
            for (std::size_t k = 0; k < dims.b; ++k)
                for (std::size_t l = 0; l < dims.b; ++l)
                    s += std::conj(b[k]) * x(i * dims.b + k, j * dims.b + l) * b[l];
            m(i, j) = s;
        }
    return m;
}

// (<a| (x) 1) X (|a> (x) 1)
Mat contract_a(const Mat& x, Dims dims, const Vec& a) {
    Mat m(dims.b, dims.b);
    for (std::size_t k = 0; k < dims.b; ++k)
        for (std::size_t l = 0; l < dims.b; ++l) {
            cplx s = 0;
            for (std::size_t i = 0; i < dims.a; ++i)
                for (std::size_t j = 0; j < dims.a; ++j)
                    s += std::conj(a[i]) * x(i * dims.b + k, j * dims.b + l) * a[j];
            m(k, l) = s;
        }
    return m;
}

double product_expectation(const Mat& x, const Vec& a, const Vec& b) {
    return expectation(x, kron(a, b));
}

struct ProductRun {
    double value = -std::numeric_limits<double>::infinity();
    Vec a, b;
    bool converged = false;
};

ProductRun sep_restart(const BipartiteOperator& x, Rng rng, const SepOptions& opt) {
    const Dims dims = x.dims();
    ProductRun run;
    run.a = rng.haar_vector(dims.a);
    run.b = rng.haar_vector(dims.b);
    double value = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        const auto spec_a = eigh(contract_b(x.matrix(), dims, run.b));
        run.a = top_eigenvector(spec_a, run.a);
        const auto spec_b = eigh(contract_a(x.matrix(), dims, run.a));
        run.b = top_eigenvector(spec_b, run.b);
        const double next = spec_b.eigenvalues.back();
        if (iter > 0 && std::abs(next - value) <= opt.rel_tol * std::max(1.0, std::abs(next))) {
            value = next;
            run.converged = true;
            break;
        }
        value = next;
    }
    run.value = product_expectation(x.matrix(), run.a, run.b);
    return run;
}

std::vector<ProductRun> sep_all(const BipartiteOperator& x, const SepOptions& opt) {
    if (opt.restarts < 1 || opt.max_iterations < 1)
        throw ValidationError("sep_max: restarts and iterations must be positive");
    const Rng base(opt.seed);
    return run_indexed<ProductRun>(opt.restarts, opt.threads, [&](int r) {
        return sep_restart(x, base.fork(static_cast<std::uint64_t>(r)), opt);
    });
}

const ProductRun& best_run(const std::vector<ProductRun>& runs) {
    const ProductRun* best = &runs.front();
    for (const auto& run : runs)
        if (run.value > best->value) best = &run;
    return *best;
}

bool same_product(const Vec& a1, const Vec& b1, const Vec& a2, const Vec& b2) {
    return std::norm(inner(a1, a2)) * std::norm(inner(b1, b2)) > 1.0 - 1e-6;
}

BipartiteOperator shifted(const BipartiteOperator& l_op, const BipartiteOperator& c_op,
                          double mu) {
    Mat m = c_op.matrix();
    m *= mu;
    m += l_op.matrix();
    return {l_op.dims(), m};
}

BipartiteOperator negated(const BipartiteOperator& op) {
    Mat m = op.matrix();
    m *= -1.0;
    return {op.dims(), m};
}

// Reachable range of <C> over product states, with the achieving products.
struct ProductRange {
    double lo = 0, hi = 0;
    ProductRun lo_run, hi_run;
};

ProductRange product_range(const BipartiteOperator& c_op, const SepOptions& opt) {
    ProductRange r;
    r.hi_run = best_run(sep_all(c_op, opt));
    r.hi = r.hi_run.value;
    r.lo_run = best_run(sep_all(negated(c_op), opt));
    r.lo_run.value = -r.lo_run.value;
    r.lo = product_expectation(c_op.matrix(), r.lo_run.a, r.lo_run.b);
    r.lo_run.value = r.lo;
    return r;
}

bool curvature_consistent(std::vector<std::pair<double, double>> trace, bool convex) {
    std::sort(trace.begin(), trace.end());
    double scale = 1.0;
    for (const auto& [mu, v] : trace) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i + 2 < trace.size(); ++i) {
        const auto [x1, y1] = trace[i];
        const auto [x2, y2] = trace[i + 1];
        const auto [x3, y3] = trace[i + 2];
        if (x3 - x1 < 1e-6) continue;
        const double chord = y1 + (y3 - y1) * (x2 - x1) / (x3 - x1);
        const double defect = convex ? y2 - chord : chord - y2;
        if (defect > 1e-7 * scale) return false;
    }
    return true;
}

// Parameter packing for direct product-state searches: a complex pair
// (a, b) flattened to interleaved re/im.
struct ProductParams {
    Dims dims;

    std::size_t size() const { return 2 * (dims.a + dims.b); }

    bool unpack(const std::vector<double>& x, std::size_t base, Vec& a, Vec& b) const {
        a.assign(dims.a, 0);
        b.assign(dims.b, 0);
        for (std::size_t i = 0; i < dims.a; ++i)
            a[i] = cplx(x[base + 2 * i], x[base + 2 * i + 1]);
        for (std::size_t k = 0; k < dims.b; ++k)
            b[k] = cplx(x[base + 2 * dims.a + 2 * k], x[base + 2 * dims.a + 2 * k + 1]);
        if (norm(a) < 1e-8 || norm(b) < 1e-8) return false;
        normalize(a);
        normalize(b);
        return true;
    }

    void pack(std::vector<double>& x, std::size_t base, const Vec& a, const Vec& b) const {
        for (std::size_t i = 0; i < dims.a; ++i) {
            x[base + 2 * i] = a[i].real();
            x[base + 2 * i + 1] = a[i].imag();
        }
        for (std::size_t k = 0; k < dims.b; ++k) {
            x[base + 2 * dims.a + 2 * k] = b[k].real();
            x[base + 2 * dims.a + 2 * k + 1] = b[k].imag();
        }
    }
};

}  // namespace

SepOptResult sep_max(const BipartiteOperator& x, const SepOptions& opt) {
    const auto runs = sep_all(x, opt);
    const ProductRun& best = best_run(runs);
    SepOptResult out;
    out.value = best.value;
    out.optimizer = {{1.0, best.a, best.b}};
    out.restarts = opt.restarts;
    out.ansatz = x.dims().total() > 4;
    return out;
}

WitnessReport is_witness(const BipartiteOperator& w, const SepOptions& opt) {
    WitnessReport rep;
    rep.sep_min = -sep_max(negated(w), opt).value;
    rep.min_eigenvalue = eigh(w.matrix()).eigenvalues.front();
    rep.is_witness = rep.sep_min >= -1e-9 && rep.min_eigenvalue < -1e-9;
    return rep;
}

namespace {

// Two-product mixture with the mixing weight eliminated by the constraint
// <C> = c. Infeasible parameter points are pushed toward the constraint by a
// penalty proportional to the distance of c from [q_lo, q_hi].
struct MixtureObjective {
    const Mat* l;
    const Mat* c_m;
    double c;
    double penalty;
    ProductParams pp;

    struct Eval {
        bool valid = false;
        double value = -std::numeric_limits<double>::infinity();
        double p = 1, q1 = 0, q2 = 0, l1 = 0, l2 = 0;
        Vec a1, b1, a2, b2;
        double infeasibility = std::numeric_limits<double>::infinity();
    };

    Eval operator()(const std::vector<double>& x) const {
        Eval e;
        if (!pp.unpack(x, 0, e.a1, e.b1) || !pp.unpack(x, pp.size(), e.a2, e.b2)) return e;
        e.valid = true;
        e.q1 = product_expectation(*c_m, e.a1, e.b1);
        e.q2 = product_expectation(*c_m, e.a2, e.b2);
        e.l1 = product_expectation(*l, e.a1, e.b1);
        e.l2 = product_expectation(*l, e.a2, e.b2);
        const double lo = std::min(e.q1, e.q2), hi = std::max(e.q1, e.q2);
        e.infeasibility = std::max(0.0, c - hi) + std::max(0.0, lo - c);
        // Mixture at the constraint value clamped into [lo, hi]: continuous
        // across the feasibility edge, so the penalty has no jump to exploit.
        const double ct = std::clamp(c, lo, hi);
        if (std::abs(e.q1 - e.q2) < 1e-14)
            e.p = e.l1 >= e.l2 ? 1.0 : 0.0;
        else
            e.p = std::clamp((ct - e.q2) / (e.q1 - e.q2), 0.0, 1.0);
        e.value = e.p * e.l1 + (1.0 - e.p) * e.l2 - penalty * e.infeasibility;
        return e;
    }
};

SepOptResult rank2_primal(const BipartiteOperator& l_op, const BipartiteOperator& c_op, double c,
                          double mu_star, const ProductRange& range, const SepOptions& opt) {
    const Dims dims = l_op.dims();
    const ProductParams pp{dims};
    MixtureObjective obj{&l_op.matrix(), &c_op.matrix(), c,
                         10.0 * (spectral_norm(l_op.matrix()) + 1.0), pp};

    // Products on the face optimal for the dual slope, plus the range
    // extremes: mixing partners that straddle the constraint.
    std::vector<ProductRun> face;
    {
        const auto runs = sep_all(shifted(l_op, c_op, mu_star), opt);
        const double top = best_run(runs).value;
        for (const auto& run : runs) {
            if (run.value < top - 1e-6 * std::max(1.0, std::abs(top))) continue;
            bool dup = false;
            for (const auto& kept : face)
                if (same_product(run.a, run.b, kept.a, kept.b)) dup = true;
            if (!dup) face.push_back(run);
        }
    }
    std::vector<ProductRun> pool = face;
    pool.push_back(range.hi_run);
    pool.push_back(range.lo_run);

    std::vector<std::vector<double>> starts;
    const std::size_t n = 2 * pp.size();
    auto add_start = [&](const ProductRun& r1, const ProductRun& r2) {
        std::vector<double> x(n);
        pp.pack(x, 0, r1.a, r1.b);
        pp.pack(x, pp.size(), r2.a, r2.b);
        starts.push_back(std::move(x));
    };
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const double qi = product_expectation(c_op.matrix(), pool[i].a, pool[i].b);
            const double qj = product_expectation(c_op.matrix(), pool[j].a, pool[j].b);
            if (std::min(qi, qj) <= c + 1e-9 && c <= std::max(qi, qj) + 1e-9)
                add_start(pool[i], pool[j]);
        }
    add_start(range.hi_run, range.lo_run);
    Rng rng(opt.seed + 1);
    while (static_cast<int>(starts.size()) < opt.primal_restarts) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.gaussian();
        starts.push_back(std::move(x));
    }

    SimplexOptions so;
    so.max_evaluations = static_cast<int>(400 * n);
    auto neg = [&](const std::vector<double>& x) { return -obj(x).value; };
    std::vector<double> best_x;
    double best_val = -std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        const auto r = simplex_min(neg, s, so);
        if (-r.value > best_val) {
            best_val = -r.value;
            best_x = r.x;
        }
    }
    SimplexOptions polish;
    polish.max_evaluations = static_cast<int>(800 * n);
    polish.init_step = 0.02;
    polish.ftol = 1e-14;
    const auto r = simplex_min(neg, best_x, polish);
    if (-r.value > best_val) {
        best_val = -r.value;
        best_x = r.x;
    }

    const auto e = obj(best_x);
    SepOptResult out;
    out.restarts = opt.primal_restarts;
    out.ansatz = dims.total() > 4;
    if (!e.valid || e.infeasibility > 1e-9) {
        out.found = false;
        return out;
    }
    out.value = e.value;
    if (e.p > 1.0 - 1e-12) {
        out.optimizer = {{1.0, e.a1, e.b1}};
    } else if (e.p < 1e-12) {
        out.optimizer = {{1.0, e.a2, e.b2}};
    } else {
        out.optimizer = {{e.p, e.a1, e.b1}, {1.0 - e.p, e.a2, e.b2}};
    }
    return out;
}

}  // namespace

ConstrainedSepResult constrained_sep_max(const BipartiteOperator& l_op,
                                         const BipartiteOperator& c_op, double c,
                                         const SepOptions& opt) {
    if (l_op.dims() != c_op.dims())
        throw ValidationError("constrained maximization: operator dims differ");
    const ProductRange range = product_range(c_op, opt);
    if (c < range.lo - kFeasibilityMargin || c > range.hi + kFeasibilityMargin)
        throw InfeasibleError("constraint value outside the reachable product range");

    ConstrainedSepResult out;
    auto dual_objective = [&](double mu) {
        const double v = sep_max(shifted(l_op, c_op, mu), opt).value - mu * c;
        out.dual.trace.push_back({mu, v});
        return v;
    };

    const bool near_edge = std::min(c - range.lo, range.hi - c) <= kFeasibilityMargin;
    bool sealed = false;
    if (!near_edge) {
        const auto br = expand_bracket_min(dual_objective, -1.0, 1.0, opt.mu_cap);
        sealed = br.sealed;
        if (sealed) {
            const auto gm = golden_min(dual_objective, br.lo, br.hi, opt.mu_xtol);
            out.dual.mu_star = gm.x;
            out.dual.dual_value = gm.value;
            out.dual.bracket = {br.lo, br.hi};
            out.dual.iterations = br.evaluations + gm.evaluations;
        }
    }

    if (sealed) {
        out.primal = rank2_primal(l_op, c_op, c, out.dual.mu_star, range, opt);
    } else {
        // Constraint on (or numerically at) the edge of the reachable range:
        // every admissible state sits on the corresponding extremal face of
        // <C>, located by weighting C far above L.
        const double side = (c - range.lo <= range.hi - c) ? -1.0 : 1.0;
        const double big = 1e6 * (spectral_norm(l_op.matrix()) + 1.0);
        const auto face = best_run(sep_all(shifted(l_op, c_op, side * big), opt));
        const double value = product_expectation(l_op.matrix(), face.a, face.b);
        out.primal.value = value;
        out.primal.optimizer = {{1.0, face.a, face.b}};
        out.primal.restarts = opt.restarts;
        out.primal.boundary = true;
        out.primal.ansatz = l_op.dims().total() > 4;
        out.dual.mu_star = side * opt.mu_cap;
        out.dual.dual_value = value;
        out.dual.bracket = {-opt.mu_cap, opt.mu_cap};
    }
    out.primal.certified_gap = out.dual.dual_value - out.primal.value;
    out.dual.convex_trace_ok = curvature_consistent(out.dual.trace, true);
    return out;
}

SepOptResult pure_constrained_sep_max(const BipartiteOperator& l_op,
                                      const BipartiteOperator& c_op, double c,
                                      const SepOptions& opt) {
    if (l_op.dims() != c_op.dims())
        throw ValidationError("constrained maximization: operator dims differ");
    const ProductRange range = product_range(c_op, opt);
    if (c < range.lo - kFeasibilityMargin || c > range.hi + kFeasibilityMargin)
        throw InfeasibleError("constraint value outside the reachable product range");

    const Dims dims = l_op.dims();
    const ProductParams pp{dims};
    const std::size_t n = pp.size();
    const Mat& lm = l_op.matrix();
    const Mat& cm = c_op.matrix();

    auto value_of = [&](const std::vector<double>& x, const Mat& m) {
        Vec a, b;
        if (!pp.unpack(x, 0, a, b)) return -1e9;
        return product_expectation(m, a, b);
    };
    auto grad_of = [&](const std::vector<double>& x, const Mat& m) {
        std::vector<double> g(n);
        const double h = 1e-6;
        std::vector<double> y = x;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = x[i] + h;
            const double up = value_of(y, m);
            y[i] = x[i] - h;
            const double dn = value_of(y, m);
            y[i] = x[i];
            g[i] = (up - dn) / (2 * h);
        }
        return g;
    };
    auto project = [&](std::vector<double> x) -> std::optional<std::vector<double>> {
        for (int it = 0; it < 50; ++it) {
            const double err = value_of(x, cm) - c;
            if (std::abs(err) <= 1e-12) return x;
            const auto g = grad_of(x, cm);
            double g2 = 0;
            for (double v : g) g2 += v * v;
            if (g2 < 1e-16) return std::nullopt;
            for (std::size_t i = 0; i < n; ++i) x[i] -= err * g[i] / g2;
        }
        return std::abs(value_of(x, cm) - c) <= 1e-10 ? std::optional(x) : std::nullopt;
    };

    const double scale = std::max(1.0, spectral_norm(cm));
    Rng rng(opt.seed + 2);
    SepOptResult out;
    out.restarts = opt.primal_restarts;
    out.ansatz = dims.total() > 4;
    out.found = false;
    double best = -std::numeric_limits<double>::infinity();

    for (int r = 0; r < opt.primal_restarts; ++r) {
        std::vector<double> x(n);
        for (auto& v : x) v = rng.gaussian();
        for (const double w : {10.0, 100.0, 1e3, 1e4}) {
            const double wp = w * scale;
            auto pen = [&](const std::vector<double>& y) {
                const double q = value_of(y, cm);
                return -(value_of(y, lm) - wp * (q - c) * (q - c));
            };
            SimplexOptions so;
            so.max_evaluations = static_cast<int>(250 * n);
            x = simplex_min(pen, x, so).x;
        }
        auto proj = project(x);
        if (!proj) continue;
        x = *proj;
        // Ascent along the constraint's tangent space with re-projection.
        for (int it = 0; it < 120; ++it) {
            const auto gl = grad_of(x, lm);
            const auto gq = grad_of(x, cm);
            double qq = 0, lq = 0;
            for (std::size_t i = 0; i < n; ++i) {
                qq += gq[i] * gq[i];
                lq += gl[i] * gq[i];
            }
            if (qq < 1e-16) break;
            std::vector<double> d(n);
            double dn2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                d[i] = gl[i] - lq / qq * gq[i];
                dn2 += d[i] * d[i];
            }
            if (std::sqrt(dn2) < 1e-9) break;
            double t = 0.25;
            bool accepted = false;
            const double cur = value_of(x, lm);
            while (t > 1e-10) {
                std::vector<double> y = x;
                for (std::size_t i = 0; i < n; ++i) y[i] += t * d[i];
                const auto py = project(y);
                if (py && value_of(*py, lm) > cur + 1e-14) {
                    x = *py;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) break;
        }
        const double q = value_of(x, cm);
        if (std::abs(q - c) > 1e-8) continue;
        const double v = value_of(x, lm);
        if (v > best) {
            best = v;
            Vec a, b;
            pp.unpack(x, 0, a, b);
            out.value = v;
            out.optimizer = {{1.0, a, b}};
            out.found = true;
        }
    }
    return out;
}

HyperplaneResult hyperplane_min(const BipartiteOperator& w, const BipartiteOperator& c_op,
                                double c) {
    if (w.dims() != c_op.dims()) throw ValidationError("hyperplane: operator dims differ");
    const auto c_spec = eigh(c_op.matrix());
    const double lo = c_spec.eigenvalues.front(), hi = c_spec.eigenvalues.back();
    if (c < lo - kFeasibilityMargin || c > hi + kFeasibilityMargin)
        throw InfeasibleError("constraint value outside the observable's spectral range");

    HyperplaneResult out;
    auto dual = [&](double mu) {
        Mat m = c_op.matrix();
        m *= -mu;
        m += w.matrix();
        const double v = eigh(m).eigenvalues.front() + mu * c;
        out.dual.trace.push_back({mu, v});
        return v;
    };
    auto neg = [&](double mu) { return -dual(mu); };

    bool sealed = false;
    if (std::min(c - lo, hi - c) > kFeasibilityMargin) {
        const auto br = expand_bracket_min(neg, -1.0, 1.0, 1e3);
        sealed = br.sealed;
        if (sealed) {
            const auto gm = golden_min(neg, br.lo, br.hi, 1e-10);
            out.value = -gm.value;
            out.dual.mu_star = gm.x;
            out.dual.dual_value = out.value;
            out.dual.bracket = {br.lo, br.hi};
            out.dual.iterations = br.evaluations + gm.evaluations;
        }
    }
    if (!sealed) {
        // Constraint pinned to an extremal eigenvalue of C: admissible states
        // live in that eigenspace, where the minimum is a restricted ground
        // level.
        const double target = (c - lo <= hi - c) ? lo : hi;
        const double tol = 1e-8 * std::max(1.0, hi - lo);
        std::vector<Vec> basis;
        for (std::size_t k = 0; k < c_spec.eigenvalues.size(); ++k)
            if (std::abs(c_spec.eigenvalues[k] - target) <= tol)
                basis.push_back(c_spec.eigenvector(k));
        Mat block(basis.size(), basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j)
                block(i, j) = inner(basis[i], w.matrix() * basis[j]);
        out.value = eigh(block).eigenvalues.front();
        out.boundary = true;
        out.dual.mu_star = (target == lo) ? -1e3 : 1e3;
        out.dual.dual_value = out.value;
        out.dual.bracket = {-1e3, 1e3};
    }
    out.dual.convex_trace_ok = curvature_consistent(out.dual.trace, false);
    return out;
}

UewReport uew_evaluate(const BipartiteOperator& l_op, const BipartiteOperator& c_op, double c,
                       std::optional<double> l, const SepOptions& opt) {
    const auto con = constrained_sep_max(l_op, c_op, c, opt);
    const double g_c = con.dual.dual_value;
    Mat wm = Mat::identity(l_op.dims().total());
    wm *= g_c;
    wm -= l_op.matrix();
    BipartiteOperator witness(l_op.dims(), wm);
    const auto hyp = hyperplane_min(witness, c_op, c);
    UewReport rep{c,
                  l,
                  g_c,
                  con.primal.value,
                  con.primal.certified_gap.value_or(0.0),
                  std::move(witness),
                  hyp.value,
                  l.has_value() ? std::optional<bool>(*l > g_c) : std::nullopt};
    return rep;
}

}  // namespace entwit
