#include "entwit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace entwit {

namespace {
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
}

ScalarOpt golden_min(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    ScalarOpt best;
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    best.evaluations = 2;
    while (b - a > xtol && best.evaluations < 400) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
        ++best.evaluations;
    }
    if (f1 <= f2) {
        best.x = x1;
        best.value = f1;
    } else {
        best.x = x2;
        best.value = f2;
    }
    return best;
}

ScalarOpt golden_max(const std::function<double(double)>& f, double lo, double hi, double xtol) {
    ScalarOpt r = golden_min([&](double x) { return -f(x); }, lo, hi, xtol);
    r.value = -r.value;
    return r;
}

Bracket expand_bracket_min(const std::function<double(double)>& f, double lo, double hi,
                           double cap) {
    Bracket br{lo, hi, false, 0};
    for (;;) {
        const double width = br.hi - br.lo;
        const double h = 1e-4 * width;
        const double slope_lo = (f(br.lo + h) - f(br.lo)) / h;
        const double slope_hi = (f(br.hi) - f(br.hi - h)) / h;
        br.evaluations += 4;
        if (slope_lo < 0 && slope_hi > 0) {
            br.sealed = true;
            return br;
        }
        bool grew = false;
        if (slope_lo >= 0 && br.lo > -cap) {
            br.lo = std::max(-cap, br.lo - width);
            grew = true;
        }
        if (slope_hi <= 0 && br.hi < cap) {
            br.hi = std::min(cap, br.hi + width);
            grew = true;
        }
        if (!grew) return br;
    }
}

SimplexOpt simplex_min(const std::function<double(const std::vector<double>&)>& f,
                       std::vector<double> x0, const SimplexOptions& opt) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += opt.init_step;
    int evals = 0;
    for (std::size_t i = 0; i <= n; ++i) vals[i] = f(pts[i]), ++evals;

    std::vector<std::size_t> idx(n + 1);
    auto order = [&] {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    };
    auto centroid = [&]() {
        std::vector<double> c(n, 0.0);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < n; ++j) c[j] += pts[idx[r]][j] / double(n);
        return c;
    };
    auto blend = [&](const std::vector<double>& c, const std::vector<double>& p, double t) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = c[j] + t * (c[j] - p[j]);
        return x;
    };

    SimplexOpt out;
    while (evals < opt.max_evaluations) {
        order();
        const std::size_t worst = idx[n];
        if (std::abs(vals[idx[n]] - vals[idx[0]]) <=
            opt.ftol * std::max(1.0, std::abs(vals[idx[0]]))) {
            out.converged = true;
            break;
        }
        const auto c = centroid();
        auto xr = blend(c, pts[worst], 1.0);
        const double fr = f(xr);
        ++evals;
        if (fr < vals[idx[0]]) {
            auto xe = blend(c, pts[worst], 2.0);
            const double fe = f(xe);
            ++evals;
            if (fe < fr) {
                pts[worst] = std::move(xe);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(xr);
                vals[worst] = fr;
            }
        } else if (fr < vals[idx[n - 1]]) {
            pts[worst] = std::move(xr);
            vals[worst] = fr;
        } else {
            auto xc = blend(c, pts[worst], fr < vals[worst] ? 0.5 : -0.5);
            const double fc = f(xc);
            ++evals;
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = std::move(xc);
                vals[worst] = fc;
            } else {
                for (std::size_t r = 1; r <= n; ++r) {
                    for (std::size_t j = 0; j < n; ++j)
                        pts[idx[r]][j] = 0.5 * (pts[idx[r]][j] + pts[idx[0]][j]);
                    vals[idx[r]] = f(pts[idx[r]]);
                    ++evals;
                }
            }
        }
    }
    order();
    out.x = pts[idx[0]];
    out.value = vals[idx[0]];
    out.evaluations = evals;
    return out;
}

}  // namespace entwit
