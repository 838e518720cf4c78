#include "entwit/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "entwit/errors.hpp"
#include "entwit/spectrum.hpp"

namespace entwit {

namespace {

constexpr double kCommutatorFloor = 1e-10;
constexpr double kClusterGap = 1e-8;  // relative to the spectral diameter

double second_schmidt(const PureState& psi) {
    const auto sd = schmidt(psi);
    return sd.coefficients.size() > 1 ? sd.coefficients[1] : 0.0;
}

StateClass classify(const PureState& psi) {
    const double c2 = second_schmidt(psi);
    if (c2 < kProductTol) return StateClass::Product;
    if (c2 > kEntangledTol) return StateClass::Entangled;
    return StateClass::Indeterminate;
}

double pure_negativity(const PureState& psi) {
    return negativity(BipartiteOperator(psi.dims(), outer(psi.amplitudes(), psi.amplitudes())));
}

// Stable complex quadratic roots of a t^2 + b t + c = 0, plus a flag for the
// root at infinity (a = 0 direction).
struct QuadRoots {
    std::vector<cplx> finite;
    bool at_infinity = false;
};

QuadRoots solve_quadratic(cplx a, cplx b, cplx c) {
    QuadRoots out;
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (std::abs(a) <= 1e-14 * scale) {
        out.at_infinity = true;
        if (std::abs(b) > 1e-14 * scale) out.finite.push_back(-c / b);
        return out;
    }
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    const cplx q = (std::real(std::conj(b) * disc) >= 0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
    out.finite.push_back(q / a);
    if (std::abs(q) > 1e-300) out.finite.push_back(c / q);
    return out;
}

}  // namespace

const char* to_string(StateClass c) {
    switch (c) {
        case StateClass::Product: return "product";
        case StateClass::Entangled: return "entangled";
        case StateClass::Indeterminate: return "indeterminate";
        case StateClass::Degenerate: return "degenerate";
    }
    return "unknown";
}

const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::UselessCommutator: return "USELESS_COMMUTATOR";
        case VerdictKind::UsefulCertified: return "USEFUL_CERTIFIED";
        case VerdictKind::UsefulNumerical: return "USEFUL_NUMERICAL";
        case VerdictKind::UselessNumericalEvidence: return "USELESS_NUMERICAL_EVIDENCE";
        case VerdictKind::Inconclusive: return "INCONCLUSIVE";
    }
    return "unknown";
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw ValidationError("linspace: steps must be positive");
    if (steps == 1) return {lo};
    std::vector<double> g(steps);
    for (int i = 0; i < steps; ++i) g[i] = lo + (hi - lo) * i / (steps - 1);
    return g;
}

SpanProducts product_vectors_in_span(const PureState& psi1, const PureState& psi2) {
    const Dims dims = psi1.dims();
    if (dims != psi2.dims()) throw ValidationError("span test: state dims differ");
    SpanProducts out;
    if (std::min(dims.a, dims.b) == 1) {
        out.all_products = true;
        return out;
    }
    const Vec& v1 = psi1.amplitudes();
    const Vec& v2 = psi2.amplitudes();
    auto m1 = [&](std::size_t i, std::size_t k) { return v1[i * dims.b + k]; };
    auto m2 = [&](std::size_t i, std::size_t k) { return v2[i * dims.b + k]; };

    // 2x2 minors of x M1 + y M2 are quadratics in (x, y); a product vector
    // needs all of them to vanish. The best-conditioned one selects the
    // candidate roots, Schmidt classification validates them.
    cplx qa = 0, qb = 0, qc = 0;
    double best = 0;
    for (std::size_t r1 = 0; r1 < dims.a; ++r1)
        for (std::size_t r2 = r1 + 1; r2 < dims.a; ++r2)
            for (std::size_t c1 = 0; c1 < dims.b; ++c1)
                for (std::size_t c2 = c1 + 1; c2 < dims.b; ++c2) {
                    const cplx a = m1(r1, c1) * m1(r2, c2) - m1(r1, c2) * m1(r2, c1);
                    const cplx c = m2(r1, c1) * m2(r2, c2) - m2(r1, c2) * m2(r2, c1);
                    const cplx b = m1(r1, c1) * m2(r2, c2) + m2(r1, c1) * m1(r2, c2) -
                                   m1(r1, c2) * m2(r2, c1) - m2(r1, c2) * m1(r2, c1);
                    const double w = std::abs(a) + std::abs(b) + std::abs(c);
                    if (w > best) {
                        best = w;
                        qa = a;
                        qb = b;
                        qc = c;
                    }
                }
    if (best <= 1e-13) {
        out.all_products = true;
        return out;
    }

    std::vector<std::pair<cplx, cplx>> candidates;  // (x, y)
    const auto roots = solve_quadratic(qa, qb, qc);
    for (const cplx& t : roots.finite) candidates.push_back({t, 1.0});
    if (roots.at_infinity) candidates.push_back({1.0, 0.0});

    for (const auto& [x, y] : candidates) {
        Vec v(v1.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = x * v1[i] + y * v2[i];
        const double nn = norm(v);
        if (nn < 1e-10) continue;
        for (auto& z : v) z /= nn;
        PureState cand(dims, v);
        if (classify(cand) != StateClass::Product) continue;
        bool dup = false;
        for (const auto& kept : out.states)
            if (std::abs(inner(kept.amplitudes(), cand.amplitudes())) > 1.0 - 1e-9) dup = true;
        if (!dup) out.states.push_back(std::move(cand));
    }
    return out;
}

CommutatorVerdict commutator_verdict(const ProductObservable& c, const ProductObservable& l) {
    if (c.dims() != l.dims()) throw ValidationError("commutator verdict: factor dims differ");
    CommutatorVerdict v;
    v.norm_a = commutator_norm(c.factor_a(), l.factor_a());
    v.norm_b = commutator_norm(c.factor_b(), l.factor_b());
    v.side_a = v.norm_a > kCommutatorFloor;
    v.side_b = v.norm_b > kCommutatorFloor;
    return v;
}

ZeroPatternReport zero_pattern(const ProductObservable& c, const ProductObservable& l) {
    if (c.dims() != l.dims()) throw ValidationError("zero pattern: factor dims differ");
    const auto ea = eigh(c.factor_a());
    const auto eb = eigh(c.factor_b());
    const std::size_t da = c.dims().a, db = c.dims().b;

    // Product levels of C and their extremes. Ties are enumerated so any
    // labeling with distinct local indices on both sides can serve.
    double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
    for (std::size_t k = 0; k < da; ++k)
        for (std::size_t m = 0; m < db; ++m) {
            const double g = ea.eigenvalues[k] * eb.eigenvalues[m];
            gmin = std::min(gmin, g);
            gmax = std::max(gmax, g);
        }
    const double tie = 1e-12 * std::max({1.0, std::abs(gmin), std::abs(gmax)});
    std::vector<std::pair<std::size_t, std::size_t>> ground, top;
    for (std::size_t k = 0; k < da; ++k)
        for (std::size_t m = 0; m < db; ++m) {
            const double g = ea.eigenvalues[k] * eb.eigenvalues[m];
            if (g <= gmin + tie) ground.push_back({k, m});
            if (g >= gmax - tie) top.push_back({k, m});
        }

    ZeroPatternReport rep;
    rep.degenerate_labels = ground.size() > 1 || top.size() > 1;
    std::optional<std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>>
        pick;
    for (const auto& g : ground) {
        for (const auto& t : top)
            if (g.first != t.first && g.second != t.second) {
                pick = {g, t};
                break;
            }
        if (pick) break;
    }
    if (!pick) {
        rep.reason = "ground and top product levels share a local level on one side";
        return rep;
    }
    rep.applicable = true;
    const auto [g, t] = *pick;

    auto ordering = [](std::size_t d, std::size_t first, std::size_t last) {
        std::vector<std::size_t> ord{first};
        for (std::size_t k = 0; k < d; ++k)
            if (k != first && k != last) ord.push_back(k);
        ord.push_back(last);
        return ord;
    };
    auto transform = [](const Mat& factor, const Spectrum& spec,
                        const std::vector<std::size_t>& ord) {
        const std::size_t d = ord.size();
        Mat u(d, d);
        for (std::size_t col = 0; col < d; ++col)
            for (std::size_t row = 0; row < d; ++row) u(row, col) = spec.eigenvectors(row, ord[col]);
        return dagger(u) * factor * u;
    };
    rep.transformed_factor_a = transform(l.factor_a(), ea, ordering(da, g.first, t.first));
    rep.transformed_factor_b = transform(l.factor_b(), eb, ordering(db, g.second, t.second));

    const Mat& la = rep.transformed_factor_a;
    const Mat& lb = rep.transformed_factor_b;
    for (std::size_t k = 1; k < da; ++k)
        for (std::size_t m = 1; m < db; ++m)
            rep.max_ground_element =
                std::max(rep.max_ground_element, std::abs(la(k, 0) * lb(m, 0)));
    for (std::size_t k = 0; k + 1 < da; ++k)
        for (std::size_t m = 0; m + 1 < db; ++m)
            rep.max_top_element =
                std::max(rep.max_top_element, std::abs(la(k, da - 1) * lb(m, db - 1)));

    const double ptol = 1e-10 * std::max({1.0, max_abs(la), max_abs(lb)});
    auto column_clear = [&](const Mat& f, std::size_t col, std::size_t skip) {
        for (std::size_t row = 0; row < f.rows(); ++row)
            if (row != skip && std::abs(f(row, col)) > ptol) return false;
        return true;
    };
    rep.ground_isolated_a = column_clear(la, 0, 0);
    rep.ground_isolated_b = column_clear(lb, 0, 0);
    rep.top_isolated_a = column_clear(la, da - 1, da - 1);
    rep.top_isolated_b = column_clear(lb, db - 1, db - 1);
    rep.fits_isolation_pattern = (rep.ground_isolated_a || rep.ground_isolated_b) &&
                                 (rep.top_isolated_a || rep.top_isolated_b);
    return rep;
}

ScanResult lambda_scan(const BipartiteOperator& c, const BipartiteOperator& l,
                       const std::vector<double>& grid) {
    if (c.dims() != l.dims()) throw ValidationError("scan: operator dims differ");
    const Dims dims = c.dims();
    const std::size_t n = dims.total();
    ScanResult out;
    out.lambda_grid = grid;
    out.per_lambda.reserve(grid.size());

    for (const double lambda : grid) {
        Mat m = l.matrix();
        m *= lambda;
        m += c.matrix();
        const auto spec = eigh(m);
        ScanRecord rec;
        rec.eigenvalues = spec.eigenvalues;
        rec.classes.assign(n, StateClass::Indeterminate);
        rec.negativities.assign(n, 0.0);

        const double diameter = spec.eigenvalues.back() - spec.eigenvalues.front();
        const double gap_tol = kClusterGap * std::max(diameter, 1e-12);
        std::size_t k = 0;
        while (k < n) {
            std::size_t end = k + 1;
            while (end < n && spec.eigenvalues[end] - spec.eigenvalues[end - 1] <= gap_tol) ++end;
            const std::size_t size = end - k;
            if (size == 1) {
                const PureState psi(dims, spec.eigenvector(k));
                rec.classes[k] = classify(psi);
                rec.negativities[k] = pure_negativity(psi);
            } else if (size == 2) {
                const PureState u1(dims, spec.eigenvector(k));
                const PureState u2(dims, spec.eigenvector(k + 1));
                const auto sp = product_vectors_in_span(u1, u2);
                if (sp.all_products || sp.states.size() >= 2) {
                    rec.classes[k] = rec.classes[k + 1] = StateClass::Product;
                } else if (sp.states.size() == 1) {
                    // One product direction: an eigenbasis of the level is
                    // the product vector plus its in-span complement.
                    rec.classes[k] = StateClass::Product;
                    const Vec& root = sp.states.front().amplitudes();
                    const cplx x = inner(u1.amplitudes(), root);
                    const cplx y = inner(u2.amplitudes(), root);
                    Vec comp(root.size());
                    for (std::size_t i = 0; i < comp.size(); ++i)
                        comp[i] = -std::conj(y) * u1.amplitudes()[i] +
                                  std::conj(x) * u2.amplitudes()[i];
                    normalize(comp);
                    const PureState other(dims, comp);
                    rec.classes[k + 1] = classify(other);
                    rec.negativities[k + 1] = pure_negativity(other);
                } else {
                    for (std::size_t i = k; i < end; ++i) {
                        const PureState psi(dims, spec.eigenvector(i));
                        rec.classes[i] = StateClass::Entangled;
                        rec.negativities[i] = pure_negativity(psi);
                    }
                }
            } else {
                for (std::size_t i = k; i < end; ++i) {
                    rec.classes[i] = StateClass::Degenerate;
                    rec.negativities[i] = pure_negativity(PureState(dims, spec.eigenvector(i)));
                }
            }
            k = end;
        }
        out.per_lambda.push_back(std::move(rec));
    }
    return out;
}

namespace {

struct ExtremalHit {
    double alpha = 0, beta = 0;
    PureState state;
    double negativity = 0;
};

// Looks for an entangled extremal eigenstate of alpha C + beta L along a
// logarithmic ladder of slope ratios (both signs), plus the two axes.
std::optional<ExtremalHit> ladder_search(const BipartiteOperator& c, const BipartiteOperator& l,
                                         const AnalyzerOptions& opt) {
    const Dims dims = c.dims();
    std::vector<std::pair<double, double>> slopes;
    const double top = std::max({std::abs(opt.lambda_min), std::abs(opt.lambda_max), 1e-2});
    const int rungs = 40;
    for (int i = 0; i < rungs; ++i) {
        const double mag = 1e-3 * std::pow(top / 1e-3, double(i) / (rungs - 1));
        slopes.push_back({1.0, mag});
        slopes.push_back({1.0, -mag});
    }
    slopes.push_back({0.0, 1.0});
    slopes.push_back({0.0, -1.0});
    slopes.push_back({1.0, 0.0});
    slopes.push_back({-1.0, 0.0});

    for (const auto& [alpha, beta] : slopes) {
        Mat m = c.matrix();
        m *= alpha;
        Mat ml = l.matrix();
        ml *= beta;
        m += ml;
        const auto spec = eigh(m);
        const std::size_t n = spec.eigenvalues.size();
        const double diameter = spec.eigenvalues.back() - spec.eigenvalues.front();
        const double gap_tol = 1e-10 * std::max(diameter, 1e-12);
        for (const std::size_t idx : {std::size_t{0}, n - 1}) {
            const double gap = idx == 0 ? spec.eigenvalues[1] - spec.eigenvalues[0]
                                        : spec.eigenvalues[n - 1] - spec.eigenvalues[n - 2];
            if (gap <= gap_tol) continue;  // ambiguous extreme, skip this rung
            PureState psi(dims, spec.eigenvector(idx));
            const double neg = pure_negativity(psi);
            if (neg > opt.negativity_floor) return ExtremalHit{alpha, beta, std::move(psi), neg};
        }
    }
    return std::nullopt;
}

}  // namespace

Verdict usefulness_verdict(const ProductObservable& c, const ProductObservable& l,
                           const AnalyzerOptions& opt) {
    const auto cv = commutator_verdict(c, l);
    std::ostringstream ev;
    ev << "local commutator norms: A-side " << cv.norm_a << ", B-side " << cv.norm_b << ". ";
    if (!cv.side_a || !cv.side_b) {
        ev << "A commuting side forces product extremal eigenstates for every slope pair.";
        return {VerdictKind::UselessCommutator, std::nullopt, std::nullopt, 0.0, ev.str()};
    }

    const BipartiteOperator cm = c.expand();
    const BipartiteOperator lm = l.expand();
    const Dims dims = cm.dims();
    auto hit = ladder_search(cm, lm, opt);
    if (hit) {
        ev << "entangled extremal eigenstate at slopes (" << hit->alpha << ", " << hit->beta
           << ") with negativity " << hit->negativity << ". ";
    }

    const bool two_qubit = dims == Dims{2, 2};
    bool qubit_qutrit_certified = false;
    if (!two_qubit && dims.total() == 6) {
        const auto spec = eigh(cm.matrix());
        const double diameter = spec.eigenvalues.back() - spec.eigenvalues.front();
        const double tol = 1e-10 * std::max(diameter, 1e-12);
        qubit_qutrit_certified = spec.eigenvalues[1] - spec.eigenvalues[0] > tol &&
                                 spec.eigenvalues[5] - spec.eigenvalues[4] > tol;
        if (!qubit_qutrit_certified)
            ev << "degenerate extreme of the constraint observable: certification "
                  "unavailable in this regime. ";
    }

    if (two_qubit || qubit_qutrit_certified) {
        ev << "both local commutators nonzero certify usefulness at these dimensions.";
        if (hit)
            return {VerdictKind::UsefulCertified,
                    std::pair{hit->alpha, hit->beta},
                    std::move(hit->state),
                    hit->negativity,
                    ev.str()};
        ev << " (no witness slope located by the scan; see ladder parameters)";
        return {VerdictKind::UsefulCertified, std::nullopt, std::nullopt, 0.0, ev.str()};
    }

    if (hit)
        return {VerdictKind::UsefulNumerical,
                std::pair{hit->alpha, hit->beta},
                std::move(hit->state),
                hit->negativity,
                ev.str()};

    // Grid evidence across the scan range.
    const auto grid = linspace(opt.lambda_min, opt.lambda_max, opt.steps);
    const auto scan = lambda_scan(cm, lm, grid);
    bool ambiguous = false;
    double max_extremal_neg = 0;
    const std::size_t n = dims.total();
    for (const auto& rec : scan.per_lambda)
        for (const std::size_t idx : {std::size_t{0}, n - 1}) {
            max_extremal_neg = std::max(max_extremal_neg, rec.negativities[idx]);
            if (rec.classes[idx] == StateClass::Entangled) {
                // An extremal entangled state on the grid settles it.
                ev << "grid scan found an entangled extremal eigenstate.";
                return {VerdictKind::UsefulNumerical, std::nullopt, std::nullopt,
                        rec.negativities[idx], ev.str()};
            }
            if (rec.classes[idx] != StateClass::Product) ambiguous = true;
        }
    ev << "grid scan over [" << opt.lambda_min << ", " << opt.lambda_max << "] x " << opt.steps
       << " points: extremal eigenstates product throughout (max extremal negativity "
       << max_extremal_neg << ").";
    if (ambiguous) {
        ev << " some extremes were degenerate or indeterminate.";
        return {VerdictKind::Inconclusive, std::nullopt, std::nullopt, max_extremal_neg, ev.str()};
    }
    ev << " evidence only: no certification applies at these dimensions.";
    return {VerdictKind::UselessNumericalEvidence, std::nullopt, std::nullopt, max_extremal_neg,
            ev.str()};
}

DegenerateProjectionReport degenerate_projection(const BipartiteOperator& c,
                                                 const BipartiteOperator& l) {
    if (c.dims() != l.dims()) throw ValidationError("projection: operator dims differ");
    const auto spec = eigh(c.matrix());
    const std::size_t n = spec.eigenvalues.size();
    const double diameter = spec.eigenvalues.back() - spec.eigenvalues.front();
    const double gap_tol = kClusterGap * std::max(diameter, 1e-12);
    std::size_t end = 1;
    while (end < n && spec.eigenvalues[end] - spec.eigenvalues[end - 1] <= gap_tol) ++end;

    DegenerateProjectionReport rep;
    if (end != 2) {
        rep.reason = end == 1 ? "ground level is non-degenerate"
                              : "ground level is more than two-fold degenerate";
        return rep;
    }
    const PureState u1(c.dims(), spec.eigenvector(0));
    const PureState u2(c.dims(), spec.eigenvector(1));
    const auto sp = product_vectors_in_span(u1, u2);
    if (!sp.all_products && sp.states.size() < 2) {
        rep.reason = "ground level is not spanned by product vectors";
        return rep;
    }
    rep.applicable = true;

    Mat k(2, 2);
    const std::array<const PureState*, 2> u{&u1, &u2};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            k(i, j) = inner(u[i]->amplitudes(), l.matrix() * u[j]->amplitudes());
    const auto ks = eigh(k);
    rep.splitting_gap = ks.eigenvalues[1] - ks.eigenvalues[0];
    if (rep.splitting_gap <= 1e-12 * std::max(1.0, max_abs(k))) {
        // No splitting: the product vectors stay ground states.
        rep.entangled = false;
        rep.plp_ground = sp.states.empty() ? u1 : sp.states.front();
        rep.reason = "projected perturbation does not split the level";
        return rep;
    }
    const Vec g = ks.eigenvector(0);
    Vec chi(u1.amplitudes().size());
    for (std::size_t i = 0; i < chi.size(); ++i)
        chi[i] = g[0] * u1.amplitudes()[i] + g[1] * u2.amplitudes()[i];
    normalize(chi);
    PureState ground(c.dims(), chi);
    rep.entangled = classify(ground) == StateClass::Entangled;
    rep.plp_ground = std::move(ground);
    return rep;
}

bool joint_measurability_unbiased(const std::array<double, 3>& m,
                                  const std::array<double, 3>& n) {
    auto len = [](const std::array<double, 3>& v) {
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    };
    if (len(m) > 1 + 1e-12 || len(n) > 1 + 1e-12)
        throw ValidationError("joint measurability: Bloch vector longer than one");
    std::array<double, 3> plus{}, minus{};
    for (int i = 0; i < 3; ++i) {
        plus[i] = m[i] + n[i];
        minus[i] = m[i] - n[i];
    }
    return len(plus) + len(minus) <= 2 + 1e-12;
}

}  // namespace entwit
