#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "entwit/analyzer.hpp"
#include "entwit/catalog.hpp"
#include "entwit/legendre.hpp"
#include "entwit/operator_io.hpp"
#include "entwit/random.hpp"
#include "entwit/sep_value.hpp"
#include "entwit/spectrum.hpp"

using namespace entwit;

namespace {

int failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

std::string sig(double v) { return io::format_sig(v); }

Mat random_hermitian2(Rng& rng) {
    Mat m(2, 2);
    m(0, 0) = rng.gaussian();
    m(1, 1) = rng.gaussian();
    const cplx off(rng.gaussian(), rng.gaussian());
    m(0, 1) = off;
    m(1, 0) = std::conj(off);
    return m;
}

// Pair of 2x2 observables that commute by construction: both diagonal in the
// eigenbasis of a third random Hermitian matrix.
std::pair<Mat, Mat> commuting_pair(Rng& rng) {
    const Spectrum s = eigh(random_hermitian2(rng));
    Mat d1(2, 2), d2(2, 2);
    d1(0, 0) = rng.gaussian();
    d1(1, 1) = rng.gaussian();
    d2(0, 0) = rng.gaussian();
    d2(1, 1) = rng.gaussian();
    const Mat& u = s.eigenvectors;
    return {u * d1 * dagger(u), u * d2 * dagger(u)};
}

// Criteria 1 and 2 share the grid of bound evaluations over [0,1]^2.
void criteria_1_2() {
    const CatalogEntry e = catalog("xxzz");
    const Timer t;
    double max_err = 0;
    double max_separable = 0;
    bool certified = true;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const double c = i / 20.0;
            const double l = j / 20.0;
            const BoundResult r = eps_bound(c, l, e.c_op, e.l_op);
            certified = certified && r.certified && r.feasible;
            max_err = std::max(max_err, std::abs(r.epsilon - xxzz_closed_form(c, l)));
            if (c + l <= 1.0 + 1e-12) max_separable = std::max(max_separable, std::abs(r.epsilon));
        }
    const double dt = t.seconds();

    const bool anchor = xxzz_closed_form(1, 1) == 0.5;
    report(1, anchor && certified && max_err < 1e-4 && dt < 10,
           "closed-form anchor exact, analytic bound within 1e-4 on the 21x21 grid (max err " +
               sig(max_err) + ", " + sig(dt) + " s)");
    report(2, max_separable < 1e-6,
           "bound vanishes on the separable half of the grid (max " + sig(max_separable) + ")");
}

ConstrainedSepResult criterion_3(const CatalogEntry& povm) {
    const Timer t;
    const ConstrainedSepResult r = constrained_sep_max(povm.l_op, povm.c_op, 0.6);
    const double dt = t.seconds();
    const double gap = r.primal.certified_gap ? std::abs(*r.primal.certified_gap) : 1.0;
    report(3,
           std::abs(r.dual.dual_value - 0.5223) <= 2e-3 && gap < 1e-4 && dt < 30,
           "constrained separable bound at c = 0.6 is " + sig(r.dual.dual_value) +
               " (primal-dual gap " + sig(gap) + ", " + sig(dt) + " s)");
    return r;
}

void criterion_4(const CatalogEntry& povm, double g_c) {
    Mat w = Mat::identity(4) * cplx(g_c, 0);
    w -= povm.l_op.matrix();
    const Timer t;
    const HyperplaneResult h = hyperplane_min(BipartiteOperator(Dims{2, 2}, w), povm.c_op, 0.6);
    const double dt = t.seconds();
    report(4, std::abs(h.value - (-0.016)) <= 2e-3 && dt < 5,
           "witness hyperplane minimum at c = 0.6 is " + sig(h.value) + " (" + sig(dt) + " s)");
}

void criterion_5(const CatalogEntry& povm) {
    Mat w = Mat::identity(4) * cplx(9.0 / 8, 0);
    w -= povm.c_op.matrix();
    w -= povm.l_op.matrix();
    const WitnessReport r = is_witness(BipartiteOperator(Dims{2, 2}, w));
    report(5,
           r.is_witness && r.sep_min >= -1e-9 && r.sep_min <= 1e-6 && r.min_eigenvalue < -1e-3,
           "witness from the summed effects: sep_min " + sig(r.sep_min) + ", min eigenvalue " +
               sig(r.min_eigenvalue));
}

void criterion_6() {
    const std::vector<double> grid = linspace(-5, 5, 201);
    bool ok = true;
    std::ostringstream detail;
    detail << "extremal eigenstates stay product along both counterexample scans (";
    for (const char* name : {"qutrit-counterexample", "ququart-counterexample"}) {
        const CatalogEntry e = catalog(name);
        const Timer t;
        const ScanResult scan = lambda_scan(e.c_op, e.l_op, grid);
        const double dt = t.seconds();
        double extremal = 0, interior = 0;
        for (const ScanRecord& rec : scan.per_lambda) {
            const std::size_t n = rec.negativities.size();
            extremal = std::max({extremal, rec.negativities.front(), rec.negativities.back()});
            for (std::size_t k = 1; k + 1 < n; ++k)
                interior = std::max(interior, rec.negativities[k]);
        }
        ok = ok && extremal < 1e-8 && interior > 0.01 && dt < 60;
        if (std::string(name) != "qutrit-counterexample") detail << "; ";
        detail << name << ": extremal " << sig(extremal) << ", interior " << sig(interior)
               << ", " << sig(dt) << " s";
    }
    detail << ")";
    report(6, ok, detail.str());
}

void criterion_7() {
    const CatalogEntry e = catalog("theorem1-counterexample");
    const SepOptResult pure = pure_constrained_sep_max(e.l_op, e.c_op, 0.5);
    const ConstrainedSepResult mixed = constrained_sep_max(e.l_op, e.c_op, 0.5);
    report(7,
           std::abs(pure.value - 0.625) <= 1e-4 &&
               std::abs(mixed.dual.dual_value - 1.0) <= 1e-6,
           "pure-product restriction gives " + sig(pure.value) +
               " while the separable mixture reaches " + sig(mixed.dual.dual_value));
}

void criterion_8() {
    const Timer t;
    Rng rng(kDefaultSeed);
    SepOptions fast;
    fast.restarts = 32;

    int useful = 0;
    bool verdicts_ok = true;
    while (useful < 100) {
        const Mat ca = random_hermitian2(rng);
        const Mat cb = random_hermitian2(rng);
        const Mat la = random_hermitian2(rng);
        const Mat lb = random_hermitian2(rng);
        if (commutator_norm(ca, la) <= 0.1 || commutator_norm(cb, lb) <= 0.1) continue;
        ++useful;
        const Verdict v = usefulness_verdict(ProductObservable(ca, cb), ProductObservable(la, lb));
        verdicts_ok = verdicts_ok && (v.kind == VerdictKind::UsefulCertified ||
                                      v.kind == VerdictKind::UsefulNumerical);
    }

    bool commuting_ok = true;
    double worst_margin = -1.0;
    for (int k = 0; k < 100; ++k) {
        const auto [ca, la] = commuting_pair(rng);
        const Mat cb = random_hermitian2(rng);
        const Mat lb = random_hermitian2(rng);
        const ProductObservable c(ca, cb), l(la, lb);
        const Verdict v = usefulness_verdict(c, l);
        commuting_ok = commuting_ok && v.kind == VerdictKind::UselessCommutator;

        // Witnesses from every slope pair stay blind: the extremal eigenvalue
        // never exceeds the product maximum.
        if (k < 10) {
            const BipartiteOperator cm = c.expand();
            const BipartiteOperator lm = l.expand();
            for (const auto& [alpha, beta] :
                 std::vector<std::pair<double, double>>{
                     {1, 0.3}, {1, -0.7}, {0.4, 1}, {-1, 1}, {1, 1}}) {
                Mat x = cm.matrix();
                x *= alpha;
                Mat xl = lm.matrix();
                xl *= beta;
                x += xl;
                const double top = eigh(x).eigenvalues.back();
                const double product = sep_max(BipartiteOperator(Dims{2, 2}, x), fast).value;
                worst_margin = std::max(worst_margin, top - product);
            }
        }
    }
    const double dt = t.seconds();
    report(8,
           verdicts_ok && commuting_ok && worst_margin < 1e-8 && dt < 300,
           "100 noncommuting pairs useful, 100 one-side-commuting pairs useless with blind "
           "witness families (worst margin " +
               sig(worst_margin) + ", " + sig(dt) + " s)");
}

void criterion_9() {
    const CatalogEntry e = catalog("xxzz");
    Mat sum = e.c_op.matrix();
    sum += e.l_op.matrix();
    const double two_obs = legendre_gm(BipartiteOperator(Dims{2, 2}, sum)).value;

    const double rt = 1.0 / std::sqrt(2.0);
    const Vec bell{rt, 0, 0, rt};
    const double projector =
        legendre_gm(BipartiteOperator(Dims{2, 2}, outer(bell, bell))).value;

    report(9,
           std::abs(two_obs - (1 + std::sqrt(5.0)) / 2) <= 1e-6 &&
               std::abs(projector - std::sqrt(2.0) / 2) <= 1e-6,
           "transform matches both closed forms (" + sig(two_obs) + ", " + sig(projector) + ")");
}

void criterion_10() {
    const double rt = 1.0 / std::sqrt(2.0);
    const bool noisy = joint_measurability_unbiased({rt, 0, 0}, {0, 0, rt});
    const bool sharp = joint_measurability_unbiased({1, 0, 0}, {0, 0, 1});
    report(10, noisy && !sharp,
           "noisy effect pair jointly measurable at the boundary, sharp pair incompatible");
}

}  // namespace

int main() {
    criteria_1_2();
    const CatalogEntry povm = catalog("noisy-pauli-povm");
    const ConstrainedSepResult r3 = criterion_3(povm);
    criterion_4(povm, r3.dual.dual_value);
    criterion_5(povm);
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();

    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
