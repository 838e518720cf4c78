#include "entwit/bipartite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entwit/errors.hpp"
#include "entwit/spectrum.hpp"

namespace entwit {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kSingularFloor = 1e-13;

// One-sided Jacobi: w's columns are orthogonalized in place by right
// rotations; returns the accumulated unitary.
Mat orthogonalize_columns(Mat& w) {
    const std::size_t m = w.cols();
    Mat r = Mat::identity(m);
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                double gjj = 0, gkk = 0;
                cplx gjk = 0;
                for (std::size_t i = 0; i < w.rows(); ++i) {
                    gjj += std::norm(w(i, j));
                    gkk += std::norm(w(i, k));
                    gjk += std::conj(w(i, j)) * w(i, k);
                }
                if (std::norm(gjk) <= 1e-28 * gjj * gkk || std::abs(gjk) < 1e-300) continue;
                rotated = true;
                const auto [c, s, phase] = detail::make_rotation(gjj, gkk, gjk);
                const cplx ujk = s * phase;
                const cplx ukj = -s * std::conj(phase);
                for (std::size_t i = 0; i < w.rows(); ++i) {
                    const cplx wj = w(i, j), wk = w(i, k);
                    w(i, j) = wj * c + wk * ukj;
                    w(i, k) = wj * ujk + wk * c;
                }
                for (std::size_t i = 0; i < m; ++i) {
                    const cplx rj = r(i, j), rk = r(i, k);
                    r(i, j) = rj * c + rk * ukj;
                    r(i, k) = rj * ujk + rk * c;
                }
            }
        if (!rotated) break;
    }
    return r;
}

Vec column(const Mat& m, std::size_t j) {
    Vec v(m.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = m(i, j);
    return v;
}

// Extends an orthonormal set to the requested size with standard-basis
// residuals, largest residual first.
void complete_basis(std::vector<Vec>& set, std::size_t d, std::size_t want) {
    while (set.size() < want) {
        Vec best;
        double best_norm = -1;
        for (std::size_t e = 0; e < d; ++e) {
            Vec w(d);
            w[e] = 1.0;
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& x : set) {
                    const cplx c = inner(x, w);
                    for (std::size_t i = 0; i < d; ++i) w[i] -= c * x[i];
                }
            const double n = norm(w);
            if (n > best_norm) {
                best_norm = n;
                best = std::move(w);
            }
        }
        for (auto& z : best) z /= best_norm;
        set.push_back(std::move(best));
    }
}

}  // namespace

BipartiteOperator::BipartiteOperator(Dims dims, const Mat& entries) : dims_(dims) {
    if (dims.a == 0 || dims.b == 0) throw ValidationError("operator: zero subsystem dimension");
    if (!entries.square() || entries.rows() != dims.total())
        throw ValidationError("operator: matrix shape does not match dims");
    const double scale = std::max(1.0, max_abs(entries));
    if (hermiticity_defect(entries) > kHermitianTol * scale)
        throw ValidationError("operator: matrix not Hermitian");
    m_ = hermitize(entries);
}

ProductObservable::ProductObservable(const Mat& factor_a, const Mat& factor_b) {
    for (const Mat* f : {&factor_a, &factor_b}) {
        if (!f->square()) throw ValidationError("observable factor: matrix not square");
        if (hermiticity_defect(*f) > kHermitianTol * std::max(1.0, max_abs(*f)))
            throw ValidationError("observable factor: matrix not Hermitian");
    }
    a_ = hermitize(factor_a);
    b_ = hermitize(factor_b);
}

BipartiteOperator ProductObservable::expand() const {
    return {dims(), kron(a_, b_)};
}

PureState::PureState(Dims dims, Vec amplitudes) : dims_(dims), v_(std::move(amplitudes)) {
    if (v_.size() != dims.total()) throw ValidationError("state: length does not match dims");
    const double n = norm(v_);
    if (std::abs(n - 1.0) > 1e-12) throw ValidationError("state: vector not normalized");
    for (auto& z : v_) z /= n;
}

PureState product_state(Dims dims, Vec local_a, Vec local_b) {
    if (local_a.size() != dims.a || local_b.size() != dims.b)
        throw ValidationError("product state: factor lengths do not match dims");
    normalize(local_a);
    normalize(local_b);
    return {dims, kron(local_a, local_b)};
}

BipartiteOperator partial_transpose(const BipartiteOperator& rho) {
    const auto [da, db] = rho.dims();
    const Mat& m = rho.matrix();
    Mat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j)
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    r(i * db + k, j * db + l) = m(i * db + l, j * db + k);
    return {rho.dims(), r};
}

SchmidtData schmidt(const PureState& psi) {
    const auto [da, db] = psi.dims();
    const Vec& amp = psi.amplitudes();
    Mat m(da, db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t k = 0; k < db; ++k) m(i, k) = amp[i * db + k];

    // One-sided Jacobi on whichever reshaping has fewer columns. With the
    // amplitude matrix m = u diag(sigma) v^dagger the Schmidt vectors are the
    // columns of u and the conjugated columns of v.
    const std::size_t nk = std::min(da, db);
    Mat w = da < db ? dagger(m) : m;
    const Mat rot = orthogonalize_columns(w);
    std::vector<std::size_t> order(w.cols());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> norms(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) norms[j] = norm(column(w, j));
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return norms[i] > norms[j]; });

    // Descending sort puts below-floor columns last, so completion vectors
    // land in the right slots.
    std::vector<double> sigma(nk);
    std::vector<Vec> left, right;
    for (std::size_t s = 0; s < nk; ++s) {
        const std::size_t j = order[s];
        sigma[s] = norms[j];
        right.push_back(column(rot, j));
        if (norms[j] >= kSingularFloor) {
            Vec l = column(w, j);
            for (auto& z : l) z /= norms[j];
            left.push_back(std::move(l));
        }
    }
    complete_basis(left, w.rows(), nk);

    SchmidtData out;
    out.coefficients = std::move(sigma);
    for (std::size_t s = 0; s < nk; ++s) {
        Vec a = da < db ? right[s] : left[s];
        Vec b = da < db ? left[s] : right[s];
        for (auto& z : b) z = std::conj(z);
        out.basis_a.push_back(std::move(a));
        out.basis_b.push_back(std::move(b));
    }
    return out;
}

double negativity(const BipartiteOperator& rho) {
    const auto spec = eigh(rho.matrix());
    if (spec.eigenvalues.front() < -kStateTol)
        throw ValidationError("negativity: input not positive semidefinite");
    if (std::abs(trace(rho.matrix()).real() - 1.0) > kStateTol)
        throw ValidationError("negativity: input trace differs from one");
    const auto pt = eigh(partial_transpose(rho).matrix());
    double s = 0;
    for (double v : pt.eigenvalues) s += std::max(0.0, -v);
    return s;
}

GeometricMeasure geometric_measure_pure(const PureState& psi) {
    const auto sd = schmidt(psi);
    const double c1 = sd.coefficients.front();
    return {1.0 - c1 * c1, product_state(psi.dims(), sd.basis_a.front(), sd.basis_b.front())};
}

double commutator_norm(const Mat& a, const Mat& b) {
    if (!a.square() || !b.square() || a.rows() != b.rows())
        throw ValidationError("commutator: shape mismatch");
    for (const Mat* f : {&a, &b})
        if (hermiticity_defect(*f) > kHermitianTol * std::max(1.0, max_abs(*f)))
            throw ValidationError("commutator: matrix not Hermitian");
    return spectral_norm(a * b - b * a);
}

double state_expectation(const BipartiteOperator& op, const PureState& psi) {
    return expectation(op.matrix(), psi.amplitudes());
}

}  // namespace entwit
