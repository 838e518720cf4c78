#include "entwit/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entwit/errors.hpp"

namespace entwit {

namespace {

constexpr double kHermitianInputTol = 1e-12;
constexpr double kOffDiagTol = 1e-13;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Mat& a) {
    double s = 0;
    for (std::size_t p = 0; p < a.rows(); ++p)
        for (std::size_t q = p + 1; q < a.cols(); ++q) s += 2.0 * std::norm(a(p, q));
    return std::sqrt(s);
}

}  // namespace

namespace detail {

JacobiRotation make_rotation(double app, double aqq, cplx apq) {
    const double b = std::abs(apq);
    const cplx phase = apq / b;
    const double tau = (aqq - app) / (2.0 * b);
    double t;
    if (std::abs(tau) > 1e150) {
        t = 1.0 / (2.0 * tau);
    } else {
        t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    }
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, phase};
}

}  // namespace detail

Vec Spectrum::eigenvector(std::size_t k) const {
    Vec v(eigenvectors.rows());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = eigenvectors(i, k);
    return v;
}

Spectrum eigh(const Mat& h) {
    if (!h.square()) throw ValidationError("eigh: matrix not square");
    const double scale = std::max(1.0, max_abs(h));
    if (hermiticity_defect(h) > kHermitianInputTol * scale)
        throw ValidationError("eigh: matrix not Hermitian");

    const std::size_t n = h.rows();
    Mat a = hermitize(h);
    Mat v = Mat::identity(n);
    const double threshold = kOffDiagTol * std::max(1.0, frobenius_norm(a));

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const auto [c, s, phase] =
                    detail::make_rotation(a(p, p).real(), a(q, q).real(), a(p, q));
                const cplx upq = s * phase;
                const cplx uqp = -s * std::conj(phase);
                // a <- u^dagger a u, applied as column then row updates
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx arp = a(r, p), arq = a(r, q);
                    a(r, p) = arp * c + arq * uqp;
                    a(r, q) = arp * upq + arq * c;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx apr = a(p, r), aqr = a(q, r);
                    a(p, r) = c * apr + std::conj(uqp) * aqr;
                    a(q, r) = std::conj(upq) * apr + c * aqr;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    const cplx vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp * c + vrq * uqp;
                    v(r, q) = vrp * upq + vrq * c;
                }
            }
    }
    if (!converged && off_diagonal_norm(a) > threshold)
        throw ConvergenceError("eigh: Jacobi sweeps exhausted");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    Spectrum out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Mat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

double spectral_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const Mat g = dagger(m) * m;
    const auto s = eigh(g);
    return std::sqrt(std::max(0.0, s.eigenvalues.back()));
}

Vec top_eigenvector(const Spectrum& spec, const Vec& hint) {
    const std::size_t n = spec.eigenvalues.size();
    const double top = spec.eigenvalues.back();
    const double tol = 1e-11 * std::max(1.0, std::abs(top));
    std::size_t first = n - 1;
    while (first > 0 && top - spec.eigenvalues[first - 1] <= tol) --first;
    if (first == n - 1 || hint.empty()) return spec.eigenvector(n - 1);
    Vec proj(spec.eigenvectors.rows());
    for (std::size_t k = first; k < n; ++k) {
        const Vec vk = spec.eigenvector(k);
        const cplx c = inner(vk, hint);
        for (std::size_t i = 0; i < proj.size(); ++i) proj[i] += c * vk[i];
    }
    if (norm(proj) < 1e-8) return spec.eigenvector(n - 1);
    normalize(proj);
    return proj;
}

}  // namespace entwit
