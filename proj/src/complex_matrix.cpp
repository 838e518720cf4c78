#include "entwit/complex_matrix.hpp"

#include <algorithm>
#include <cmath>

#include "entwit/errors.hpp"

namespace entwit {

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw ValidationError("matrix sum: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw ValidationError("matrix difference: shape mismatch");
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Mat& Mat::operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
}

Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols() != y.rows()) throw ValidationError("matrix product: shape mismatch");
    Mat r(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            const cplx xik = x(i, k);
            if (xik == cplx{}) continue;
            for (std::size_t j = 0; j < y.cols(); ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

Vec operator*(const Mat& m, const Vec& v) {
    if (m.cols() != v.size()) throw ValidationError("matrix-vector product: shape mismatch");
    Vec r(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        cplx s = 0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Mat dagger(const Mat& m) {
    Mat r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

cplx trace(const Mat& m) {
    cplx s = 0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
    return s;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

Vec kron(const Vec& a, const Vec& b) {
    Vec r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) r[i * b.size() + k] = a[i] * b[k];
    return r;
}

double frobenius_norm(const Mat& m) {
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

double max_abs(const Mat& m) {
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s = std::max(s, std::abs(m(i, j)));
    return s;
}

double hermiticity_defect(const Mat& m) {
    if (!m.square()) throw ValidationError("hermiticity defect: matrix not square");
    double s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i; j < m.cols(); ++j)
            s = std::max(s, std::abs(m(i, j) - std::conj(m(j, i))));
    return s;
}

Mat hermitize(const Mat& m) {
    if (!m.square()) throw ValidationError("hermitize: matrix not square");
    Mat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    return r;
}

cplx inner(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw ValidationError("inner product: length mismatch");
    cplx s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
    return s;
}

double norm(const Vec& v) {
    double s = 0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

void normalize(Vec& v) {
    const double n = norm(v);
    if (n == 0.0) throw ValidationError("normalize: zero vector");
    for (auto& z : v) z /= n;
}

Mat outer(const Vec& x, const Vec& y) {
    Mat r(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r(i, j) = x[i] * std::conj(y[j]);
    return r;
}

double expectation(const Mat& m, const Vec& v) {
    return inner(v, m * v).real();
}

Mat pauli_x() {
    Mat m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m(0, 1) = cplx(0, -1);
    m(1, 0) = cplx(0, 1);
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

}  // namespace entwit
