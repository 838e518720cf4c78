#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace entwit {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

// Dense row-major complex matrix. Systems here never exceed total dimension
// 16, so plain O(n^3) arithmetic is all that is needed.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

    static Mat identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_ && rows_ > 0; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(cplx s);

    friend Mat operator+(Mat x, const Mat& y) { return x += y; }
    friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
    friend Mat operator*(Mat x, cplx s) { return x *= s; }
    friend Mat operator*(cplx s, Mat x) { return x *= s; }

    bool operator==(const Mat& o) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;
};

Mat operator*(const Mat& x, const Mat& y);
Vec operator*(const Mat& m, const Vec& v);

Mat dagger(const Mat& m);
cplx trace(const Mat& m);
Mat kron(const Mat& a, const Mat& b);
Vec kron(const Vec& a, const Vec& b);

double frobenius_norm(const Mat& m);
double max_abs(const Mat& m);
// Largest entrywise |m - m^dagger|; zero for exactly Hermitian input.
double hermiticity_defect(const Mat& m);
Mat hermitize(const Mat& m);

// <x|y>, conjugate-linear in the first argument.
cplx inner(const Vec& x, const Vec& y);
double norm(const Vec& v);
void normalize(Vec& v);
// |x><y|
Mat outer(const Vec& x, const Vec& y);
// Re <v|m|v>
double expectation(const Mat& m, const Vec& v);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

}  // namespace entwit
