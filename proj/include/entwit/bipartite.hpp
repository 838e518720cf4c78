#pragma once

#include <cstddef>
#include <vector>

#include "entwit/complex_matrix.hpp"

namespace entwit {

// Second Schmidt coefficient below kProductTol: product state. Above
// kEntangledTol: entangled. Between the two: indeterminate.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kProductTol = 1e-9;
inline constexpr double kEntangledTol = 1e-6;

struct Dims {
    std::size_t a = 0, b = 0;
    std::size_t total() const { return a * b; }
    bool operator==(const Dims&) const = default;
};

// Hermitian operator on C^a (x) C^b. The constructor rejects inputs whose
// hermiticity defect exceeds kHermitianTol and symmetrizes the rest, so the
// stored matrix is exactly Hermitian.
class BipartiteOperator {
public:
    BipartiteOperator(Dims dims, const Mat& entries);

    const Dims& dims() const { return dims_; }
    const Mat& matrix() const { return m_; }

private:
    Dims dims_;
    Mat m_;
};

// Pair of local Hermitian observables, one per subsystem.
class ProductObservable {
public:
    ProductObservable(const Mat& factor_a, const Mat& factor_b);

    const Mat& factor_a() const { return a_; }
    const Mat& factor_b() const { return b_; }
    Dims dims() const { return {a_.rows(), b_.rows()}; }
    BipartiteOperator expand() const;

private:
    Mat a_, b_;
};

// Normalized vector in C^a (x) C^b. Input must already be unit within 1e-12;
// it is renormalized exactly on construction.
class PureState {
public:
    PureState(Dims dims, Vec amplitudes);

    const Dims& dims() const { return dims_; }
    const Vec& amplitudes() const { return v_; }

private:
    Dims dims_;
    Vec v_;
};

PureState product_state(Dims dims, Vec local_a, Vec local_b);

// Schmidt coefficients non-increasing, bases orthonormal on each side. The
// state equals sum_i coefficients[i] |basis_a[i]> (x) |basis_b[i]>.
struct SchmidtData {
    std::vector<double> coefficients;
    std::vector<Vec> basis_a;
    std::vector<Vec> basis_b;
};

// Transpose on the second subsystem.
BipartiteOperator partial_transpose(const BipartiteOperator& rho);

SchmidtData schmidt(const PureState& psi);

// Sum of the negative partial-transpose eigenvalues of a state. Rejects
// inputs that are not unit-trace positive-semidefinite within 1e-10.
double negativity(const BipartiteOperator& rho);

struct GeometricMeasure {
    double value;
    PureState closest_product;
};
// 1 - (largest squared overlap with a product state); exact via Schmidt.
GeometricMeasure geometric_measure_pure(const PureState& psi);

// Spectral norm of ab - ba for square Hermitian a, b of equal dimension.
double commutator_norm(const Mat& a, const Mat& b);

double state_expectation(const BipartiteOperator& op, const PureState& psi);

}  // namespace entwit
