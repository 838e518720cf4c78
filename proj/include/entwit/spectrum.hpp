#pragma once

#include <vector>

#include "entwit/complex_matrix.hpp"

namespace entwit {

// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending; column k
// of eigenvectors pairs with eigenvalues[k].
struct Spectrum {
    std::vector<double> eigenvalues;
    Mat eigenvectors;

    Vec eigenvector(std::size_t k) const;
};

// Cyclic complex Jacobi. Input must be Hermitian within 1e-12 entrywise; it
// is symmetrized before iterating. Sweeps until the off-diagonal Frobenius
// norm falls below 1e-13 relative to the input scale (at most 100 sweeps).
Spectrum eigh(const Mat& h);

// Largest singular value, sqrt(lambda_max(m^dagger m)). Any rectangular m.
double spectral_norm(const Mat& m);

// Top eigenvector; on a near-degenerate top level the projection of `hint`
// onto the level is returned instead, which keeps alternating optimizers
// from hopping between branches of a crossing.
Vec top_eigenvector(const Spectrum& spec, const Vec& hint);

namespace detail {

// Unitary 2x2 rotation [[c, s*phase], [-s*conj(phase), c]] that zeroes the
// off-diagonal entry of the Hermitian block [[app, apq], [conj(apq), aqq]].
struct JacobiRotation {
    double c, s;
    cplx phase;
};
JacobiRotation make_rotation(double app, double aqq, cplx apq);

}  // namespace detail

}  // namespace entwit
