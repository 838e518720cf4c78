#include "doctest.h"

#include <cmath>

#include "entwit/complex_matrix.hpp"
#include "entwit/errors.hpp"
#include "entwit/random.hpp"

using namespace entwit;

namespace {

const cplx I{0, 1};

Mat from_rows(std::size_t n, std::initializer_list<cplx> entries) {
    Mat m(n, n);
    std::size_t k = 0;
    for (cplx v : entries) m(k / n, k % n) = v, ++k;
    return m;
}

}  // namespace

TEST_CASE("identity and scalar arithmetic") {
    Mat id = Mat::identity(3);
    CHECK(id(0, 0) == cplx{1});
    CHECK(id(1, 0) == cplx{0});
    Mat twice = id * cplx{2};
    twice += id;
    CHECK(twice(2, 2) == cplx{3});
    twice -= id;
    CHECK(twice == id * cplx{2});
}

TEST_CASE("matrix product against hand result") {
    Mat a = from_rows(2, {1, 2, 3, 4});
    Mat b = from_rows(2, {0, 1, 1, 0});
    Mat ab = a * b;
    CHECK(ab(0, 0) == cplx{2});
    CHECK(ab(0, 1) == cplx{1});
    CHECK(ab(1, 0) == cplx{4});
    CHECK(ab(1, 1) == cplx{3});
}

TEST_CASE("pauli algebra") {
    CHECK(pauli_x() * pauli_y() == pauli_z() * I);
    CHECK(pauli_y() * pauli_z() == pauli_x() * I);
    Mat sq = pauli_x() * pauli_x();
    CHECK(sq == Mat::identity(2));
    CHECK(trace(pauli_z()) == cplx{0});
}

TEST_CASE("dagger conjugate-transposes") {
    Mat m(2, 2);
    m(0, 1) = cplx{1, 2};
    Mat d = dagger(m);
    CHECK(d(1, 0) == cplx{1, -2});
    CHECK(d(0, 1) == cplx{0});
}

TEST_CASE("kron dims and entry layout") {
    Mat k = kron(pauli_z(), pauli_x());
    CHECK(k.rows() == 4);
    CHECK(k(0, 1) == cplx{1});
    CHECK(k(2, 3) == cplx{-1});
    CHECK(k(0, 0) == cplx{0});

    Vec v = kron(Vec{1, 0}, Vec{0, 1});
    CHECK(v[1] == cplx{1});
    CHECK(norm(v) == doctest::Approx(1));
}

TEST_CASE("hermiticity defect and hermitize") {
    Mat m = from_rows(2, {1, cplx{0, 1}, cplx{0, 1}, 1});
    CHECK(hermiticity_defect(m) == doctest::Approx(2).epsilon(1e-12));
    Mat h = hermitize(m);
    CHECK(hermiticity_defect(h) == 0);
    CHECK(h(0, 1) == cplx{0});

    CHECK(hermiticity_defect(pauli_y()) == 0);
}

TEST_CASE("vector helpers") {
    Vec x{1, 0};
    Vec y{0, cplx{0, 1}};
    CHECK(inner(x, y) == cplx{0});
    CHECK(inner(y, y) == cplx{1});

    Vec z{3, 4};
    CHECK(norm(z) == doctest::Approx(5));
    normalize(z);
    CHECK(norm(z) == doctest::Approx(1));

    Vec zero{0, 0};
    CHECK_THROWS_AS(normalize(zero), ValidationError);

    Mat p = outer(x, y);
    CHECK(p(0, 1) == cplx{0, -1});

    CHECK(expectation(pauli_z(), Vec{1, 0}) == doctest::Approx(1));
    CHECK(expectation(pauli_z(), Vec{0, 1}) == doctest::Approx(-1));
}

TEST_CASE("norms") {
    Mat m = from_rows(2, {3, 0, 0, 4});
    CHECK(frobenius_norm(m) == doctest::Approx(5));
    CHECK(max_abs(m) == doctest::Approx(4));
}

TEST_CASE("kron and real linear combinations preserve hermiticity") {
    Rng rng(17);
    for (int rep = 0; rep < 6; ++rep) {
        Mat a(2, 2), b(3, 3);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) a(i, j) = cplx(rng.gaussian(), rng.gaussian());
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) b(i, j) = cplx(rng.gaussian(), rng.gaussian());
        a = hermitize(a);
        b = hermitize(b);

        CHECK(hermiticity_defect(kron(a, b)) == doctest::Approx(0).epsilon(1e-14));
        Mat combo = kron(a, Mat::identity(3)) * rng.gaussian() + kron(a, b) * rng.gaussian();
        CHECK(hermiticity_defect(combo) == doctest::Approx(0).epsilon(1e-14));
    }
}
