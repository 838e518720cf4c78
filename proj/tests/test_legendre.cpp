#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "entwit/bipartite.hpp"
#include "entwit/catalog.hpp"
#include "entwit/errors.hpp"
#include "entwit/legendre.hpp"
#include "entwit/random.hpp"

using namespace entwit;

namespace {

BipartiteOperator zzxx_sum() {
    const CatalogEntry e = catalog("xxzz");
    Mat sum = e.c_op.matrix();
    sum += e.l_op.matrix();
    return BipartiteOperator(Dims{2, 2}, sum);
}

LegendreOptions fast_opts() {
    LegendreOptions o;
    o.restarts = 12;
    return o;
}

}  // namespace

TEST_CASE("bell diagonal closed form on hand values") {
    // Equal diagonals: the root term is 1 regardless.
    CHECK(bell_diag_legendre(1, 1) == doctest::Approx(1));
    CHECK(bell_diag_legendre(0, 0) == doctest::Approx(0));
    CHECK(bell_diag_legendre(2, 0) == doctest::Approx(0.5 + std::sqrt(5.0) / 2));
    CHECK_THROWS_AS(bell_diag_legendre(0, 1), ValidationError);
}

TEST_CASE("bell basis detection") {
    const CatalogEntry e = catalog("xxzz");
    std::vector<double> diag;
    CHECK(bell_diagonal(e.c_op, &diag));
    REQUIRE(diag.size() == 4);
    // sigma_z x sigma_z: +1 on the phi states, -1 on the psi states.
    const double expected[] = {1, 1, -1, -1};
    for (int i = 0; i < 4; ++i) CHECK(diag[i] == doctest::Approx(expected[i]));
    CHECK(bell_diagonal(e.l_op));

    const CatalogEntry povm = catalog("noisy-pauli-povm");
    CHECK_FALSE(bell_diagonal(povm.c_op));
    CHECK_FALSE(bell_diagonal(catalog("qutrit-counterexample").c_op));
}

TEST_CASE("see-saw transform matches the closed forms") {
    const LegendreResult r = legendre_gm(zzxx_sum(), fast_opts());
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-9));

    const Vec bell{1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0)};
    const BipartiteOperator proj(Dims{2, 2}, outer(bell, bell));
    const LegendreResult r2 = legendre_gm(proj, fast_opts());
    CHECK(r2.value == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));
}

TEST_CASE("see-saw value is attained by its reported optimizers") {
    const BipartiteOperator x = zzxx_sum();
    const LegendreResult r = legendre_gm(x, fast_opts());
    const double overlap = std::norm(
        inner(r.optimizer_product.amplitudes(), r.optimizer_psi.amplitudes()));
    const double attained = state_expectation(x, r.optimizer_psi) + overlap - 1;
    CHECK(attained == doctest::Approx(r.value).epsilon(1e-10));
}

TEST_CASE("restart prefix monotonicity") {
    const BipartiteOperator x = zzxx_sum();
    LegendreOptions a = fast_opts();
    a.restarts = 3;
    LegendreOptions b = fast_opts();
    b.restarts = 12;
    CHECK(legendre_gm(x, a).value <= legendre_gm(x, b).value + 1e-15);
}

TEST_CASE("see-saw path agrees with the analytic path on a bell-diagonal pair") {
    const CatalogEntry e = catalog("xxzz");
    BoundOptions analytic;
    BoundOptions seesaw;
    seesaw.disable_analytic = true;
    seesaw.inner.restarts = 8;
    const BoundResult ra = eps_bound(0.8, 0.8, e.c_op, e.l_op, analytic);
    const BoundResult rs = eps_bound(0.8, 0.8, e.c_op, e.l_op, seesaw);
    CHECK(ra.certified);
    CHECK_FALSE(rs.certified);
    CHECK(ra.epsilon == doctest::Approx(xxzz_closed_form(0.8, 0.8)).epsilon(1e-6));
    CHECK(rs.epsilon == doctest::Approx(ra.epsilon).epsilon(1e-5));
}

TEST_CASE("closed form values and validation") {
    CHECK(xxzz_closed_form(1, 1) == 0.5);
    CHECK(xxzz_closed_form(0.3, 0.6) == 0);
    CHECK(xxzz_closed_form(1, 0) == 0);
    CHECK(xxzz_closed_form(0.9, 0.9) == doctest::Approx(0.2));
    CHECK(xxzz_closed_form(-0.9, -0.9) == doctest::Approx(0.2));
    CHECK_THROWS_AS(xxzz_closed_form(1.5, 0), ValidationError);
}

TEST_CASE("bound search matches the closed form on a coarse grid") {
    const CatalogEntry e = catalog("xxzz");
    for (double c : {0.0, 0.5, 0.8, 1.0})
        for (double l : {0.25, 0.75, 1.0}) {
            const BoundResult r = eps_bound(c, l, e.c_op, e.l_op);
            CHECK(r.feasible);
            CHECK(r.epsilon == doctest::Approx(xxzz_closed_form(c, l)).epsilon(1e-4));
        }
}

TEST_CASE("bound flags expectation values outside the spectral range") {
    const CatalogEntry e = catalog("xxzz");
    CHECK_FALSE(eps_bound(3.0, 0.0, e.c_op, e.l_op).feasible);
    CHECK_THROWS_AS(eps_bound(0, 0, e.c_op, catalog("qutrit-counterexample").l_op),
                    ValidationError);
}

TEST_CASE("grid emitter is c-major and validates resolution") {
    const std::vector<Fig1Row> rows = fig1_grid(3);
    REQUIRE(rows.size() == 9);
    CHECK(rows[0].c == -1);
    CHECK(rows[0].l == -1);
    CHECK(rows[1].c == -1);
    CHECK(rows[1].l == 0);
    CHECK(rows[8].c == 1);
    CHECK(rows[8].l == 1);
    CHECK(rows[8].epsilon == 0.5);
    CHECK_THROWS_AS(fig1_grid(1), ValidationError);
}

TEST_CASE("more restarts never raise the bound") {
    // More inner search can only raise the transform, which lowers epsilon.
    const CatalogEntry e = catalog("xxzz");
    BoundOptions coarse;
    coarse.disable_analytic = true;
    coarse.inner.restarts = 3;
    BoundOptions fine = coarse;
    fine.inner.restarts = 10;
    const double lo = eps_bound(0.9, 0.9, e.c_op, e.l_op, coarse).epsilon;
    const double hi = eps_bound(0.9, 0.9, e.c_op, e.l_op, fine).epsilon;
    CHECK(hi <= lo + 1e-9);
}

TEST_CASE("bound never exceeds the geometric measure of a witnessing state") {
    const CatalogEntry e = catalog("xxzz");
    Rng rng(33);
    for (int rep = 0; rep < 1000; ++rep) {
        const PureState psi(Dims{2, 2}, rng.haar_vector(4));
        const double c = state_expectation(e.c_op, psi);
        const double l = state_expectation(e.l_op, psi);
        const BoundResult r = eps_bound(c, l, e.c_op, e.l_op);
        CHECK(r.epsilon <= geometric_measure_pure(psi).value + 1e-6);
    }
}

TEST_CASE("transform is convex along operator segments") {
    Rng rng(27);
    LegendreOptions opt;
    opt.restarts = 16;
    for (int rep = 0; rep < 3; ++rep) {
        Mat x(4, 4), y(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                x(i, j) = cplx(rng.gaussian(), rng.gaussian());
                y(i, j) = cplx(rng.gaussian(), rng.gaussian());
            }
        const BipartiteOperator xo(Dims{2, 2}, hermitize(x));
        const BipartiteOperator yo(Dims{2, 2}, hermitize(y));
        const double ex = legendre_gm(xo, opt).value;
        const double ey = legendre_gm(yo, opt).value;
        for (double t : {0.25, 0.5, 0.75}) {
            const Mat mix = xo.matrix() * t + yo.matrix() * (1 - t);
            const double emix = legendre_gm(BipartiteOperator(Dims{2, 2}, mix), opt).value;
            CHECK(emix <= t * ex + (1 - t) * ey + 1e-6);
        }
    }
}

TEST_CASE("closed form dominates the top eigenvalue shifted by one") {
    for (auto [l1, l2] : {std::pair{10.0, 0.0}, {100.0, -5.0}, {1e6, 0.0}, {3.0, 2.9}}) {
        const double f = bell_diag_legendre(l1, l2);
        CHECK(f >= l1 - 1);
        CHECK(f >= (l1 + l2) / 2);
        // The gap to lambda1 - 1 shrinks toward 1/2, never to zero.
        const double d = l1 - l2;
        const double gap = (1 - d + std::sqrt(d * d + 1)) / 2;
        CHECK(std::abs(f - (l1 - 1) - gap) <= 1e-12 * std::abs(l1) + 1e-12);
    }
}
