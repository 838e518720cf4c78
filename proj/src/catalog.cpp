#include "entwit/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include "entwit/errors.hpp"

namespace entwit {

namespace {

Mat real_matrix(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t n = rows.size();
    Mat m(n, n);
    std::size_t i = 0;
    for (const auto& row : rows) {
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Mat diag(std::initializer_list<double> values) {
    Mat m(values.size(), values.size());
    std::size_t i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

CatalogEntry from_factors(std::string name, std::string description, Mat ca, Mat cb, Mat la,
                          Mat lb) {
    ProductObservable c{std::move(ca), std::move(cb)};
    ProductObservable l{std::move(la), std::move(lb)};
    return CatalogEntry{std::move(name), std::move(description), c.expand(),
                        l.expand(),      std::move(c),           std::move(l)};
}

CatalogEntry make_xxzz() {
    return from_factors("xxzz", "two-qubit ZZ constraint with XX objective",
                        pauli_z(), pauli_z(), pauli_x(), pauli_x());
}

CatalogEntry make_qutrit() {
    Mat ca = diag({1.0, 2.0, 4.0});
    Mat cb = diag({0.5, 1.5, 5.0 / 3.0});
    Mat la = real_matrix({{1, 0, 0}, {0, 0, 2}, {0, 2, 0}});
    Mat lb = real_matrix({{0, 0.5, 0}, {0.5, 0, 0}, {0, 0, 1}});
    return from_factors("qutrit-counterexample",
                        "3x3 product pair whose extremal scan states stay separable",
                        std::move(ca), std::move(cb), std::move(la),
                        std::move(lb));
}

CatalogEntry make_ququart() {
    Mat cb = diag({2.0, 1.0 / 3.0, -1.0, 4.0});
    Mat lb = real_matrix({{3, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 3}});
    return from_factors("ququart-counterexample",
                        "2x4 product pair whose extremal scan states stay separable",
                        pauli_z(), std::move(cb), pauli_x(), std::move(lb));
}

CatalogEntry make_noisy_povm() {
    Mat ex = Mat::identity(2);
    ex += pauli_x() * cplx(1.0 / std::sqrt(2.0));
    ex *= cplx(0.5);
    Mat ez = Mat::identity(2);
    ez += pauli_z() * cplx(1.0 / std::sqrt(2.0));
    ez *= cplx(0.5);
    return from_factors("noisy-pauli-povm",
                        "unbiased noisy X/Z effect pair at the joint-measurability boundary",
                        ex, ex, ez, ez);
}

CatalogEntry make_theorem1() {
    BipartiteOperator c_op(Dims{2, 2}, diag({1.0, 0.0, 0.0, -1.0}));
    BipartiteOperator l_op(Dims{2, 2}, diag({1.0, 0.0, 0.0, 1.0}));
    return CatalogEntry{"theorem1-counterexample",
                        "diagonal two-qubit pair where pure and mixed constrained maxima differ",
                        std::move(c_op),
                        std::move(l_op),
                        std::nullopt,
                        std::nullopt};
}

}  // namespace

CatalogEntry catalog(const std::string& name) {
    if (name == "xxzz") return make_xxzz();
    if (name == "qutrit-counterexample") return make_qutrit();
    if (name == "ququart-counterexample") return make_ququart();
    if (name == "noisy-pauli-povm") return make_noisy_povm();
    if (name == "theorem1-counterexample") return make_theorem1();
    std::ostringstream msg;
    msg << "unknown catalog name '" << name << "'; valid names:";
    for (const auto& n : catalog_names()) msg << ' ' << n;
    throw ValidationError(msg.str());
}

std::vector<std::string> catalog_names() {
    return {"noisy-pauli-povm", "ququart-counterexample", "qutrit-counterexample",
            "theorem1-counterexample", "xxzz"};
}

}  // namespace entwit
