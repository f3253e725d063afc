#include <doctest.h>

#include "laxkit/cartan.hpp"

#include <cmath>

using namespace laxkit;

TEST_CASE("A2 root data matches the standard values") {
    CartanData cd = cartan_data(2);
    CHECK(std::abs(cd.simple_roots[0][0] - 1.0) < 1e-15);
    CHECK(std::abs(cd.simple_roots[0][1]) < 1e-15);
    CHECK(std::abs(cd.simple_roots[1][0] + 0.5) < 1e-15);
    CHECK(std::abs(cd.simple_roots[1][1] - std::sqrt(3.0) / 2.0) < 1e-15);
    CHECK(std::abs(cd.simple_roots[2][0] + 0.5) < 1e-15);
    CHECK(std::abs(cd.simple_roots[2][1] + std::sqrt(3.0) / 2.0) < 1e-15);

    // H1 = (e11 - e22)/2, H2 = (e11 + e22 - 2 e33)/(2 sqrt 3).
    CMatrix h1 = CMatrix::Zero(3, 3), h2 = CMatrix::Zero(3, 3);
    h1(0, 0) = 0.5; h1(1, 1) = -0.5;
    const double s = 1.0 / (2.0 * std::sqrt(3.0));
    h2(0, 0) = s; h2(1, 1) = s; h2(2, 2) = -2.0 * s;
    CHECK(max_abs(CMatrix(cd.H[0] - h1)) < 1e-15);
    CHECK(max_abs(CMatrix(cd.H[1] - h2)) < 1e-15);

    // [H1, E_{a1}] = (a1)_1 E_{a1} with (a1)_1 = 1.
    CMatrix lhs = cd.H[0] * cd.E_plus[0] - cd.E_plus[0] * cd.H[0];
    CHECK(max_abs(CMatrix(lhs - cd.E_plus[0])) < 1e-15);
}

TEST_CASE("A1 affine root closes the sum") {
    CartanData cd = cartan_data(1);
    CHECK(std::abs(cd.simple_roots[0][0] + cd.simple_roots[1][0]) < 1e-15);
    CHECK(std::abs(cd.cartan_matrix(0, 1) + 2.0) < 1e-15);
}

TEST_CASE("all structural invariants hold to 1e-12") {
    for (int n : {1, 2}) {
        CartanResiduals r = cartan_residuals(cartan_data(n));
        CHECK(r.root_norms <= 1e-12);
        CHECK(r.weight_duality <= 1e-12);
        CHECK(r.root_sum <= 1e-12);
        CHECK(r.cartan_weyl <= 1e-12);
        CHECK(r.chevalley <= 1e-12);
        CHECK(r.serre <= 1e-12);
    }
    CHECK_THROWS_AS(cartan_data(3), std::invalid_argument);
}
