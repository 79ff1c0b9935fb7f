#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "cosim/linalg.hpp"
#include "doctest.h"

using namespace cosim;

TEST_CASE("lu_solve identity") {
    const DenseMatrix m = DenseMatrix::identity(3);
    const std::vector<double> rhs{1.0, 2.0, 3.0};
    const LuSolution sol = lu_solve(m, rhs);
    for (std::size_t i = 0; i < 3; ++i) CHECK(sol.x[i] == doctest::Approx(rhs[i]).epsilon(1e-14));
    CHECK(sol.rcond == doctest::Approx(1.0));
}

TEST_CASE("lu_solve diagonal") {
    DenseMatrix m(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 4.0;
    const LuSolution sol = lu_solve(m, std::vector<double>{2.0, 8.0});
    CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sol.x[1] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("lu_solve 2x2 elimination") {
    DenseMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(1, 1) = -1.0;
    const LuSolution sol = lu_solve(m, std::vector<double>{3.0, 1.0});
    CHECK(sol.x[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sol.x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("lu_solve rejects singular matrices") {
    DenseMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 2.0;
    m(1, 0) = 2.0;
    m(1, 1) = 4.0;
    CHECK_THROWS_AS(lu_solve(m, std::vector<double>{1.0, 2.0}), SingularMatrix);
}

TEST_CASE("lu_solve rejects dimension mismatch") {
    CHECK_THROWS_AS(lu_solve(DenseMatrix(2, 3), std::vector<double>{1.0, 2.0}), DimensionMismatch);
    CHECK_THROWS_AS(lu_solve(DenseMatrix::identity(2), std::vector<double>{1.0}),
                    DimensionMismatch);
}

TEST_CASE("lu_solve roundtrip on random well-conditioned matrices up to 64x64") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t n : {2ul, 5ul, 16ul, 33ul, 64ul}) {
        DenseMatrix m(n, n);
        for (double& v : m.data) v = dist(rng);
        // Diagonal dominance keeps the samples well conditioned.
        for (std::size_t i = 0; i < n; ++i) m(i, i) += double(n);
        std::vector<double> rhs(n);
        for (double& v : rhs) v = dist(rng);
        const LuSolution sol = lu_solve(m, rhs);
        const std::vector<double> back = matvec(m, sol.x);
        double rhs_norm = 0.0, err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rhs_norm = std::max(rhs_norm, std::abs(rhs[i]));
            err = std::max(err, std::abs(back[i] - rhs[i]));
        }
        CHECK(err <= 1e-10 * (1.0 + rhs_norm));
        CHECK(sol.rcond > 1e-6);
    }
}

TEST_CASE("contract_gp zero tensor") {
    const Tensor3 g(2, 3, 4);
    const DenseMatrix xi(3, 4, 1.0);
    for (double v : contract_gp(g, xi)) CHECK(v == 0.0);
}

TEST_CASE("contract_gp scalar") {
    Tensor3 g(1, 1, 1);
    g(0, 0, 0) = 2.0;
    DenseMatrix xi(1, 1);
    xi(0, 0) = 3.0;
    CHECK(contract_gp(g, xi)[0] == doctest::Approx(6.0));
}

TEST_CASE("contract_gp degree-1") {
    Tensor3 g(1, 1, 2);
    g(0, 0, 0) = 1.0;
    g(0, 0, 1) = 2.0;
    DenseMatrix xi(1, 2);
    xi(0, 0) = 3.0;
    xi(0, 1) = 4.0;
    CHECK(contract_gp(g, xi)[0] == doctest::Approx(11.0));
}

TEST_CASE("contract_gp dimension checks") {
    CHECK_THROWS_AS(contract_gp(Tensor3(1, 2, 3), DenseMatrix(2, 2)), DimensionMismatch);
    CHECK_THROWS_AS(contract_gp(Tensor3(1, 2, 3), DenseMatrix(3, 3)), DimensionMismatch);
}

TEST_CASE("contract_gp is bilinear") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    Tensor3 g(3, 2, 4);
    for (double& v : g.data) v = dist(rng);
    DenseMatrix x(2, 4), y(2, 4), z(2, 4);
    for (double& v : x.data) v = dist(rng);
    for (double& v : y.data) v = dist(rng);
    const double alpha = 0.7, beta = -1.3;
    for (std::size_t i = 0; i < z.data.size(); ++i)
        z.data[i] = alpha * x.data[i] + beta * y.data[i];
    const auto cz = contract_gp(g, z);
    const auto cx = contract_gp(g, x);
    const auto cy = contract_gp(g, y);
    for (std::size_t i = 0; i < cz.size(); ++i)
        CHECK(cz[i] == doctest::Approx(alpha * cx[i] + beta * cy[i]).epsilon(1e-12));
}

TEST_CASE("contract_shift identity tensor") {
    const std::size_t c = 2, deg = 4;
    Tensor4 t(c, deg, c, deg);
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t p = 0; p < deg; ++p) t(j, p, j, p) = 1.0;
    DenseMatrix xi(c, deg);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& v : xi.data) v = dist(rng);
    const DenseMatrix out = contract_shift(t, xi);
    for (std::size_t i = 0; i < xi.data.size(); ++i)
        CHECK(out.data[i] == doctest::Approx(xi.data[i]).epsilon(1e-14));
}
