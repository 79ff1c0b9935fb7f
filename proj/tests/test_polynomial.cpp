#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "cosim/polynomial.hpp"
#include "doctest.h"

using namespace cosim;

namespace {

PolyInput single_channel(std::array<double, 4> a, Frame frame = Frame::local) {
    PolyInput u(1, frame);
    for (std::size_t p = 0; p < 4; ++p) u.xi(0, p) = a[p];
    return u;
}

}  // namespace

TEST_CASE("eval_poly on 2t^3 - 3t^2 + 1") {
    const PolyInput u = single_channel({1.0, 0.0, -3.0, 2.0});
    const auto [v, d] = eval_poly(u, 0, 1.0);
    CHECK(v == doctest::Approx(0.0));
    CHECK(d == doctest::Approx(0.0));
}

TEST_CASE("eval_poly constant and identity monomial") {
    const PolyInput c = single_channel({5.5, 0.0, 0.0, 0.0});
    CHECK(eval_poly(c, 0, 0.3).first == doctest::Approx(5.5));
    CHECK(eval_poly(c, 0, 0.3).second == doctest::Approx(0.0));
    const PolyInput t = single_channel({0.0, 1.0, 0.0, 0.0});
    CHECK(eval_poly(t, 0, 0.7).first == doctest::Approx(0.7));
    CHECK(eval_poly(t, 0, 0.7).second == doctest::Approx(1.0));
}

TEST_CASE("eval_poly rejects bad channel") {
    const PolyInput u = single_channel({0.0, 0.0, 0.0, 0.0});
    CHECK_THROWS_AS(eval_poly(u, 1, 0.0), ChannelOutOfRange);
}

TEST_CASE("shift_coefficients expands (t_local + 2)^2") {
    const PolyInput abs = single_channel({0.0, 0.0, 1.0, 0.0}, Frame::absolute);
    const PolyInput loc = shift_coefficients(abs, 2.0);
    CHECK(loc.xi(0, 0) == doctest::Approx(4.0));
    CHECK(loc.xi(0, 1) == doctest::Approx(4.0));
    CHECK(loc.xi(0, 2) == doctest::Approx(1.0));
    CHECK(loc.xi(0, 3) == doctest::Approx(0.0));
}

TEST_CASE("shift_coefficients with t_n = 0 and on constants") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::array<double, 4> a{};
    for (double& v : a) v = dist(rng);
    const PolyInput abs = single_channel(a, Frame::absolute);
    const PolyInput loc0 = shift_coefficients(abs, 0.0);
    for (std::size_t p = 0; p < 4; ++p) CHECK(loc0.xi(0, p) == doctest::Approx(a[p]));

    const PolyInput c = single_channel({a[0], 0.0, 0.0, 0.0}, Frame::absolute);
    const PolyInput shifted = shift_coefficients(c, 17.0);
    CHECK(shifted.xi(0, 0) == doctest::Approx(a[0]));
    for (std::size_t p = 1; p < 4; ++p) CHECK(shifted.xi(0, p) == doctest::Approx(0.0));
}

TEST_CASE("shift correctness: shifted(t_local) == original(t_n + t_local)") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::array<double, 4> a{};
        for (double& v : a) v = dist(rng);
        const double t_n = std::abs(dist(rng)) * 5.0;
        const PolyInput abs = single_channel(a, Frame::absolute);
        const PolyInput loc = shift_coefficients(abs, t_n);
        for (double tl : {0.0, 0.1, 0.37, 0.9}) {
            const double want = eval_poly(abs, 0, t_n + tl).first;
            const double got = eval_poly(loc, 0, tl).first;
            CHECK(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
        }
    }
}

TEST_CASE("build_shift_tensor Pascal block at t_n = 2") {
    const Tensor4 c4 = build_shift_tensor(1, kPolyDegree, 2.0);
    const double expected[4][4] = {
        {1, 2, 4, 8}, {0, 1, 4, 12}, {0, 0, 1, 6}, {0, 0, 0, 1}};
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
            CHECK(c4(0, p, 0, q) == doctest::Approx(expected[p][q]));
}

TEST_CASE("build_shift_tensor at t_n = 0 is the identity") {
    const Tensor4 c4 = build_shift_tensor(2, kPolyDegree, 0.0);
    for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t j2 = 0; j2 < 2; ++j2)
                for (std::size_t q = 0; q < 4; ++q)
                    CHECK(c4(j, p, j2, q) == doctest::Approx(j == j2 && p == q ? 1.0 : 0.0));
}

TEST_CASE("contract_shift vs shift_coefficients cross-oracle") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double t_n : {0.5, 3.0, 11.0}) {
        PolyInput abs(2, Frame::absolute);
        for (double& v : abs.xi.data) v = dist(rng);
        const Tensor4 c4 = build_shift_tensor(2, kPolyDegree, t_n);
        const DenseMatrix via_tensor = contract_shift(c4, abs.xi);
        const PolyInput via_direct = shift_coefficients(abs, t_n);
        for (std::size_t i = 0; i < via_tensor.data.size(); ++i)
            CHECK(via_tensor.data[i] ==
                  doctest::Approx(via_direct.xi.data[i]).epsilon(1e-10));
    }
}

TEST_CASE("hermite_elems_local at dt = 1") {
    const HermiteElems e = hermite_elems_local(1.0);
    CHECK(e.av == std::array<double, 4>{0.0, 0.0, 3.0, -2.0});
    CHECK(e.ad == std::array<double, 4>{0.0, 0.0, -1.0, 1.0});
    const auto b = hermite_b_local(1.0, 1.0, 0.0);
    CHECK(b == std::array<double, 4>{1.0, 0.0, -3.0, 2.0});
}

TEST_CASE("hermite local smoothstep") {
    const HermiteElems e = hermite_elems_local(1.0);
    const auto b = hermite_b_local(1.0, 0.0, 0.0);
    // v2 = 1, v2_dot = 0
    std::array<double, 4> coeffs{};
    for (std::size_t p = 0; p < 4; ++p) coeffs[p] = e.av[p] * 1.0 + e.ad[p] * 0.0 + b[p];
    CHECK(coeffs == std::array<double, 4>{0.0, 0.0, 3.0, -2.0});
    const PolyInput pi = [&] {
        PolyInput u(1);
        for (std::size_t p = 0; p < 4; ++p) u.xi(0, p) = coeffs[p];
        return u;
    }();
    CHECK(eval_poly(pi, 0, 1.0).first == doctest::Approx(1.0));
    CHECK(eval_poly(pi, 0, 1.0).second == doctest::Approx(0.0));
}

TEST_CASE("hermite constraint satisfaction on random data") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    std::uniform_real_distribution<double> dtdist(1e-6, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double dt = dtdist(rng);
        const double v1 = dist(rng), v1d = dist(rng), v2 = dist(rng), v2d = dist(rng);
        const HermiteElems e = hermite_elems_local(dt);
        const auto b = hermite_b_local(dt, v1, v1d);
        PolyInput u(1);
        for (std::size_t p = 0; p < 4; ++p) u.xi(0, p) = e.av[p] * v2 + e.ad[p] * v2d + b[p];
        const auto [s0, d0] = eval_poly(u, 0, 0.0);
        const auto [s1, d1] = eval_poly(u, 0, dt);
        CHECK(std::abs(s0 - v1) <= 1e-9 * (1.0 + std::abs(v1)));
        CHECK(std::abs(d0 - v1d) <= 1e-9 * (1.0 + std::abs(v1d)));
        CHECK(std::abs(s1 - v2) <= 1e-9 * (1.0 + std::abs(v2)));
        CHECK(std::abs(d1 - v2d) <= 1e-9 * (1.0 + std::abs(v2d)));
    }
}

TEST_CASE("hermite first-step quadratic") {
    const HermiteElems e = hermite_elems_first_step(1.0);
    CHECK(e.av == std::array<double, 4>{0.0, 2.0, -1.0, 0.0});
    CHECK(e.ad == std::array<double, 4>{0.0, -1.0, 1.0, 0.0});
    const auto b = hermite_b_first_step(1.0, 1.0);
    CHECK(b == std::array<double, 4>{1.0, -2.0, 1.0, 0.0});

    // v1 = 1, v2 = 0, v2_dot = 0 -> (1 - t)^2
    PolyInput u(1);
    for (std::size_t p = 0; p < 4; ++p) u.xi(0, p) = e.av[p] * 0.0 + e.ad[p] * 0.0 + b[p];
    CHECK(eval_poly(u, 0, 0.0).first == doctest::Approx(1.0));
    CHECK(eval_poly(u, 0, 0.5).first == doctest::Approx(0.25));
    CHECK(eval_poly(u, 0, 1.0).first == doctest::Approx(0.0));
    CHECK(eval_poly(u, 0, 1.0).second == doctest::Approx(0.0));
}

TEST_CASE("hermite first-step reproduces constants") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (double dt : {1e-3, 0.2, 1.0}) {
        const double v1 = dist(rng);
        const HermiteElems e = hermite_elems_first_step(dt);
        const auto b = hermite_b_first_step(dt, v1);
        PolyInput u(1);
        for (std::size_t p = 0; p < 4; ++p) u.xi(0, p) = e.av[p] * v1 + e.ad[p] * 0.0 + b[p];
        CHECK(std::abs(u.xi(0, 0) - v1) <= 1e-12 * (1.0 + std::abs(v1)));
        for (std::size_t p = 1; p < 4; ++p) CHECK(std::abs(u.xi(0, p)) <= 1e-9 / dt / dt);
        CHECK(eval_poly(u, 0, 0.37 * dt).first == doctest::Approx(v1).epsilon(1e-9));
    }
}

TEST_CASE("hermite step guard") {
    CHECK_THROWS_AS(hermite_elems_local(0.0), NonPositiveStep);
    CHECK_THROWS_AS(hermite_elems_local(1e-13), NonPositiveStep);
    CHECK_THROWS_AS(hermite_elems_first_step(-1.0), NonPositiveStep);
    CHECK_THROWS_AS(hermite_elems_absolute(1.0, 1.0, 0.0, 0.0), CoincidentTimes);
}

TEST_CASE("hermite absolute frame coincides with local at t1 = 0") {
    for (double dt : {0.1, 1.0, 2.5}) {
        const HermiteElemsAbsolute a = hermite_elems_absolute(0.0, dt, 0.4, -0.2);
        const HermiteElems l = hermite_elems_local(dt);
        const auto b = hermite_b_local(dt, 0.4, -0.2);
        for (std::size_t p = 0; p < 4; ++p) {
            CHECK(a.av[p] == doctest::Approx(l.av[p]).epsilon(1e-12));
            CHECK(a.ad[p] == doctest::Approx(l.ad[p]).epsilon(1e-12));
            CHECK(a.b[p] == doctest::Approx(b[p]).epsilon(1e-12));
        }
    }
}

TEST_CASE("hermite absolute smoothstep") {
    const HermiteElemsAbsolute a = hermite_elems_absolute(0.0, 1.0, 0.0, 0.0);
    std::array<double, 4> coeffs{};
    for (std::size_t p = 0; p < 4; ++p) coeffs[p] = a.av[p] * 1.0 + a.ad[p] * 0.0 + a.b[p];
    CHECK(coeffs[0] == doctest::Approx(0.0));
    CHECK(coeffs[1] == doctest::Approx(0.0));
    CHECK(coeffs[2] == doctest::Approx(3.0));
    CHECK(coeffs[3] == doctest::Approx(-2.0));
}

TEST_CASE("composition equivalence: shift of absolute Hermite equals local Hermite") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::uniform_real_distribution<double> tdist(0.0, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double t1 = tdist(rng);
        const double dt = 0.05 + 0.5 * std::abs(dist(rng));
        const double v1 = dist(rng), v1d = dist(rng), v2 = dist(rng), v2d = dist(rng);

        const HermiteElemsAbsolute a = hermite_elems_absolute(t1, t1 + dt, v1, v1d);
        PolyInput abs(1, Frame::absolute);
        for (std::size_t p = 0; p < 4; ++p)
            abs.xi(0, p) = a.av[p] * v2 + a.ad[p] * v2d + a.b[p];
        const PolyInput composed = shift_coefficients(abs, t1);

        const HermiteElems l = hermite_elems_local(dt);
        const auto b = hermite_b_local(dt, v1, v1d);
        // Shifting the absolute-frame polynomial cancels terms of magnitude
        // ~|a_q| (1+t1+dt)^q, so scale the tolerance accordingly.
        double scale = 0.0;
        for (std::size_t q = 0; q < 4; ++q)
            scale += std::abs(abs.xi(0, q)) * std::pow(1.0 + t1 + dt, static_cast<double>(q));
        for (std::size_t p = 0; p < 4; ++p) {
            const double want = l.av[p] * v2 + l.ad[p] * v2d + b[p];
            CHECK(std::abs(composed.xi(0, p) - want) <= 1e-9 * (1.0 + scale));
        }
    }
}

TEST_CASE("constant_inputs behaves as ZOH coefficients") {
    const std::vector<double> vals{2.0, -3.0};
    const PolyInput u = constant_inputs(vals);
    REQUIRE(u.channels() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(eval_poly(u, j, 0.9).first == doctest::Approx(vals[j]));
        CHECK(eval_poly(u, j, 0.9).second == doctest::Approx(0.0));
    }
}
