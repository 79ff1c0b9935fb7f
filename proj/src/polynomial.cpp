#include "cosim/polynomial.hpp"

#include <cmath>

namespace cosim {

namespace {

// dt below this would overflow the 1/dt^3 Hermite terms.
constexpr double kMinStep = 1e-12;

constexpr double binom(std::size_t q, std::size_t p) {
    double num = 1.0;
    for (std::size_t i = 0; i < p; ++i) num = num * double(q - i) / double(i + 1);
    return num;
}

}  // namespace

PolyInput constant_inputs(std::span<const double> values) {
    PolyInput u(values.size(), Frame::local);
    for (std::size_t j = 0; j < values.size(); ++j) u.xi(j, 0) = values[j];
    return u;
}

std::pair<double, double> eval_poly(const PolyInput& u, std::size_t channel, double t_local) {
    if (channel >= u.channels()) throw ChannelOutOfRange("eval_poly: channel out of range");
    const std::size_t n = u.xi.cols;
    double value = 0.0;
    double deriv = 0.0;
    for (std::size_t pp = n; pp-- > 0;) {
        deriv = deriv * t_local + value;
        value = value * t_local + u.xi(channel, pp);
    }
    return {value, deriv};
}

PolyInput shift_coefficients(const PolyInput& xi_abs, double t_n) {
    const std::size_t n = xi_abs.xi.cols - 1;
    PolyInput out(xi_abs.channels(), Frame::local);
    for (std::size_t j = 0; j < xi_abs.channels(); ++j)
        for (std::size_t p = 0; p <= n; ++p) {
            double acc = 0.0;
            for (std::size_t q = p; q <= n; ++q)
                acc += xi_abs.xi(j, q) * binom(q, p) * std::pow(t_n, double(q - p));
            out.xi(j, p) = acc;
        }
    return out;
}

Tensor4 build_shift_tensor(std::size_t n_in, std::size_t degree, double t_n) {
    Tensor4 c(n_in, degree + 1, n_in, degree + 1);
    for (std::size_t j = 0; j < n_in; ++j)
        for (std::size_t p = 0; p <= degree; ++p)
            for (std::size_t q = p; q <= degree; ++q)
                c(j, p, j, q) = binom(q, p) * std::pow(t_n, double(q - p));
    return c;
}

HermiteElems hermite_elems_local(double dt) {
    if (dt < kMinStep) throw NonPositiveStep("hermite: dt must exceed 1e-12 s");
    HermiteElems e;
    e.av = {0.0, 0.0, 3.0 / (dt * dt), -2.0 / (dt * dt * dt)};
    e.ad = {0.0, 0.0, -1.0 / dt, 1.0 / (dt * dt)};
    return e;
}

std::array<double, kPolyDegree + 1> hermite_b_local(double dt, double v1, double v1_dot) {
    if (dt < kMinStep) throw NonPositiveStep("hermite: dt must exceed 1e-12 s");
    return {v1, v1_dot, -3.0 * v1 / (dt * dt) - 2.0 * v1_dot / dt,
            v1_dot / (dt * dt) + 2.0 * v1 / (dt * dt * dt)};
}

HermiteElems hermite_elems_first_step(double dt) {
    if (dt < kMinStep) throw NonPositiveStep("hermite: dt must exceed 1e-12 s");
    HermiteElems e;
    e.av = {0.0, 2.0 / dt, -1.0 / (dt * dt), 0.0};
    e.ad = {0.0, -1.0, 1.0 / dt, 0.0};
    return e;
}

std::array<double, kPolyDegree + 1> hermite_b_first_step(double dt, double v1) {
    if (dt < kMinStep) throw NonPositiveStep("hermite: dt must exceed 1e-12 s");
    return {v1, -2.0 * v1 / dt, v1 / (dt * dt), 0.0};
}

HermiteElemsAbsolute hermite_elems_absolute(double t1, double t2, double v1, double v1_dot) {
    if (t1 == t2) throw CoincidentTimes("hermite: interpolation points coincide");
    const double h = t2 - t1;
    const double h2 = h * h;
    const double h3 = h2 * h;
    // w is the recurring combination v1_dot + 2 v1 / (t2 - t1).
    const double w = v1_dot + 2.0 * v1 / h;

    HermiteElemsAbsolute e;
    e.av[3] = -2.0 / h3;
    e.av[2] = (1.0 + 2.0 * (t2 + 2.0 * t1) / h) / h2;
    e.av[1] = t1 * (-4.0 * t2 / h - 2.0 - 2.0 * t1 / h) / h2;
    e.av[0] = t1 * t1 * (1.0 + 2.0 * t2 / h) / h2;

    e.ad[3] = 1.0 / h2;
    e.ad[2] = -(t2 + 2.0 * t1) / h2;
    // The published a1 expression for this entry is dimensionally inconsistent;
    // t1 * (2 t2 + t1) is the value that satisfies the interpolation
    // constraints (cross-checked by the shift-composition property test).
    e.ad[1] = t1 * (2.0 * t2 + t1) / h2;
    e.ad[0] = -t1 * t1 * t2 / h2;

    e.b[3] = w / h2;
    e.b[2] = (v1 - (t1 + 2.0 * t2) * w) / h2;
    e.b[1] = t2 * (2.0 * (w * t1 - v1) + t2 * w) / h2;
    e.b[0] = t2 * t2 * (v1 - w * t1) / h2;
    return e;
}

}  // namespace cosim
