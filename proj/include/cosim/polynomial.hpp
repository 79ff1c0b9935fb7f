#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "cosim/linalg.hpp"

namespace cosim {

// Maximum input polynomial degree. Cubic is forced by the C1 Hermite
// calibration; the first macro-step uses a quadratic padded with a zero cubic
// coefficient so every downstream tensor keeps uniform dimensions.
inline constexpr std::size_t kPolyDegree = 3;

enum class Frame {
    absolute,  // coefficients in t, valid on [t_n, t_n + dt)
    local,     // coefficients in t_local = t - t_n, valid on [0, dt)
};

// Per-channel polynomial coefficients: xi(j, p) is the coefficient of the
// monomial of degree p for channel j. The degree axis is indexed from 0.
struct PolyInput {
    DenseMatrix xi;
    Frame frame{Frame::local};

    PolyInput() = default;
    PolyInput(std::size_t channels, Frame f = Frame::local)
        : xi(channels, kPolyDegree + 1), frame(f) {}

    std::size_t channels() const { return xi.rows; }
};

PolyInput constant_inputs(std::span<const double> values);

// Value and first derivative of channel's polynomial at t_local (Horner).
std::pair<double, double> eval_poly(const PolyInput& u, std::size_t channel, double t_local);

// Re-expresses an absolute-frame polynomial on the local frame starting at
// t_n, so that shifted(t_local) == original(t_n + t_local) exactly.
PolyInput shift_coefficients(const PolyInput& xi_abs, double t_n);

// Block-diagonal order-4 shift tensor; each diagonal block is the
// unit-upper-triangular Pascal matrix with entry (p,q) = binom(q,p) t_n^(q-p).
Tensor4 build_shift_tensor(std::size_t n_in, std::size_t degree, double t_n);

// Coefficient column vectors of the local-frame Hermite calibration: the
// calibrated polynomial for a channel is av*v2 + ad*v2_dot + b where (v2,
// v2_dot) are the end-of-step constraints and b carries the start-of-step
// constraints.
struct HermiteElems {
    std::array<double, kPolyDegree + 1> av{};
    std::array<double, kPolyDegree + 1> ad{};
};

// Cubic calibration on [0, dt]: pi(0)=v1, pi'(0)=v1_dot, pi(dt)=v2, pi'(dt)=v2_dot.
HermiteElems hermite_elems_local(double dt);
std::array<double, kPolyDegree + 1> hermite_b_local(double dt, double v1, double v1_dot);

// First-step quadratic variant (no start derivative available): pi(0)=v1,
// pi(dt)=v2, pi'(dt)=v2_dot. Padded with a zero cubic coefficient.
HermiteElems hermite_elems_first_step(double dt);
std::array<double, kPolyDegree + 1> hermite_b_first_step(double dt, double v1);

// Absolute-frame operators on generic points t1 != t2. Retained for the
// shift-composition equivalence property only; production code calibrates
// directly on [0, dt].
struct HermiteElemsAbsolute {
    std::array<double, kPolyDegree + 1> av{};
    std::array<double, kPolyDegree + 1> ad{};
    std::array<double, kPolyDegree + 1> b{};
};

HermiteElemsAbsolute hermite_elems_absolute(double t1, double t2, double v1, double v1_dot);

}  // namespace cosim
