#pragma once

#include <functional>
#include <utility>

#include "cosim/polynomial.hpp"
#include "cosim/slave.hpp"

namespace cosim {

// Gaver-Stehfest real-axis inverse Laplace scheme: f(t) ~ (ln2/t) sum_i V_i
// F(i ln2 / t). Term count must be even; beyond ~18 the weights lose all
// precision to cancellation.
struct StehfestScheme {
    int n_terms{0};
    std::vector<double> weights;
};

std::vector<double> stehfest_weights(int n_terms);
StehfestScheme stehfest_scheme(int n_terms = 16);

double stehfest_invert(const std::function<double(double)>& transform, double t,
                       const StehfestScheme& scheme);

// Laplace-domain transfer objects of one linearized slave:
//   Gamma(s)[i,j,p] = (C (sI-A)^-1 B + D)_{i,j} * p! / s^(p+1)
//   Pi(s)           = C (sI-A)^-1
//   Theta(s)        = Pi(s) / s
Tensor3 eval_gamma(const Linearization& lin, double s, std::size_t degree);
DenseMatrix eval_pi(const Linearization& lin, double s);
DenseMatrix eval_theta(const Linearization& lin, double s);

// Per-slave, per-step estimator operators. Value operators are the transforms
// inverted at t = dt; derivative operators invert the s-multiplied transforms
// minus their initial values (initial-value theorem).
struct CostaricaOps {
    Tensor3 g_v, g_d;          // n_out x n_in x (n+1)
    DenseMatrix p_v, p_d;      // n_out x n_st
    DenseMatrix r_v, r_d;      // n_out x n_st
    std::vector<double> f_c;   // n_st
    std::vector<double> y_c;   // n_out
    std::vector<double> y_dot_c;
};

void compute_operators(const Linearization& lin, double dt, std::size_t degree,
                       const StehfestScheme& scheme, CostaricaOps& ops);

// Affine residual of the state equation at the linearization point:
// f_c = f_tilde - A x_tilde - B u(end of previous step).
std::vector<double> compute_ftilde_c(const Linearization& lin, std::span<const double> x_tilde,
                                     std::span<const double> f_tilde,
                                     std::span<const double> u_end_prev);

// Zero-order-hold reconstruction of the output-equation residual:
// y_c = g_value - C x_tilde - D u_start, held constant; y_dot_c = 0.
std::pair<std::vector<double>, std::vector<double>> compute_control_parts(
    const Linearization& lin, std::span<const double> x_tilde, std::span<const double> u_start,
    std::span<const double> g_value);

CostaricaOps compute_costarica(const Linearization& lin, double dt, const StehfestScheme& scheme,
                               std::span<const double> x_tilde, std::span<const double> f_tilde,
                               std::span<const double> u_start, std::span<const double> g_value);

// y_hat = G_V Xi + P_V x + R_V f_c + y_c, plus the derivative analogue.
std::pair<std::vector<double>, std::vector<double>> estimate(const CostaricaOps& ops,
                                                             const PolyInput& xi_local,
                                                             std::span<const double> x_tilde);

}  // namespace cosim
