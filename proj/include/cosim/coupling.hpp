#pragma once

#include <string>
#include <vector>

#include "cosim/costarica.hpp"
#include "cosim/slave.hpp"

namespace cosim {

// Result of one orchestration run: the stacked global output vector sampled at
// every macro-step boundary (including t0), plus run diagnostics.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> outputs;  // one stacked vector per time
    std::vector<std::string> labels;           // "s1.y1", ...

    double max_residual{0.0};          // linear-problem residual (MISSILES)
    double max_c1_jump{0.0};           // input value/slope jump across steps
    double min_rcond{1.0};             // worst conditioning of the step solves
    double max_prediction_error{0.0};  // |estimated - integrated| outputs
    std::size_t total_inner_iterations{0};  // Newton iterations (JFM)
};

// The per-step MISSILES linear problem over z = (y_hat; y_hat_dot), both
// stacked over all slaves: (I - [G] A Phi^T) z = [G] b + [P] x + [R] f_c + y_c.
struct MissilesProblem {
    DenseMatrix m;
    std::vector<double> rhs;
};

struct MissilesSolution {
    std::vector<double> y_hat;
    std::vector<double> y_dot_hat;
    double rcond{0.0};
    double residual{0.0};
};

// ops: one estimator per slave, in topology order. elems: Hermite calibration
// columns shared by every channel (they depend on dt only). b_coeffs row j
// carries the start-of-step constraint part of input channel j's polynomial.
MissilesProblem assemble_missiles(const Topology& topo, const std::vector<CostaricaOps>& ops,
                                  const HermiteElems& elems, const DenseMatrix& b_coeffs,
                                  std::span<const double> x_stack);

MissilesSolution solve_missiles(const MissilesProblem& problem);

// Non-iterative coupling through per-slave linear estimators: each macro-step
// solves one small linear system for the coherent end-of-step outputs and
// derivatives, calibrates C1 cubic inputs against them, then steps every slave
// exactly once.
Trajectory missiles_run(CoupledModel& model, double t_end, std::size_t steps,
                        int stehfest_terms = 16);

// Zero-order-hold non-iterative Jacobi reference master.
Trajectory jacobi_run(CoupledModel& model, double t_end, std::size_t steps);

// Iterative reference master: per-step fixed-point residual on the stacked
// end-of-step input constraints, solved by matrix-free Newton-Krylov (GMRES
// over forward-difference directional derivatives), with slave rollback
// between iterations.
Trajectory ifosmondi_jfm_run(CoupledModel& model, double t_end, std::size_t steps, double epsilon,
                             std::size_t max_iterations = 20);

enum class ModelId {
    two_mass,
    lotka_volterra,
};

// Tight monolithic reference: the assembled coupled ODE integrated with an
// adaptive Dormand-Prince 5(4) at tol = 1e-10, sampled on the same grid.
Trajectory monolithic_run(ModelId id, double t_end, std::size_t steps);

std::vector<std::string> output_labels(const CoupledModel& model);

}  // namespace cosim
