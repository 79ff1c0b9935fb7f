#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cosim/polynomial.hpp"
#include "cosim/topology.hpp"

namespace cosim {

// Capability set of the in-process slave contract. Mirrors the usual FMI 2.0
// co-simulation flags (fmi2SetRealInputDerivatives, fmi2GetRealOutputDerivatives,
// state access, fmi2GetDirectionalDerivative, fmi2Get/SetFMUstate).
struct Capabilities {
    bool polynomial_inputs{true};
    bool output_derivatives{true};
    bool state_access{true};
    bool linearization{true};
    bool rollback{true};
};

struct Linearization {
    DenseMatrix a;  // n_st x n_st
    DenseMatrix b;  // n_st x n_in
    DenseMatrix c;  // n_out x n_st
    DenseMatrix d;  // n_out x n_in
};

// End-of-step snapshot of one macro-step integration.
struct StepRecord {
    double t_end{0.0};
    std::vector<double> y;
    std::vector<double> y_dot;
    std::vector<double> x;
    std::vector<double> f;
};

struct Snapshot {
    double t{0.0};
    std::vector<double> x;
    std::vector<double> u_now;
    PolyInput pending;
    bool has_pending{false};
};

// A black-boxed ODE subsystem with its own micro solver (fixed-step RK4,
// 20 substeps per macro-step). Derived classes supply the model equations and
// analytic Jacobians.
class Slave {
public:
    Slave(std::string id, std::size_t n_in, std::size_t n_out, std::size_t n_st, double t0,
          std::vector<double> x0, std::vector<double> u0);
    virtual ~Slave() = default;

    const std::string& id() const { return id_; }
    std::size_t n_in() const { return n_in_; }
    std::size_t n_out() const { return n_out_; }
    std::size_t n_st() const { return n_st_; }
    const Capabilities& caps() const { return caps_; }
    double current_time() const { return t_; }
    const std::vector<double>& state() const { return x_; }
    const std::vector<double>& current_inputs() const { return u_now_; }

    // Masks capability flags (for tests of capability gating).
    void restrict_capabilities(const Capabilities& caps) { caps_ = caps; }

    // Micro-step count override for convergence studies.
    void set_micro_substeps(int substeps) { substeps_ = substeps; }

    // u is expressed on the local frame [0, dt) of the next macro-step.
    void set_inputs(const PolyInput& u);

    StepRecord do_step(double dt);

    // Analytic Jacobians at (current time, current state, current input value).
    Linearization get_linearization() const;

    Snapshot save_state() const;
    void restore_state(const Snapshot& snap);

    // g and f evaluated at the current point (with the current input value).
    std::vector<double> output_values() const;
    std::vector<double> state_derivatives() const;

protected:
    virtual void rhs(double t, std::span<const double> x, std::span<const double> u,
                     std::span<double> dxdt) const = 0;
    virtual void outputs(double t, std::span<const double> x, std::span<const double> u,
                         std::span<double> y) const = 0;
    virtual Linearization linearize(double t, std::span<const double> x,
                                    std::span<const double> u) const = 0;

private:
    std::string id_;
    std::size_t n_in_, n_out_, n_st_;
    Capabilities caps_{};
    double t_;
    std::vector<double> x_;
    std::vector<double> u_now_;
    PolyInput pending_;
    bool has_pending_{false};
    int substeps_{20};
};

// A coupled benchmark model: slaves, wiring, and the initial value of every
// global input channel (the initial coupling conditions).
struct CoupledModel {
    std::vector<std::unique_ptr<Slave>> slaves;
    Topology topo;
    std::vector<double> initial_inputs;
};

// Two damped spring-mass bodies exchanging (force) against (velocity,
// position). S1 = left body driven by the coupling force; S2 = right body
// computing that force from the relative spring/damper.
CoupledModel make_two_mass();

// Prey/predator pair, one species per slave.
CoupledModel make_lotka_volterra();

// Lotka-Volterra parameters, shared with the conservation oracle in tests.
struct LotkaVolterraParams {
    double alpha = 2.0 / 3.0;
    double beta = 4.0 / 3.0;
    double gamma = 1.0;
    double delta = 1.0;
};

}  // namespace cosim
