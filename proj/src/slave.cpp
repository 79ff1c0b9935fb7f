#include "cosim/slave.hpp"

#include <cmath>

#include "cosim/ode.hpp"

namespace cosim {

Slave::Slave(std::string id, std::size_t n_in, std::size_t n_out, std::size_t n_st, double t0,
             std::vector<double> x0, std::vector<double> u0)
    : id_(std::move(id)),
      n_in_(n_in),
      n_out_(n_out),
      n_st_(n_st),
      t_(t0),
      x_(std::move(x0)),
      u_now_(std::move(u0)) {}

void Slave::set_inputs(const PolyInput& u) {
    if (u.channels() != n_in_)
        throw ChannelCountMismatch("set_inputs: expected " + std::to_string(n_in_) +
                                   " channels, got " + std::to_string(u.channels()));
    if (u.xi.cols > kPolyDegree + 1)
        throw DegreeTooHigh("set_inputs: degree exceeds " + std::to_string(kPolyDegree));
    pending_ = u;
    has_pending_ = true;
    for (std::size_t j = 0; j < n_in_; ++j) u_now_[j] = eval_poly(pending_, j, 0.0).first;
}

StepRecord Slave::do_step(double dt) {
    if (dt <= 0.0) throw NonPositiveStep("do_step: dt must be positive");
    if (!has_pending_) throw Error("do_step: inputs not set");

    std::vector<double> u(n_in_);
    const OdeRhs f = [&](double t_local, std::span<const double> x, std::span<double> dxdt) {
        for (std::size_t j = 0; j < n_in_; ++j) u[j] = eval_poly(pending_, j, t_local).first;
        rhs(t_ + t_local, x, u, dxdt);
    };
    rk4_integrate(f, 0.0, dt, x_, substeps_);

    StepRecord rec;
    rec.t_end = t_ + dt;
    rec.x = x_;
    std::vector<double> u_end(n_in_), u_dot_end(n_in_);
    for (std::size_t j = 0; j < n_in_; ++j) {
        const auto [v, d] = eval_poly(pending_, j, dt);
        u_end[j] = v;
        u_dot_end[j] = d;
    }
    rec.f.resize(n_st_);
    rhs(rec.t_end, x_, u_end, rec.f);
    rec.y.resize(n_out_);
    outputs(rec.t_end, x_, u_end, rec.y);
    // y_dot = C f + D u_dot evaluated at the end point; exact as long as g has
    // no explicit time dependency (true for all built-in models).
    const Linearization lin = linearize(rec.t_end, x_, u_end);
    rec.y_dot = matvec(lin.c, rec.f);
    const std::vector<double> du = matvec(lin.d, u_dot_end);
    for (std::size_t i = 0; i < n_out_; ++i) rec.y_dot[i] += du[i];

    for (double v : rec.x)
        if (!std::isfinite(v)) throw SolverDiverged("do_step: non-finite state in " + id_);

    t_ = rec.t_end;
    u_now_ = u_end;
    return rec;
}

Linearization Slave::get_linearization() const {
    if (!caps_.linearization)
        throw CapabilityMissing("get_linearization: " + id_ + " lacks the capability");
    return linearize(t_, x_, u_now_);
}

Snapshot Slave::save_state() const {
    if (!caps_.rollback) throw CapabilityMissing("save_state: " + id_ + " lacks rollback");
    return Snapshot{t_, x_, u_now_, pending_, has_pending_};
}

void Slave::restore_state(const Snapshot& snap) {
    if (!caps_.rollback) throw CapabilityMissing("restore_state: " + id_ + " lacks rollback");
    t_ = snap.t;
    x_ = snap.x;
    u_now_ = snap.u_now;
    pending_ = snap.pending;
    has_pending_ = snap.has_pending;
}

std::vector<double> Slave::output_values() const {
    std::vector<double> y(n_out_);
    outputs(t_, x_, u_now_, y);
    return y;
}

std::vector<double> Slave::state_derivatives() const {
    if (!caps_.state_access)
        throw CapabilityMissing("state_derivatives: " + id_ + " lacks state access");
    std::vector<double> f(n_st_);
    rhs(t_, x_, u_now_, f);
    return f;
}

namespace {

// ---------------------------------------------------------------------------
// Two-mass mechanical benchmark. Quantities measured positively left-to-right,
// spring natural lengths zero.
// ---------------------------------------------------------------------------

struct TwoMassParams {
    double d1 = 10.0, d2 = 10.0, d3 = 40.0;
    double c1 = 10000.0, c2 = 10000.0, c3 = 100000.0;
    double m1 = 5.0, m2 = 80.0;
};

// Left body. States (x1, v1); input F (coupling force acting on its right
// side); outputs (v1, x1).
class TwoMassLeft final : public Slave {
public:
    TwoMassLeft(const TwoMassParams& p, std::vector<double> x0, std::vector<double> u0)
        : Slave("s1", 1, 2, 2, 0.0, std::move(x0), std::move(u0)), p_(p) {}

protected:
    void rhs(double, std::span<const double> x, std::span<const double> u,
             std::span<double> dxdt) const override {
        dxdt[0] = x[1];
        dxdt[1] = (-p_.c1 * x[0] - p_.d1 * x[1] + u[0]) / p_.m1;
    }
    void outputs(double, std::span<const double> x, std::span<const double>,
                 std::span<double> y) const override {
        y[0] = x[1];
        y[1] = x[0];
    }
    Linearization linearize(double, std::span<const double>,
                            std::span<const double>) const override {
        Linearization lin{DenseMatrix(2, 2), DenseMatrix(2, 1), DenseMatrix(2, 2),
                          DenseMatrix(2, 1)};
        lin.a(0, 1) = 1.0;
        lin.a(1, 0) = -p_.c1 / p_.m1;
        lin.a(1, 1) = -p_.d1 / p_.m1;
        lin.b(1, 0) = 1.0 / p_.m1;
        lin.c(0, 1) = 1.0;
        lin.c(1, 0) = 1.0;
        return lin;
    }

private:
    TwoMassParams p_;
};

// Right body. States (x2, v2); inputs (v1, x1); output F = c2 (x2 - x1) +
// d2 (v2 - v1), the force the coupling spring/damper exerts on the left mass.
class TwoMassRight final : public Slave {
public:
    TwoMassRight(const TwoMassParams& p, std::vector<double> x0, std::vector<double> u0)
        : Slave("s2", 2, 1, 2, 0.0, std::move(x0), std::move(u0)), p_(p) {}

protected:
    void rhs(double, std::span<const double> x, std::span<const double> u,
             std::span<double> dxdt) const override {
        dxdt[0] = x[1];
        dxdt[1] = (-p_.c2 * (x[0] - u[1]) - p_.d2 * (x[1] - u[0]) - p_.c3 * x[0] -
                   p_.d3 * x[1]) /
                  p_.m2;
    }
    void outputs(double, std::span<const double> x, std::span<const double> u,
                 std::span<double> y) const override {
        y[0] = p_.c2 * (x[0] - u[1]) + p_.d2 * (x[1] - u[0]);
    }
    Linearization linearize(double, std::span<const double>,
                            std::span<const double>) const override {
        Linearization lin{DenseMatrix(2, 2), DenseMatrix(2, 2), DenseMatrix(1, 2),
                          DenseMatrix(1, 2)};
        lin.a(0, 1) = 1.0;
        lin.a(1, 0) = -(p_.c2 + p_.c3) / p_.m2;
        lin.a(1, 1) = -(p_.d2 + p_.d3) / p_.m2;
        lin.b(1, 0) = p_.d2 / p_.m2;
        lin.b(1, 1) = p_.c2 / p_.m2;
        lin.c(0, 0) = p_.c2;
        lin.c(0, 1) = p_.d2;
        lin.d(0, 0) = -p_.d2;
        lin.d(0, 1) = -p_.c2;
        return lin;
    }

private:
    TwoMassParams p_;
};

// ---------------------------------------------------------------------------
// Lotka-Volterra, one species per slave.
// ---------------------------------------------------------------------------

// Prey: x' = alpha x - beta x u, u = amount of predator; output x.
class PreySlave final : public Slave {
public:
    PreySlave(const LotkaVolterraParams& p, double x0, double u0)
        : Slave("s1", 1, 1, 1, 0.0, {x0}, {u0}), p_(p) {}

protected:
    void rhs(double, std::span<const double> x, std::span<const double> u,
             std::span<double> dxdt) const override {
        dxdt[0] = p_.alpha * x[0] - p_.beta * x[0] * u[0];
    }
    void outputs(double, std::span<const double> x, std::span<const double>,
                 std::span<double> y) const override {
        y[0] = x[0];
    }
    Linearization linearize(double, std::span<const double> x,
                            std::span<const double> u) const override {
        Linearization lin{DenseMatrix(1, 1), DenseMatrix(1, 1), DenseMatrix(1, 1),
                          DenseMatrix(1, 1)};
        lin.a(0, 0) = p_.alpha - p_.beta * u[0];
        lin.b(0, 0) = -p_.beta * x[0];
        lin.c(0, 0) = 1.0;
        return lin;
    }

private:
    LotkaVolterraParams p_;
};

// Predator: x' = delta u x - gamma x, u = amount of prey; output x.
class PredatorSlave final : public Slave {
public:
    PredatorSlave(const LotkaVolterraParams& p, double x0, double u0)
        : Slave("s2", 1, 1, 1, 0.0, {x0}, {u0}), p_(p) {}

protected:
    void rhs(double, std::span<const double> x, std::span<const double> u,
             std::span<double> dxdt) const override {
        dxdt[0] = p_.delta * u[0] * x[0] - p_.gamma * x[0];
    }
    void outputs(double, std::span<const double> x, std::span<const double>,
                 std::span<double> y) const override {
        y[0] = x[0];
    }
    Linearization linearize(double, std::span<const double> x,
                            std::span<const double> u) const override {
        Linearization lin{DenseMatrix(1, 1), DenseMatrix(1, 1), DenseMatrix(1, 1),
                          DenseMatrix(1, 1)};
        lin.a(0, 0) = p_.delta * u[0] - p_.gamma;
        lin.b(0, 0) = p_.delta * x[0];
        lin.c(0, 0) = 1.0;
        return lin;
    }

private:
    LotkaVolterraParams p_;
};

}  // namespace

CoupledModel make_two_mass() {
    const TwoMassParams p;
    CoupledModel model;
    // Initial states and coupling conditions: x1 = -1 m, x2 = -3 m, both at
    // rest; initial coupling force c2 (x2 - x1) = -20000 N.
    const double f0 = p.c2 * (-3.0 - -1.0);
    model.slaves.push_back(std::make_unique<TwoMassLeft>(p, std::vector<double>{-1.0, 0.0},
                                                         std::vector<double>{f0}));
    model.slaves.push_back(std::make_unique<TwoMassRight>(p, std::vector<double>{-3.0, 0.0},
                                                          std::vector<double>{0.0, -1.0}));
    // Global outputs (y11=v1, y12=x1, y21=F); inputs (u11=F, u21=v1, u22=x1).
    model.topo = build_topology({{2, 0}, {0, 1}, {1, 2}}, {{1, 2, 2}, {2, 1, 2}});
    model.initial_inputs = {f0, 0.0, -1.0};
    return model;
}

CoupledModel make_lotka_volterra() {
    const LotkaVolterraParams p;
    CoupledModel model;
    model.slaves.push_back(std::make_unique<PreySlave>(p, 1.0, 1.0));
    model.slaves.push_back(std::make_unique<PredatorSlave>(p, 1.0, 1.0));
    // y11 (prey) -> u21; y21 (predator) -> u11.
    model.topo = build_topology({{1, 0}, {0, 1}}, {{1, 1, 1}, {1, 1, 1}});
    model.initial_inputs = {1.0, 1.0};
    return model;
}

}  // namespace cosim
