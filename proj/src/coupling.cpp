#include "cosim/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "cosim/ode.hpp"

namespace cosim {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double euclid_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_run_args(double t_end, std::size_t steps) {
    if (steps == 0) throw ConfigInvalid("run: step count must be positive");
    if (!(t_end > 0.0)) throw ConfigInvalid("run: t_end must be positive");
}

// Sets every slave's inputs to the constant initial coupling values so that
// outputs/derivatives/linearizations are defined before the first step.
void prime_inputs(CoupledModel& model) {
    for (std::size_t k = 0; k < model.slaves.size(); ++k) {
        Slave& s = *model.slaves[k];
        const std::size_t off = model.topo.in_offset[k];
        const std::span<const double> u0(model.initial_inputs.data() + off, s.n_in());
        s.set_inputs(constant_inputs(u0));
    }
}

std::vector<double> stacked_outputs(const CoupledModel& model) {
    std::vector<double> y(model.topo.n_out_tot());
    for (std::size_t k = 0; k < model.slaves.size(); ++k) {
        const std::vector<double> yk = model.slaves[k]->output_values();
        std::copy(yk.begin(), yk.end(), y.begin() + model.topo.out_offset[k]);
    }
    return y;
}

Trajectory init_trajectory(const CoupledModel& model, double t0) {
    Trajectory traj;
    traj.labels = output_labels(model);
    traj.times.push_back(t0);
    traj.outputs.push_back(stacked_outputs(model));
    return traj;
}

// Full (unrestarted) GMRES on a matrix-free operator; problem dimensions here
// are single digits, so one Arnoldi sweep of at most n vectors suffices.
std::vector<double> gmres(const std::function<std::vector<double>(std::span<const double>)>& matvec,
                          std::span<const double> rhs, double rel_tol) {
    const std::size_t n = rhs.size();
    const double beta = euclid_norm(rhs);
    std::vector<double> x(n, 0.0);
    if (beta == 0.0) return x;

    std::vector<std::vector<double>> v;
    v.emplace_back(rhs.begin(), rhs.end());
    for (double& a : v[0]) a /= beta;

    DenseMatrix h(n + 1, n);
    std::vector<double> cs(n), sn(n), g(n + 1, 0.0);
    g[0] = beta;
    std::size_t m = 0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> w = matvec(v[j]);
        for (std::size_t i = 0; i <= j; ++i) {
            double dot = 0.0;
            for (std::size_t r = 0; r < n; ++r) dot += w[r] * v[i][r];
            h(i, j) = dot;
            for (std::size_t r = 0; r < n; ++r) w[r] -= dot * v[i][r];
        }
        const double wnorm = euclid_norm(w);
        h(j + 1, j) = wnorm;
        if (j + 1 < n && wnorm > 0.0) {
            v.emplace_back(w);
            for (double& a : v[j + 1]) a /= wnorm;
        }
        for (std::size_t i = 0; i < j; ++i) {
            const double t = cs[i] * h(i, j) + sn[i] * h(i + 1, j);
            h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
            h(i, j) = t;
        }
        const double denom = std::hypot(h(j, j), h(j + 1, j));
        if (denom == 0.0) {
            m = j;
            break;
        }
        cs[j] = h(j, j) / denom;
        sn[j] = h(j + 1, j) / denom;
        h(j, j) = denom;
        h(j + 1, j) = 0.0;
        g[j + 1] = -sn[j] * g[j];
        g[j] = cs[j] * g[j];
        m = j + 1;
        if (std::abs(g[j + 1]) <= rel_tol * beta || wnorm == 0.0) break;
    }
    // Back-substitute the m x m triangular system.
    std::vector<double> yk(m, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        double s = g[i];
        for (std::size_t j = i + 1; j < m; ++j) s -= h(i, j) * yk[j];
        yk[i] = s / h(i, i);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t r = 0; r < n; ++r) x[r] += yk[i] * v[i][r];
    return x;
}

}  // namespace

std::vector<std::string> output_labels(const CoupledModel& model) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < model.slaves.size(); ++k)
        for (std::size_t i = 0; i < model.slaves[k]->n_out(); ++i)
            labels.push_back("s" + std::to_string(k + 1) + ".y" + std::to_string(i + 1));
    return labels;
}

MissilesProblem assemble_missiles(const Topology& topo, const std::vector<CostaricaOps>& ops,
                                  const HermiteElems& elems, const DenseMatrix& b_coeffs,
                                  std::span<const double> x_stack) {
    const std::size_t n_out = topo.n_out_tot();
    const std::size_t n = 2 * n_out;
    const std::size_t n_sys = topo.systems.size();

    // Stacked (y; y_dot) image of the G operators applied to the polynomials
    // calibrated from the given end constraints (u_vals, u_dots).
    const auto apply_g = [&](std::span<const double> u_vals, std::span<const double> u_dots,
                             bool include_b) {
        std::vector<double> out(n, 0.0);
        for (std::size_t k = 0; k < n_sys; ++k) {
            const std::size_t n_in_k = topo.systems[k].n_in;
            const std::size_t in_off = topo.in_offset[k];
            DenseMatrix xi(n_in_k, kPolyDegree + 1);
            for (std::size_t j = 0; j < n_in_k; ++j) {
                const std::size_t jg = in_off + j;
                for (std::size_t p = 0; p <= kPolyDegree; ++p) {
                    xi(j, p) = elems.av[p] * u_vals[jg] + elems.ad[p] * u_dots[jg] +
                               (include_b ? b_coeffs(jg, p) : 0.0);
                }
            }
            const std::vector<double> yv = contract_gp(ops[k].g_v, xi);
            const std::vector<double> yd = contract_gp(ops[k].g_d, xi);
            const std::size_t out_off = topo.out_offset[k];
            for (std::size_t i = 0; i < yv.size(); ++i) {
                out[out_off + i] = yv[i];
                out[n_out + out_off + i] = yd[i];
            }
        }
        return out;
    };

    MissilesProblem prob;
    prob.m = DenseMatrix::identity(n);
    std::vector<double> e(n_out, 0.0);
    const std::vector<double> zeros(topo.n_in_tot(), 0.0);
    for (std::size_t q = 0; q < n; ++q) {
        e[q % n_out] = 1.0;
        const std::vector<double> u = dispatch(topo, e);
        e[q % n_out] = 0.0;
        const std::vector<double> col =
            q < n_out ? apply_g(u, zeros, false) : apply_g(zeros, u, false);
        for (std::size_t i = 0; i < n; ++i) prob.m(i, q) -= col[i];
    }

    prob.rhs = apply_g(zeros, zeros, true);
    for (std::size_t k = 0; k < n_sys; ++k) {
        const std::span<const double> xk(x_stack.data() + topo.st_offset[k], topo.systems[k].n_st);
        const std::vector<double> pv = matvec(ops[k].p_v, xk);
        const std::vector<double> pd = matvec(ops[k].p_d, xk);
        const std::vector<double> rv = matvec(ops[k].r_v, ops[k].f_c);
        const std::vector<double> rd = matvec(ops[k].r_d, ops[k].f_c);
        const std::size_t out_off = topo.out_offset[k];
        for (std::size_t i = 0; i < pv.size(); ++i) {
            prob.rhs[out_off + i] += pv[i] + rv[i] + ops[k].y_c[i];
            prob.rhs[n_out + out_off + i] += pd[i] + rd[i] + ops[k].y_dot_c[i];
        }
    }
    return prob;
}

MissilesSolution solve_missiles(const MissilesProblem& problem) {
    LuFactors f{problem.m};
    const std::vector<double> z = f.solve(problem.rhs);

    const std::size_t n = problem.rhs.size();
    std::vector<double> res = matvec(problem.m, z);
    for (std::size_t i = 0; i < n; ++i) res[i] -= problem.rhs[i];
    const double residual = inf_norm(res) / (1.0 + inf_norm(problem.rhs));
    if (residual > 1e-9)
        throw SolverDiverged("solve_missiles: linear residual " + std::to_string(residual));

    MissilesSolution sol;
    sol.y_hat.assign(z.begin(), z.begin() + n / 2);
    sol.y_dot_hat.assign(z.begin() + n / 2, z.end());
    sol.rcond = f.rcond();
    sol.residual = residual;
    return sol;
}

Trajectory missiles_run(CoupledModel& model, double t_end, std::size_t steps, int stehfest_terms) {
    check_run_args(t_end, steps);
    for (const auto& s : model.slaves) {
        const Capabilities& c = s->caps();
        if (!c.polynomial_inputs || !c.state_access || !c.linearization)
            throw CapabilityMissing("missiles_run: " + s->id() +
                                    " needs polynomial inputs, state access and linearization");
    }
    const double dt = t_end / double(steps);
    const StehfestScheme scheme = stehfest_scheme(stehfest_terms);
    const Topology& topo = model.topo;
    const std::size_t n_in_tot = topo.n_in_tot();
    const std::size_t n_out_tot = topo.n_out_tot();

    prime_inputs(model);
    Trajectory traj = init_trajectory(model, model.slaves[0]->current_time());

    std::vector<double> u_vals = model.initial_inputs;
    std::vector<double> u_dots(n_in_tot, 0.0);
    bool first = true;

    for (std::size_t n = 0; n < steps; ++n) {
        const HermiteElems elems = first ? hermite_elems_first_step(dt) : hermite_elems_local(dt);
        DenseMatrix b_coeffs(n_in_tot, kPolyDegree + 1);
        for (std::size_t j = 0; j < n_in_tot; ++j) {
            const auto b = first ? hermite_b_first_step(dt, u_vals[j])
                                 : hermite_b_local(dt, u_vals[j], u_dots[j]);
            for (std::size_t p = 0; p <= kPolyDegree; ++p) b_coeffs(j, p) = b[p];
        }

        std::vector<CostaricaOps> ops;
        std::vector<double> x_stack;
        ops.reserve(model.slaves.size());
        for (const auto& s : model.slaves) {
            const std::vector<double>& x = s->state();
            x_stack.insert(x_stack.end(), x.begin(), x.end());
            ops.push_back(compute_costarica(s->get_linearization(), dt, scheme, x,
                                            s->state_derivatives(), s->current_inputs(),
                                            s->output_values()));
        }

        const MissilesProblem prob = assemble_missiles(topo, ops, elems, b_coeffs, x_stack);
        const MissilesSolution sol = solve_missiles(prob);
        traj.max_residual = std::max(traj.max_residual, sol.residual);
        traj.min_rcond = std::min(traj.min_rcond, sol.rcond);

        const std::vector<double> u2 = dispatch(topo, sol.y_hat);
        const std::vector<double> u2d = dispatch(topo, sol.y_dot_hat);

        std::vector<double> y_row(n_out_tot);
        for (std::size_t k = 0; k < model.slaves.size(); ++k) {
            Slave& s = *model.slaves[k];
            const std::size_t in_off = topo.in_offset[k];
            PolyInput u(s.n_in());
            for (std::size_t j = 0; j < s.n_in(); ++j) {
                const std::size_t jg = in_off + j;
                for (std::size_t p = 0; p <= kPolyDegree; ++p)
                    u.xi(j, p) = elems.av[p] * u2[jg] + elems.ad[p] * u2d[jg] + b_coeffs(jg, p);
                const auto [v0, d0] = eval_poly(u, j, 0.0);
                const double scale = 1.0 + std::abs(u_vals[jg]);
                traj.max_c1_jump = std::max(traj.max_c1_jump, std::abs(v0 - u_vals[jg]) / scale);
                if (!first)
                    traj.max_c1_jump =
                        std::max(traj.max_c1_jump,
                                 std::abs(d0 - u_dots[jg]) / (1.0 + std::abs(u_dots[jg])));
            }
            s.set_inputs(u);
            const StepRecord rec = s.do_step(dt);
            const std::size_t out_off = topo.out_offset[k];
            for (std::size_t i = 0; i < rec.y.size(); ++i) {
                y_row[out_off + i] = rec.y[i];
                traj.max_prediction_error =
                    std::max(traj.max_prediction_error,
                             std::abs(sol.y_hat[out_off + i] - rec.y[i]) / (1.0 + std::abs(rec.y[i])));
            }
        }
        traj.times.push_back(model.slaves[0]->current_time());
        traj.outputs.push_back(y_row);
        u_vals = u2;
        u_dots = u2d;
        first = false;
    }
    return traj;
}

Trajectory jacobi_run(CoupledModel& model, double t_end, std::size_t steps) {
    check_run_args(t_end, steps);
    const double dt = t_end / double(steps);
    const Topology& topo = model.topo;

    prime_inputs(model);
    Trajectory traj = init_trajectory(model, model.slaves[0]->current_time());

    std::vector<double> y_row(topo.n_out_tot());
    const auto gather = [&] {
        for (std::size_t k = 0; k < model.slaves.size(); ++k) {
            const std::vector<double> y = model.slaves[k]->output_values();
            std::copy(y.begin(), y.end(), y_row.begin() + topo.out_offset[k]);
        }
    };
    const auto set_constant = [&](const std::vector<double>& u) {
        for (std::size_t k = 0; k < model.slaves.size(); ++k) {
            Slave& s = *model.slaves[k];
            const std::span<const double> uk(u.data() + topo.in_offset[k], s.n_in());
            s.set_inputs(constant_inputs(uk));
        }
    };

    for (std::size_t n = 0; n < steps; ++n) {
        set_constant(dispatch(topo, traj.outputs.back()));
        for (const auto& s : model.slaves) s->do_step(dt);
        // Exchange at the communication point: update every slave's inputs with the
        // freshly dispatched values before sampling, so direct-feedthrough outputs
        // reflect this instant instead of inputs held over the elapsed step.
        gather();
        set_constant(dispatch(topo, y_row));
        gather();
        traj.times.push_back(model.slaves[0]->current_time());
        traj.outputs.push_back(y_row);
    }
    return traj;
}

Trajectory ifosmondi_jfm_run(CoupledModel& model, double t_end, std::size_t steps, double epsilon,
                             std::size_t max_iterations) {
    check_run_args(t_end, steps);
    if (!(epsilon > 0.0)) throw ConfigInvalid("ifosmondi_jfm_run: epsilon must be positive");
    for (const auto& s : model.slaves) {
        const Capabilities& c = s->caps();
        if (!c.rollback || !c.polynomial_inputs || !c.output_derivatives)
            throw CapabilityMissing("ifosmondi_jfm_run: " + s->id() +
                                    " needs rollback, polynomial inputs and output derivatives");
    }
    const double dt = t_end / double(steps);
    const Topology& topo = model.topo;
    const std::size_t n_in_tot = topo.n_in_tot();
    const std::size_t dim = 2 * n_in_tot;

    prime_inputs(model);
    Trajectory traj = init_trajectory(model, model.slaves[0]->current_time());

    std::vector<double> u_vals = model.initial_inputs;  // start-of-step constraints
    std::vector<double> u_dots(n_in_tot, 0.0);
    std::vector<double> w(dim, 0.0);  // end-of-step constraint guess
    std::copy(u_vals.begin(), u_vals.end(), w.begin());
    bool first = true;

    for (std::size_t n = 0; n < steps; ++n) {
        const HermiteElems elems = first ? hermite_elems_first_step(dt) : hermite_elems_local(dt);
        DenseMatrix b_coeffs(n_in_tot, kPolyDegree + 1);
        for (std::size_t j = 0; j < n_in_tot; ++j) {
            const auto b = first ? hermite_b_first_step(dt, u_vals[j])
                                 : hermite_b_local(dt, u_vals[j], u_dots[j]);
            for (std::size_t p = 0; p <= kPolyDegree; ++p) b_coeffs(j, p) = b[p];
        }

        std::vector<Snapshot> snaps;
        snaps.reserve(model.slaves.size());
        for (const auto& s : model.slaves) snaps.push_back(s->save_state());

        std::vector<double> y_row(topo.n_out_tot());
        // Rolls back, steps every slave against the constraints in z, and
        // returns the fixed-point residual z - (dispatched end outputs).
        const auto eta = [&](std::span<const double> z) {
            std::vector<double> y(topo.n_out_tot()), y_dot(topo.n_out_tot());
            for (std::size_t k = 0; k < model.slaves.size(); ++k) {
                Slave& s = *model.slaves[k];
                s.restore_state(snaps[k]);
                const std::size_t in_off = topo.in_offset[k];
                PolyInput u(s.n_in());
                for (std::size_t j = 0; j < s.n_in(); ++j) {
                    const std::size_t jg = in_off + j;
                    for (std::size_t p = 0; p <= kPolyDegree; ++p)
                        u.xi(j, p) = elems.av[p] * z[jg] + elems.ad[p] * z[n_in_tot + jg] +
                                     b_coeffs(jg, p);
                }
                s.set_inputs(u);
                const StepRecord rec = s.do_step(dt);
                const std::size_t out_off = topo.out_offset[k];
                std::copy(rec.y.begin(), rec.y.end(), y.begin() + out_off);
                std::copy(rec.y_dot.begin(), rec.y_dot.end(), y_dot.begin() + out_off);
            }
            y_row = y;
            const std::vector<double> su = dispatch(topo, y);
            const std::vector<double> sd = dispatch(topo, y_dot);
            std::vector<double> r(dim);
            for (std::size_t j = 0; j < n_in_tot; ++j) {
                r[j] = z[j] - su[j];
                r[n_in_tot + j] = z[n_in_tot + j] - sd[j];
            }
            return r;
        };

        // Componentwise test: constraint rows mix magnitudes (values vs derivatives,
        // forces vs positions), so a single inf-norm scale would let the small rows
        // converge only to the scale of the largest one.
        const auto converged = [&](const std::vector<double>& res) {
            for (std::size_t i = 0; i < dim; ++i)
                if (std::abs(res[i]) > epsilon * (1.0 + std::abs(w[i]))) return false;
            return true;
        };
        std::vector<double> r = eta(w);
        std::size_t iter = 0;
        while (!converged(r)) {
            if (iter >= max_iterations)
                throw NoConvergence("ifosmondi_jfm_run: no convergence at t = " +
                                    std::to_string(model.slaves[0]->current_time()) + " after " +
                                    std::to_string(iter) + " iterations");
            const double h = 1e-7 * (1.0 + inf_norm(w));
            const auto jac_mv = [&](std::span<const double> v) {
                const double nv = euclid_norm(v);
                std::vector<double> out(dim, 0.0);
                if (nv == 0.0) return out;
                const double scale = h / nv;
                std::vector<double> zp(w);
                for (std::size_t i = 0; i < dim; ++i) zp[i] += scale * v[i];
                const std::vector<double> rp = eta(zp);
                for (std::size_t i = 0; i < dim; ++i) out[i] = (rp[i] - r[i]) / scale;
                return out;
            };
            std::vector<double> neg_r(r);
            for (double& x : neg_r) x = -x;
            const std::vector<double> d = gmres(jac_mv, neg_r, 1e-4);
            for (std::size_t i = 0; i < dim; ++i) w[i] += d[i];
            r = eta(w);
            ++iter;
            ++traj.total_inner_iterations;
        }

        traj.times.push_back(model.slaves[0]->current_time());
        traj.outputs.push_back(y_row);
        std::copy(w.begin(), w.begin() + n_in_tot, u_vals.begin());
        std::copy(w.begin() + n_in_tot, w.end(), u_dots.begin());
        first = false;
    }
    return traj;
}

Trajectory monolithic_run(ModelId id, double t_end, std::size_t steps) {
    check_run_args(t_end, steps);
    const double dt = t_end / double(steps);

    OdeRhs rhs;
    std::function<std::vector<double>(std::span<const double>)> out_map;
    std::vector<double> x;
    std::vector<std::string> labels;

    if (id == ModelId::two_mass) {
        const double d1 = 10.0, d2 = 10.0, d3 = 40.0;
        const double c1 = 1e4, c2 = 1e4, c3 = 1e5;
        const double m1 = 5.0, m2 = 80.0;
        x = {-1.0, 0.0, -3.0, 0.0};  // (x1, v1, x2, v2)
        rhs = [=](double, std::span<const double> s, std::span<double> dx) {
            const double force = c2 * (s[2] - s[0]) + d2 * (s[3] - s[1]);
            dx[0] = s[1];
            dx[1] = (-c1 * s[0] - d1 * s[1] + force) / m1;
            dx[2] = s[3];
            dx[3] = (-(c2 + c3) * s[2] - (d2 + d3) * s[3] + d2 * s[1] + c2 * s[0]) / m2;
        };
        out_map = [=](std::span<const double> s) {
            const double force = c2 * (s[2] - s[0]) + d2 * (s[3] - s[1]);
            return std::vector<double>{s[1], s[0], force};
        };
        labels = {"s1.y1", "s1.y2", "s2.y1"};
    } else {
        const LotkaVolterraParams p;
        x = {1.0, 1.0};
        rhs = [=](double, std::span<const double> s, std::span<double> dx) {
            dx[0] = p.alpha * s[0] - p.beta * s[0] * s[1];
            dx[1] = p.delta * s[0] * s[1] - p.gamma * s[1];
        };
        out_map = [](std::span<const double> s) { return std::vector<double>{s[0], s[1]}; };
        labels = {"s1.y1", "s2.y1"};
    }

    Trajectory traj;
    traj.labels = std::move(labels);
    traj.times.push_back(0.0);
    traj.outputs.push_back(out_map(x));
    for (std::size_t n = 0; n < steps; ++n) {
        dp54_integrate(rhs, n * dt, (n + 1) * dt, x, 1e-10);
        traj.times.push_back((n + 1) * dt);
        traj.outputs.push_back(out_map(x));
    }
    return traj;
}

}  // namespace cosim
