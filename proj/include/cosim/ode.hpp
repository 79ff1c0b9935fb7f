#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cosim {

using OdeRhs = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

// Classical RK4 with a fixed number of substeps over [t0, t0 + dt].
void rk4_integrate(const OdeRhs& f, double t0, double dt, std::span<double> x, int substeps);

// Adaptive Dormand-Prince 5(4) from t0 to t1 with mixed absolute/relative
// error control. Throws SolverDiverged on non-finite state.
void dp54_integrate(const OdeRhs& f, double t0, double t1, std::vector<double>& x, double tol);

}  // namespace cosim
