#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cosim/coupling.hpp"

namespace cosim {

enum class Method {
    ni_jacobi,
    missiles,
    ifosmondi_jfm,
    monolithic,
};

ModelId parse_model(const std::string& name);    // "two-mass" | "lotka-volterra"
Method parse_method(const std::string& name);    // "ni-jacobi" | "missiles" | ...
std::string to_string(ModelId id);
std::string to_string(Method m);

struct RunConfig {
    ModelId model{ModelId::two_mass};
    Method method{Method::missiles};
    double dt{1e-3};
    double t_end{0.0};  // 0 selects the model's benchmark horizon
    double epsilon{1e-5};
    int stehfest_terms{8};
    std::string output_path;               // CSV trajectory dump when non-empty
    std::string cache_dir{".cosim-cache"};  // monolithic reference cache
};

struct RunSummary {
    std::optional<double> error_pct;  // absent for monolithic runs
    double wall_s{0.0};
    std::size_t steps{0};
    bool failed{false};
};

// Benchmark horizons: 2 s for the mechanical model, 20 s for Lotka-Volterra.
double default_t_end(ModelId id);

// Index (into the stacked output vector) of the variable the error metric is
// computed on: left body position for two-mass, prey population for LV.
std::size_t error_variable(ModelId id);

// Fixed grid: dt must divide t_end to within 1e-9 * dt.
std::size_t grid_steps(double t_end, double dt);

CoupledModel make_model(ModelId id);

// 100 * ||y - ref|| / ||ref|| in the discrete L2 norm over the grid, on one
// output variable.
double relative_error_pct(const Trajectory& traj, const Trajectory& reference,
                          std::size_t var_index);

void emit_csv(const Trajectory& traj, std::ostream& os);
void emit_csv(const Trajectory& traj, const std::string& path);
Trajectory parse_csv(std::istream& is);
Trajectory parse_csv(const std::string& path);

// Disk-cached monolithic reference for a given (model, horizon, grid).
Trajectory monolithic_reference(ModelId id, double t_end, std::size_t steps,
                                const std::string& cache_dir);

// Executes one configured run; integration failures surface as StepFailed.
std::pair<Trajectory, RunSummary> run(const RunConfig& config);

// One machine-readable line: model,method,dt,epsilon,error_pct,wall_s,steps,failed
std::string summary_line(const RunConfig& config, const RunSummary& summary);

struct CompareResult {
    std::string table;                   // aligned text grid
    std::vector<std::string> csv_lines;  // one summary line per cell
    bool any_failed{false};
};

// Error grid over dt values and methods; ifosmondi-jfm expands into one column
// per epsilon.
CompareResult compare(ModelId model, const std::vector<Method>& methods,
                      const std::vector<double>& dts, const std::vector<double>& epsilons,
                      double t_end = 0.0, const std::string& cache_dir = ".cosim-cache");

}  // namespace cosim
