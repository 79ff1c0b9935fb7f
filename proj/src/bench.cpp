#include "cosim/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cosim {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ModelId parse_model(const std::string& name) {
    if (name == "two-mass") return ModelId::two_mass;
    if (name == "lotka-volterra") return ModelId::lotka_volterra;
    throw ConfigInvalid("unknown model '" + name + "'");
}

Method parse_method(const std::string& name) {
    if (name == "ni-jacobi") return Method::ni_jacobi;
    if (name == "missiles") return Method::missiles;
    if (name == "ifosmondi-jfm") return Method::ifosmondi_jfm;
    if (name == "monolithic") return Method::monolithic;
    throw ConfigInvalid("unknown method '" + name + "'");
}

std::string to_string(ModelId id) {
    return id == ModelId::two_mass ? "two-mass" : "lotka-volterra";
}

std::string to_string(Method m) {
    switch (m) {
        case Method::ni_jacobi: return "ni-jacobi";
        case Method::missiles: return "missiles";
        case Method::ifosmondi_jfm: return "ifosmondi-jfm";
        case Method::monolithic: return "monolithic";
    }
    return "?";
}

double default_t_end(ModelId id) { return id == ModelId::two_mass ? 2.0 : 20.0; }

std::size_t error_variable(ModelId id) { return id == ModelId::two_mass ? 1 : 0; }

std::size_t grid_steps(double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0)) throw ConfigInvalid("grid_steps: dt and t_end must be > 0");
    const double raw = t_end / dt;
    const auto steps = std::size_t(std::llround(raw));
    if (steps == 0 || std::abs(double(steps) * dt - t_end) > 1e-9 * dt)
        throw ConfigInvalid("grid_steps: dt does not divide t_end");
    return steps;
}

CoupledModel make_model(ModelId id) {
    return id == ModelId::two_mass ? make_two_mass() : make_lotka_volterra();
}

double relative_error_pct(const Trajectory& traj, const Trajectory& reference,
                          std::size_t var_index) {
    if (traj.times.size() != reference.times.size())
        throw DimensionMismatch("relative_error_pct: grids differ");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double d = traj.outputs[i][var_index] - reference.outputs[i][var_index];
        num += d * d;
        den += reference.outputs[i][var_index] * reference.outputs[i][var_index];
    }
    if (den == 0.0) throw ConfigInvalid("relative_error_pct: zero reference norm");
    return 100.0 * std::sqrt(num / den);
}

void emit_csv(const Trajectory& traj, std::ostream& os) {
    os << "time";
    for (const std::string& l : traj.labels) os << ',' << l;
    os << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << fmt17(traj.times[i]);
        for (double v : traj.outputs[i]) os << ',' << fmt17(v);
        os << '\n';
    }
}

void emit_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("emit_csv: cannot open '" + path + "'");
    emit_csv(traj, f);
    if (!f) throw IoError("emit_csv: write failure on '" + path + "'");
}

Trajectory parse_csv(std::istream& is) {
    Trajectory traj;
    std::string line;
    if (!std::getline(is, line)) throw IoError("parse_csv: empty input");
    std::stringstream header(line);
    std::string cell;
    std::getline(header, cell, ',');  // "time"
    while (std::getline(header, cell, ',')) traj.labels.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::getline(row, cell, ',');
        traj.times.push_back(std::stod(cell));
        std::vector<double> y;
        while (std::getline(row, cell, ',')) y.push_back(std::stod(cell));
        if (y.size() != traj.labels.size()) throw IoError("parse_csv: ragged row");
        traj.outputs.push_back(std::move(y));
    }
    return traj;
}

Trajectory parse_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("parse_csv: cannot open '" + path + "'");
    return parse_csv(f);
}

Trajectory monolithic_reference(ModelId id, double t_end, std::size_t steps,
                                const std::string& cache_dir) {
    std::string path;
    if (!cache_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        char name[128];
        std::snprintf(name, sizeof name, "mono_%s_%.17g_%zu.csv", to_string(id).c_str(), t_end,
                      steps);
        path = (std::filesystem::path(cache_dir) / name).string();
        if (std::filesystem::exists(path)) {
            Trajectory cached = parse_csv(path);
            if (cached.times.size() == steps + 1) return cached;
        }
    }
    Trajectory traj = monolithic_run(id, t_end, steps);
    if (!path.empty()) emit_csv(traj, path);
    return traj;
}

std::pair<Trajectory, RunSummary> run(const RunConfig& config) {
    const double t_end = config.t_end > 0.0 ? config.t_end : default_t_end(config.model);
    const std::size_t steps = grid_steps(t_end, config.dt);

    RunSummary summary;
    summary.steps = steps;
    Trajectory traj;

    const auto start = std::chrono::steady_clock::now();
    if (config.method == Method::monolithic) {
        traj = monolithic_run(config.model, t_end, steps);
    } else {
        CoupledModel model = make_model(config.model);
        try {
            switch (config.method) {
                case Method::ni_jacobi: traj = jacobi_run(model, t_end, steps); break;
                case Method::missiles:
                    traj = missiles_run(model, t_end, steps, config.stehfest_terms);
                    break;
                default:
                    traj = ifosmondi_jfm_run(model, t_end, steps, config.epsilon);
                    break;
            }
        } catch (const SolverDiverged& e) {
            throw StepFailed(std::string("run: ") + e.what(), model.slaves[0]->current_time());
        } catch (const NoConvergence& e) {
            throw StepFailed(std::string("run: ") + e.what(), model.slaves[0]->current_time());
        }
    }
    summary.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (config.method != Method::monolithic) {
        const Trajectory ref = monolithic_reference(config.model, t_end, steps, config.cache_dir);
        summary.error_pct = relative_error_pct(traj, ref, error_variable(config.model));
    }
    if (!config.output_path.empty()) emit_csv(traj, config.output_path);
    return {std::move(traj), summary};
}

std::string summary_line(const RunConfig& config, const RunSummary& summary) {
    std::ostringstream os;
    os << to_string(config.model) << ',' << to_string(config.method) << ',' << config.dt << ',';
    if (config.method == Method::ifosmondi_jfm) os << config.epsilon;
    os << ',';
    if (summary.error_pct) os << std::setprecision(6) << *summary.error_pct;
    os << ',' << std::setprecision(4) << summary.wall_s << ',' << summary.steps << ','
       << (summary.failed ? 1 : 0);
    return os.str();
}

CompareResult compare(ModelId model, const std::vector<Method>& methods,
                      const std::vector<double>& dts, const std::vector<double>& epsilons,
                      double t_end, const std::string& cache_dir) {
    CompareResult result;

    struct Column {
        Method method;
        double epsilon;
        std::string title;
    };
    std::vector<Column> columns;
    for (Method m : methods) {
        if (m == Method::ifosmondi_jfm) {
            const std::vector<double>& eps = epsilons.empty() ? std::vector<double>{1e-5} : epsilons;
            for (double e : eps) {
                std::ostringstream t;
                t << to_string(m) << "(eps=" << e << ")";
                columns.push_back({m, e, t.str()});
            }
        } else {
            columns.push_back({m, 0.0, to_string(m)});
        }
    }
    if (columns.empty() || dts.empty()) return result;

    std::vector<std::vector<std::string>> cells(dts.size(), std::vector<std::string>(columns.size()));
    for (std::size_t r = 0; r < dts.size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            RunConfig cfg;
            cfg.model = model;
            cfg.method = columns[c].method;
            cfg.dt = dts[r];
            cfg.t_end = t_end;
            cfg.epsilon = columns[c].epsilon;
            cfg.cache_dir = cache_dir;
            RunSummary summary;
            try {
                summary = run(cfg).second;
            } catch (const StepFailed&) {
                summary.failed = true;
                result.any_failed = true;
            }
            std::ostringstream cell;
            if (summary.failed)
                cell << "failed";
            else if (summary.error_pct)
                cell << std::scientific << std::setprecision(3) << *summary.error_pct << " %";
            else
                cell << "ref";
            cells[r][c] = cell.str();
            result.csv_lines.push_back(summary_line(cfg, summary));
        }
    }

    std::vector<std::size_t> widths(columns.size() + 1, 8);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        widths[c + 1] = std::max(columns[c].title.size(), std::size_t(10));
        for (std::size_t r = 0; r < dts.size(); ++r)
            widths[c + 1] = std::max(widths[c + 1], cells[r][c].size());
    }
    std::ostringstream table;
    table << std::left << std::setw(int(widths[0])) << "dt";
    for (std::size_t c = 0; c < columns.size(); ++c)
        table << "  " << std::setw(int(widths[c + 1])) << columns[c].title;
    table << '\n';
    for (std::size_t r = 0; r < dts.size(); ++r) {
        std::ostringstream dtcell;
        dtcell << std::scientific << std::setprecision(1) << dts[r];
        table << std::left << std::setw(int(widths[0])) << dtcell.str();
        for (std::size_t c = 0; c < columns.size(); ++c)
            table << "  " << std::setw(int(widths[c + 1])) << cells[r][c];
        table << '\n';
    }
    result.table = table.str();
    return result;
}

}  // namespace cosim
