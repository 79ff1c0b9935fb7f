#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "cosim/linalg.hpp"

namespace cosim {

struct SystemSizes {
    std::size_t n_in{0};
    std::size_t n_out{0};
    std::size_t n_st{0};
};

// Output-to-input wiring of a modular model. phi(i, j) = 1 iff global output i
// drives global input j. Every column holds exactly one 1 (one driver per
// input); rows may hold several (fan-out).
struct Topology {
    DenseMatrix phi;
    std::vector<SystemSizes> systems;
    std::vector<std::size_t> in_offset;   // per system, into the global input stack
    std::vector<std::size_t> out_offset;  // per system, into the global output stack
    std::vector<std::size_t> st_offset;   // per system, into the global state stack

    std::size_t n_in_tot() const { return phi.cols; }
    std::size_t n_out_tot() const { return phi.rows; }
    std::size_t n_st_tot() const;
};

// connections lists (global output index, global input index) pairs.
Topology build_topology(const std::vector<std::pair<std::size_t, std::size_t>>& connections,
                        const std::vector<SystemSizes>& sizes);

// u = phi^T y (and identically for the derivative stack).
std::vector<double> dispatch(const Topology& topo, std::span<const double> y);

}  // namespace cosim
