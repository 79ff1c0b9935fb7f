#include "cosim/topology.hpp"

namespace cosim {

std::size_t Topology::n_st_tot() const {
    std::size_t n = 0;
    for (const auto& s : systems) n += s.n_st;
    return n;
}

Topology build_topology(const std::vector<std::pair<std::size_t, std::size_t>>& connections,
                        const std::vector<SystemSizes>& sizes) {
    Topology topo;
    topo.systems = sizes;
    std::size_t in_tot = 0, out_tot = 0, st_tot = 0;
    for (const auto& s : sizes) {
        topo.in_offset.push_back(in_tot);
        topo.out_offset.push_back(out_tot);
        topo.st_offset.push_back(st_tot);
        in_tot += s.n_in;
        out_tot += s.n_out;
        st_tot += s.n_st;
    }
    topo.phi = DenseMatrix(out_tot, in_tot);
    for (const auto& [out_idx, in_idx] : connections) {
        if (out_idx >= out_tot || in_idx >= in_tot)
            throw DimensionMismatch("build_topology: connection index out of range");
        if (topo.phi(out_idx, in_idx) != 0.0)
            throw MultiplyDrivenInput("build_topology: duplicate connection");
        topo.phi(out_idx, in_idx) = 1.0;
    }
    for (std::size_t j = 0; j < in_tot; ++j) {
        double col_sum = 0.0;
        for (std::size_t i = 0; i < out_tot; ++i) col_sum += topo.phi(i, j);
        if (col_sum == 0.0)
            throw UnconnectedInput("build_topology: input " + std::to_string(j) + " has no driver");
        if (col_sum > 1.0)
            throw MultiplyDrivenInput("build_topology: input " + std::to_string(j) +
                                      " has several drivers");
    }
    return topo;
}

std::vector<double> dispatch(const Topology& topo, std::span<const double> y) {
    return matvec_transposed(topo.phi, y);
}

}  // namespace cosim
