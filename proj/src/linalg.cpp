#include "cosim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cosim {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

LuFactors::LuFactors(DenseMatrix m) : lu_(std::move(m)), perm_(lu_.rows) {
    if (lu_.rows != lu_.cols) throw DimensionMismatch("lu: matrix must be square");
    const std::size_t n = lu_.rows;
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    double max_entry = 0.0;
    norm1_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            col += std::abs(lu_(i, j));
            max_entry = std::max(max_entry, std::abs(lu_(i, j)));
        }
        norm1_ = std::max(norm1_, col);
    }
    const double pivot_floor = 1e-14 * max_entry;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu_(i, k)) > std::abs(lu_(piv, k))) piv = i;
        if (std::abs(lu_(piv, k)) < pivot_floor || lu_(piv, k) == 0.0)
            throw SingularMatrix("lu: pivot below threshold at column " + std::to_string(k));
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            lu_(i, k) /= lu_(k, k);
            const double lik = lu_(i, k);
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
        }
    }
}

std::vector<double> LuFactors::solve(std::span<const double> rhs) const {
    const std::size_t n = lu_.rows;
    if (rhs.size() != n) throw DimensionMismatch("lu_solve: rhs length mismatch");
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
        x[ii] /= lu_(ii, ii);
    }
    return x;
}

double LuFactors::rcond() const {
    const std::size_t n = lu_.rows;
    if (n == 0) return 1.0;
    std::vector<double> e(n, 0.0);
    double inv_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = solve(e);
        e[j] = 0.0;
        double sum = 0.0;
        for (double v : col) sum += std::abs(v);
        inv_norm = std::max(inv_norm, sum);
    }
    if (norm1_ == 0.0 || inv_norm == 0.0) return 0.0;
    return 1.0 / (norm1_ * inv_norm);
}

LuSolution lu_solve(const DenseMatrix& m, std::span<const double> rhs) {
    LuFactors f(m);
    return LuSolution{f.solve(rhs), f.rcond()};
}

std::vector<double> matvec(const DenseMatrix& m, std::span<const double> v) {
    if (v.size() != m.cols) throw DimensionMismatch("matvec: length mismatch");
    std::vector<double> out(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[i] += m(i, j) * v[j];
    return out;
}

std::vector<double> matvec_transposed(const DenseMatrix& m, std::span<const double> v) {
    if (v.size() != m.rows) throw DimensionMismatch("matvec_transposed: length mismatch");
    std::vector<double> out(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) out[j] += m(i, j) * v[i];
    return out;
}

std::vector<double> contract_gp(const Tensor3& g, const DenseMatrix& xi) {
    if (g.d2 != xi.rows || g.d3 != xi.cols)
        throw DimensionMismatch("contract_gp: tensor/matrix shape mismatch");
    std::vector<double> out(g.d1, 0.0);
    for (std::size_t i = 0; i < g.d1; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < g.d2; ++j)
            for (std::size_t p = 0; p < g.d3; ++p) acc += g(i, j, p) * xi(j, p);
        out[i] = acc;
    }
    return out;
}

DenseMatrix contract_shift(const Tensor4& c4, const DenseMatrix& xi) {
    if (c4.d3 != xi.rows || c4.d4 != xi.cols || c4.d1 != xi.rows || c4.d2 != xi.cols)
        throw DimensionMismatch("contract_shift: tensor/matrix shape mismatch");
    DenseMatrix out(xi.rows, xi.cols);
    for (std::size_t j = 0; j < c4.d1; ++j)
        for (std::size_t p = 0; p < c4.d2; ++p) {
            double acc = 0.0;
            for (std::size_t j2 = 0; j2 < c4.d3; ++j2)
                for (std::size_t q = 0; q < c4.d4; ++q) acc += c4(j, p, j2, q) * xi(j2, q);
            out(j, p) = acc;
        }
    return out;
}

}  // namespace cosim
