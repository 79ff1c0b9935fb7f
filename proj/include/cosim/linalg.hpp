#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cosim/errors.hpp"

namespace cosim {

// Row-major dense matrix. Problem sizes are tiny (tens of unknowns at most),
// so no sparse storage anywhere.
struct DenseMatrix {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static DenseMatrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct Tensor3 {
    std::size_t d1{0}, d2{0}, d3{0};
    std::vector<double> data;

    Tensor3() = default;
    Tensor3(std::size_t a, std::size_t b, std::size_t c, double fill = 0.0)
        : d1(a), d2(b), d3(c), data(a * b * c, fill) {}

    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data[(i * d2 + j) * d3 + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data[(i * d2 + j) * d3 + k];
    }
};

struct Tensor4 {
    std::size_t d1{0}, d2{0}, d3{0}, d4{0};
    std::vector<double> data;

    Tensor4() = default;
    Tensor4(std::size_t a, std::size_t b, std::size_t c, std::size_t d, double fill = 0.0)
        : d1(a), d2(b), d3(c), d4(d), data(a * b * c * d, fill) {}

    double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return data[((i * d2 + j) * d3 + k) * d4 + l];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return data[((i * d2 + j) * d3 + k) * d4 + l];
    }
};

// Partial-pivot LU factorization of a square matrix. A pivot whose magnitude
// falls below 1e-14 * max|entry| raises SingularMatrix.
class LuFactors {
public:
    explicit LuFactors(DenseMatrix m);

    std::vector<double> solve(std::span<const double> rhs) const;

    // 1-norm reciprocal condition estimate: 1 / (|A|_1 * |A^-1|_1), with the
    // inverse norm computed exactly column by column (sizes are tiny).
    double rcond() const;

    std::size_t size() const { return lu_.rows; }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
    double norm1_;
};

struct LuSolution {
    std::vector<double> x;
    double rcond;
};

LuSolution lu_solve(const DenseMatrix& m, std::span<const double> rhs);

std::vector<double> matvec(const DenseMatrix& m, std::span<const double> v);
std::vector<double> matvec_transposed(const DenseMatrix& m, std::span<const double> v);

// out[i] = sum_{j,p} g(i,j,p) * xi(j,p)
std::vector<double> contract_gp(const Tensor3& g, const DenseMatrix& xi);

// out(j,p) = sum_{j2,q} c4(j,p,j2,q) * xi(j2,q)
DenseMatrix contract_shift(const Tensor4& c4, const DenseMatrix& xi);

}  // namespace cosim
