#include "cosim/costarica.hpp"

#include <cmath>

namespace cosim {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// (sI - A)^-1 computed column by column from one LU factorization.
DenseMatrix resolvent(const DenseMatrix& a, double s) {
    const std::size_t n = a.rows;
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? s : 0.0) - a(i, j);
    LuFactors f(std::move(m));
    DenseMatrix inv(n, n);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const std::vector<double> col = f.solve(e);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

}  // namespace

std::vector<double> stehfest_weights(int n_terms) {
    if (n_terms % 2 != 0 || n_terms < 4 || n_terms > 18)
        throw OddTermCount("stehfest: term count must be even and in [4, 18]");
    const int half = n_terms / 2;
    std::vector<double> v(n_terms);
    for (int i = 1; i <= n_terms; ++i) {
        double sum = 0.0;
        for (int k = (i + 1) / 2; k <= std::min(i, half); ++k) {
            sum += std::pow(double(k), half) * factorial(2 * k) /
                   (factorial(half - k) * factorial(k) * factorial(k - 1) * factorial(i - k) *
                    factorial(2 * k - i));
        }
        v[i - 1] = ((half + i) % 2 == 0 ? 1.0 : -1.0) * sum;
    }
    return v;
}

StehfestScheme stehfest_scheme(int n_terms) {
    return StehfestScheme{n_terms, stehfest_weights(n_terms)};
}

double stehfest_invert(const std::function<double(double)>& transform, double t,
                       const StehfestScheme& scheme) {
    const double ln2_t = std::log(2.0) / t;
    double acc = 0.0;
    for (int i = 1; i <= scheme.n_terms; ++i) acc += scheme.weights[i - 1] * transform(i * ln2_t);
    return ln2_t * acc;
}

Tensor3 eval_gamma(const Linearization& lin, double s, std::size_t degree) {
    const DenseMatrix h = [&] {
        DenseMatrix m = matmul(matmul(lin.c, resolvent(lin.a, s)), lin.b);
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) += lin.d(i, j);
        return m;
    }();
    Tensor3 g(h.rows, h.cols, degree + 1);
    for (std::size_t i = 0; i < h.rows; ++i)
        for (std::size_t j = 0; j < h.cols; ++j)
            for (std::size_t p = 0; p <= degree; ++p)
                g(i, j, p) = h(i, j) * factorial(int(p)) / std::pow(s, double(p) + 1.0);
    return g;
}

DenseMatrix eval_pi(const Linearization& lin, double s) {
    return matmul(lin.c, resolvent(lin.a, s));
}

DenseMatrix eval_theta(const Linearization& lin, double s) {
    DenseMatrix pi = eval_pi(lin, s);
    for (double& v : pi.data) v /= s;
    return pi;
}

void compute_operators(const Linearization& lin, double dt, std::size_t degree,
                       const StehfestScheme& scheme, CostaricaOps& ops) {
    const std::size_t n_out = lin.c.rows;
    const std::size_t n_in = lin.b.cols;
    const std::size_t n_st = lin.a.rows;

    ops.g_v = Tensor3(n_out, n_in, degree + 1);
    ops.g_d = Tensor3(n_out, n_in, degree + 1);
    ops.p_v = DenseMatrix(n_out, n_st);
    ops.p_d = DenseMatrix(n_out, n_st);
    ops.r_v = DenseMatrix(n_out, n_st);
    ops.r_d = DenseMatrix(n_out, n_st);

    const double ln2_t = std::log(2.0) / dt;
    for (int m = 1; m <= scheme.n_terms; ++m) {
        const double s = m * ln2_t;
        const double w = scheme.weights[m - 1];
        const DenseMatrix res = resolvent(lin.a, s);
        const DenseMatrix pi = matmul(lin.c, res);
        DenseMatrix h = matmul(pi, lin.b);
        for (std::size_t i = 0; i < n_out; ++i)
            for (std::size_t j = 0; j < n_in; ++j) h(i, j) += lin.d(i, j);

        for (std::size_t i = 0; i < n_out; ++i) {
            for (std::size_t j = 0; j < n_in; ++j) {
                for (std::size_t p = 0; p <= degree; ++p) {
                    const double fact = factorial(int(p));
                    ops.g_v(i, j, p) += w * h(i, j) * fact / std::pow(s, double(p) + 1.0);
                    // s Gamma_p(s) minus the initial value (D for p = 0).
                    double gd = h(i, j) * fact / std::pow(s, double(p));
                    if (p == 0) gd -= lin.d(i, j);
                    ops.g_d(i, j, p) += w * gd;
                }
            }
            for (std::size_t sig = 0; sig < n_st; ++sig) {
                ops.p_v(i, sig) += w * pi(i, sig);
                ops.p_d(i, sig) += w * (s * pi(i, sig) - lin.c(i, sig));
                ops.r_v(i, sig) += w * pi(i, sig) / s;
                ops.r_d(i, sig) += w * pi(i, sig);  // s Theta(s), zero initial value
            }
        }
    }
    for (double& v : ops.g_v.data) v *= ln2_t;
    for (double& v : ops.g_d.data) v *= ln2_t;
    for (double& v : ops.p_v.data) v *= ln2_t;
    for (double& v : ops.p_d.data) v *= ln2_t;
    for (double& v : ops.r_v.data) v *= ln2_t;
    for (double& v : ops.r_d.data) v *= ln2_t;
}

std::vector<double> compute_ftilde_c(const Linearization& lin, std::span<const double> x_tilde,
                                     std::span<const double> f_tilde,
                                     std::span<const double> u_end_prev) {
    if (f_tilde.size() != lin.a.rows)
        throw DimensionMismatch("compute_ftilde_c: f_tilde length mismatch");
    const std::vector<double> ax = matvec(lin.a, x_tilde);
    const std::vector<double> bu = matvec(lin.b, u_end_prev);
    std::vector<double> f_c(f_tilde.size());
    for (std::size_t i = 0; i < f_c.size(); ++i) f_c[i] = f_tilde[i] - ax[i] - bu[i];
    return f_c;
}

std::pair<std::vector<double>, std::vector<double>> compute_control_parts(
    const Linearization& lin, std::span<const double> x_tilde, std::span<const double> u_start,
    std::span<const double> g_value) {
    const std::vector<double> cx = matvec(lin.c, x_tilde);
    const std::vector<double> du = matvec(lin.d, u_start);
    std::vector<double> y_c(g_value.size());
    for (std::size_t i = 0; i < y_c.size(); ++i) y_c[i] = g_value[i] - cx[i] - du[i];
    return {y_c, std::vector<double>(g_value.size(), 0.0)};
}

CostaricaOps compute_costarica(const Linearization& lin, double dt, const StehfestScheme& scheme,
                               std::span<const double> x_tilde, std::span<const double> f_tilde,
                               std::span<const double> u_start, std::span<const double> g_value) {
    CostaricaOps ops;
    compute_operators(lin, dt, kPolyDegree, scheme, ops);
    ops.f_c = compute_ftilde_c(lin, x_tilde, f_tilde, u_start);
    auto [y_c, y_dot_c] = compute_control_parts(lin, x_tilde, u_start, g_value);
    ops.y_c = std::move(y_c);
    ops.y_dot_c = std::move(y_dot_c);
    return ops;
}

std::pair<std::vector<double>, std::vector<double>> estimate(const CostaricaOps& ops,
                                                             const PolyInput& xi_local,
                                                             std::span<const double> x_tilde) {
    std::vector<double> y = contract_gp(ops.g_v, xi_local.xi);
    std::vector<double> y_dot = contract_gp(ops.g_d, xi_local.xi);
    const std::vector<double> pv = matvec(ops.p_v, x_tilde);
    const std::vector<double> pd = matvec(ops.p_d, x_tilde);
    const std::vector<double> rv = matvec(ops.r_v, ops.f_c);
    const std::vector<double> rd = matvec(ops.r_d, ops.f_c);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += pv[i] + rv[i] + ops.y_c[i];
        y_dot[i] += pd[i] + rd[i] + ops.y_dot_c[i];
    }
    return {y, y_dot};
}

}  // namespace cosim
