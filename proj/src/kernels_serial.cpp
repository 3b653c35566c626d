// Straight-line reference kernels. These define the summation order that the
// OpenMP versions in kernels_omp.cpp must reproduce exactly.

#include <algorithm>
#include <cmath>
#include <limits>

#include "sinktrack/kernels.hpp"

namespace sinktrack::kernels::serial {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double finish_lse(double max_val, double sum) {
    return max_val == kNegInf ? kNegInf : max_val + std::log(sum);
}
} // namespace

void gibbs_kernel(const Matrix& cost, double lambda, std::span<const double> f,
                  std::span<const double> g, Matrix& out) {
    const std::size_t n = cost.rows(), m = cost.cols();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) out(i, j) = gibbs(f[i] + g[j] - lambda * cost(i, j));
}

void gibbs_kernel3(const Tensor3& cost, double lambda, std::span<const double> f,
                   std::span<const double> g, std::span<const double> h, Tensor3& out) {
    const std::size_t d = cost.extent();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                out(i, j, k) = gibbs(f[i] + g[j] + h[k] - lambda * cost(i, j, k));
}

void matvec(const Matrix& k, std::span<const double> v, std::span<double> out) {
    for (std::size_t i = 0; i < k.rows(); ++i) out[i] = dot(k.row(i).data(), v.data(), k.cols());
}

void matvec_t(const Matrix& k, std::span<const double> u, std::span<double> out) {
    for (std::size_t j = 0; j < k.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < k.rows(); ++i) s += u[i] * k(i, j);
        out[j] = s;
    }
}

void contract_last(const Tensor3& k, std::span<const double> w, Matrix& out) {
    const std::size_t d = k.extent();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = dot(k.fiber(i, j).data(), w.data(), d);
}

void contract_front(const Tensor3& k, std::span<const double> u, std::span<const double> v,
                    std::span<double> out) {
    const std::size_t d = k.extent();
    for (std::size_t l = 0; l < d; ++l) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double t = 0.0;
            for (std::size_t j = 0; j < d; ++j) t += v[j] * k(i, j, l);
            s += u[i] * t;
        }
        out[l] = s;
    }
}

void sum_middle(const Tensor3& k, Matrix& out) {
    const std::size_t d = k.extent();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t l = 0; l < d; ++l) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += k(i, j, l);
            out(i, l) = s;
        }
}

void row_logsumexp(const Matrix& cost, double lambda, std::span<const double> g,
                   std::span<double> out) {
    for (std::size_t i = 0; i < cost.rows(); ++i) {
        double mx = kNegInf;
        for (std::size_t j = 0; j < cost.cols(); ++j)
            mx = std::max(mx, g[j] - lambda * cost(i, j));
        double s = 0.0;
        if (mx != kNegInf)
            for (std::size_t j = 0; j < cost.cols(); ++j) s += std::exp(g[j] - lambda * cost(i, j) - mx);
        out[i] = finish_lse(mx, s);
    }
}

void col_logsumexp(const Matrix& cost, double lambda, std::span<const double> f,
                   std::span<double> out) {
    for (std::size_t j = 0; j < cost.cols(); ++j) {
        double mx = kNegInf;
        for (std::size_t i = 0; i < cost.rows(); ++i)
            mx = std::max(mx, f[i] - lambda * cost(i, j));
        double s = 0.0;
        if (mx != kNegInf)
            for (std::size_t i = 0; i < cost.rows(); ++i) s += std::exp(f[i] - lambda * cost(i, j) - mx);
        out[j] = finish_lse(mx, s);
    }
}

void axis_logsumexp3(const Tensor3& cost, double lambda, std::span<const double> f,
                     std::span<const double> g, std::span<const double> h, int axis,
                     std::span<double> out) {
    const std::size_t d = cost.extent();
    // Value at (i, j, k) with the reduced axis' own potential dropped.
    auto val = [&](std::size_t i, std::size_t j, std::size_t k) {
        double p = -lambda * cost(i, j, k);
        if (axis != 0) p += f[i];
        if (axis != 1) p += g[j];
        if (axis != 2) p += h[k];
        return p;
    };
    for (std::size_t a = 0; a < d; ++a) {
        double mx = kNegInf;
        for (std::size_t b = 0; b < d; ++b)
            for (std::size_t c = 0; c < d; ++c) {
                const double x = axis == 0 ? val(a, b, c) : axis == 1 ? val(b, a, c) : val(b, c, a);
                mx = std::max(mx, x);
            }
        double s = 0.0;
        if (mx != kNegInf)
            for (std::size_t b = 0; b < d; ++b)
                for (std::size_t c = 0; c < d; ++c) {
                    const double x = axis == 0 ? val(a, b, c) : axis == 1 ? val(b, a, c) : val(b, c, a);
                    s += std::exp(x - mx);
                }
        out[a] = finish_lse(mx, s);
    }
}

} // namespace sinktrack::kernels::serial
