// OpenMP kernels. Each output element is owned by exactly one thread and is
// accumulated in the order documented in kernels.hpp, so results match the
// serial reference bit for bit regardless of thread count.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sinktrack/kernels.hpp"

namespace sinktrack::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_max_threads(int n) {
#ifdef _OPENMP
    static const int runtime_default = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : runtime_default);
#else
    (void)n;
#endif
}

namespace omp {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Column-block width for reductions over the leading index.
constexpr std::ptrdiff_t kBlock = 64;

double finish_lse(double max_val, double sum) {
    return max_val == kNegInf ? kNegInf : max_val + std::log(sum);
}

std::ptrdiff_t blocks(std::size_t n) { return (static_cast<std::ptrdiff_t>(n) + kBlock - 1) / kBlock; }
} // namespace

void gibbs_kernel(const Matrix& cost, double lambda, std::span<const double> f,
                  std::span<const double> g, Matrix& out) {
    const auto n = static_cast<std::ptrdiff_t>(cost.rows());
    const std::size_t m = cost.cols();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto c = cost.row(i);
        auto o = out.row(i);
        for (std::size_t j = 0; j < m; ++j) o[j] = gibbs(f[i] + g[j] - lambda * c[j]);
    }
}

void gibbs_kernel3(const Tensor3& cost, double lambda, std::span<const double> f,
                   std::span<const double> g, std::span<const double> h, Tensor3& out) {
    const std::size_t d = cost.extent();
    const auto rows = static_cast<std::ptrdiff_t>(d * d);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const std::size_t i = r / d, j = r % d;
        const auto c = cost.fiber(i, j);
        auto o = out.fiber(i, j);
        for (std::size_t k = 0; k < d; ++k) o[k] = gibbs(f[i] + g[j] + h[k] - lambda * c[k]);
    }
}

void matvec(const Matrix& k, std::span<const double> v, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(k.rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = dot(k.row(i).data(), v.data(), k.cols());
    }
}

void matvec_t(const Matrix& k, std::span<const double> u, std::span<double> out) {
    const std::size_t n = k.rows(), m = k.cols();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks(m); ++b) {
        const std::size_t j0 = b * kBlock, j1 = std::min<std::size_t>(m, j0 + kBlock);
        for (std::size_t j = j0; j < j1; ++j) out[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = k.row(i);
            for (std::size_t j = j0; j < j1; ++j) out[j] += u[i] * row[j];
        }
    }
}

void contract_last(const Tensor3& k, std::span<const double> w, Matrix& out) {
    const std::size_t d = k.extent();
    const auto rows = static_cast<std::ptrdiff_t>(d * d);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        out(r / d, r % d) = dot(k.fiber(r / d, r % d).data(), w.data(), d);
    }
}

void contract_front(const Tensor3& k, std::span<const double> u, std::span<const double> v,
                    std::span<double> out) {
    const std::size_t d = k.extent();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks(d); ++b) {
        const std::size_t l0 = b * kBlock, l1 = std::min<std::size_t>(d, l0 + kBlock);
        double t[kBlock];
        for (std::size_t l = l0; l < l1; ++l) out[l] = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            std::fill(t, t + (l1 - l0), 0.0);
            for (std::size_t j = 0; j < d; ++j) {
                const auto fib = k.fiber(i, j);
                for (std::size_t l = l0; l < l1; ++l) t[l - l0] += v[j] * fib[l];
            }
            for (std::size_t l = l0; l < l1; ++l) out[l] += u[i] * t[l - l0];
        }
    }
}

void sum_middle(const Tensor3& k, Matrix& out) {
    const auto d = static_cast<std::ptrdiff_t>(k.extent());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < d; ++i) {
        auto o = out.row(i);
        std::fill(o.begin(), o.end(), 0.0);
        for (std::ptrdiff_t j = 0; j < d; ++j) {
            const auto fib = k.fiber(i, j);
            for (std::ptrdiff_t l = 0; l < d; ++l) o[l] += fib[l];
        }
    }
}

void row_logsumexp(const Matrix& cost, double lambda, std::span<const double> g,
                   std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(cost.rows());
    const std::size_t m = cost.cols();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto c = cost.row(i);
        double mx = kNegInf;
        for (std::size_t j = 0; j < m; ++j) mx = std::max(mx, g[j] - lambda * c[j]);
        double s = 0.0;
        if (mx != kNegInf)
            for (std::size_t j = 0; j < m; ++j) s += std::exp(g[j] - lambda * c[j] - mx);
        out[i] = finish_lse(mx, s);
    }
}

void col_logsumexp(const Matrix& cost, double lambda, std::span<const double> f,
                   std::span<double> out) {
    const std::size_t n = cost.rows(), m = cost.cols();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks(m); ++b) {
        const std::size_t j0 = b * kBlock, j1 = std::min<std::size_t>(m, j0 + kBlock);
        double mx[kBlock], s[kBlock];
        std::fill(mx, mx + (j1 - j0), kNegInf);
        std::fill(s, s + (j1 - j0), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = cost.row(i);
            for (std::size_t j = j0; j < j1; ++j) mx[j - j0] = std::max(mx[j - j0], f[i] - lambda * c[j]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = cost.row(i);
            for (std::size_t j = j0; j < j1; ++j)
                if (mx[j - j0] != kNegInf) s[j - j0] += std::exp(f[i] - lambda * c[j] - mx[j - j0]);
        }
        for (std::size_t j = j0; j < j1; ++j) out[j] = finish_lse(mx[j - j0], s[j - j0]);
    }
}

void axis_logsumexp3(const Tensor3& cost, double lambda, std::span<const double> f,
                     std::span<const double> g, std::span<const double> h, int axis,
                     std::span<double> out) {
    const std::size_t d = cost.extent();
    auto val = [&](std::size_t i, std::size_t j, std::size_t k) {
        double p = -lambda * cost(i, j, k);
        if (axis != 0) p += f[i];
        if (axis != 1) p += g[j];
        if (axis != 2) p += h[k];
        return p;
    };

    if (axis == 0) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(d); ++i) {
            double mx = kNegInf;
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k) mx = std::max(mx, val(i, j, k));
            double s = 0.0;
            if (mx != kNegInf)
                for (std::size_t j = 0; j < d; ++j)
                    for (std::size_t k = 0; k < d; ++k) s += std::exp(val(i, j, k) - mx);
            out[i] = finish_lse(mx, s);
        }
        return;
    }

    if (axis == 1) {
        // Reduced order is (i, k); j is independent per thread.
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(d); ++j) {
            double mx = kNegInf;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t k = 0; k < d; ++k) mx = std::max(mx, val(i, j, k));
            double s = 0.0;
            if (mx != kNegInf)
                for (std::size_t i = 0; i < d; ++i)
                    for (std::size_t k = 0; k < d; ++k) s += std::exp(val(i, j, k) - mx);
            out[j] = finish_lse(mx, s);
        }
        return;
    }

    // axis == 2: reduced order is (i, j), blocked over the contiguous k.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < blocks(d); ++b) {
        const std::size_t k0 = b * kBlock, k1 = std::min<std::size_t>(d, k0 + kBlock);
        double mx[kBlock], s[kBlock];
        std::fill(mx, mx + (k1 - k0), kNegInf);
        std::fill(s, s + (k1 - k0), 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = k0; k < k1; ++k) mx[k - k0] = std::max(mx[k - k0], val(i, j, k));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = k0; k < k1; ++k)
                    if (mx[k - k0] != kNegInf) s[k - k0] += std::exp(val(i, j, k) - mx[k - k0]);
        for (std::size_t k = k0; k < k1; ++k) out[k] = finish_lse(mx[k - k0], s[k - k0]);
    }
}

} // namespace omp
} // namespace sinktrack::kernels
