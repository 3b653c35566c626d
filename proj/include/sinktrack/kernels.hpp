#pragma once

// Dense reductions behind the Sinkhorn solvers.
//
// Every kernel exists twice: a plain serial reference (`kernels::serial`) and an
// OpenMP version (`kernels::omp`). Both accumulate each output element in the
// same order, so their results are bit-identical; the test suite checks this.
// Solvers call the dispatching overloads in `kernels`.

#include <cmath>
#include <cstddef>
#include <span>

#include "sinktrack/dense.hpp"

namespace sinktrack {

enum class Exec { Serial, Parallel };

namespace kernels {

/// Gibbs-kernel exponents below this are stored as exact zeros (keeps
/// subnormals out of the scaling loops).
inline constexpr double kExpFloor = -700.0;

inline double gibbs(double x) noexcept { return x < kExpFloor ? 0.0 : std::exp(x); }

/// Dot product with a fixed association: four interleaved partial sums
/// (lane = index mod 4) combined as (s0 + s1) + (s2 + s3).
inline double dot(const double* a, const double* b, std::size_t n) noexcept {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    if (i < n) s0 += a[i] * b[i];
    if (i + 1 < n) s1 += a[i + 1] * b[i + 1];
    if (i + 2 < n) s2 += a[i + 2] * b[i + 2];
    return (s0 + s1) + (s2 + s3);
}

// Summation orders (shared by both backends):
//   matvec        out_i = dot(K_i., v)
//   matvec_t      out_j = sum_i u_i K_ij                     (i ascending)
//   contract_last out_ij = dot(K_ij., w)
//   contract_front out_k = sum_i u_i (sum_j v_j K_ijk)       (i, then j ascending)
//   sum_middle    out_ik = sum_j K_ijk                       (j ascending)
//   log-sum-exp reductions: max first, then sum of exp(x - max) in
//   lexicographic order over the reduced indices.

#define SINKTRACK_KERNEL_DECLS                                                                    \
    void gibbs_kernel(const Matrix& cost, double lambda, std::span<const double> f,             \
                      std::span<const double> g, Matrix& out);                                     \
    void gibbs_kernel3(const Tensor3& cost, double lambda, std::span<const double> f,           \
                       std::span<const double> g, std::span<const double> h, Tensor3& out);        \
    void matvec(const Matrix& k, std::span<const double> v, std::span<double> out);              \
    void matvec_t(const Matrix& k, std::span<const double> u, std::span<double> out);            \
    void contract_last(const Tensor3& k, std::span<const double> w, Matrix& out);                \
    void contract_front(const Tensor3& k, std::span<const double> u, std::span<const double> v,  \
                        std::span<double> out);                                                   \
    void sum_middle(const Tensor3& k, Matrix& out);                                               \
    void row_logsumexp(const Matrix& cost, double lambda, std::span<const double> g,             \
                       std::span<double> out);                                                    \
    void col_logsumexp(const Matrix& cost, double lambda, std::span<const double> f,             \
                       std::span<double> out);                                                    \
    void axis_logsumexp3(const Tensor3& cost, double lambda, std::span<const double> f,          \
                         std::span<const double> g, std::span<const double> h, int axis,           \
                         std::span<double> out);

// gibbs_kernel:    out_ij  = exp(f_i + g_j - lambda m_ij)
// gibbs_kernel3:   out_ijk = exp(f_i + g_j + h_k - lambda m_ijk)
// row_logsumexp:   out_i = log sum_j exp(g_j - lambda m_ij)
// col_logsumexp:   out_j = log sum_i exp(f_i - lambda m_ij)
// axis_logsumexp3: log-marginal of exp(f + g + h - lambda m) along `axis`,
//                  leaving out that axis' own potential.

namespace serial {
SINKTRACK_KERNEL_DECLS
} // namespace serial

namespace omp {
SINKTRACK_KERNEL_DECLS
} // namespace omp

#undef SINKTRACK_KERNEL_DECLS

/// Thread count the OpenMP backend will use (1 when built without OpenMP).
int max_threads();

/// Caps OpenMP worker threads; 0 restores the runtime default.
void set_max_threads(int n);

inline void gibbs_kernel(Exec e, const Matrix& cost, double lambda, std::span<const double> f,
                         std::span<const double> g, Matrix& out) {
    e == Exec::Serial ? serial::gibbs_kernel(cost, lambda, f, g, out)
                      : omp::gibbs_kernel(cost, lambda, f, g, out);
}
inline void gibbs_kernel3(Exec e, const Tensor3& cost, double lambda, std::span<const double> f,
                          std::span<const double> g, std::span<const double> h, Tensor3& out) {
    e == Exec::Serial ? serial::gibbs_kernel3(cost, lambda, f, g, h, out)
                      : omp::gibbs_kernel3(cost, lambda, f, g, h, out);
}
inline void matvec(Exec e, const Matrix& k, std::span<const double> v, std::span<double> out) {
    e == Exec::Serial ? serial::matvec(k, v, out) : omp::matvec(k, v, out);
}
inline void matvec_t(Exec e, const Matrix& k, std::span<const double> u, std::span<double> out) {
    e == Exec::Serial ? serial::matvec_t(k, u, out) : omp::matvec_t(k, u, out);
}
inline void contract_last(Exec e, const Tensor3& k, std::span<const double> w, Matrix& out) {
    e == Exec::Serial ? serial::contract_last(k, w, out) : omp::contract_last(k, w, out);
}
inline void contract_front(Exec e, const Tensor3& k, std::span<const double> u,
                           std::span<const double> v, std::span<double> out) {
    e == Exec::Serial ? serial::contract_front(k, u, v, out) : omp::contract_front(k, u, v, out);
}
inline void sum_middle(Exec e, const Tensor3& k, Matrix& out) {
    e == Exec::Serial ? serial::sum_middle(k, out) : omp::sum_middle(k, out);
}
inline void row_logsumexp(Exec e, const Matrix& cost, double lambda, std::span<const double> g,
                          std::span<double> out) {
    e == Exec::Serial ? serial::row_logsumexp(cost, lambda, g, out)
                      : omp::row_logsumexp(cost, lambda, g, out);
}
inline void col_logsumexp(Exec e, const Matrix& cost, double lambda, std::span<const double> f,
                          std::span<double> out) {
    e == Exec::Serial ? serial::col_logsumexp(cost, lambda, f, out)
                      : omp::col_logsumexp(cost, lambda, f, out);
}
inline void axis_logsumexp3(Exec e, const Tensor3& cost, double lambda, std::span<const double> f,
                            std::span<const double> g, std::span<const double> h, int axis,
                            std::span<double> out) {
    e == Exec::Serial ? serial::axis_logsumexp3(cost, lambda, f, g, h, axis, out)
                      : omp::axis_logsumexp3(cost, lambda, f, g, h, axis, out);
}

} // namespace kernels
} // namespace sinktrack
