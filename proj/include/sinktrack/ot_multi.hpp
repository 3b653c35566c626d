#pragma once

// Entropic transport over three marginals. The plan is a d×d×d tensor
// P_ijk = u_i v_j w_k exp(-lambda m_ijk); the three scaling vectors are fitted
// cyclically (axis 0, 1, 2) until all axis-marginals match their targets.

#include <cstddef>

#include "sinktrack/dense.hpp"
#include "sinktrack/ot_core.hpp"

namespace sinktrack {

/// Largest tensor extent the dense solver accepts (d³ doubles are materialized).
inline constexpr std::size_t kMaxTensorExtent = 512;

class CostTensor3 {
public:
    explicit CostTensor3(Tensor3 entries);

    std::size_t size() const noexcept { return entries_.extent(); }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return entries_(i, j, k);
    }
    const Tensor3& entries() const noexcept { return entries_; }
    double max() const noexcept { return max_; }

private:
    Tensor3 entries_;
    double max_ = 0.0;
};

struct TransportTensor3 {
    Tensor3 entries;
    int iterations = 0;
    bool converged = false;
    double marginal_residual = 0.0;

    std::size_t size() const noexcept { return entries.extent(); }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept {
        return entries(i, j, k);
    }
};

TransportTensor3 sinkhorn3_plan(const CostTensor3& cost, const MassVector& r, const MassVector& c,
                                const MassVector& s, const SolverOptions& opts);

/// p'_ij = sum_k p_ijk  (association between the first and second frame).
Matrix compress_ij(const Tensor3& plan, Exec exec = Exec::Parallel);
inline Matrix compress_ij(const TransportTensor3& plan, Exec exec = Exec::Parallel) {
    return compress_ij(plan.entries, exec);
}

/// p'_ik = sum_j p_ijk  (association between the first and third frame).
Matrix compress_ik(const Tensor3& plan, Exec exec = Exec::Parallel);
inline Matrix compress_ik(const TransportTensor3& plan, Exec exec = Exec::Parallel) {
    return compress_ik(plan.entries, exec);
}

/// Summed L1 residual of the three axis-marginals against r, c, s.
double marginal_residual3(const Tensor3& plan, const MassVector& r, const MassVector& c,
                          const MassVector& s);

/// First-axis to second-axis permutation sigma and second-to-third tau.
struct TripleAssignment {
    Permutation sigma;
    Permutation tau;
    double cost = 0.0;
};

/// Brute force over all (sigma, tau) permutation pairs, minimizing
/// (1/d) sum_i m_{i, sigma(i), tau(sigma(i))}; lexicographic tie-break on
/// (sigma, tau). Limited to d <= 6.
TripleAssignment exact_triple_oracle(const CostTensor3& cost);

} // namespace sinktrack
