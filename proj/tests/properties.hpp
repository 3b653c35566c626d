#pragma once

// Randomized invariant checks shared by the unit tests (small counts) and the
// acceptance run (>= 100 instances each). Each returns how many instances held.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "sinktrack/motion_costs.hpp"
#include "sinktrack/ot_core.hpp"
#include "sinktrack/ot_multi.hpp"
#include "sinktrack/tracker.hpp"

namespace props {

using namespace sinktrack;

struct Outcome {
    int passed = 0;
    int total = 0;
    bool all() const { return passed == total && total > 0; }
    void add(bool ok) {
        ++total;
        if (ok) ++passed;
    }
};

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t d, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(d, d);
    for (double& x : m.data()) x = u(rng);
    return m;
}

inline Tensor3 random_tensor(std::mt19937_64& rng, std::size_t d, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Tensor3 t(d);
    for (double& x : t.data()) x = u(rng);
    return t;
}

inline PointSet random_points(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::normal_distribution<double> z(0.0, scale);
    PointSet p;
    p.positions.resize(n);
    for (auto& q : p.positions) q = {z(rng), z(rng)};
    return p;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

inline Permutation random_permutation(std::mt19937_64& rng, std::size_t d) {
    Permutation p(d);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

inline SolverOptions tight(double lambda) {
    SolverOptions o;
    o.lambda = lambda;
    o.tolerance = 1e-13;
    o.max_iterations = 100000;
    o.stabilized = true;
    return o;
}

// P(alpha M, lambda) == P(M, alpha lambda) within 1e-10.
inline Outcome scale_coupling(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> alpha_dist(0.2, 5.0);
    Outcome out;
    for (int t = 0; t < instances; ++t) {
        const std::size_t d = 2 + t % 7;
        const Matrix m = random_matrix(rng, d);
        const double alpha = alpha_dist(rng), lambda = 3.0;
        Matrix scaled = m;
        for (double& x : scaled.data()) x *= alpha;
        const auto mu = MassVector::uniform(d);
        const auto p1 = sinkhorn_plan(CostMatrix(scaled), mu, mu, tight(lambda));
        const auto p2 = sinkhorn_plan(CostMatrix(m), mu, mu, tight(alpha * lambda));
        out.add(p1.converged && p2.converged && max_abs_diff(p1.entries.data(), p2.entries.data()) <= 1e-10);
    }
    return out;
}

// Permuting cost columns by pi permutes plan columns by pi (within 1e-10).
inline Outcome permutation_equivariance(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Outcome out;
    for (int t = 0; t < instances; ++t) {
        const std::size_t d = 2 + t % 7;
        const Matrix m = random_matrix(rng, d);
        const auto pi = random_permutation(rng, d);
        Matrix permuted(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) permuted(i, pi[j]) = m(i, j);
        const auto mu = MassVector::uniform(d);
        const auto p = sinkhorn_plan(CostMatrix(m), mu, mu, tight(4.0));
        const auto q = sinkhorn_plan(CostMatrix(permuted), mu, mu, tight(4.0));
        double worst = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) worst = std::max(worst, std::abs(q(i, pi[j]) - p(i, j)));
        out.add(worst <= 1e-10);
    }
    return out;
}

// Same for the third axis of the 3-marginal plan.
inline Outcome permutation_equivariance3(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Outcome out;
    for (int t = 0; t < instances; ++t) {
        const std::size_t d = 2 + t % 4;
        const Tensor3 m = random_tensor(rng, d);
        const auto pi = random_permutation(rng, d);
        Tensor3 permuted(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k) permuted(i, j, pi[k]) = m(i, j, k);
        const auto mu = MassVector::uniform(d);
        const auto p = sinkhorn3_plan(CostTensor3(m), mu, mu, mu, tight(4.0));
        const auto q = sinkhorn3_plan(CostTensor3(permuted), mu, mu, mu, tight(4.0));
        double worst = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k) worst = std::max(worst, std::abs(q(i, j, pi[k]) - p(i, j, k)));
        out.add(worst <= 1e-10);
    }
    return out;
}

// Common translation leaves both costs unchanged within 1e-12.
inline Outcome translation_invariance(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    Outcome out;
    for (int t = 0; t < instances; ++t) {
        const std::size_t n = 1 + t % 9;
        PointSet a = random_points(rng, n), b = random_points(rng, n), c = random_points(rng, n);
        const double dx = shift(rng), dy = shift(rng);
        auto moved = [&](PointSet p) {
            for (auto& q : p.positions) q = {q.x + dx, q.y + dy};
            return p;
        };
        const auto s1 = speed_cost(a, b), s2 = speed_cost(moved(a), moved(b));
        const auto a1 = acceleration_cost(a, b, c), a2 = acceleration_cost(moved(a), moved(b), moved(c));
        out.add(max_abs_diff(s1.entries().data(), s2.entries().data()) <= 1e-12 &&
                max_abs_diff(a1.entries().data(), a2.entries().data()) <= 1e-12);
    }
    return out;
}

// Common rotation leaves both costs unchanged within 1e-9.
inline Outcome rotation_invariance(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    Outcome out;
    for (int t = 0; t < instances; ++t) {
        const std::size_t n = 1 + t % 9;
        PointSet a = random_points(rng, n), b = random_points(rng, n), c = random_points(rng, n);
        const double th = angle(rng), cs = std::cos(th), sn = std::sin(th);
        auto turned = [&](PointSet p) {
            for (auto& q : p.positions) q = {cs * q.x - sn * q.y, sn * q.x + cs * q.y};
            return p;
        };
        const auto s1 = speed_cost(a, b), s2 = speed_cost(turned(a), turned(b));
        const auto a1 = acceleration_cost(a, b, c), a2 = acceleration_cost(turned(a), turned(b), turned(c));
        out.add(max_abs_diff(s1.entries().data(), s2.entries().data()) <= 1e-9 &&
                max_abs_diff(a1.entries().data(), a2.entries().data()) <= 1e-9);
    }
    return out;
}

// compress_ij and compress_ik keep the tensor's total mass (within 1e-12) and
// agree on the first-axis marginal.
inline Outcome compress_mass_conservation(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Outcome out;
    for (int t = 0; t < instances; ++t) {
        const std::size_t d = 1 + t % 8;
        Tensor3 p = random_tensor(rng, d);
        double total = 0.0;
        for (double x : p.data()) total += x;
        for (double& x : p.data()) x /= total;
        double tensor_sum = 0.0;
        for (double x : p.data()) tensor_sum += x;
        const Matrix ij = compress_ij(p), ik = compress_ik(p);
        double s_ij = 0.0, s_ik = 0.0, worst_row = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double r_ij = 0.0, r_ik = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                r_ij += ij(i, j);
                r_ik += ik(i, j);
            }
            s_ij += r_ij;
            s_ik += r_ik;
            worst_row = std::max(worst_row, std::abs(r_ij - r_ik));
        }
        out.add(std::abs(s_ij - tensor_sum) <= 1e-12 && std::abs(s_ik - tensor_sum) <= 1e-12 && worst_row <= 1e-12);
    }
    return out;
}

// performance_index(c * A) == performance_index(A) for c > 0.
inline Outcome index_scalar_invariance(int instances, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    Outcome out;
    for (int t = 0; t < instances; ++t) {
        const std::size_t d = 1 + t % 12;
        Matrix a = random_matrix(rng, d);
        // Plant some strict diagonal maxima and some ties.
        for (std::size_t i = 0; i < d; i += 2) a(i, i) = 2.0;
        if (d > 2) a(1, 1) = a(1, 0);
        const double c = scale(rng);
        Matrix b = a;
        for (double& x : b.data()) x *= c;
        out.add(performance_index(a) == performance_index(b));
    }
    return out;
}

} // namespace props
