#include "sinktrack/ot_multi.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "scaling_detail.hpp"

namespace sinktrack {

CostTensor3::CostTensor3(Tensor3 entries) : entries_(std::move(entries)) {
    require(entries_.extent() > 0, "CostTensor3: empty");
    require(entries_.extent() <= kMaxTensorExtent,
            "CostTensor3: extent " + std::to_string(entries_.extent()) + " exceeds the dense limit of " +
                std::to_string(kMaxTensorExtent));
    for (double x : entries_.data()) {
        require(std::isfinite(x), "CostTensor3: non-finite entry");
        require(x >= 0.0, "CostTensor3: negative entry");
        max_ = std::max(max_, x);
    }
}

TransportTensor3 sinkhorn3_plan(const CostTensor3& cost, const MassVector& r, const MassVector& c,
                                const MassVector& s, const SolverOptions& opts) {
    opts.validate();
    const std::size_t d = cost.size();
    require(r.size() == d && c.size() == d && s.size() == d,
            "sinkhorn3_plan: marginal length does not match cost");

    TransportTensor3 plan;
    if (d == 1) {
        plan.entries = Tensor3(1, 1.0);
        plan.converged = true;
        plan.marginal_residual = marginal_residual3(plan.entries, r, c, s);
        return plan;
    }
    if (!opts.stabilized && opts.lambda * cost.max() > kUnstabilizedLimit)
        detail::throw_underflow(opts.lambda, cost.max());

    const Exec ex = opts.exec;
    const Tensor3& m = cost.entries();
    const std::vector<double> log_r = detail::logs(r.weights()), log_c = detail::logs(c.weights()),
                              log_s = detail::logs(s.weights());

    // Absorbed log potentials (f, g, h) and multiplicative scalings (u, v, w).
    std::vector<double> f(d, 0.0), g(d, 0.0), h(d, 0.0), u(d, 1.0), v(d, 1.0), w(d, 1.0);
    std::vector<double> tv(d), ttu(d), front(d);
    Matrix partial(d, d); // sum_k K_ijk w_k
    Tensor3 kernel(d);

    auto log_cycle = [&] {
        kernels::axis_logsumexp3(ex, m, opts.lambda, f, g, h, 0, f);
        for (std::size_t i = 0; i < d; ++i) f[i] = log_r[i] - f[i];
        kernels::axis_logsumexp3(ex, m, opts.lambda, f, g, h, 1, g);
        for (std::size_t j = 0; j < d; ++j) g[j] = log_c[j] - g[j];
        kernels::axis_logsumexp3(ex, m, opts.lambda, f, g, h, 2, h);
        for (std::size_t k = 0; k < d; ++k) h[k] = log_s[k] - h[k];
    };
    auto absorb = [&] {
        detail::absorb(f, u);
        detail::absorb(g, v);
        detail::absorb(h, w);
    };
    auto rebuild = [&] {
        kernels::gibbs_kernel3(ex, m, opts.lambda, f, g, h, kernel);
        kernels::contract_front(ex, kernel, u, v, front);
    };

    if (opts.stabilized) log_cycle();
    rebuild();

    // `front` always holds sum_ij u_i v_j K_ijk for the current u, v, so the
    // third marginal is w_k * front_k without another pass over the tensor.
    int it = 0;
    for (;; ++it) {
        kernels::contract_last(ex, kernel, w, partial);
        kernels::matvec(ex, partial, v, tv);
        kernels::matvec_t(ex, partial, u, ttu);
        double residual = 0.0;
        for (std::size_t a = 0; a < d; ++a)
            residual += std::abs(u[a] * tv[a] - r[a]) + std::abs(v[a] * ttu[a] - c[a]) +
                        std::abs(w[a] * front[a] - s[a]);
        if (residual <= opts.tolerance) {
            plan.converged = true;
            break;
        }
        if (it == opts.max_iterations) break;

        bool ok = detail::rescale(r.weights(), tv, u);
        if (ok) {
            kernels::matvec_t(ex, partial, u, ttu);
            ok = detail::rescale(c.weights(), ttu, v);
        }
        if (ok) {
            kernels::contract_front(ex, kernel, u, v, front);
            ok = detail::rescale(s.weights(), front, w);
        }
        if (!ok) {
            if (!opts.stabilized) detail::throw_underflow(opts.lambda, cost.max());
            absorb();
            log_cycle();
            rebuild();
        } else if (opts.stabilized && (detail::needs_absorb(u) || detail::needs_absorb(v) ||
                                       detail::needs_absorb(w))) {
            absorb();
            rebuild();
        }
    }

    plan.iterations = it;
    plan.entries = Tensor3(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double uv = u[i] * v[j];
            const auto kf = kernel.fiber(i, j);
            auto pf = plan.entries.fiber(i, j);
            for (std::size_t k = 0; k < d; ++k) pf[k] = uv * kf[k] * w[k];
        }
    plan.marginal_residual = marginal_residual3(plan.entries, r, c, s);
    return plan;
}

Matrix compress_ij(const Tensor3& plan, Exec exec) {
    const std::size_t d = plan.extent();
    Matrix out(d, d);
    const std::vector<double> ones(d, 1.0);
    kernels::contract_last(exec, plan, ones, out);
    return out;
}

Matrix compress_ik(const Tensor3& plan, Exec exec) {
    Matrix out(plan.extent(), plan.extent());
    kernels::sum_middle(exec, plan, out);
    return out;
}

double marginal_residual3(const Tensor3& plan, const MassVector& r, const MassVector& c,
                          const MassVector& s) {
    const std::size_t d = plan.extent();
    require(r.size() == d && c.size() == d && s.size() == d,
            "marginal_residual3: plan and marginal dimensions differ");
    std::vector<double> m0(d, 0.0), m1(d, 0.0), m2(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const auto fib = plan.fiber(i, j);
            for (std::size_t k = 0; k < d; ++k) {
                m0[i] += fib[k];
                m1[j] += fib[k];
                m2[k] += fib[k];
            }
        }
    double residual = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        residual += std::abs(m0[a] - r[a]) + std::abs(m1[a] - c[a]) + std::abs(m2[a] - s[a]);
    return residual;
}

TripleAssignment exact_triple_oracle(const CostTensor3& cost) {
    const std::size_t d = cost.size();
    require(d <= 6, "exact_triple_oracle: d > 6 is too large to enumerate");
    Permutation sigma(d);
    std::iota(sigma.begin(), sigma.end(), 0);
    TripleAssignment best{sigma, sigma, std::numeric_limits<double>::infinity()};
    do {
        Permutation tau(d);
        std::iota(tau.begin(), tau.end(), 0);
        do {
            double total = 0.0;
            for (std::size_t i = 0; i < d; ++i) total += cost(i, sigma[i], tau[sigma[i]]);
            const double value = total / static_cast<double>(d);
            if (value < best.cost) best = {sigma, tau, value};
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return best;
}

} // namespace sinktrack
