#pragma once

// Helpers shared by the 2- and 3-marginal scaling loops.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sinktrack/dense.hpp"

namespace sinktrack::detail {

// Scaling magnitude that triggers folding the scalings into the log potentials.
inline constexpr double kAbsorbThreshold = 1e50;

inline bool needs_absorb(std::span<const double> s) {
    return std::any_of(s.begin(), s.end(), [](double x) {
        return x > kAbsorbThreshold || (x > 0.0 && x < 1.0 / kAbsorbThreshold);
    });
}

// scale = target / den, element-wise; zero-mass targets get a zero scaling.
// Returns false if some positive target meets a zero or non-finite denominator.
inline bool rescale(std::span<const double> target, std::span<const double> den,
                    std::span<double> scale) {
    for (std::size_t i = 0; i < den.size(); ++i)
        if (target[i] > 0.0 && !(den[i] > 0.0 && std::isfinite(den[i]))) return false;
    for (std::size_t i = 0; i < den.size(); ++i) scale[i] = target[i] > 0.0 ? target[i] / den[i] : 0.0;
    return true;
}

// potential += log(scale); scale = 1
inline void absorb(std::span<double> potential, std::span<double> scale) {
    for (std::size_t i = 0; i < scale.size(); ++i) {
        potential[i] += std::log(scale[i]);
        scale[i] = 1.0;
    }
}

inline std::vector<double> logs(std::span<const double> w) {
    std::vector<double> out(w.size());
    std::transform(w.begin(), w.end(), out.begin(), [](double x) { return std::log(x); });
    return out;
}

[[noreturn]] inline void throw_underflow(double lambda, double max_cost) {
    throw NumericError("sinkhorn: kernel exp(-lambda*M) under/overflows (lambda*max(M) = " +
                       std::to_string(lambda * max_cost) + "); enable the stabilized solver");
}

} // namespace sinktrack::detail
