#include "sinktrack/tracker.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace sinktrack {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

TrackingResult finish(Matrix association, Method method, int iterations, bool converged,
                      Clock::time_point start) {
    TrackingResult res;
    res.assignment = row_argmax(association);
    res.performance_index = performance_index(association);
    res.association = std::move(association);
    res.method = method;
    res.iterations = iterations;
    res.converged = converged;
    res.runtime_ms = elapsed_ms(start);
    return res;
}

} // namespace

std::string_view to_string(Method m) {
    switch (m) {
    case Method::Speed: return "speed";
    case Method::Accel3D: return "accel3d";
    case Method::Accel2D: return "accel2d";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view s) {
    if (s == "speed") return Method::Speed;
    if (s == "accel3d") return Method::Accel3D;
    if (s == "accel2d") return Method::Accel2D;
    return std::nullopt;
}

double performance_index(const Matrix& association) {
    require(association.square() && association.rows() > 0,
            "performance_index: association must be a non-empty square matrix");
    const std::size_t d = association.rows();
    std::size_t hits = 0;
    for (std::size_t i = 0; i < d; ++i) {
        const auto row = association.row(i);
        bool strict_max = true;
        for (std::size_t j = 0; j < d; ++j) {
            require(row[j] >= 0.0, "performance_index: negative association entry");
            if (j != i && row[j] >= row[i]) strict_max = false;
        }
        if (strict_max) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(d);
}

TrackingResult track_speed(const PointSet& a, const PointSet& b, const SolverOptions& opts) {
    const auto start = Clock::now();
    const auto cost = speed_cost(a, b);
    const auto uniform = MassVector::uniform(a.size());
    auto plan = sinkhorn_plan(cost, uniform, uniform, opts);
    return finish(std::move(plan.entries), Method::Speed, plan.iterations, plan.converged, start);
}

TrackingResult track_accel_3d(const PointSet& a, const PointSet& b, const PointSet& c,
                              const SolverOptions& opts, OutputAxis axis) {
    const auto start = Clock::now();
    const auto cost = acceleration_cost(a, b, c, opts.exec);
    const auto uniform = MassVector::uniform(a.size());
    const auto plan = sinkhorn3_plan(cost, uniform, uniform, uniform, opts);
    auto association = axis == OutputAxis::IJ ? compress_ij(plan, opts.exec) : compress_ik(plan, opts.exec);
    return finish(std::move(association), Method::Accel3D, plan.iterations, plan.converged, start);
}

TrackingResult track_accel_2d(const PointSet& a, const PointSet& b, const PointSet& c,
                              const SolverOptions& opts, Stage3 stage3) {
    const auto start = Clock::now();
    const std::size_t n = a.size();
    require(b.size() == n && c.size() == n, "track_accel_2d: frames hold different object counts");

    const auto first = track_speed(a, b, opts);

    // Constant-velocity extrapolation along the matched pair.
    PointSet predicted{std::vector<Point2>(n), c.frame_index};
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& bj = b[first.assignment[i]];
        predicted.positions[i] = {2.0 * bj.x - a[i].x, 2.0 * bj.y - a[i].y};
    }

    if (stage3 == Stage3::Greedy) {
        Matrix association(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_k = 0;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = std::hypot(c[k].x - predicted[i].x, c[k].y - predicted[i].y);
                if (d < best) {
                    best = d;
                    best_k = k;
                }
            }
            association(i, best_k) = 1.0;
        }
        return finish(std::move(association), Method::Accel2D, first.iterations, first.converged, start);
    }

    const auto cost = speed_cost(predicted, c);
    const auto uniform = MassVector::uniform(n);
    auto plan = sinkhorn_plan(cost, uniform, uniform, opts);
    return finish(std::move(plan.entries), Method::Accel2D, first.iterations + plan.iterations,
                  first.converged && plan.converged, start);
}

} // namespace sinktrack
