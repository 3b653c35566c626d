#include "sinktrack/simlab.hpp"

#include <cmath>
#include <numbers>

namespace sinktrack {

namespace {

double snap(double x) {
    constexpr double kGrid = 4294967296.0; // 2^32
    return std::round(x * kGrid) / kGrid;
}

void check(std::size_t n, int steps, double m, double sigma2) {
    require(n >= 1, "simulation: n must be >= 1");
    require(steps >= 2, "simulation: steps must be >= 2");
    require(std::isfinite(m) && m >= 0.0, "simulation: m must be >= 0");
    require(std::isfinite(sigma2) && sigma2 >= 0.0, "simulation: sigma2 must be >= 0");
}

std::vector<Point2> standard_normal_cloud(std::size_t n, NormalStream& z) {
    std::vector<Point2> pts(n);
    for (auto& p : pts) {
        const double x = z();
        p = {snap(x), snap(z())};
    }
    return pts;
}

// Noiseless constant-velocity trajectories; consumes 4n draws.
FrameSequence constant_velocity(std::size_t n, double m, int steps, NormalStream& z) {
    const auto start = standard_normal_cloud(n, z);
    std::vector<Point2> vel(n);
    for (auto& v : vel) {
        // Negative per-axis speeds are clamped, leaving some objects at rest along an axis.
        const double vx = std::max(0.0, m * z());
        v = {snap(vx), snap(std::max(0.0, m * z()))};
    }
    FrameSequence seq;
    for (int t = 0; t < steps; ++t) {
        PointSet frame{std::vector<Point2>(n), t};
        for (std::size_t i = 0; i < n; ++i)
            frame.positions[i] = {start[i].x + t * vel[i].x, start[i].y + t * vel[i].y};
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t child_seed(std::uint64_t base, std::uint64_t replicate) {
    return splitmix64(base ^ replicate);
}

double NormalStream::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    constexpr double kUnit = 1.0 / 9007199254740992.0; // 2^-53
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * kUnit; // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * kUnit;       // [0, 1)
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

void SimScenario::validate() const { check(n, steps, m, sigma2); }

FrameSequence gen_constant_velocity(std::size_t n, double m, int steps, std::uint64_t seed) {
    check(n, steps, m, 0.0);
    NormalStream z(seed);
    return constant_velocity(n, m, steps, z);
}

FrameSequence gen_random_walk(std::size_t n, double sigma2, int steps, std::uint64_t seed) {
    check(n, steps, 0.0, sigma2);
    NormalStream z(seed);
    const double sd = std::sqrt(sigma2);
    FrameSequence seq;
    seq.frames.push_back(PointSet{standard_normal_cloud(n, z), 0});
    for (int t = 1; t < steps; ++t) {
        PointSet frame = seq.frames.back();
        frame.frame_index = t;
        for (auto& p : frame.positions) {
            const double dx = sd * z();
            p = {snap(p.x + dx), snap(p.y + sd * z())};
        }
        seq.frames.push_back(std::move(frame));
    }
    return seq;
}

FrameSequence gen_constant_velocity_noisy(std::size_t n, double m, double sigma2, int steps,
                                          std::uint64_t seed, NoiseModel noise) {
    check(n, steps, m, sigma2);
    NormalStream z(seed);
    FrameSequence seq = constant_velocity(n, m, steps, z);
    const double sd = std::sqrt(sigma2);
    std::vector<Point2> drift(n); // running noise sum for the accumulated model
    for (int t = 1; t < steps; ++t)
        for (std::size_t i = 0; i < n; ++i) {
            const double ex = sd * z();
            const double ey = sd * z();
            Point2 offset{ex, ey};
            if (noise == NoiseModel::Accumulated) {
                drift[i] = {drift[i].x + ex, drift[i].y + ey};
                offset = drift[i];
            }
            auto& p = seq.frames[t].positions[i];
            p = {snap(p.x + offset.x), snap(p.y + offset.y)};
        }
    return seq;
}

FrameSequence generate(const SimScenario& s) {
    s.validate();
    switch (s.kind) {
    case SimKind::ConstantVelocity: return gen_constant_velocity(s.n, s.m, s.steps, s.seed);
    case SimKind::RandomWalk: return gen_random_walk(s.n, s.sigma2, s.steps, s.seed);
    case SimKind::ConstantVelocityNoisy:
        return gen_constant_velocity_noisy(s.n, s.m, s.sigma2, s.steps, s.seed, s.noise);
    }
    throw InvalidArgument("simulation: unknown kind");
}

} // namespace sinktrack
