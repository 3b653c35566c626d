#pragma once

// Seeded generators for the synthetic tracking scenarios.
//
// Randomness comes from std::mt19937_64 with normals drawn by Box-Muller from
// the raw 64-bit output, so streams are reproducible across standard libraries.
// Coordinates are snapped to a dyadic grid (2^-32) which keeps every
// constant-velocity difference exact in floating point.

#include <cstdint>
#include <random>
#include <string_view>

#include "sinktrack/motion_costs.hpp"

namespace sinktrack {

/// Identifier of the random stream, reported alongside results.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+box-muller";

/// Child seed of replicate `r`: splitmix64(base ^ r).
std::uint64_t child_seed(std::uint64_t base, std::uint64_t replicate);

std::uint64_t splitmix64(std::uint64_t x);

/// Standard normal draws.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double operator()();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

enum class SimKind { ConstantVelocity, RandomWalk, ConstantVelocityNoisy };

/// Positional: noise perturbs each observed frame independently.
/// Accumulated: noise increments add up along the trajectory.
enum class NoiseModel { Positional, Accumulated };

struct SimScenario {
    SimKind kind = SimKind::ConstantVelocity;
    std::size_t n = 100;
    double m = 0.5;
    double sigma2 = 0.0;
    int steps = 3;
    std::uint64_t seed = 0;
    NoiseModel noise = NoiseModel::Positional;

    void validate() const;
};

FrameSequence gen_constant_velocity(std::size_t n, double m, int steps, std::uint64_t seed);
FrameSequence gen_random_walk(std::size_t n, double sigma2, int steps, std::uint64_t seed);
FrameSequence gen_constant_velocity_noisy(std::size_t n, double m, double sigma2, int steps,
                                          std::uint64_t seed, NoiseModel noise = NoiseModel::Positional);

FrameSequence generate(const SimScenario& scenario);

} // namespace sinktrack
