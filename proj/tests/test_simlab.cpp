#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "sinktrack/simlab.hpp"

using namespace sinktrack;

namespace {

// Per-axis sample variance of frame2 - 2 frame1 + frame0 over all objects.
double second_difference_variance(const FrameSequence& seq) {
    double sum = 0.0, sq = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < seq.objects(); ++i) {
        for (double v : {seq[2][i].x - 2 * seq[1][i].x + seq[0][i].x, seq[2][i].y - 2 * seq[1][i].y + seq[0][i].y}) {
            sum += v;
            sq += v * v;
            ++count;
        }
    }
    const double mean = sum / count;
    return sq / count - mean * mean;
}

} // namespace

TEST_CASE("splitmix64 reference value and child seeds") {
    // First output of the reference splitmix64 generator seeded with 0.
    CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
    CHECK(child_seed(0, 0) == splitmix64(0));
    CHECK(child_seed(7, 3) == splitmix64(7 ^ 3));
    std::set<std::uint64_t> seeds;
    for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(child_seed(42, r));
    CHECK(seeds.size() == 1000);
}

TEST_CASE("normal stream moments") {
    NormalStream z(1);
    double sum = 0.0, sq = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double x = z();
        sum += x;
        sq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.01);
}

TEST_CASE("scenario validation") {
    CHECK_THROWS_AS(gen_constant_velocity(0, 0.5, 3, 1), InvalidArgument);
    CHECK_THROWS_AS(gen_constant_velocity(5, -0.5, 3, 1), InvalidArgument);
    CHECK_THROWS_AS(gen_constant_velocity(5, 0.5, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(gen_random_walk(5, -1.0, 3, 1), InvalidArgument);
    CHECK_THROWS_AS(gen_constant_velocity_noisy(5, 0.5, NAN, 3, 1), InvalidArgument);
    SimScenario s;
    s.n = 0;
    CHECK_THROWS_AS(s.validate(), InvalidArgument);
}

TEST_CASE("constant velocity kinematics") {
    const auto still = gen_constant_velocity(50, 0.0, 3, 5);
    CHECK(still[1].positions == still[0].positions);
    CHECK(still[2].positions == still[0].positions);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto seq = gen_constant_velocity(30, 2.0, 4, seed);
        seq.validate();
        CHECK(seq.frames.size() == 4);
        for (std::size_t i = 0; i < 30; ++i)
            for (int t = 1; t + 1 < 4; ++t) {
                // Exact, element-wise.
                CHECK(seq[t + 1][i].x - seq[t][i].x == seq[t][i].x - seq[t - 1][i].x);
                CHECK(seq[t + 1][i].y - seq[t][i].y == seq[t][i].y - seq[t - 1][i].y);
                CHECK(seq[t][i].x >= seq[t - 1][i].x); // clamped speeds are >= 0
                CHECK(seq[t][i].y >= seq[t - 1][i].y);
            }
    }
}

TEST_CASE("mean clamped speed is m / sqrt(2 pi)") {
    const double m = 1.5;
    const auto seq = gen_constant_velocity(500000, m, 2, 17); // 10^6 speed draws
    double sum = 0.0;
    for (std::size_t i = 0; i < seq.objects(); ++i) sum += (seq[1][i].x - seq[0][i].x) + (seq[1][i].y - seq[0][i].y);
    const double mean = sum / (2.0 * seq.objects());
    CHECK(mean == doctest::Approx(m / std::sqrt(2.0 * std::numbers::pi)).epsilon(0.005));
}

TEST_CASE("random walk step variance") {
    CHECK(gen_random_walk(20, 0.0, 3, 1)[2].positions == gen_random_walk(20, 0.0, 3, 1)[0].positions);
    const double sigma2 = 0.7;
    const auto seq = gen_random_walk(500000, sigma2, 3, 9);
    double sum = 0.0, sq = 0.0;
    const std::size_t n = seq.objects();
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = seq[2][i].x - seq[1][i].x;
        sum += dx;
        sq += dx * dx;
    }
    const double var = sq / n - (sum / n) * (sum / n);
    CHECK(var == doctest::Approx(sigma2).epsilon(0.01));
}

TEST_CASE("determinism across generators") {
    CHECK(gen_random_walk(40, 1.0, 3, 3) == gen_random_walk(40, 1.0, 3, 3));
    CHECK_FALSE(gen_random_walk(40, 1.0, 3, 3) == gen_random_walk(40, 1.0, 3, 4));
    CHECK(gen_constant_velocity_noisy(40, 0.5, 0.1, 3, 8) == gen_constant_velocity_noisy(40, 0.5, 0.1, 3, 8));
    SimScenario s;
    s.kind = SimKind::RandomWalk;
    s.n = 25;
    s.sigma2 = 0.5;
    s.seed = 99;
    CHECK(generate(s) == gen_random_walk(25, 0.5, 3, 99));
    s.kind = SimKind::ConstantVelocityNoisy;
    s.noise = NoiseModel::Accumulated;
    CHECK(generate(s) == gen_constant_velocity_noisy(25, s.m, 0.5, 3, 99, NoiseModel::Accumulated));
}

TEST_CASE("noisy generator with zero noise is the noiseless one") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CHECK(gen_constant_velocity_noisy(30, 0.5, 0.0, 3, seed) == gen_constant_velocity(30, 0.5, 3, seed));
        CHECK(gen_constant_velocity_noisy(30, 0.5, 0.0, 3, seed, NoiseModel::Accumulated) ==
              gen_constant_velocity(30, 0.5, 3, seed));
    }
}

TEST_CASE("second-difference variance under each noise model") {
    // Positional: frames 1 and 2 carry independent noise, coefficients (1, -2, 1) -> 5 sigma^2.
    // Accumulated: frame t carries e_1 + ... + e_t, so the second difference is e_2 - e_1 -> 2 sigma^2.
    const double sigma2 = 0.04;
    const auto pos = gen_constant_velocity_noisy(100000, 0.5, sigma2, 3, 21);
    CHECK(second_difference_variance(pos) == doctest::Approx(5.0 * sigma2).epsilon(0.02));
    const auto acc = gen_constant_velocity_noisy(100000, 0.5, sigma2, 3, 21, NoiseModel::Accumulated);
    CHECK(second_difference_variance(acc) == doctest::Approx(2.0 * sigma2).epsilon(0.02));
    // Frame 0 stays noiseless.
    CHECK(pos[0] == gen_constant_velocity(100000, 0.5, 3, 21)[0]);
}

TEST_CASE("generated sequences satisfy the frame invariants") {
    for (int kind = 0; kind < 3; ++kind) {
        SimScenario s;
        s.kind = static_cast<SimKind>(kind);
        s.n = 7;
        s.sigma2 = 0.3;
        s.steps = 5;
        const auto seq = generate(s);
        CHECK_NOTHROW(seq.validate());
        CHECK(seq.frames.size() == 5);
        CHECK(seq.objects() == 7);
    }
}
