#include <doctest.h>

#include <random>

#include "properties.hpp"
#include "sinktrack/simlab.hpp"
#include "sinktrack/tracker.hpp"

using namespace sinktrack;

namespace {

SolverOptions stab(double lambda = 100.0, int iters = 1000) {
    SolverOptions o;
    o.lambda = lambda;
    o.stabilized = true;
    o.max_iterations = iters;
    return o;
}

PointSet permuted(const PointSet& p, const Permutation& pi) {
    PointSet out = p;
    for (std::size_t i = 0; i < p.size(); ++i) out.positions[pi[i]] = p[i];
    return out;
}

} // namespace

TEST_CASE("performance_index examples") {
    CHECK(performance_index(Matrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 1.0);
    CHECK(performance_index(Matrix(4, 4, 0.25)) == 0.0);
    CHECK(performance_index(Matrix::from_rows({{0.4, 0.1}, {0.3, 0.2}})) == 0.5);
    CHECK(performance_index(Matrix(1, 1, 0.0)) == 1.0);
    CHECK_THROWS_AS(performance_index(Matrix(2, 3)), InvalidArgument);
    CHECK_THROWS_AS(performance_index(Matrix::from_rows({{1, -0.1}, {0, 1}})), InvalidArgument);
}

TEST_CASE("method names") {
    for (Method m : {Method::Speed, Method::Accel3D, Method::Accel2D}) CHECK(parse_method(to_string(m)) == m);
    CHECK_FALSE(parse_method("Speed").has_value());
}

TEST_CASE("stationary well-separated objects are tracked perfectly") {
    const PointSet a{{{0, 0}, {10, 0}}, 0};
    const auto res = track_speed(a, PointSet{a.positions, 1}, stab());
    CHECK(res.performance_index == 1.0);
    CHECK(res.assignment == Permutation{0, 1});
    CHECK(res.method == Method::Speed);
    CHECK(res.association.rows() == 2);
}

TEST_CASE("single object") {
    const PointSet a{{{0, 0}}, 0}, b{{{1, 0}}, 1}, c{{{2, 0}}, 2};
    CHECK(track_accel_3d(a, b, c, stab()).performance_index == 1.0);
    CHECK(track_accel_2d(a, b, c, stab()).performance_index == 1.0);
    CHECK(track_accel_2d(a, b, PointSet{{{5, 7}}, 2}, stab()).performance_index == 1.0);
}

TEST_CASE("accel2d extrapolates exactly when stage 1 is right and motion is noiseless") {
    // Well separated so that stage 1 is correct.
    const PointSet a{{{0, 0}, {10, 0}, {0, 10}}, 0};
    const PointSet b{{{1, 0}, {10, 1}, {-1, 10}}, 1};
    const PointSet c{{{2, 0}, {10, 2}, {-2, 10}}, 2};
    const auto first = track_speed(a, b, stab());
    REQUIRE(first.assignment == Permutation{0, 1, 2});
    // Predictions land on c, so the stage-3 cost has a zero diagonal.
    for (std::size_t i = 0; i < 3; ++i) {
        const Point2 q{2 * b[i].x - a[i].x, 2 * b[i].y - a[i].y};
        CHECK(q == c[i]);
    }
    const auto res = track_accel_2d(a, b, c, stab());
    CHECK(res.performance_index == 1.0);
    CHECK(res.iterations >= first.iterations);

    const auto greedy = track_accel_2d(a, b, c, stab(), Stage3::Greedy);
    CHECK(greedy.performance_index == 1.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) CHECK(greedy.association(i, k) == (i == k ? 1.0 : 0.0));
}

TEST_CASE("accel3d on noiseless separated constant-velocity data scores 1") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> vel(-0.5, 0.5);
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = 3 + t % 6;
        // Starts on a coarse grid keep every competing triple accelerating.
        FrameSequence seq;
        std::vector<Point2> start(n), v(n);
        for (std::size_t i = 0; i < n; ++i) {
            start[i] = {static_cast<double>(i % 3) * 4.0, static_cast<double>(i / 3) * 4.0};
            v[i] = {vel(rng), vel(rng)};
        }
        for (int f = 0; f < 3; ++f) {
            PointSet p{std::vector<Point2>(n), f};
            for (std::size_t i = 0; i < n; ++i) p.positions[i] = {start[i].x + f * v[i].x, start[i].y + f * v[i].y};
            seq.frames.push_back(p);
        }
        for (double lambda : {100.0, 300.0}) {
            CHECK(track_accel_3d(seq[0], seq[1], seq[2], stab(lambda)).performance_index == 1.0);
            CHECK(track_accel_3d(seq[0], seq[1], seq[2], stab(lambda), OutputAxis::IK).performance_index == 1.0);
        }
    }
}

TEST_CASE("relabeling all frames consistently leaves the index unchanged") {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 5; ++t) {
        const auto seq = gen_constant_velocity_noisy(12, 0.5, 0.02, 3, 100 + t);
        const auto pi = props::random_permutation(rng, 12);
        const auto a = permuted(seq[0], pi), b = permuted(seq[1], pi), c = permuted(seq[2], pi);
        CHECK(track_speed(seq[0], seq[1], stab()).performance_index ==
              track_speed(a, b, stab()).performance_index);
        CHECK(track_accel_3d(seq[0], seq[1], seq[2], stab()).performance_index ==
              track_accel_3d(a, b, c, stab()).performance_index);
        CHECK(track_accel_2d(seq[0], seq[1], seq[2], stab()).performance_index ==
              track_accel_2d(a, b, c, stab()).performance_index);
    }
}

TEST_CASE("track_speed argmax matches the oracle at large lambda") {
    std::mt19937_64 rng(53);
    int hits = 0, total = 0;
    for (int t = 0; t < 30; ++t) {
        const std::size_t d = 2 + t % 5;
        const auto a = props::random_points(rng, d), b = props::random_points(rng, d);
        const auto cost = speed_cost(a, b);
        auto o = stab(1000.0 / cost.max(), 100000);
        const auto res = track_speed(a, b, o);
        ++total;
        if (res.assignment == exact_assignment_oracle(cost).permutation) ++hits;
    }
    CHECK(hits >= total - 1);
}

TEST_CASE("index scalar invariance (small sample)") { CHECK(props::index_scalar_invariance(30, 9).all()); }
