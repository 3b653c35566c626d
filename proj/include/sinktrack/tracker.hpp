#pragma once

// Frame-to-frame association pipelines built on the transport solvers.

#include <optional>
#include <string>
#include <string_view>

#include "sinktrack/motion_costs.hpp"

namespace sinktrack {

enum class Method { Speed, Accel3D, Accel2D };

/// Which pair of frames a compressed 3-frame plan associates.
enum class OutputAxis { IJ, IK };

/// How the Acceleration (2D) baseline links predictions to the third frame.
enum class Stage3 { Sinkhorn, Greedy };

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

struct TrackingResult {
    Matrix association;
    Permutation assignment; // row-argmax of association
    double performance_index = 0.0;
    Method method = Method::Speed;
    int iterations = 0;
    bool converged = false;
    double runtime_ms = 0.0;
};

/// Fraction of rows whose diagonal entry strictly exceeds every other entry of
/// the row. Ties count as misses.
double performance_index(const Matrix& association);

/// Nearest-neighbor style tracking: transport between frames under the speed cost.
TrackingResult track_speed(const PointSet& a, const PointSet& b, const SolverOptions& opts);

/// Constant-velocity tracking: 3-frame transport under the acceleration cost,
/// compressed to a pairwise association (IJ: t -> t+1, IK: t -> t+2).
TrackingResult track_accel_3d(const PointSet& a, const PointSet& b, const PointSet& c,
                              const SolverOptions& opts, OutputAxis axis = OutputAxis::IJ);

/// Two-stage baseline: speed tracking t -> t+1, constant-velocity prediction of
/// t+2, then association of predictions with frame t+2. Evaluates t -> t+2.
TrackingResult track_accel_2d(const PointSet& a, const PointSet& b, const PointSet& c,
                              const SolverOptions& opts, Stage3 stage3 = Stage3::Sinkhorn);

} // namespace sinktrack
