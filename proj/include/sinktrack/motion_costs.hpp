#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sinktrack/ot_core.hpp"
#include "sinktrack/ot_multi.hpp"

namespace sinktrack {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Object positions at one time point. Object identity is the index.
struct PointSet {
    std::vector<Point2> positions;
    int frame_index = 0;

    std::size_t size() const noexcept { return positions.size(); }
    const Point2& operator[](std::size_t i) const noexcept { return positions[i]; }

    /// n >= 1 and all coordinates finite.
    void validate() const;

    friend bool operator==(const PointSet&, const PointSet&) = default;
};

/// Consecutive frames of the same n objects.
struct FrameSequence {
    std::vector<PointSet> frames;

    std::size_t objects() const noexcept { return frames.empty() ? 0 : frames.front().size(); }
    const PointSet& operator[](std::size_t t) const noexcept { return frames[t]; }

    void validate() const;

    friend bool operator==(const FrameSequence&, const FrameSequence&) = default;
};

/// m_ij = |b_j - a_i|
CostMatrix speed_cost(const PointSet& a, const PointSet& b);

/// m_ijk = |(c_k - b_j) - (b_j - a_i)|, the change of velocity along i -> j -> k.
CostTensor3 acceleration_cost(const PointSet& a, const PointSet& b, const PointSet& c,
                              Exec exec = Exec::Parallel);

// Frame CSV: header `frame,object_id,x,y`, rows sorted by frame then object_id.
void write_frames_csv(std::ostream& out, const FrameSequence& seq);
void write_frames_csv(const std::filesystem::path& path, const FrameSequence& seq);
FrameSequence read_frames_csv(std::istream& in);
FrameSequence read_frames_csv(const std::filesystem::path& path);

} // namespace sinktrack
