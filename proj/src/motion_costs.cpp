#include "sinktrack/motion_costs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sinktrack {

namespace {

void require_same_size(const PointSet& a, const PointSet& b, const char* what) {
    require(a.size() == b.size(), std::string(what) + ": frames hold different object counts (" +
                                      std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

double parse_double(const std::string& field, std::size_t line) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == field.size() && !field.empty(),
            "frames csv line " + std::to_string(line) + ": bad number '" + field + "'");
    return value;
}

long parse_int(const std::string& field, std::size_t line) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == field.size() && !field.empty(),
            "frames csv line " + std::to_string(line) + ": bad integer '" + field + "'");
    return value;
}

} // namespace

void PointSet::validate() const {
    require(!positions.empty(), "PointSet: needs at least one object");
    for (const auto& p : positions)
        require(std::isfinite(p.x) && std::isfinite(p.y), "PointSet: non-finite coordinate");
}

void FrameSequence::validate() const {
    require(!frames.empty(), "FrameSequence: no frames");
    for (std::size_t t = 0; t < frames.size(); ++t) {
        frames[t].validate();
        require(frames[t].size() == frames.front().size(), "FrameSequence: object count changes between frames");
        require(frames[t].frame_index == frames.front().frame_index + static_cast<int>(t),
                "FrameSequence: frame indices are not consecutive");
    }
}

CostMatrix speed_cost(const PointSet& a, const PointSet& b) {
    require_same_size(a, b, "speed_cost");
    a.validate();
    b.validate();
    const std::size_t n = a.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = b[j].x - a[i].x, dy = b[j].y - a[i].y;
            m(i, j) = std::sqrt(dx * dx + dy * dy);
        }
    return CostMatrix(std::move(m));
}

CostTensor3 acceleration_cost(const PointSet& a, const PointSet& b, const PointSet& c, Exec exec) {
    require_same_size(a, b, "acceleration_cost");
    require_same_size(b, c, "acceleration_cost");
    a.validate();
    b.validate();
    c.validate();
    const std::size_t n = a.size();
    require(n <= kMaxTensorExtent, "acceleration_cost: too many objects for a dense tensor");
    Tensor3 t(n);
    const auto rows = static_cast<std::ptrdiff_t>(n * n);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const std::size_t i = r / n, j = r % n;
        // velocity a_i -> b_j
        const double vx = b[j].x - a[i].x, vy = b[j].y - a[i].y;
        auto fib = t.fiber(i, j);
        for (std::size_t k = 0; k < n; ++k) {
            const double ax = (c[k].x - b[j].x) - vx, ay = (c[k].y - b[j].y) - vy;
            fib[k] = std::sqrt(ax * ax + ay * ay);
        }
    }
    return CostTensor3(std::move(t));
}

void write_frames_csv(std::ostream& out, const FrameSequence& seq) {
    out << "frame,object_id,x,y\n";
    char buf[96];
    for (const auto& frame : seq.frames)
        for (std::size_t i = 0; i < frame.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g\n", frame.frame_index, i, frame[i].x,
                          frame[i].y);
            out << buf;
        }
}

void write_frames_csv(const std::filesystem::path& path, const FrameSequence& seq) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_frames_csv(out, seq);
    if (!out) throw IoError("failed writing " + path.string());
}

FrameSequence read_frames_csv(std::istream& in) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw InvalidArgument("frames csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == "frame,object_id,x,y", "frames csv: header must be 'frame,object_id,x,y'");

    FrameSequence seq;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        require(fields.size() == 4, "frames csv line " + std::to_string(lineno) + ": expected 4 fields");

        const long frame = parse_int(fields[0], lineno);
        const long id = parse_int(fields[1], lineno);
        const Point2 p{parse_double(fields[2], lineno), parse_double(fields[3], lineno)};

        if (seq.frames.empty() || frame != seq.frames.back().frame_index) {
            require(seq.frames.empty() || frame == seq.frames.back().frame_index + 1,
                    "frames csv line " + std::to_string(lineno) + ": frames must be consecutive and sorted");
            seq.frames.push_back(PointSet{{}, static_cast<int>(frame)});
        }
        auto& current = seq.frames.back();
        require(id == static_cast<long>(current.size()),
                "frames csv line " + std::to_string(lineno) + ": object_id out of order");
        current.positions.push_back(p);
    }
    seq.validate();
    return seq;
}

FrameSequence read_frames_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_frames_csv(in);
}

} // namespace sinktrack
