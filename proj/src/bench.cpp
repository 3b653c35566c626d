#include "sinktrack/bench.hpp"

#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sinktrack {

namespace {

std::string fmt6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct GridPoint {
    double lambda;
    std::size_t n;
    double m;
    double sigma2;
};

struct Job {
    GridPoint point;
    Method method;
    int replicate;
};

SimScenario scenario_for(const ExperimentConfig& cfg, const GridPoint& p, std::uint64_t seed) {
    SimScenario s;
    s.n = p.n;
    s.m = p.m;
    s.sigma2 = p.sigma2;
    s.seed = seed;
    s.noise = cfg.noise;
    switch (cfg.sim_id) {
    case 1:
    case 2: s.kind = SimKind::ConstantVelocity; break;
    case 3: s.kind = SimKind::RandomWalk; break;
    default: s.kind = SimKind::ConstantVelocityNoisy; break;
    }
    return s;
}

std::filesystem::path frames_path(const ExperimentConfig& cfg, const GridPoint& p, int replicate) {
    const std::string name = "sim" + std::to_string(cfg.sim_id) + "_n" + std::to_string(p.n) + "_m" +
                             fmt6(p.m) + "_sigma2_" + fmt6(p.sigma2) + "_rep" + std::to_string(replicate) +
                             ".csv";
    return *cfg.dump_frames / name;
}

TrackingResult run_method(const ExperimentConfig& cfg, Method method, const FrameSequence& seq,
                          const SolverOptions& opts) {
    switch (method) {
    case Method::Speed: return track_speed(seq[0], seq[1], opts);
    case Method::Accel3D:
        // Simulation 2 scores the t -> t+2 association.
        return track_accel_3d(seq[0], seq[1], seq[2], opts,
                              cfg.sim_id == 2 ? OutputAxis::IK : OutputAxis::IJ);
    case Method::Accel2D: return track_accel_2d(seq[0], seq[1], seq[2], opts, cfg.accel2d_stage3);
    }
    throw InvalidArgument("run_experiment: unknown method");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T, class Parse>
T parse_field(const std::string& field, std::size_t lineno, const char* column, Parse parse) {
    std::size_t used = 0;
    T value{};
    try {
        value = parse(field, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(!field.empty() && used == field.size(), "results csv line " + std::to_string(lineno) +
                                                        ": bad " + column + " '" + field + "'");
    return value;
}

} // namespace

void ExperimentConfig::validate() const {
    require(sim_id >= 1 && sim_id <= 4, "experiment: sim_id must be 1, 2, 3 or 4");
    require(!n.empty() && !m.empty() && !sigma2.empty() && !lambdas.empty(), "experiment: empty grid");
    require(!methods.empty(), "experiment: no methods");
    require(replicates >= 1, "experiment: replicates must be >= 1");
    for (double l : lambdas) require(l > 0.0, "experiment: lambda must be positive");
    SolverOptions{lambdas.front(), tolerance, max_iterations, stabilized}.validate();
    for (std::size_t nn : n)
        for (double mm : m)
            for (double s2 : sigma2) scenario_for(*this, {1.0, nn, mm, s2}, 0).validate();
}

double csv_round(double x) { return std::stod(fmt6(x)); }

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    std::vector<GridPoint> grid;
    for (double l : cfg.lambdas)
        for (std::size_t n : cfg.n)
            for (double m : cfg.m)
                for (double s2 : cfg.sigma2) grid.push_back({l, n, m, s2});

    if (cfg.dump_frames) {
        std::filesystem::create_directories(*cfg.dump_frames);
        // Frames do not depend on lambda; write each dataset once.
        for (const auto& p : grid) {
            if (p.lambda != cfg.lambdas.front()) continue;
            for (int r = 0; r < cfg.replicates; ++r) {
                const auto seed = child_seed(cfg.base_seed, static_cast<std::uint64_t>(r));
                write_frames_csv(frames_path(cfg, p, r), generate(scenario_for(cfg, p, seed)));
            }
        }
    }

    std::vector<Job> jobs;
    for (const auto& p : grid)
        for (Method method : cfg.methods)
            for (int r = 0; r < cfg.replicates; ++r) jobs.push_back({p, method, r});

    std::vector<ResultRow> rows(jobs.size());
    std::exception_ptr failure;

    // Rows land at their job index, so output order never depends on scheduling.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t t = 0; t < jobs.size(); ++t) {
        try {
            const Job& job = jobs[t];
            const auto seed = child_seed(cfg.base_seed, static_cast<std::uint64_t>(job.replicate));
            const auto seq = generate(scenario_for(cfg, job.point, seed));
            SolverOptions opts{job.point.lambda, cfg.tolerance, cfg.max_iterations, cfg.stabilized};
            const auto res = run_method(cfg, job.method, seq, opts);

            ResultRow& row = rows[t];
            row.sim_id = cfg.sim_id;
            row.method = std::string(to_string(job.method));
            row.n = job.point.n;
            row.m = csv_round(job.point.m);
            row.sigma2 = csv_round(job.point.sigma2);
            row.lambda = csv_round(job.point.lambda);
            row.seed = seed;
            row.performance_index = csv_round(res.performance_index);
            row.iterations = res.iterations;
            row.converged = res.converged;
            row.runtime_ms = cfg.record_runtime ? csv_round(res.runtime_ms) : 0.0;
        } catch (...) {
#pragma omp critical(sinktrack_experiment_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return rows;
}

void emit_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kResultsHeader << '\n';
    for (const auto& r : rows)
        out << r.sim_id << ',' << r.method << ',' << r.n << ',' << fmt6(r.m) << ',' << fmt6(r.sigma2) << ','
            << fmt6(r.lambda) << ',' << r.seed << ',' << fmt6(r.performance_index) << ',' << r.iterations
            << ',' << (r.converged ? "true" : "false") << ',' << fmt6(r.runtime_ms) << '\n';
}

void emit_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    emit_csv(out, rows);
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<ResultRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("results csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == kResultsHeader, "results csv: unexpected header '" + line + "'");

    const auto to_double = [](const std::string& s, std::size_t* used) { return std::stod(s, used); };
    const auto to_long = [](const std::string& s, std::size_t* used) { return std::stol(s, used); };
    const auto to_u64 = [](const std::string& s, std::size_t* used) {
        if (!s.empty() && s[0] == '-') throw InvalidArgument("negative");
        return std::stoull(s, used);
    };

    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        require(f.size() == 11, "results csv line " + std::to_string(lineno) + ": expected 11 fields");
        ResultRow r;
        r.sim_id = static_cast<int>(parse_field<long>(f[0], lineno, "sim_id", to_long));
        require(parse_method(f[1]).has_value(),
                "results csv line " + std::to_string(lineno) + ": unknown method '" + f[1] + "'");
        r.method = f[1];
        r.n = parse_field<unsigned long long>(f[2], lineno, "n", to_u64);
        r.m = parse_field<double>(f[3], lineno, "m", to_double);
        r.sigma2 = parse_field<double>(f[4], lineno, "sigma2", to_double);
        r.lambda = parse_field<double>(f[5], lineno, "lambda", to_double);
        r.seed = parse_field<unsigned long long>(f[6], lineno, "seed", to_u64);
        r.performance_index = parse_field<double>(f[7], lineno, "performance_index", to_double);
        r.iterations = static_cast<int>(parse_field<long>(f[8], lineno, "iterations", to_long));
        require(f[9] == "true" || f[9] == "false",
                "results csv line " + std::to_string(lineno) + ": converged must be true or false");
        r.converged = f[9] == "true";
        r.runtime_ms = parse_field<double>(f[10], lineno, "runtime_ms", to_double);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> parse_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return parse_csv(in);
}

std::string column_value(const ResultRow& r, std::string_view column) {
    if (column == "sim_id") return std::to_string(r.sim_id);
    if (column == "method") return r.method;
    if (column == "n") return std::to_string(r.n);
    if (column == "m") return fmt6(r.m);
    if (column == "sigma2") return fmt6(r.sigma2);
    if (column == "lambda") return fmt6(r.lambda);
    if (column == "seed") return std::to_string(r.seed);
    if (column == "performance_index") return fmt6(r.performance_index);
    if (column == "iterations") return std::to_string(r.iterations);
    if (column == "converged") return r.converged ? "true" : "false";
    if (column == "runtime_ms") return fmt6(r.runtime_ms);
    throw InvalidArgument("unknown column '" + std::string(column) + "'");
}

} // namespace sinktrack
