// sinktrack: run simulation grids, plot result tables, track imported frames.
//
// Exit codes: 0 ok, 1 usage error, 2 runtime or I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sinktrack/bench.hpp"
#include "sinktrack/figures.hpp"
#include "sinktrack/kernels.hpp"

namespace {

using namespace sinktrack;

constexpr int kUsage = 1;
constexpr int kRuntime = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<Method> out;
    for (const auto& name : names) {
        const auto m = parse_method(name);
        if (!m) throw UsageError("unknown method '" + name + "' (expected speed, accel3d or accel2d)");
        out.push_back(*m);
    }
    return out;
}

void apply_thread_cap() {
    const char* env = std::getenv("SINKTRACK_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 0) throw UsageError("SINKTRACK_THREADS must be a non-negative integer");
    kernels::set_max_threads(static_cast<int>(n));
}

// Per-simulation default grids; any flag given on the command line replaces the default.
void apply_sim_defaults(ExperimentConfig& cfg, bool has_n, bool has_m, bool has_s2, bool has_methods) {
    if (!has_n) cfg.n = {100};
    switch (cfg.sim_id) {
    case 1:
        if (!has_m) cfg.m = {0.5};
        if (!has_s2) cfg.sigma2 = {0.0};
        if (!has_methods) cfg.methods = {Method::Speed, Method::Accel3D};
        break;
    case 2:
        if (!has_m) cfg.m = {2.0};
        if (!has_s2) cfg.sigma2 = {0.0};
        if (!has_methods) cfg.methods = {Method::Accel3D, Method::Accel2D};
        break;
    case 3:
        if (!has_m) cfg.m = {0.0};
        if (!has_s2) cfg.sigma2 = {0.1, 0.5, 1.0, 1.5, 2.0};
        if (!has_methods) cfg.methods = {Method::Speed, Method::Accel3D};
        break;
    case 4:
        if (!has_m) cfg.m = {0.5};
        if (!has_s2) cfg.sigma2 = {0.01, 0.05, 0.10, 0.25};
        if (!has_methods) cfg.methods = {Method::Speed, Method::Accel3D};
        break;
    }
}

void write_association(const std::string& path, const Matrix& assoc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "source_id,target_id,mass\n";
    char buf[96];
    for (std::size_t i = 0; i < assoc.rows(); ++i)
        for (std::size_t j = 0; j < assoc.cols(); ++j) {
            if (assoc(i, j) == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", i, j, assoc(i, j));
            out << buf;
        }
    if (!out) throw IoError("failed writing " + path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropic optimal-transport particle tracking"};
    app.require_subcommand(1);

    // run
    ExperimentConfig cfg;
    std::vector<std::string> method_names;
    std::optional<double> lambda;
    std::vector<double> lambda_sweep;
    std::string noise_model = "positional", stage3 = "sinkhorn", dump_dir, run_out;
    bool unstabilized = false;
    auto* run = app.add_subcommand("run", "run a simulation grid and write a results CSV");
    run->add_option("--sim", cfg.sim_id, "simulation protocol")->required()->check(CLI::Range(1, 4));
    auto* opt_n = run->add_option("--n", cfg.n, "object counts")->delimiter(',');
    auto* opt_m = run->add_option("--m", cfg.m, "speed multipliers")->delimiter(',');
    auto* opt_s2 = run->add_option("--sigma2", cfg.sigma2, "noise / step variances")->delimiter(',');
    auto* opt_methods = run->add_option("--methods", method_names, "speed,accel3d,accel2d")->delimiter(',');
    auto* opt_lambda = run->add_option("--lambda", lambda, "regularization (default 100)");
    run->add_option("--lambda-sweep", lambda_sweep, "several lambdas, e.g. 10,100")
        ->delimiter(',')
        ->excludes(opt_lambda);
    run->add_option("--replicates", cfg.replicates, "datasets per grid point")->check(CLI::PositiveNumber);
    run->add_option("--base-seed", cfg.base_seed, "seed of replicate streams");
    run->add_option("--max-iterations", cfg.max_iterations, "solver iteration cap")->check(CLI::PositiveNumber);
    run->add_option("--tolerance", cfg.tolerance, "L1 marginal residual target")->check(CLI::PositiveNumber);
    run->add_flag("--unstabilized", unstabilized, "plain exp(-lambda M) kernel, no log-domain absorption");
    run->add_option("--noise-model", noise_model, "simulation 4 noise")
        ->check(CLI::IsMember({"positional", "accumulated"}));
    run->add_option("--accel2d-stage3", stage3, "association of predictions to frame t+2")
        ->check(CLI::IsMember({"sinkhorn", "greedy"}));
    run->add_flag("--record-runtime", cfg.record_runtime, "fill runtime_ms (output is then not reproducible)");
    run->add_option("--dump-frames", dump_dir, "write every generated dataset as a frame CSV here");
    run->add_option("--out", run_out, "results CSV")->required();

    // plot
    std::string plot_in, plot_kind, plot_out;
    std::vector<std::string> group_by;
    auto* plot = app.add_subcommand("plot", "draw an SVG summary of a results CSV");
    plot->add_option("--in", plot_in, "results CSV")->required();
    plot->add_option("--kind", plot_kind, "boxplot or lineplot")
        ->required()
        ->check(CLI::IsMember({"boxplot", "lineplot"}));
    plot->add_option("--group-by", group_by, "columns; for lineplot the first is the x axis")
        ->required()
        ->delimiter(',');
    plot->add_option("--out", plot_out, "SVG path")->required();

    // track
    std::string frames_in, track_method, track_axis = "ij", track_out;
    double track_lambda = 100.0;
    int track_iters = 10000;
    auto* track = app.add_subcommand("track", "associate objects across imported frames");
    track->add_option("--frames", frames_in, "frame CSV (frame,object_id,x,y)")->required();
    track->add_option("--method", track_method, "speed, accel3d or accel2d")
        ->required()
        ->check(CLI::IsMember({"speed", "accel3d", "accel2d"}));
    track->add_option("--lambda", track_lambda, "regularization")->check(CLI::PositiveNumber);
    track->add_option("--max-iterations", track_iters, "solver iteration cap")->check(CLI::PositiveNumber);
    track->add_option("--axis", track_axis, "accel3d output: ij (t -> t+1) or ik (t -> t+2)")
        ->check(CLI::IsMember({"ij", "ik"}));
    track->add_option("--out", track_out, "association CSV (source_id,target_id,mass)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        apply_thread_cap();
        if (*run) {
            apply_sim_defaults(cfg, opt_n->count() > 0, opt_m->count() > 0, opt_s2->count() > 0,
                               opt_methods->count() > 0);
            if (opt_methods->count() > 0) cfg.methods = parse_methods(method_names);
            if (!lambda_sweep.empty()) cfg.lambdas = lambda_sweep;
            else cfg.lambdas = {lambda.value_or(100.0)};
            cfg.stabilized = !unstabilized;
            cfg.noise = noise_model == "accumulated" ? NoiseModel::Accumulated : NoiseModel::Positional;
            cfg.accel2d_stage3 = stage3 == "greedy" ? Stage3::Greedy : Stage3::Sinkhorn;
            if (!dump_dir.empty()) cfg.dump_frames = dump_dir;
            try {
                cfg.validate();
            } catch (const InvalidArgument& e) {
                throw UsageError(e.what());
            }
            emit_csv(run_out, run_experiment(cfg));
        } else if (*plot) {
            const auto rows = parse_csv(std::filesystem::path(plot_in));
            const auto kind = plot_kind == "boxplot" ? FigureKind::Boxplot : FigureKind::Lineplot;
            if (!rows.empty()) {
                try {
                    for (const auto& key : group_by) column_value(rows.front(), key);
                } catch (const InvalidArgument& e) {
                    throw UsageError(std::string("--group-by: ") + e.what());
                }
            }
            emit_figure(rows, kind, group_by, plot_out);
        } else if (*track) {
            const auto seq = read_frames_csv(std::filesystem::path(frames_in));
            const auto method = *parse_method(track_method);
            const std::size_t need = method == Method::Speed ? 2 : 3;
            if (seq.frames.size() < need)
                throw InvalidArgument(track_method + " needs at least " + std::to_string(need) + " frames");
            SolverOptions opts;
            opts.lambda = track_lambda;
            opts.max_iterations = track_iters;
            opts.stabilized = true;
            TrackingResult res;
            switch (method) {
            case Method::Speed: res = track_speed(seq[0], seq[1], opts); break;
            case Method::Accel3D:
                res = track_accel_3d(seq[0], seq[1], seq[2], opts,
                                     track_axis == "ik" ? OutputAxis::IK : OutputAxis::IJ);
                break;
            case Method::Accel2D: res = track_accel_2d(seq[0], seq[1], seq[2], opts); break;
            }
            write_association(track_out, res.association);
            std::printf("performance_index=%.6g iterations=%d converged=%s\n", res.performance_index,
                        res.iterations, res.converged ? "true" : "false");
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "sinktrack: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sinktrack: %s\n", e.what());
        return kRuntime;
    }
    return 0;
}
