// Drives the sinktrack executable end to end.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sinktrack/bench.hpp"

namespace fs = std::filesystem;

namespace {

int sh(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + SINKTRACK_CLI + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("run writes the results CSV") {
    fs::remove("cli_a.csv");
    REQUIRE(sh("run --sim 1 --n 6 --m 0.5 --replicates 2 --max-iterations 100 --out cli_a.csv") == 0);
    const auto rows = sinktrack::parse_csv(fs::path("cli_a.csv"));
    CHECK(rows.size() == 4);
    CHECK(rows[0].method == "speed");
    CHECK(rows[2].method == "accel3d");
    CHECK(slurp("cli_a.csv").rfind(std::string(sinktrack::kResultsHeader) + "\n", 0) == 0);
}

TEST_CASE("repeated and comma-separated grid flags") {
    REQUIRE(sh("run --sim 4 --n 5 --n 6 --sigma2 0.01,0.25 --methods speed --replicates 1 --out cli_b.csv") == 0);
    const auto rows = sinktrack::parse_csv(fs::path("cli_b.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].n == 5);
    CHECK(rows[1].sigma2 == 0.25);
    CHECK(rows[3].n == 6);
}

TEST_CASE("sim defaults") {
    REQUIRE(sh("run --sim 2 --n 5 --replicates 1 --out cli_c.csv") == 0);
    auto rows = sinktrack::parse_csv(fs::path("cli_c.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].method == "accel3d");
    CHECK(rows[1].method == "accel2d");
    CHECK(rows[0].m == 2.0);

    REQUIRE(sh("run --sim 3 --n 5 --replicates 1 --methods speed --out cli_c.csv") == 0);
    rows = sinktrack::parse_csv(fs::path("cli_c.csv"));
    CHECK(rows.size() == 5);
}

TEST_CASE("lambda sweep") {
    REQUIRE(sh("run --sim 1 --n 5 --replicates 1 --methods speed --lambda-sweep 10,100 --out cli_d.csv") == 0);
    const auto rows = sinktrack::parse_csv(fs::path("cli_d.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].lambda == 10.0);
    CHECK(rows[1].lambda == 100.0);
}

TEST_CASE("usage errors exit with 1") {
    CHECK(sh("") == 1);
    CHECK(sh("run --sim 1") == 1);
    CHECK(sh("run --sim 5 --out x.csv") == 1);
    CHECK(sh("run --sim 1 --methods walk --out x.csv") == 1);
    CHECK(sh("run --sim 1 --lambda 10 --lambda-sweep 10,100 --out x.csv") == 1);
    CHECK(sh("run --sim 1 --n 0 --out x.csv") == 1);
    CHECK(sh("run --sim 1 --lambda -3 --out x.csv") == 1);
    CHECK(sh("plot --in cli_a.csv --kind pie --group-by method --out f.svg") == 1);
    CHECK(sh("plot --in cli_a.csv --kind boxplot --group-by colour --out f.svg") == 1);
    CHECK(sh("track --frames f.csv --method teleport --out a.csv") == 1);
    CHECK(sh("run --sim 1 --n 5 --replicates 1 --out x.csv", "SINKTRACK_THREADS=lots") == 1);
    CHECK(sh("--help") == 0);
}

TEST_CASE("runtime and I/O errors exit with 2") {
    CHECK(sh("run --sim 1 --n 5 --replicates 1 --out /nonexistent/dir/r.csv") == 2);
    CHECK(sh("plot --in /nonexistent/r.csv --kind boxplot --group-by method --out f.svg") == 2);
    CHECK(sh("track --frames /nonexistent/f.csv --method speed --out a.csv") == 2);
    {
        std::ofstream bad("cli_bad_frames.csv");
        bad << "frame,object_id,x,y\n0,0,1,1\n";
    }
    CHECK(sh("track --frames cli_bad_frames.csv --method accel3d --out a.csv") == 2);
    CHECK(slurp("cli_stderr.txt").find("needs at least 3 frames") != std::string::npos);
}

TEST_CASE("thread cap is accepted") {
    CHECK(sh("run --sim 1 --n 5 --replicates 2 --methods speed --out cli_t1.csv", "SINKTRACK_THREADS=1") == 0);
    CHECK(sh("run --sim 1 --n 5 --replicates 2 --methods speed --out cli_t3.csv", "SINKTRACK_THREADS=3") == 0);
    CHECK(slurp("cli_t1.csv") == slurp("cli_t3.csv"));
}

TEST_CASE("plot writes SVG") {
    REQUIRE(sh("run --sim 4 --n 6 --sigma2 0.01,0.25 --replicates 3 --max-iterations 100 --out cli_e.csv") == 0);
    REQUIRE(sh("plot --in cli_e.csv --kind boxplot --group-by method,sigma2 --out cli_box.svg") == 0);
    CHECK(slurp("cli_box.svg").find("<svg") == 0);
    REQUIRE(sh("plot --in cli_e.csv --kind lineplot --group-by sigma2 --out cli_line.svg") == 0);
    CHECK(slurp("cli_line.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("dump frames then track them") {
    fs::remove_all("cli_frames");
    REQUIRE(sh("run --sim 1 --n 8 --replicates 1 --methods speed --dump-frames cli_frames --out cli_f.csv") == 0);
    const auto frames = fs::path("cli_frames") / "sim1_n8_m0.5_sigma2_0_rep0.csv";
    REQUIRE(fs::exists(frames));
    for (const char* method : {"speed", "accel3d", "accel2d"}) {
        CAPTURE(method);
        REQUIRE(sh("track --frames " + frames.string() + " --method " + method + " --out cli_assoc.csv") == 0);
        const auto text = slurp("cli_assoc.csv");
        CHECK(text.rfind("source_id,target_id,mass\n", 0) == 0);
        CHECK(slurp("cli_stdout.txt").find("performance_index=") == 0);
    }
    // Accel3D recovers noiseless constant-velocity tracks.
    REQUIRE(sh("track --frames " + frames.string() + " --method accel3d --axis ik --out cli_assoc.csv") == 0);
    CHECK(slurp("cli_stdout.txt").find("performance_index=1 ") == 0);
}
