#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "trajkit/cli.hpp"
#include "trajkit/error.hpp"
#include "trajkit/io.hpp"
#include "trajkit/report.hpp"
#include "trajkit/simlab.hpp"

using namespace trajkit;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("trajkit_test_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Minimal XML well-formedness check: every <tag ...> has a matching </tag>
// or is self-closing; returns the number of <polyline elements seen.
int check_xml_count_polylines(const std::string& xml) {
    std::vector<std::string> stack;
    int polylines = 0;
    std::size_t i = 0;
    while (i < xml.size()) {
        if (xml[i] != '<') {
            ++i;
            continue;
        }
        const std::size_t end = xml.find('>', i);
        REQUIRE(end != std::string::npos);
        std::string tag = xml.substr(i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty()) continue;
        if (tag[0] == '?' || tag[0] == '!') continue;  // declaration/comment
        if (tag[0] == '/') {
            REQUIRE_FALSE(stack.empty());
            REQUIRE(stack.back() == tag.substr(1));
            stack.pop_back();
            continue;
        }
        const bool self_closing = tag.back() == '/';
        std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
        if (name == "polyline") ++polylines;
        if (!self_closing) stack.push_back(name);
    }
    REQUIRE(stack.empty());
    return polylines;
}

}  // namespace

TEST_CASE("load_trajectory tum basics") {
    const auto dir = temp_dir();
    write_file(dir / "t.txt",
               "# comment line\n"
               "0.0 0 0 0 0 0 0 1\n"
               "1.0 1 2 3 0 0 0.7071067811865476 0.7071067811865476\n");
    const auto t = load_trajectory((dir / "t.txt").string(), FileFormat::tum);
    CHECK(t.size() == 2);
    CHECK(t.positions[0] == Vec3(0, 0, 0));
    CHECK(angular_distance(t.rotations[0], Rotation()) < 1e-12);
    CHECK(t.positions[1] == Vec3(1, 2, 3));
    CHECK(t.timestamps[1] == 1.0);
}

TEST_CASE("load_trajectory error cases") {
    const auto dir = temp_dir();

    write_file(dir / "empty.txt", "# only comments\n# here\n");
    CHECK_THROWS_AS(load_trajectory((dir / "empty.txt").string(), FileFormat::tum), InputError);

    write_file(dir / "short.txt", "0.0 1 2\n");
    CHECK_THROWS_WITH_AS(load_trajectory((dir / "short.txt").string(), FileFormat::tum),
                         doctest::Contains("malformed line 1"), InputError);

    write_file(dir / "badnum.txt", "0.0 1 2 x 0 0 0 1\n");
    CHECK_THROWS_AS(load_trajectory((dir / "badnum.txt").string(), FileFormat::tum), InputError);

    // quaternion norm 1.0005 accepted (renormalized), 1.3 rejected
    write_file(dir / "qok.txt", "0.0 0 0 0 0 0 0 1.0005\n");
    const auto ok = load_trajectory((dir / "qok.txt").string(), FileFormat::tum);
    CHECK(std::abs(ok.rotations[0].quaternion().norm() - 1.0) < 1e-12);

    write_file(dir / "qbad.txt", "0.0 0 0 0 0 0 0 1.3\n");
    CHECK_THROWS_AS(load_trajectory((dir / "qbad.txt").string(), FileFormat::tum), InputError);

    write_file(dir / "ts.txt", "1.0 0 0 0 0 0 0 1\n0.5 1 0 0 0 0 0 1\n");
    CHECK_THROWS_AS(load_trajectory((dir / "ts.txt").string(), FileFormat::tum), InputError);

    CHECK_THROWS_AS(load_trajectory((dir / "missing.txt").string(), FileFormat::tum), InputError);
}

TEST_CASE("csv position-only files load without rotations") {
    const auto dir = temp_dir();
    write_file(dir / "p.csv", "0.0,1,2,3\n1.0,4,5,6\n");
    const auto t = load_trajectory((dir / "p.csv").string(), FileFormat::csv);
    CHECK(t.size() == 2);
    CHECK_FALSE(t.has_rotations());
    CHECK(t.positions[1] == Vec3(4, 5, 6));
}

TEST_CASE("save/load round trip within 1e-9") {
    Rng rng(1);
    auto t = gen_random_box(25, rng);
    for (int i = 0; i < 25; ++i) t.timestamps.push_back(0.1 * i);

    const auto dir = temp_dir();
    for (const auto format : {FileFormat::tum, FileFormat::csv}) {
        const auto path = dir / (format == FileFormat::tum ? "r.txt" : "r.csv");
        save_trajectory(t, path.string(), format);
        const auto back = load_trajectory(path.string(), format);
        REQUIRE(back.size() == t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK((back.positions[i] - t.positions[i]).norm() < 1e-9);
            CHECK(angular_distance(back.rotations[i], t.rotations[i]) < 1e-6);
            CHECK(back.timestamps[i] == doctest::Approx(t.timestamps[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("association") {
    SUBCASE("index mode requires equal lengths") {
        Rng rng(2);
        const auto a = gen_random_box(10, rng);
        const auto b = gen_random_box(9, rng);
        CHECK_THROWS_AS(associate(a, b, AssocMode::index), InputError);
        const auto assoc = associate(a, a, AssocMode::index);
        CHECK(assoc.pairs.size() == 10);
        CHECK(assoc.pairs[3] == std::make_pair<std::size_t, std::size_t>(3, 3));
    }

    SUBCASE("greedy timestamp matching hand oracle") {
        const auto pairs = greedy_timestamp_matches({0.0, 1.0, 2.0}, {0.01, 0.99, 2.5}, 0.02);
        REQUIRE(pairs.size() == 2);
        CHECK(pairs[0] == std::make_pair<std::size_t, std::size_t>(0, 0));
        CHECK(pairs[1] == std::make_pair<std::size_t, std::size_t>(1, 1));
    }

    SUBCASE("each record used at most once") {
        const auto pairs = greedy_timestamp_matches({0.0, 0.011}, {0.01}, 0.02);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].first == 1);  // 0.011 is closer to 0.01
    }

    SUBCASE("zero matches is an error") {
        Trajectory a, b;
        for (int i = 0; i < 5; ++i) {
            a.positions.emplace_back(i, 0, 0);
            a.timestamps.push_back(i);
            b.positions.emplace_back(i, 0, 0);
            b.timestamps.push_back(i + 100.0);
        }
        CHECK_THROWS_AS(associate(a, b, AssocMode::timestamp, 0.02), DegenerateError);
    }
}

TEST_CASE("run_evaluate self-evaluation gives perfect scores") {
    const auto dir = temp_dir();
    Rng rng(3);
    auto t = gen_random_box(30, rng);
    save_trajectory(t, (dir / "gt.txt").string(), FileFormat::tum);

    EvaluateOptions opts;
    opts.gt_path = (dir / "gt.txt").string();
    opts.est_path = (dir / "gt.txt").string();
    opts.metrics = {"tas", "ras", "pas"};

    std::ostringstream out, err;
    const int code = run_evaluate(opts, out, err);
    CHECK(code == kExitOk);
    CHECK(out.str().find("tas       1\n") != std::string::npos);
    CHECK(out.str().find("ras       1\n") != std::string::npos);
    CHECK(out.str().find("pas       1\n") != std::string::npos);

    SUBCASE("default metric set is perfect on self-evaluation too") {
        EvaluateOptions all = opts;
        all.metrics.clear();  // all metrics
        all.json = true;
        std::ostringstream out2, err2;
        CHECK(run_evaluate(all, out2, err2) == kExitOk);
        const auto doc = nlohmann::json::parse(out2.str());
        CHECK_FALSE(doc.contains("unavailable"));
        const auto& m = doc.at("metrics");
        for (const char* zero : {"ate", "dte", "dre", "median1", "mean1", "rms1", "median2",
                                 "mean2", "rms2"}) {
            CHECK(std::abs(m.at(zero).get<double>()) <= 1e-12);
        }
        for (const char* one : {"tas", "ras", "pas", "maa"}) {
            CHECK(m.at(one).get<double>() == 1.0);
        }
    }
}

TEST_CASE("run_evaluate reports unavailable metrics without failing others") {
    const auto dir = temp_dir();
    Rng rng(4);
    auto t = gen_random_box(30, rng);
    t.rotations.clear();
    for (int i = 0; i < 30; ++i) t.timestamps.push_back(i);
    save_trajectory(t, (dir / "p.csv").string(), FileFormat::csv);

    EvaluateOptions opts;
    opts.gt_path = (dir / "p.csv").string();
    opts.est_path = (dir / "p.csv").string();
    opts.format = FileFormat::csv;
    opts.metrics = {"tas", "ras"};

    std::ostringstream out, err;
    const int code = run_evaluate(opts, out, err);
    CHECK(code == kExitOk);
    CHECK(out.str().find("n/a (rotations unavailable)") != std::string::npos);
    CHECK(out.str().find("tas       1\n") != std::string::npos);
}

TEST_CASE("run_evaluate is byte-deterministic for a fixed seed") {
    const auto dir = temp_dir();
    Rng rng(5);
    auto gt = gen_random_box(40, rng);
    auto est = perturb_trajectory(gt, 0.05, 3.0, rng);
    est = inject_outliers(est, 5, rng);
    save_trajectory(gt, (dir / "gt.txt").string(), FileFormat::tum);
    save_trajectory(est, (dir / "est.txt").string(), FileFormat::tum);

    EvaluateOptions opts;
    opts.gt_path = (dir / "gt.txt").string();
    opts.est_path = (dir / "est.txt").string();
    opts.seed = 9;
    opts.json = true;

    std::ostringstream out1, out2, err;
    CHECK(run_evaluate(opts, out1, err) == kExitOk);
    CHECK(run_evaluate(opts, out2, err) == kExitOk);
    CHECK(out1.str() == out2.str());
    CHECK(out1.str().find("\"tas\"") != std::string::npos);
}

TEST_CASE("run_evaluate writes histogram CSVs") {
    const auto dir = temp_dir();
    Rng rng(6);
    auto gt = gen_random_box(20, rng);
    save_trajectory(gt, (dir / "gt.txt").string(), FileFormat::tum);

    EvaluateOptions opts;
    opts.gt_path = (dir / "gt.txt").string();
    opts.est_path = (dir / "gt.txt").string();
    opts.metrics = {"tas", "ras"};
    opts.hist_csv_prefix = (dir / "hist.csv").string();

    std::ostringstream out, err;
    CHECK(run_evaluate(opts, out, err) == kExitOk);
    const std::string tas_csv = read_file(dir / "hist_tas.csv");
    CHECK(tas_csv.find("threshold,cumulative_count,cumulative_fraction") == 0);
    // 100 rows + header
    CHECK(std::count(tas_csv.begin(), tas_csv.end(), '\n') == 101);
    CHECK(fs::exists(dir / "hist_ras.csv"));
}

TEST_CASE("run_simulate writes per-run and summary CSVs") {
    const auto dir = temp_dir();
    SimulateOptions opts;
    opts.grid = "fig2";
    opts.runs = 2;
    opts.seed = 1;
    opts.out_dir = (dir / "out").string();

    std::ostringstream out, err;
    REQUIRE(run_simulate(opts, out, err) == kExitOk);

    const std::string runs_csv = read_file(dir / "out" / "fig2_runs.csv");
    // 7 outlier counts x 10 noise levels x 2 runs + header
    CHECK(std::count(runs_csv.begin(), runs_csv.end(), '\n') == 141);
    CHECK(runs_csv.find("grid,kind,n,sigma_t,sigma_r,outliers,runs,run,ate,dte,maa,tas") == 0);

    const auto rows = read_summary_csv((dir / "out" / "fig2_summary.csv").string());
    CHECK(rows.size() == 70);
    CHECK(rows.front().metrics.count("tas") == 1);

    SUBCASE("rerun is byte-identical") {
        SimulateOptions opts2 = opts;
        opts2.out_dir = (dir / "out2").string();
        std::ostringstream o2, e2;
        REQUIRE(run_simulate(opts2, o2, e2) == kExitOk);
        CHECK(read_file(dir / "out2" / "fig2_runs.csv") == runs_csv);
    }

    SUBCASE("report renders one well-formed SVG per metric") {
        ReportOptions rep;
        rep.in_dir = opts.out_dir;
        std::ostringstream o3, e3;
        REQUIRE(run_report(rep, o3, e3) == kExitOk);
        for (const std::string metric : {"ate", "dte", "maa", "tas"}) {
            const auto path = dir / "out" / ("fig2_" + metric + ".svg");
            REQUIRE(fs::exists(path));
            const int polylines = check_xml_count_polylines(read_file(path));
            CHECK(polylines == 10);  // one per noise level
        }
    }
}

TEST_CASE("run_simulate rejects bad inputs") {
    std::ostringstream out, err;
    SimulateOptions opts;
    opts.grid = "fig2";
    opts.runs = 0;
    opts.out_dir = "/tmp/x";
    CHECK(run_simulate(opts, out, err) == kExitInputError);

    opts.runs = 1;
    opts.grid = "fig99";
    CHECK(run_simulate(opts, out, err) == kExitInputError);
}

TEST_CASE("custom grid config via JSON") {
    const auto dir = temp_dir();
    write_file(dir / "grid.json", R"({
      "name": "mini",
      "metrics": ["ate", "tas"],
      "x_axis": "outliers",
      "line_axis": "sigma_t",
      "cells": [
        {"kind": "random_box", "n": 20, "sigma_t": 0.01, "outliers": 0},
        {"kind": "random_box", "n": 20, "sigma_t": 0.01, "outliers": 2}
      ]
    })");

    SimulateOptions opts;
    opts.grid = "custom";
    opts.config_path = (dir / "grid.json").string();
    opts.runs = 2;
    opts.out_dir = (dir / "out").string();

    std::ostringstream out, err;
    REQUIRE(run_simulate(opts, out, err) == kExitOk);
    const std::string runs_csv = read_file(dir / "out" / "mini_runs.csv");
    CHECK(std::count(runs_csv.begin(), runs_csv.end(), '\n') == 5);  // header + 2 cells x 2 runs

    write_file(dir / "bad.json", "{ not json");
    opts.config_path = (dir / "bad.json").string();
    CHECK(run_simulate(opts, out, err) == kExitInputError);
}

TEST_CASE("report fails cleanly without summaries") {
    const auto dir = temp_dir();
    ReportOptions rep;
    rep.in_dir = dir.string();
    std::ostringstream out, err;
    CHECK(run_report(rep, out, err) == kExitInputError);
}

#ifdef TRAJKIT_BIN
TEST_CASE("cli binary end to end") {
    const auto dir = temp_dir();
    Rng rng(7);
    auto gt = gen_random_box(20, rng);
    save_trajectory(gt, (dir / "gt.txt").string(), FileFormat::tum);

    const std::string bin = TRAJKIT_BIN;
    const std::string cmd = bin + " evaluate --gt " + (dir / "gt.txt").string() + " --est " +
                            (dir / "gt.txt").string() + " --metrics tas > " +
                            (dir / "out.txt").string();
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(read_file(dir / "out.txt").find("tas       1") != std::string::npos);

    // exit code 2 on input error
    const std::string bad = bin + " evaluate --gt /nonexistent --est /nonexistent 2>/dev/null";
    const int status = std::system(bad.c_str());
    CHECK(WEXITSTATUS(status) == 2);

    // exit code 3 on degenerate data: coincident cameras, TAS-only request
    write_file(dir / "degenerate.txt",
               "0 1 1 1 0 0 0 1\n1 1 1 1 0 0 0 1\n2 1 1 1 0 0 0 1\n3 1 1 1 0 0 0 1\n");
    const std::string degen = bin + " evaluate --gt " + (dir / "degenerate.txt").string() +
                              " --est " + (dir / "degenerate.txt").string() +
                              " --metrics tas >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(degen.c_str())) == 3);

    // TRAJKIT_SEED env default is honored (smoke: runs fine and deterministic)
    const std::string env_cmd = "TRAJKIT_SEED=5 " + bin + " evaluate --gt " +
                                (dir / "gt.txt").string() + " --est " + (dir / "gt.txt").string() +
                                " --metrics tas --json > " + (dir / "env1.json").string();
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    CHECK(read_file(dir / "env1.json").find("\"seed\": 5") != std::string::npos);
}
#endif
