// trajkit: camera trajectory evaluation and simulation CLI.
//
//   trajkit evaluate --gt gt.txt --est est.txt [--metrics tas,ras,pas,...]
//   trajkit simulate --grid fig2 --runs 50 --seed 1 --out results/
//   trajkit report   --in results/ --svg

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "trajkit/cli.hpp"
#include "trajkit/error.hpp"

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("TRAJKIT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring invalid TRAJKIT_SEED '" << env << "'\n";
        }
    }
    return 0;
}

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trajkit: camera trajectory evaluation toolkit"};
    app.require_subcommand(1);

    trajkit::EvaluateOptions eval;
    std::string eval_format = "tum", eval_assoc = "index", eval_metrics;
    auto* cmd_eval = app.add_subcommand("evaluate", "evaluate an estimate against ground truth");
    cmd_eval->add_option("--gt", eval.gt_path, "ground-truth trajectory file")->required();
    cmd_eval->add_option("--est", eval.est_path, "estimated trajectory file")->required();
    cmd_eval->add_option("--format", eval_format, "file format: tum|csv");
    cmd_eval->add_option("--assoc", eval_assoc, "association mode: index|timestamp");
    cmd_eval->add_option("--assoc-tol", eval.assoc_tolerance, "timestamp tolerance");
    cmd_eval->add_option("--metrics", eval_metrics,
                         "comma list of tas,ras,pas,ate,dte,dre,maa,stats1,stats2 (default all)");
    auto* eval_seed = cmd_eval->add_option("--seed", eval.seed, "registration seed (default 0)");
    cmd_eval->add_option("--alpha", eval.alpha, "PAS weight on TAS (default 0.5)");
    cmd_eval->add_flag("--json", eval.json, "structured JSON output");
    cmd_eval->add_option("--hist-csv", eval.hist_csv_prefix,
                         "write cumulative histograms to <prefix>_tas.csv/_ras.csv");

    trajkit::SimulateOptions sim;
    auto* cmd_sim = app.add_subcommand("simulate", "run a Monte Carlo grid");
    cmd_sim->add_option("--grid", sim.grid, "fig2|fig3|fig4|fig5|fig6|fig7a|fig7b|fig7c|custom")
        ->required();
    cmd_sim->add_option("--runs", sim.runs, "runs per cell (default 50)");
    auto* sim_seed = cmd_sim->add_option("--seed", sim.seed, "master seed (default 0)");
    cmd_sim->add_option("--out", sim.out_dir, "output directory")->required();
    cmd_sim->add_option("--config", sim.config_path, "JSON grid description for --grid custom");
    cmd_sim->add_option("--threads", sim.threads, "worker threads (default: hardware)");

    trajkit::ReportOptions rep;
    auto* cmd_rep = app.add_subcommand("report", "render SVG charts from simulate output");
    cmd_rep->add_option("--in", rep.in_dir, "directory with *_summary.csv files")->required();
    cmd_rep->add_flag("--svg", rep.svg, "emit SVG charts (default on)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : trajkit::kExitInputError;
    }

    try {
        if (cmd_eval->parsed()) {
            eval.format = trajkit::format_from_name(eval_format);
            if (eval_assoc == "index") {
                eval.assoc = trajkit::AssocMode::index;
            } else if (eval_assoc == "timestamp") {
                eval.assoc = trajkit::AssocMode::timestamp;
            } else {
                throw trajkit::InputError("unknown association mode: " + eval_assoc);
            }
            eval.metrics = split_csv_list(eval_metrics);
            if (eval_seed->count() == 0) eval.seed = default_seed();
            return trajkit::run_evaluate(eval, std::cout, std::cerr);
        }
        if (cmd_sim->parsed()) {
            if (sim_seed->count() == 0) sim.seed = default_seed();
            return trajkit::run_simulate(sim, std::cout, std::cerr);
        }
        if (cmd_rep->parsed()) {
            return trajkit::run_report(rep, std::cout, std::cerr);
        }
    } catch (const trajkit::DegenerateError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return trajkit::kExitDegenerateData;
    } catch (const trajkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return trajkit::kExitInputError;
    }
    return trajkit::kExitInputError;
}
