// Runs the schemes of a scenario file and writes traces plus a summary.
#include "mbadmm/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_summary(const mbadmm::RunSummary& summary) {
    std::printf("instance: %s\n", summary.instance.c_str());
    if (summary.oracle_objective)
        std::printf("oracle objective: %s\n", mbadmm::format_double(*summary.oracle_objective).c_str());
    else if (!summary.oracle_error.empty())
        std::printf("oracle failed: %s\n", summary.oracle_error.c_str());
    std::printf("%-22s %-10s %10s %24s %12s %12s\n", "scheme", "status", "iters", "objective", "residual", "rel gap");
    for (const auto& s : summary.schemes) {
        const std::string status = s.status ? std::string(mbadmm::to_string(*s.status)) : "error";
        char gap[32] = "-";
        if (s.relative_gap) std::snprintf(gap, sizeof gap, "%.3e", *s.relative_gap);
        std::printf("%-22s %-10s %10ld %24s %12.3e %12s%s\n", s.label.c_str(), status.c_str(), s.iterations,
                    s.final_objective.infinite ? "inf" : mbadmm::format_double(s.final_objective.value).c_str(),
                    s.final_residual, gap, s.ok() ? "" : "  FAIL");
        if (!s.error.empty()) std::printf("    %s\n", s.error.c_str());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-block ADMM scenario runner"};
    std::string scenario_path, out_dir, allow;
    int workers = 0;
    app.add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    app.add_option("--out", out_dir, "Output directory (overrides the scenario's \"output\")");
    app.add_option("--workers", workers, "Worker threads for block updates")->check(CLI::PositiveNumber);
    app.add_option("--allow-divergence", allow, "Comma separated schemes whose divergence is expected");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : mbadmm::exit_code::config_error;
    }

    mbadmm::Scenario scenario;
    try {
        scenario = mbadmm::parse_scenario(scenario_path);
        if (!out_dir.empty()) scenario.output_dir = out_dir;
        if (scenario.output_dir.empty())
            throw mbadmm::FormatError("no output directory: pass --out or set \"output\" in the scenario");
        if (workers > 0) scenario.workers = workers;
        for (const auto& name : split_commas(allow)) {
            auto s = mbadmm::parse_scheme(name);
            if (!s) throw mbadmm::FormatError("--allow-divergence: unknown scheme '" + name + "'");
            scenario.allow_divergence.insert(*s);
        }
    } catch (const mbadmm::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mbadmm::exit_code::io_error;
    } catch (const mbadmm::Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return mbadmm::exit_code::config_error;
    }

    try {
        const mbadmm::RunSummary summary = mbadmm::run_scenario(scenario);
        print_summary(summary);
        return summary.exit_code();
    } catch (const mbadmm::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mbadmm::exit_code::io_error;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mbadmm::exit_code::io_error;
    } catch (const mbadmm::Error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return mbadmm::exit_code::config_error;
    }
}
