#include "prolongate/pipeline.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    using namespace prolong;
    CLI::App app{"Wahlquist-Estabrook prolongation checks for spin-model problem files"};
    app.set_version_flag("--version", std::string(kEngineVersion));

    std::string command, target, problem, report;
    RunOptions opt;
    bool jsonl = false, no_timing = false;
    std::string list;
    for (auto& c : commands()) list += (list.empty() ? "" : ", ") + c;
    app.add_option("command", command, "one of: " + list)->required();
    app.add_option("target", target, "verify-realization target: sl2 | loop");
    app.add_option("-p,--problem", problem, "problem file or bundled name (ishimori-compact, ...)")->required();
    app.add_option("--seed", opt.seed, "oracle seed")->capture_default_str();
    app.add_option("--points", opt.points, "oracle sample points")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--tol", opt.tol, "oracle tolerance on the scaled residual")->capture_default_str();
    app.add_option("--golden", opt.golden, "golden/reference file overriding the problem's [golden] entry");
    app.add_option("--route", opt.route, "collect-relations residual: reduced | extracted")->capture_default_str();
    app.add_flag("--freeze", opt.freeze, "rewrite the golden file from this run (extract, collect-relations)");
    app.add_option("--report", report, "write the JSONL report to this file");
    app.add_flag("--jsonl", jsonl, "print the JSONL report instead of the summary");
    app.add_flag("--no-timing", no_timing, "omit timing fields from the JSONL report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        std::string full = target.empty() ? command : command + " " + target;
        Report r = run(full, problem, opt);
        std::string lines = r.jsonl(!no_timing);
        if (!report.empty()) {
            std::ofstream out(report);
            if (!out) throw ParseError("cannot write " + report);
            out << lines;
        }
        std::cout << (jsonl ? lines : r.summary());
        return r.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "prolongate: " << e.what() << "\n";
        return 2;
    }
}
