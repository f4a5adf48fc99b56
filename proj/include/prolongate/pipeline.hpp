#pragma once

#include "prolongate/oracle.hpp"
#include "prolongate/prolongation.hpp"

#include "json.hpp"

namespace prolong {

using Json = nlohmann::ordered_json;

inline constexpr const char* kEngineVersion = "0.1.0";

struct RunOptions {
    std::uint64_t seed = 1;
    int points = 100;
    double tol = 1e-9;
    std::string golden;           // overrides the problem's golden reference for the command
    std::string route = "reduced";  // collect-relations: reduced | extracted
    std::string target;           // verify-realization: sl2 | loop
    bool freeze = false;          // extract, collect-relations: rewrite the golden file
};

struct Report {
    std::string command;
    std::string problem;
    std::uint64_t seed = 0;
    int points = 0;
    double tol = 0;
    std::vector<Json> records;  // one per check
    bool pass = true;
    bool hard_failure = false;  // stops `all`
    std::string stopped_at;     // `all`: stage that failed
    double timing_ms = 0;

    // Header, records, summary; timing only when requested.
    std::string jsonl(bool with_timing = true) const;
    std::string summary() const;
    int exit_code() const { return pass ? 0 : 1; }
};

// Usage and parse errors propagate as ParseError / std::invalid_argument.
Report run(const std::string& command, const std::string& problem, const RunOptions& opt);

const std::vector<std::string>& commands();

}  // namespace prolong
