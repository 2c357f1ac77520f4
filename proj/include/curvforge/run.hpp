#pragma once

#include <string>

#include <json.hpp>

#include "curvforge/config.hpp"
#include "curvforge/suites.hpp"

namespace curvforge {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode { kExitPass = 0, kExitCheckFailed = 2, kExitConfig = 3, kExitSolver = 4 };

// `body` is a pure function of the config (byte-identical across runs);
// wall-clock times live in `timings` only.
struct RunReport {
  nlohmann::json body;
  nlohmann::json timings;
  int exit_code = kExitPass;
};

// Executes cfg.command ("verify", "synthesize" or "surface2d"). Field dumps are
// written to cfg.out when it is non-empty. Throws ConfigError on invalid input.
RunReport run(const RunConfig& cfg);

std::string body_text(const RunReport& r);
// Writes <dir>/report.json as {"body": ..., "timings": ...}.
void write_report(const RunReport& r, const std::string& dir);

nlohmann::json to_json(const CheckRecord& c);

}  // namespace curvforge
