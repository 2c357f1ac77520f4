#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvforge/lattice.hpp"
#include "curvforge/presets.hpp"

namespace curvforge {

// One verified identity. Order checks pass when the observed order between the
// two finest grids reaches `threshold` (or the finest error is at roundoff);
// `fit_order` is the least-squares slope over all grids. Absolute checks
// pass when the worst error is at most `threshold`; lower checks pass when the
// single recorded value is at least `threshold`.
struct CheckRecord {
  std::string name;
  std::string kind;  // "order", "absolute" or "lower"
  std::vector<int> sizes;
  std::vector<double> errors;
  double threshold = 0.0;
  double order = 0.0;
  double fit_order = 0.0;
  double scale = 0.0;
  bool pass = false;
};

CheckRecord order_check(std::string name, const std::vector<int>& sizes, const std::vector<double>& errors,
                        double threshold, double scale);
CheckRecord absolute_check(std::string name, int size, double error, double tolerance);
CheckRecord lower_check(std::string name, int size, double value, double bound);

struct SuiteOptions {
  std::vector<int> sizes{32, 48, 64};
  double amplitude = 0.2;
  std::uint64_t seed = 1;
  std::vector<PresetKind> presets{PresetKind::coordinate, PresetKind::contact3};
  double order_threshold = 3.5;
};

struct SuiteInfo {
  std::string name;
  std::string summary;
};

const std::vector<SuiteInfo>& suite_catalog();

// Runs a catalogued suite; throws std::invalid_argument for unknown names.
std::vector<CheckRecord> run_suite(const std::string& name, const SuiteOptions& opt);

std::vector<CheckRecord> switch_suite(const SuiteOptions& opt);
std::vector<CheckRecord> stretch_suite(const SuiteOptions& opt);
std::vector<CheckRecord> conform_suite(const SuiteOptions& opt);
std::vector<CheckRecord> change_suite(const SuiteOptions& opt);
std::vector<CheckRecord> chi_suite(const SuiteOptions& opt);
std::vector<CheckRecord> algebra_suite(const SuiteOptions& opt);
std::vector<CheckRecord> coefficient_suite(const SuiteOptions& opt);
std::vector<CheckRecord> consistency_suite(const SuiteOptions& opt);
std::vector<CheckRecord> operator_suite(const SuiteOptions& opt);
std::vector<CheckRecord> pullback_suite(const SuiteOptions& opt);

bool all_pass(const std::vector<CheckRecord>& checks);

}  // namespace curvforge
