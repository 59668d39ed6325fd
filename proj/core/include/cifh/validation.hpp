#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cifh/gaussian.hpp"

namespace cifh::validation {

struct CriterionInfo {
  int id;
  std::string key;
  std::string title;
};

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Energy evaluator checked against the oracle by the wick-oracle criterion.
using EnergyFn = std::function<double(const Matrix&, const CifhInstance&)>;

struct SuiteOptions {
  /// Comma-separated keys or ids; empty runs everything.
  std::string filter;
  std::uint64_t seed = 20240611;
  /// Defaults to energy_total. Tests swap in a broken one as a negative control.
  EnergyFn energy;
};

const std::vector<CriterionInfo>& criteria();

bool selected(const CriterionInfo& c, const std::string& filter);

/// Runs the selected criteria in id order. `on_result` sees each result as
/// soon as it is known.
std::vector<CriterionResult> run_suite(const SuiteOptions& opt,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

/// One line: "PASS  3 traceless-guarantee  <detail> (12.3 s)".
std::string format_result(const CriterionResult& r);

}  // namespace cifh::validation
