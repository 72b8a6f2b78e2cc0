#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gowers/config.hpp"
#include "gowers/domain.hpp"

namespace gowers {

struct CriterionInfo {
  int id;
  std::string group;  // engine | decoder | coset | euclid | nil
  std::string title;
  double budget;      // seconds
};

struct CriterionResult {
  CriterionInfo info;
  bool pass = false;
  std::string detail;
  double elapsed = 0.0;
};

struct AcceptanceContext {
  std::uint64_t seed = 1;
  Tolerances tol = default_tolerances();
  // Where timing CSVs are archived; empty skips writing.
  std::string csv_dir;
  // U^2 to the fourth power as computed by the fast path; a test fixture can
  // swap in a broken version to check that the suite notices.
  std::function<double(const Signal&)> u2_power;
};

const std::vector<CriterionInfo>& acceptance_criteria();

// filter: empty or "all" runs everything; otherwise a group name or a
// comma-separated list of ids.
std::vector<CriterionResult> run_acceptance(const AcceptanceContext& ctx, const std::string& filter = "",
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

// Oracle for the mutation fixture: |F|^4 replaced by (Re^2 - Im^2)^2.
double broken_u2_power(const Signal& f);

}  // namespace gowers
