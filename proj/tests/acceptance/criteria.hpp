#pragma once

#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the CLI with `args` using `threads` OpenMP threads, writing into
/// `out_dir`. Returns the exit code.
using Invoker = std::function<int(const std::vector<std::string>& args, int threads, const std::string& out_dir)>;

/// Invoker that calls the CLI in-process.
Invoker in_process_invoker();

std::vector<CriterionResult> run_criteria(const Invoker& invoke);

std::string results_csv(const std::vector<CriterionResult>& rs);
std::string results_json(const std::vector<CriterionResult>& rs);

}  // namespace acceptance
