#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bvlab::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Runs the command line in-process. Output files go to the resolved
/// output_dir; the summary goes to `out`, error JSON to `err`.
int run(const std::vector<std::string>& args, std::string& out, std::string& err);

/// argv front end writing to stdout / stderr.
int main(int argc, char** argv);

/// Hook used by `selfcheck`; returns the exit code.
using SelfcheckFn = std::function<int(std::string& report_csv, std::string& report_json)>;
void set_selfcheck(SelfcheckFn fn);

}  // namespace bvlab::cli
