#include "acceptance/criteria.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  bvlab::cli::set_selfcheck([](std::string& csv, std::string& js) {
    const auto results = acceptance::run_criteria(acceptance::in_process_invoker());
    csv = acceptance::results_csv(results);
    js = acceptance::results_json(results);
    for (const auto& r : results) {
      if (!r.pass) return 1;
    }
    return 0;
  });
  return bvlab::cli::main(argc, argv);
}
