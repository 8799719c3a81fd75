#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "bvlab/annular.hpp"
#include "bvlab/bounds.hpp"
#include "bvlab/constructions.hpp"
#include "bvlab/dynamics.hpp"
#include "bvlab/laurent.hpp"
#include "bvlab/order2.hpp"
#include "bvlab/variance.hpp"

namespace bvlab {

using json = nlohmann::ordered_json;

json to_json(const PiecewiseField& f);
PiecewiseField field_from_json(const json& j);

json to_json(const ExteriorLaurent& g);
ExteriorLaurent laurent_from_json(const json& j);

json to_json(const VarianceEstimate& e);
json to_json(const ShellParams& p);
json to_json(const Order2Report& r);
json to_json(const DimensionRow& r);

/// Reads {"d","rho0":"optimal"|number,"n0":null|int,"shells","max_freq"}.
/// Unknown keys are rejected.
ShellParams shell_params_from_json(const json& j);

CirclePotential potential_from_json(const json& j);

/// 17 significant digits.
std::string fmt_real(double x);

/// Indented JSON text with every float printed by fmt_real; arrays of
/// scalars stay on one line. Ends with a newline.
std::string dump_json(const json& j, int indent = 2);

/// Comma-separated table with a header row.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace bvlab
