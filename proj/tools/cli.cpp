#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "bvlab/bounds.hpp"
#include "bvlab/constructions.hpp"
#include "bvlab/dynamics.hpp"
#include "bvlab/order2.hpp"
#include "bvlab/serialize.hpp"
#include "bvlab/variance.hpp"

namespace bvlab::cli {

namespace {

SelfcheckFn g_selfcheck;

struct Param {
  std::string key;
  json def;
  std::string help;
  bool flag = false;
  bool positional = false;
  bool text = false;
};

struct Output {
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary;
  int exit_code = 0;
};

using Runner = std::function<Output(const json&)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
  Runner run;
};

constexpr Freq kDefaultMaxFreq = 1'000'000'000'000'000'000;

std::vector<Param> common_params(const char* format) {
  return {{"output_dir", "bvlab_out", "Directory for output files (BVLAB_OUT overrides the config value)", false, false, true},
          {"format", format, "csv or json"},
          {"seed", 7, "Random seed"},
          {"precision", 4, "Display digits for rounded tables"}};
}

std::vector<Param> shell_params() {
  return {{"d", 20, "Degree d >= 2"},
          {"rho0", "optimal", "Inner radius parameter, or 'optimal'"},
          {"n0", nullptr, "First-shell frequency (default d - 1, or 2 for d = 2)"},
          {"shells", 64, "Shell count J (shells beyond max_freq are not built)"},
          {"max_freq", kDefaultMaxFreq, "Laurent cutoff"}};
}

std::string flag_name(const std::string& key) {
  std::string out = "--" + key;
  for (auto& c : out) {
    if (c == '_') c = '-';
  }
  return out;
}

json parse_value(const std::string& text) {
  if (text == "default") return nullptr;
  try {
    auto v = json::parse(text);
    if (v.is_primitive() && !v.is_string()) return v;
  } catch (const json::exception&) {
  }
  return text;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError("invalid JSON in '" + path + "': " + e.what());
  }
}

// typed access to the resolved config

double get_double(const json& cfg, const char* key) {
  const auto& v = cfg.at(key);
  if (!v.is_number()) throw DomainError(std::string(key) + ": expected a number");
  return v.get<double>();
}

int get_int(const json& cfg, const char* key) {
  const auto& v = cfg.at(key);
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float() && v.get<double>() == std::trunc(v.get<double>()) && std::abs(v.get<double>()) < 2e9) {
    return static_cast<int>(v.get<double>());
  }
  throw DomainError(std::string(key) + ": expected an integer");
}

std::string get_string(const json& cfg, const char* key) {
  const auto& v = cfg.at(key);
  if (!v.is_string()) throw DomainError(std::string(key) + ": expected a string");
  return v.get<std::string>();
}

bool get_bool(const json& cfg, const char* key) {
  const auto& v = cfg.at(key);
  if (!v.is_boolean()) throw DomainError(std::string(key) + ": expected true or false");
  return v.get<bool>();
}

ShellParams get_shell(const json& cfg) {
  json sub;
  for (const char* k : {"d", "rho0", "n0", "shells", "max_freq"}) sub[k] = cfg.at(k);
  return shell_params_from_json(sub);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError("not a number: '" + s + "'");
  return v;
}

/// "x", "x+yi", "x-yi" or "yi"
cplx parse_complex(const std::string& s) {
  if (s.empty()) throw DomainError("empty complex number");
  if (s.back() != 'i') return to_double(s);
  const std::string body = s.substr(0, s.size() - 1);
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      const std::string im = body.substr(i);
      return {to_double(body.substr(0, i)), im == "+" ? 1.0 : im == "-" ? -1.0 : to_double(im)};
    }
  }
  return {0.0, body.empty() ? 1.0 : to_double(body)};
}

std::string fixed(double x, int digits) { return fmt::format("{:.{}f}", x, digits); }

Output emit(const json& cfg, const std::string& stem, const json& result, const std::string& csv = {}) {
  Output out;
  if (get_string(cfg, "format") == "csv" && !csv.empty()) {
    out.files.emplace_back(stem + ".csv", csv);
    out.summary = csv;
  } else {
    out.files.emplace_back(stem + ".json", dump_json(result));
    out.summary = dump_json(result);
  }
  return out;
}

// commands

Output cmd_table2(const json& cfg) {
  const int digits = get_int(cfg, "precision");
  CsvTable csv({"d", "lambda_lemma", "improved", "c_d", "optimal_rho0", "lambda_lemma_raw", "improved_raw",
                "c_d_raw", "optimal_rho0_raw"});
  json rows = json::array();
  for (const auto& r : table2()) {
    const std::vector<double> raw{r.lambda_lemma_coeff, r.improved_coeff, r.c_d, r.optimal_rho0};
    std::vector<std::string> cells{fmt::format("{}", static_cast<int>(r.d))};
    for (double x : raw) cells.push_back(fixed(display_truncate(x, digits), digits));
    for (double x : raw) cells.push_back(fmt_real(x));
    csv.row(cells);
    json display{{"lambda_lemma", display_truncate(r.lambda_lemma_coeff, digits)},
                 {"improved", display_truncate(r.improved_coeff, digits)},
                 {"c_d", display_truncate(r.c_d, digits)},
                 {"optimal_rho0", display_truncate(r.optimal_rho0, digits)}};
    rows.push_back({{"d", static_cast<int>(r.d)}, {"display", display}, {"raw", to_json(r)}});
  }
  json result{{"display_rule", fmt::format("truncated toward zero at {} decimals", digits)}, {"rows", rows}};
  return emit(cfg, "table2", result, csv.str());
}

struct VarianceInput {
  ExteriorLaurent g;
  ExteriorLaurent v;
  std::vector<double> moduli;
  int d = 2;
  std::optional<double> closed_form;
};

VarianceInput variance_input(const json& cfg, const std::string& target) {
  VarianceInput in;
  in.d = get_int(cfg, "d");
  if (target == "shell") {
    const auto p = get_shell(cfg);
    in.g = shell_beurling(p);
    in.v = shell_cauchy(p);
    for (const auto& [k, b] : in.g.coeffs()) in.moduli.push_back(std::abs(b));
    in.closed_form = sigma2_shell(p.d, p.rho0);
  } else if (target == "lacunary") {
    if (in.d < 2) throw DomainError("lacunary: d must be >= 2");
    const int terms = get_int(cfg, "terms");
    if (terms < 1) throw DomainError("lacunary: terms must be >= 1");
    in.g = ExteriorLaurent{};
    Freq k = in.d;
    for (int n = 0; n < terms; ++n) {
      if (n) k = checked_mul(k, in.d);
      in.g.add(k, 1.0);
      in.v.add(k - 1, -1.0 / static_cast<double>(k - 1));
      in.moduli.push_back(1.0);
    }
    in.g.self_similarity = SelfSimilarity{in.d, in.d};
    in.closed_form = 1.0 / std::log(static_cast<double>(in.d));
  } else if (target == "empty") {
    in.closed_form = 0.0;
  } else {
    throw DomainError("unknown target '" + target + "' (shell, lacunary or empty)");
  }
  return in;
}

int auto_blocks(const ExteriorLaurent& g, double R0, int d) {
  const Freq top = g.max_freq() == kFreqMax ? std::max<Freq>(g.max_stored(), 1) : g.max_freq();
  const double finest = 10.0 / static_cast<double>(top);
  int b = 1;
  while (b < 64 && std::expm1(std::log(R0) / std::pow(static_cast<double>(d), b + 1)) >= finest) ++b;
  return b;
}

Output cmd_variance(const json& cfg) {
  const std::string target = get_string(cfg, "target");
  const std::string method = get_string(cfg, "method");
  const auto in = variance_input(cfg, target);
  const double R0 = get_double(cfg, "r0");
  int blocks = get_int(cfg, "blocks");
  if (blocks <= 0) blocks = auto_blocks(in.g, R0, in.d);

  std::vector<std::pair<std::string, VarianceEstimate>> ests;
  auto want = [&](const char* m) { return method == "all" || method == m; };
  if (!want("exact") && !want("block") && !want("mass") && !want("cesaro4")) {
    throw DomainError("unknown method '" + method + "' (exact, block, mass, cesaro4 or all)");
  }
  if (want("exact")) ests.emplace_back("exact", variance_lacunary(in.moduli, in.d));
  if (want("block")) ests.emplace_back("block", variance_block(in.g, in.d, R0, blocks));
  if (want("mass")) ests.emplace_back("mass", variance_block_mass(in.g, in.d));
  if (want("cesaro4")) ests.emplace_back("cesaro4", cesaro_sigma4(in.v, R0, in.d, blocks));

  json methods = json::object();
  CsvTable diag({"method", "index", "running_estimate", "per_block"});
  for (const auto& [name, e] : ests) {
    methods[name] = to_json(e);
    for (std::size_t i = 0; i < e.diagnostics.size(); ++i) {
      diag.row({name, std::to_string(e.diagnostics[i].first), fmt_real(e.diagnostics[i].second),
                fmt_real(e.per_block[i])});
    }
  }
  json result{{"target", target}, {"d", in.d}, {"r0", R0}, {"blocks", blocks}};
  if (in.closed_form) result["closed_form"] = *in.closed_form;
  result["estimates"] = methods;

  Output out;
  out.files.emplace_back("variance.json", dump_json(result));
  out.files.emplace_back("variance_diagnostics.csv", diag.str());
  for (const auto& [name, e] : ests) {
    out.summary += fmt::format("{:<8} {} converged={}\n", name, fmt_real(e.value), e.converged);
  }
  return out;
}

Output cmd_optimize(const json& cfg) {
  const int lo = get_int(cfg, "lo");
  const int hi = get_int(cfg, "hi");
  const auto integer = best_integer_degree(lo, hi);
  const auto real = best_real_degree(lo, hi);
  CsvTable csv({"d", "sigma2_optimal", "optimal_rho0"});
  for (int d = lo; d <= hi; ++d) csv.row({std::to_string(d), fmt_real(sigma2_optimal(d)), fmt_real(optimal_rho0(d))});
  json result{{"integer", {{"d", static_cast<int>(integer.d)}, {"value", integer.value}, {"rho0", optimal_rho0(integer.d)}}},
              {"real", {{"d", real.d}, {"value", real.value}, {"rho0", optimal_rho0(real.d)}}}};
  Output out;
  out.files.emplace_back("optimize.json", dump_json(result));
  out.files.emplace_back("optimize_degrees.csv", csv.str());
  out.summary = dump_json(result);
  return out;
}

std::vector<std::optional<double>> parse_rho_grid(const std::string& s) {
  std::vector<std::optional<double>> out;
  for (const auto& t : split(s, ',')) out.push_back(t == "optimal" ? std::nullopt : std::optional<double>(to_double(t)));
  return out;
}

std::vector<std::optional<std::int64_t>> parse_n0_grid(const std::string& s) {
  std::vector<std::optional<std::int64_t>> out;
  for (const auto& t : split(s, ',')) {
    if (t == "default") {
      out.emplace_back();
    } else {
      const double v = to_double(t);
      if (v != std::trunc(v)) throw DomainError("grid_n0: '" + t + "' is not an integer");
      out.emplace_back(static_cast<std::int64_t>(v));
    }
  }
  return out;
}

Output cmd_order2(const json& cfg) {
  if (!get_bool(cfg, "search")) {
    const auto rep = order2_bound(get_shell(cfg), get_bool(cfg, "refine"));
    Output out;
    out.files.emplace_back("order2.json", dump_json(to_json(rep)));
    out.summary = fmt::format("first_order  {}\nsecond_order {}\ntotal        {}\n", fmt_real(rep.first_order),
                              fmt_real(rep.second_order), fmt_real(rep.total));
    if (rep.stability) out.summary += fmt::format("stability    {}\n", fmt_real(*rep.stability));
    return out;
  }
  SearchGrid grid;
  for (const auto& t : split(get_string(cfg, "grid_d"), ',')) {
    const double v = to_double(t);
    if (v != std::trunc(v)) throw DomainError("grid_d: '" + t + "' is not an integer");
    grid.d.push_back(static_cast<int>(v));
  }
  grid.rho0 = parse_rho_grid(get_string(cfg, "grid_rho0"));
  grid.n0 = parse_n0_grid(get_string(cfg, "grid_n0"));
  const auto p = get_shell(cfg);
  grid.J = p.J;
  grid.max_freq = p.max_freq;
  std::vector<Order2Report> board;
  for (auto& r : parameter_search(grid)) {
    const bool seen = std::any_of(board.begin(), board.end(), [&](const Order2Report& b) {
      return b.params.d == r.params.d && b.params.rho0 == r.params.rho0 &&
             b.params.first_frequency() == r.params.first_frequency();
    });
    if (!seen) board.push_back(std::move(r));
  }
  if (board.empty()) throw DomainError("order2 search: no valid grid point");
  CsvTable csv({"rank", "d", "rho0", "n0", "shells_used", "first_order", "second_order", "total"});
  for (std::size_t i = 0; i < board.size(); ++i) {
    const auto& r = board[i];
    csv.row({std::to_string(i + 1), std::to_string(r.params.d), fmt_real(r.params.rho0),
             std::to_string(r.params.first_frequency()), std::to_string(r.shells_used), fmt_real(r.first_order),
             fmt_real(r.second_order), fmt_real(r.total)});
  }
  json result{{"points", board.size()}, {"best", to_json(board.front())}};
  Output out;
  out.files.emplace_back("order2_leaderboard.csv", csv.str());
  out.files.emplace_back("order2_search.json", dump_json(result));
  out.summary = csv.str();
  return out;
}

Output cmd_dimension(const json& cfg) {
  const int d = get_int(cfg, "d");
  if (d < 2) throw DomainError("dimension: d must be >= 2");
  const double cd = distortion_constant(d);
  double t = 0.0;
  double k = 0.0;
  if (!cfg.at("t").is_null()) {
    t = get_double(cfg, "t");
    k = cfg.at("k").is_null() ? cd * t / 2.0 : get_double(cfg, "k");
  } else if (!cfg.at("k").is_null()) {
    k = get_double(cfg, "k");
    t = 2.0 * k / cd;
  } else {
    throw DomainError("dimension: give --t or --k");
  }
  json result{{"d", d},
              {"c_d", cd},
              {"t", t},
              {"k", k},
              {"dim_t", julia_dim_t(d, t)},
              {"dim_k", julia_dim_k(d, k)},
              {"smirnov_t", smirnov_bound_t(t)},
              {"smirnov_k", smirnov_bound_k(k)},
              {"improved_coeff", sigma2_optimal(d)},
              {"lambda_lemma_coeff", lambda_lemma_coeff(d)},
              {"truncation", "second order in t; the O(|t|^3) remainder is not included"}};
  return emit(cfg, "dimension", result);
}

Output cmd_means_curve(const json& cfg) {
  const auto in = variance_input(cfg, get_string(cfg, "target"));
  const double gmin = get_double(cfg, "gap_min");
  const double gmax = get_double(cfg, "gap_max");
  const int n = get_int(cfg, "points");
  if (!(gmin > 0.0 && gmax > gmin) || n < 2) throw DomainError("means-curve: need 0 < gap_min < gap_max, points >= 2");
  CsvTable csv({"R", "R_minus_1", "I", "ratio", "resolved"});
  for (int i = 0; i < n; ++i) {
    const double gap = std::exp(std::log(gmin) + (std::log(gmax) - std::log(gmin)) * i / (n - 1));
    const auto R = Radius::from_log(std::log1p(gap));
    const double I = integral_means(in.g, R);
    const bool resolved =
        in.g.max_freq() == kFreqMax || static_cast<double>(in.g.max_freq()) >= 10.0 / gap;
    csv.row({fmt_real(1.0 + gap), fmt_real(gap), fmt_real(I), fmt_real(I / -std::log(gap)), resolved ? "1" : "0"});
  }
  const double slope = growth_slope(in.g, 1.0 + gmin, 1.0 + gmax, n);
  json result{{"target", get_string(cfg, "target")}, {"points", n}, {"growth_slope", slope}};
  if (in.closed_form) result["closed_form"] = *in.closed_form;
  Output out;
  out.files.emplace_back("means_curve.csv", csv.str());
  out.files.emplace_back("means_curve.json", dump_json(result));
  out.summary = csv.str();
  return out;
}

PiecewiseField default_truncation_field() {
  auto r = [](double x) { return Radius::from_value(x); };
  return PiecewiseField({basic_coefficient(3, r(0.3), r(0.32)), basic_coefficient(5, r(0.36), r(0.4)),
                         basic_coefficient(7, r(0.4), r(0.45), {0.0, -1.0}), basic_coefficient(30, r(0.45), r(0.5), 0.2),
                         basic_coefficient(40, r(0.32), r(0.36), 0.5)});
}

Output cmd_truncate(const json& cfg) {
  const auto mu = cfg.at("field").is_null() ? default_truncation_field()
                                            : field_from_json(read_json_file(get_string(cfg, "field")));
  const auto res = truncate_to_polynomial(mu, get_double(cfg, "r1"), get_double(cfg, "eps"), get_bool(cfg, "rescale"));
  const auto b = cauchy_exterior(res.field);
  double beyond = 0.0;
  CsvTable csv({"k", "re", "im", "abs"});
  for (const auto& [k, c] : b.coeffs()) {
    if (k > res.N + 1) beyond = std::max(beyond, std::abs(c));
    csv.row({std::to_string(k), fmt_real(c.real()), fmt_real(c.imag()), fmt_real(std::abs(c))});
  }
  json result{{"N", res.N},
              {"correction_sup", res.correction_sup},
              {"rescaled", res.rescaled},
              {"max_coefficient_beyond_N_plus_1", beyond},
              {"field", to_json(res.field)}};
  Output out;
  out.files.emplace_back("truncate.json", dump_json(result));
  out.files.emplace_back("truncate_coefficients.csv", csv.str());
  out.summary = fmt::format("N {}\ncorrection_sup {}\nmax_coefficient_beyond_N_plus_1 {}\n", res.N,
                            fmt_real(res.correction_sup), fmt_real(beyond));
  return out;
}

Output cmd_dynamics(const json& cfg) {
  const std::string mode = get_string(cfg, "mode");
  const int d = get_int(cfg, "d");
  const int n = get_int(cfg, "n");
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  json result;
  if (mode == "coboundary") {
    const auto c = coboundary_check(d, n);
    result = {{"d", d}, {"n", n}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"residual", c.residual}, {"seed", seed}};
  } else if (mode == "var" || mode == "log-deriv") {
    BlaschkeMap B{d, {}};
    for (const auto& t : split(get_string(cfg, "blaschke"), ',')) B.zeros.push_back(parse_complex(t));
    B.validate();
    const auto samples = static_cast<std::int64_t>(get_double(cfg, "samples"));
    json zeros = json::array();
    for (const auto& a : B.zeros) zeros.push_back(json::array({a.real(), a.imag()}));
    if (mode == "var") {
      CirclePotential phi;
      if (cfg.at("phi").is_null()) {
        phi.coeffs[-(d - 1)] = 1.0;
      } else {
        phi = potential_from_json(read_json_file(get_string(cfg, "phi")));
      }
      const auto mc = birkhoff_variance_mc(phi, B, n, samples, seed);
      result = {{"d", d},          {"zeros", zeros},           {"n", n},
                {"estimate", mc.estimate}, {"stderr", mc.stderr_}, {"samples", mc.samples},
                {"seed", mc.seed}};
      if (B.is_power()) result["exact"] = birkhoff_variance_exact(phi.centered(), d, n).value;
    } else {
      const auto mc = log_deriv_orbit_mc(B, n, samples, seed);
      result = {{"d", d},
                {"zeros", zeros},
                {"mean", log_deriv_mean(B)},
                {"orbit_estimate", mc.estimate},
                {"orbit_stderr", mc.stderr_},
                {"samples", mc.samples},
                {"seed", mc.seed}};
    }
  } else if (mode == "mean-relation") {
    const auto m = mean_relation_check();
    json samples = json::array();
    for (const auto& s : m.samples) samples.push_back({{"j", s.j}, {"R", s.R}, {"rhs", s.rhs}});
    result = {{"lhs", m.lhs}, {"samples", samples}, {"extrapolated", m.extrapolated}, {"residual", m.residual}, {"seed", seed}};
  } else {
    throw DomainError("unknown dynamics mode '" + mode + "' (coboundary, var, mean-relation, log-deriv)");
  }
  Output out;
  out.files.emplace_back("dynamics.json", dump_json(result));
  out.summary = dump_json(result);
  return out;
}

Output cmd_selfcheck(const json&) {
  if (!g_selfcheck) throw DomainError("selfcheck is not available in this build");
  Output out;
  std::string csv, js;
  out.exit_code = g_selfcheck(csv, js);
  out.files.emplace_back("selfcheck.csv", csv);
  out.files.emplace_back("selfcheck.json", js);
  out.summary = csv;
  return out;
}

std::vector<Command> commands() {
  auto with = [](std::vector<Param> a, const std::vector<Param>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  std::vector<Param> variance_extra{{"target", "shell", "shell, lacunary or empty", false, true},
                                    {"terms", 40, "Terms of the lacunary series"}};
  return {
      {"table2", "Dimension-bound coefficients for d = 2, 3, 4, 20", common_params("csv"), cmd_table2},
      {"variance", "Asymptotic variance of a shell or lacunary series",
       with(with(with(common_params("json"), shell_params()), variance_extra),
            {{"method", "all", "exact, block, mass, cesaro4 or all"},
             {"r0", 1.1, "Outermost radius of the block grid"},
             {"blocks", 0, "Number of blocks (0 picks the deepest resolved)"}}),
       cmd_variance},
      {"optimize", "Best integer and real degree",
       with(common_params("json"), {{"lo", 2, "Smallest degree"}, {"hi", 64, "Largest degree"}}), cmd_optimize},
      {"order2", "Second-order lower bound, or a parameter search",
       with(with(common_params("json"),
                 {{"d", 16, "Degree d >= 2"},
                  {"rho0", "optimal", "Inner radius parameter, or 'optimal'"},
                  {"n0", nullptr, "First-shell frequency"},
                  {"shells", 12, "Shell count J"},
                  {"max_freq", kDefaultMaxFreq, "Laurent cutoff"}}),
            {{"refine", false, "Also evaluate with J and max_freq doubled", true},
             {"search", false, "Run a grid search instead", true},
             {"grid_d", "3,4,8,12,16,20", "Degrees for the search", false, false, true},
             {"grid_rho0", "optimal,0.02,0.05,0.1", "rho0 values ('optimal' allowed)", false, false, true},
             {"grid_n0", "default,2,4,8", "n0 values ('default' allowed)", false, false, true}}),
       cmd_order2},
      {"dimension", "Second-order dimension formulas",
       with(common_params("json"),
            {{"d", 20, "Degree"}, {"t", nullptr, "Parameter |t|"}, {"k", nullptr, "Dilatation k"}}),
       cmd_dimension},
      {"means-curve", "Integral means along a geometric grid in R - 1",
       with(with(with(common_params("csv"), shell_params()), variance_extra),
            {{"gap_min", 1e-8, "Smallest R - 1"}, {"gap_max", 0.1, "Largest R - 1"}, {"points", 50, "Grid size"}}),
       cmd_means_curve},
      {"truncate", "Truncate a coefficient to a polynomial Cauchy transform",
       with(common_params("json"),
            {{"field", nullptr, "Field JSON file (default: a five-block example on A(0.3, 0.5))", false, false, true},
             {"r1", 0.7, "Outer radius of the corrections"},
             {"eps", 0.01, "Sup-norm budget"},
             {"rescale", false, "Divide the result by 1 + eps", true}}),
       cmd_truncate},
      {"dynamics", "Circle dynamics checks",
       with(common_params("json"),
            {{"mode", "coboundary", "coboundary, var, mean-relation or log-deriv", false, true},
             {"d", 2, "Degree of B"},
             {"n", 20, "Birkhoff length"},
             {"blaschke", "", "Comma-separated zeros of B besides 0 (x, x+yi)", false, false, true},
             {"phi", nullptr, "Potential JSON file {\"coeffs\":[[m,re,im],...]}", false, false, true},
             {"samples", 100000, "Monte Carlo samples"}}),
       cmd_dynamics},
      {"selfcheck", "Run every acceptance check", common_params("csv"), cmd_selfcheck},
  };
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

json resolve(const Command& cmd, const std::map<std::string, std::string>& given,
             const std::map<std::string, bool>& given_flags, const std::string& config_path) {
  json cfg = json::object();
  for (const auto& p : cmd.params) cfg[p.key] = p.def;
  if (!config_path.empty()) {
    const json file = read_json_file(config_path);
    if (!file.is_object()) throw DomainError("config: expected a JSON object");
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value != cmd.name) throw DomainError("config: command '" + value.dump() + "' does not match '" + cmd.name + "'");
        continue;
      }
      if (!cfg.contains(key)) throw DomainError("config: unknown key '" + key + "' for " + cmd.name);
      cfg[key] = value;
    }
  }
  if (const char* env = std::getenv("BVLAB_OUT"); env && *env) cfg["output_dir"] = env;
  for (const auto& [key, text] : given) {
    const bool raw = std::any_of(cmd.params.begin(), cmd.params.end(),
                                 [&](const Param& p) { return p.key == key && p.text; });
    cfg[key] = raw ? json(text) : parse_value(text);
  }
  for (const auto& [key, on] : given_flags) cfg[key] = on;
  const std::string format = get_string(cfg, "format");
  if (format != "csv" && format != "json") throw DomainError("format must be csv or json");
  if (!cfg.at("seed").is_number_integer() || cfg.at("seed").get<std::int64_t>() < 0) throw DomainError("seed must be a non-negative integer");
  const int precision = get_int(cfg, "precision");
  if (precision < 0 || precision > 17) throw DomainError("precision must lie in 0..17");
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + path.string() + "'");
  f << content;
}

json error_json(const char* kind, const std::string& message) {
  return {{"error", kind}, {"message", message}};
}

}  // namespace

void set_selfcheck(SelfcheckFn fn) { g_selfcheck = std::move(fn); }

int run(const std::vector<std::string>& args, std::string& out, std::string& err) {
  CLI::App app{"Asymptotic variance laboratory", "bvlab"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; flags override its values");
  app.set_version_flag("--version", kVersion);

  const auto cmds = commands();
  std::vector<CLI::App*> subs;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON config; flags override its values");
    auto& vals = values[c.name];
    auto& fl = flags[c.name];
    for (const auto& p : c.params) {
      CLI::Option* opt = nullptr;
      if (p.flag) {
        opt = sub->add_flag(flag_name(p.key), fl[p.key], p.help);
      } else if (p.positional) {
        opt = sub->add_option(p.key, vals[p.key], p.help);
      } else {
        opt = sub->add_option(flag_name(p.key), vals[p.key], p.help);
      }
      options[c.name][p.key] = opt;
    }
    subs.push_back(sub);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out += app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out += std::string(kVersion) + "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    for (auto* sub : subs) {
      if (sub->parsed() && std::string(e.get_name()) == "CallForHelp") {
        out += sub->help();
        return 0;
      }
    }
    err += dump_json(error_json("usage", e.what()));
    return 2;
  }

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const auto& cmd = cmds[i];
    std::map<std::string, std::string> given;
    std::map<std::string, bool> given_flags;
    for (const auto& p : cmd.params) {
      if (options[cmd.name][p.key]->count() == 0) continue;
      if (p.flag) given_flags[p.key] = flags[cmd.name][p.key];
      else given[p.key] = values[cmd.name][p.key];
    }
    json cfg;
    try {
      cfg = resolve(cmd, given, given_flags, config_path);
    } catch (const Error& e) {
      err += dump_json(error_json(e.kind(), e.what()));
      return 2;
    }

    json manifest{{"tool", "bvlab"}, {"version", kVersion}, {"command", cmd.name}, {"config", cfg}};
    int code = 0;
    Output result;
    try {
      result = cmd.run(cfg);
      code = result.exit_code;
      manifest["status"] = code == 0 ? "ok" : "failed";
    } catch (const Error& e) {
      const bool capacity = dynamic_cast<const CapacityError*>(&e) || dynamic_cast<const UnresolvedScaleError*>(&e);
      code = capacity ? 3 : 2;
      err += dump_json(error_json(e.kind(), e.what()));
      manifest["status"] = "error";
      manifest["error"] = error_json(e.kind(), e.what());
    }
    manifest["exit_code"] = code;

    try {
      const std::filesystem::path dir = get_string(cfg, "output_dir");
      std::filesystem::create_directories(dir);
      json files = json::array();
      for (const auto& [name, content] : result.files) {
        write_file(dir / name, content);
        files.push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a64", fmt::format("{:016x}", fnv1a(content))}});
      }
      manifest["outputs"] = files;
      write_file(dir / "manifest.json", dump_json(manifest));
    } catch (const std::exception& e) {
      err += dump_json(error_json("io", e.what()));
      return 2;
    }
    out += result.summary;
    return code;
  }
  err += dump_json(error_json("usage", "no command given"));
  return 2;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string out, err;
  const int code = run(args, out, err);
  std::cout << out << std::flush;
  std::cerr << err << std::flush;
  return code;
}

}  // namespace bvlab::cli
