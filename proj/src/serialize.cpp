#include "bvlab/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fmt/format.h>

namespace bvlab {

namespace {

void put_radius(json& out, const char* key, const char* log_key, Radius r) {
  if (r.is_infinite()) {
    out[key] = nullptr;
  } else {
    out[key] = r.value();
    if (!r.is_zero()) out[log_key] = r.log();
  }
}

Radius get_radius(const json& j, const char* key, const char* log_key, Radius missing) {
  if (!j.contains(key)) return missing;
  if (j.at(key).is_null()) return Radius::infinity();
  const double v = j.at(key).get<double>();
  if (j.contains(log_key)) return Radius::from_parts(j.at(log_key).get<double>(), v);
  return Radius::from_value(v);
}

template <class F>
auto guarded(const char* who, F f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DomainError(std::string(who) + ": " + e.what());
  }
}

}  // namespace

json to_json(const PiecewiseField& f) {
  json terms = json::array();
  for (const auto& t : f.terms()) {
    json e;
    e["re"] = t.coeff.real();
    e["im"] = t.coeff.imag();
    e["p"] = t.p;
    e["q"] = t.q;
    const long double g = t.gamma;
    if (g == std::trunc(g) && std::abs(g) < 9.0e18L) {
      e["gamma"] = static_cast<std::int64_t>(g);
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.21Lg", g);
      e["gamma"] = buf;
    }
    put_radius(e, "r_in", "log_r_in", t.r_in);
    put_radius(e, "r_out", "log_r_out", t.r_out);
    terms.push_back(std::move(e));
  }
  return json{{"terms", terms}};
}

PiecewiseField field_from_json(const json& j) {
  return guarded("field", [&] {
    std::vector<MonomialTerm> terms;
    for (const auto& e : j.at("terms")) {
      MonomialTerm t;
      t.coeff = {e.value("re", 0.0), e.value("im", 0.0)};
      t.p = e.value("p", std::int64_t{0});
      t.q = e.value("q", std::int64_t{0});
      const auto& g = e.at("gamma");
      if (g.is_string()) {
        t.gamma = std::strtold(g.get<std::string>().c_str(), nullptr);
      } else {
        t.gamma = g.is_number_integer() ? static_cast<long double>(g.get<std::int64_t>())
                                        : static_cast<long double>(g.get<double>());
      }
      t.r_in = get_radius(e, "r_in", "log_r_in", Radius::zero());
      t.r_out = get_radius(e, "r_out", "log_r_out", Radius::infinity());
      terms.push_back(t);
    }
    return PiecewiseField(std::move(terms));
  });
}

json to_json(const ExteriorLaurent& g) {
  json coeffs = json::array();
  for (const auto& [k, b] : g.coeffs()) coeffs.push_back(json::array({k, b.real(), b.imag()}));
  json out{{"coeffs", coeffs}, {"max_freq", g.max_freq()}};
  if (g.self_similarity) {
    out["self_similarity"] = {{"base", g.self_similarity->base}, {"first", g.self_similarity->first}};
  }
  return out;
}

ExteriorLaurent laurent_from_json(const json& j) {
  return guarded("laurent", [&] {
    ExteriorLaurent g(j.value("max_freq", kFreqMax));
    for (const auto& c : j.at("coeffs")) {
      if (!g.add(c.at(0).get<Freq>(), {c.at(1).get<double>(), c.at(2).get<double>()})) {
        throw DomainError("laurent: coefficient above max_freq");
      }
    }
    if (j.contains("self_similarity")) {
      const auto& s = j.at("self_similarity");
      g.self_similarity = SelfSimilarity{s.at("base").get<Freq>(), s.at("first").get<Freq>()};
    }
    return g;
  });
}

json to_json(const VarianceEstimate& e) {
  json diag = json::array();
  for (const auto& [i, v] : e.diagnostics) diag.push_back(json::array({i, v}));
  return json{{"value", e.value},        {"method", to_string(e.method)},
              {"converged", e.converged}, {"tolerance", e.tolerance},
              {"per_block", e.per_block}, {"diagnostics", diag}};
}

json to_json(const ShellParams& p) {
  json out{{"d", p.d}, {"rho0", p.rho0}};
  out["n0"] = p.first_frequency();
  out["shells"] = p.J;
  out["max_freq"] = p.max_freq;
  return out;
}

json to_json(const Order2Report& r) {
  json out{{"first_order", r.first_order},
           {"second_order", r.second_order},
           {"total", r.total},
           {"params", to_json(r.params)},
           {"truncation", {{"shells_used", r.shells_used}, {"max_freq", r.max_freq},
                           {"dropped_mass", r.dropped_mass}, {"coefficient_floor", kOrder2Floor}}}};
  out["stability"] = r.stability ? json(*r.stability) : json(nullptr);
  out["refined_total"] = r.refined_total ? json(*r.refined_total) : json(nullptr);
  out["first_estimate"] = to_json(r.first_estimate);
  out["second_estimate"] = to_json(r.second_estimate);
  return out;
}

json to_json(const DimensionRow& r) {
  return json{{"d", r.d},
              {"lambda_lemma", r.lambda_lemma_coeff},
              {"improved", r.improved_coeff},
              {"c_d", r.c_d},
              {"optimal_rho0", r.optimal_rho0}};
}

ShellParams shell_params_from_json(const json& j) {
  return guarded("shell params", [&] {
    if (!j.is_object()) throw DomainError("shell params: expected an object");
    for (const auto& [key, _] : j.items()) {
      if (key != "d" && key != "rho0" && key != "n0" && key != "shells" && key != "max_freq") {
        throw DomainError("shell params: unknown key '" + key + "'");
      }
    }
    ShellParams p;
    p.d = j.value("d", 20);
    const json rho = j.value("rho0", json("optimal"));
    if (rho.is_string()) {
      if (rho.get<std::string>() != "optimal") throw DomainError("shell params: rho0 must be a number or \"optimal\"");
      p.rho0 = optimal_rho0(p.d);
    } else {
      p.rho0 = rho.get<double>();
    }
    if (j.contains("n0") && !j.at("n0").is_null()) p.n0 = j.at("n0").get<std::int64_t>();
    p.J = j.value("shells", 24);
    if (j.contains("max_freq")) {
      const auto& m = j.at("max_freq");
      if (m.is_number_integer()) {
        p.max_freq = m.get<Freq>();
      } else {
        const double v = m.get<double>();
        if (!(v >= 1.0 && v < 9.2e18) || v != std::trunc(v)) {
          throw DomainError("shell params: max_freq must be an integer in [1, 9.2e18)");
        }
        p.max_freq = static_cast<Freq>(v);
      }
    }
    p.validate();
    return p;
  });
}

CirclePotential potential_from_json(const json& j) {
  return guarded("potential", [&] {
    CirclePotential phi;
    for (const auto& c : j.at("coeffs")) {
      if (!c.is_array() || c.size() != 3) throw DomainError("potential: entries are [m, re, im]");
      phi.coeffs[c.at(0).get<Freq>()] += cplx{c.at(1).get<double>(), c.at(2).get<double>()};
    }
    return phi;
  });
}

std::string fmt_real(double x) { return fmt::format("{:.17g}", x); }

namespace {

void dump_into(std::string& out, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? fmt_real(x) : "null";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += '\n' + pad;
        dump_into(out, e, indent, depth + 1);
      }
      if (!flat) out += '\n' + close_pad;
      out += ']';
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += '\n' + pad + json(key).dump() + ": ";
        dump_into(out, value, indent, depth + 1);
      }
      out += '\n' + close_pad + '}';
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  out += '\n';
  return out;
}

void CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw DomainError("csv: row width mismatch");
  rows_.push_back(cells);
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

}  // namespace bvlab
