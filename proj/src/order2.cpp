#include "bvlab/order2.hpp"

#include <algorithm>

#include "bvlab/bounds.hpp"
#include "bvlab/kernels.hpp"

namespace bvlab {

Order2Field order2_field(const PiecewiseField& mu, Freq max_freq) {
  Order2Field out;
  if (mu.empty()) {
    out.w = ExteriorLaurent(max_freq);
    return out;
  }
  const auto s_full = beurling(mu);
  double dropped_a = 0.0;
  double dropped_b = 0.0;
  double dropped_sq = 0.0;
  const auto a = beurling_exterior(multiply(mu, s_full), max_freq, &dropped_a);
  const auto s = beurling_exterior(mu, max_freq, &dropped_b);
  const auto sq = laurent_product(s, s, max_freq, kOrder2Floor, &dropped_sq);
  out.w = sum(a, scaled(sq, -0.5));
  out.dropped_mass = dropped_a + 0.25 * dropped_sq;
  return out;
}

int order2_shell_count(const ShellParams& params) {
  ShellParams head = params;
  head.J = std::min(params.J, 1);
  head.validate();
  int j = 0;
  Freq n = params.first_frequency();
  for (; j < params.J; ++j) {
    Freq n2;
    if (__builtin_mul_overflow(n, Freq{2}, &n2) || n2 > params.max_freq) break;
    if (__builtin_mul_overflow(n, Freq{params.d}, &n)) {
      ++j;
      break;
    }
  }
  return j;
}

namespace {

Order2Report evaluate(const ShellParams& params) {
  Order2Report rep;
  rep.params = params;
  rep.max_freq = params.max_freq;
  rep.shells_used = order2_shell_count(params);
  if (rep.shells_used < 1) {
    throw UnresolvedScaleError("order2: max_freq " + std::to_string(params.max_freq) +
                               " admits no shell");
  }
  ShellParams used = params;
  used.J = rep.shells_used;
  const auto mu = build_shell(used);
  const SelfSimilarity blocks{used.d, used.first_frequency()};

  auto s = beurling_exterior(mu, used.max_freq);
  s.self_similarity = blocks;
  rep.first_estimate = variance_block_mass(s, used.d, rep.shells_used);

  auto field = order2_field(mu, used.max_freq);
  field.w.self_similarity = blocks;
  rep.dropped_mass = field.dropped_mass;
  rep.second_estimate = variance_block_mass(field.w, used.d, rep.shells_used);

  rep.first_order = rep.first_estimate.value;
  rep.second_order = rep.second_estimate.value;
  rep.total = rep.first_order + rep.second_order;
  return rep;
}

}  // namespace

Order2Report order2_bound(const ShellParams& params, bool refine) {
  auto rep = evaluate(params);
  if (refine) {
    ShellParams finer = params;
    finer.J = params.J * 2;
    Freq doubled;
    finer.max_freq = __builtin_mul_overflow(params.max_freq, Freq{2}, &doubled) ? kFreqMax : doubled;
    const auto fine = evaluate(finer);
    rep.refined_total = fine.total;
    rep.stability = std::abs(fine.total - rep.total) / std::abs(fine.total);
  }
  return rep;
}

std::vector<Order2Report> parameter_search(const SearchGrid& grid, bool parallel) {
  std::vector<ShellParams> points;
  for (int d : grid.d) {
    for (const auto& rho : grid.rho0) {
      for (const auto& n0 : grid.n0) {
        ShellParams p;
        p.d = d;
        p.rho0 = rho ? *rho : (d > 1 ? optimal_rho0(d) : 0.0);
        p.n0 = n0;
        p.J = grid.J;
        p.max_freq = grid.max_freq;
        points.push_back(p);
      }
    }
  }
  auto run = [&](std::size_t i) -> std::optional<Order2Report> {
    try {
      return evaluate(points[i]);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  const auto results = parallel ? parallel_map(points.size(), run) : serial_map(points.size(), run);
  std::vector<Order2Report> board;
  for (const auto& r : results) {
    if (r) board.push_back(*r);
  }
  std::stable_sort(board.begin(), board.end(),
                   [](const Order2Report& a, const Order2Report& b) { return a.total > b.total; });
  return board;
}

}  // namespace bvlab
