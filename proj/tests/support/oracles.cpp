#include "oracles.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;

using boost::math::quadrature::gauss;

template <class F>
cplx integrate_c(F f, double a, double b) {
  const auto& x = gauss<double, 30>::abscissa();
  const auto& w = gauss<double, 30>::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  cplx acc{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      acc += w[i] * f(mid);
    } else {
      acc += w[i] * (f(mid + half * x[i]) + f(mid - half * x[i]));
    }
  }
  return acc * half;
}

// integral over phi in [0, 2pi) of mu(z + rho e^{i phi}) e^{-i k phi}
cplx angular(const Field& mu, const std::vector<double>& bps, cplx z, double rho, int k) {
  const double az = std::abs(z);
  const double tz = std::arg(z);
  std::vector<double> cuts{0.0, 2.0 * kPi};
  if (az > 0.0) {
    for (double b : bps) {
      const double c = (b * b - az * az - rho * rho) / (2.0 * rho * az);
      if (c > -1.0 && c < 1.0) {
        for (double s : {1.0, -1.0}) {
          double phi = std::fmod(tz + s * std::acos(c), 2.0 * kPi);
          if (phi < 0) phi += 2.0 * kPi;
          cuts.push_back(phi);
        }
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> fine;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / (kPi / 8))));
    for (int p = 0; p < pieces; ++p) fine.push_back(cuts[i] + len * p / pieces);
  }
  fine.push_back(2.0 * kPi);
  cplx acc{};
  for (std::size_t i = 0; i + 1 < fine.size(); ++i) {
    if (fine[i + 1] - fine[i] <= 0.0) continue;
    acc += integrate_c(
        [&](double phi) {
          return mu(z + std::polar(rho, phi)) * std::polar(1.0, -static_cast<double>(k) * phi);
        },
        fine[i], fine[i + 1]);
  }
  return acc;
}

cplx radial(const Field& mu, const std::vector<double>& bps, double outer, cplx z, int k,
            bool weight_inverse) {
  const double az = std::abs(z);
  const double rho_max = az + outer;
  std::vector<double> pts{0.0, rho_max};
  for (double b : bps) {
    for (double p : {std::abs(b - az), b + az}) {
      if (p > 0.0 && p < rho_max) pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  cplx acc{};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    if (b - a < 1e-14) continue;
    // rho = a + (b-a)(1 - cos(pi s))/2 clusters nodes at tangency points
    acc += integrate_c(
        [&](double s) {
          const double rho = a + (b - a) * 0.5 * (1.0 - std::cos(kPi * s));
          const double jac = (b - a) * 0.5 * kPi * std::sin(kPi * s);
          const cplx inner = angular(mu, bps, z, rho, k);
          return (weight_inverse ? inner / rho : inner) * jac;
        },
        0.0, 1.0);
  }
  return acc;
}

}  // namespace

Field unit_block(long long n, double r, double rho, cplx coeff) {
  return [=](cplx w) -> cplx {
    const double a = std::abs(w);
    if (a < r || a >= rho) return {};
    return coeff * std::polar(1.0, -static_cast<double>(n - 2) * std::arg(w));
  };
}

Field sum(std::vector<Field> parts) {
  return [parts = std::move(parts)](cplx w) {
    cplx acc{};
    for (const auto& f : parts) acc += f(w);
    return acc;
  };
}

namespace {

cplx midpoint_sum(const bvlab::MonomialTerm& term, long long j, int n_r, int n_t) {
  const double u0 = term.r_in.log();
  const double u1 = term.r_out.log();
  const double du = (u1 - u0) / n_r;
  const double dt = 2.0 * kPi / n_t;
  const double alpha = static_cast<double>(term.radial_degree());
  const double nu = static_cast<double>(term.q - term.p);
  cplx acc{};
  for (int a = 0; a < n_r; ++a) {
    const double r = std::exp(u0 + (a + 0.5) * du);
    cplx ring{};
    for (int b = 0; b < n_t; ++b) {
      // term(w) w^j r^2 with w = r e^{it}
      ring += std::polar(std::pow(r, alpha + j + 2.0), (nu + j) * (b + 0.5) * dt);
    }
    acc += ring;
  }
  return term.coeff * acc * du * dt / kPi;
}

}  // namespace

cplx moment_midpoint(const bvlab::MonomialTerm& term, long long j, int n) {
  // one Richardson step on the radial h^2 error
  const cplx coarse = midpoint_sum(term, j, n, n);
  const cplx fine = midpoint_sum(term, j, 2 * n, n);
  return (4.0 * fine - coarse) / 3.0;
}

cplx cauchy_polar(const Field& mu, const std::vector<double>& breakpoints, double outer, cplx z) {
  return -radial(mu, breakpoints, outer, z, 1, false) / kPi;
}

cplx beurling_polar(const Field& mu, const std::vector<double>& breakpoints, double outer, cplx z) {
  return -radial(mu, breakpoints, outer, z, 2, true) / kPi;
}

cplx dbar_fd(const Field& f, cplx z, double h) {
  const cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
  const cplx dy = (f(z + cplx{0, h}) - f(z - cplx{0, h})) / (2.0 * h);
  return 0.5 * (dx + cplx{0, 1} * dy);
}

cplx dz_fd(const Field& f, cplx z, double h) {
  const cplx dx = (f(z + h) - f(z - h)) / (2.0 * h);
  const cplx dy = (f(z + cplx{0, h}) - f(z - cplx{0, h})) / (2.0 * h);
  return 0.5 * (dx - cplx{0, 1} * dy);
}

double circle_mean_square(const Field& g, double R, int n) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += std::norm(g(std::polar(R, 2.0 * kPi * i / n)));
  return acc / n;
}

cplx order2_at(const std::vector<Block>& blocks, cplx z) {
  std::vector<double> bps;
  double outer = 0.0;
  std::vector<Field> parts;
  for (const auto& b : blocks) {
    bps.push_back(b.r);
    bps.push_back(b.rho);
    outer = std::max(outer, b.rho);
    parts.push_back(unit_block(b.n, b.r, b.rho));
  }
  const Field mu = sum(parts);

  constexpr int kRadial = 16;
  constexpr int kAngular = 256;
  const auto& x = gauss<double, kRadial>::abscissa();
  const auto& wts = gauss<double, kRadial>::weights();
  std::vector<double> nodes, node_w;
  for (const auto& b : blocks) {
    const double mid = 0.5 * (b.r + b.rho);
    const double half = 0.5 * (b.rho - b.r);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double s : {1.0, -1.0}) {
        if (x[i] == 0.0 && s < 0) continue;
        nodes.push_back(mid + s * half * x[i]);
        node_w.push_back(half * wts[i]);
      }
    }
  }

  cplx s_mu_mu{};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double r = nodes[i];
    // S(block_j)(r) on the positive axis, then rotate: S mu_j(r e^{it}) = e^{i(nu_j - 2)t} S mu_j(r)
    std::vector<cplx> on_axis;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      on_axis.push_back(beurling_polar(parts[j], {blocks[j].r, blocks[j].rho}, blocks[j].rho, r));
    }
    cplx ring{};
    for (int a = 0; a < kAngular; ++a) {
      const double t = 2.0 * kPi * a / kAngular;
      const cplx w = std::polar(r, t);
      cplx smu{};
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        const double nu = -static_cast<double>(blocks[j].n - 2);
        smu += std::polar(1.0, (nu - 2.0) * t) * on_axis[j];
      }
      ring += mu(w) * smu / ((w - z) * (w - z));
    }
    s_mu_mu += ring * (2.0 * kPi / kAngular) * r * node_w[i];
  }
  s_mu_mu *= -1.0 / kPi;
  const cplx s_mu = beurling_polar(mu, bps, outer, z);
  return s_mu_mu - 0.5 * s_mu * s_mu;
}

}  // namespace oracle
