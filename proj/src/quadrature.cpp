#include "arcbem/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "arcbem/error.hpp"
#include "arcbem/specfun.hpp"

namespace arcbem {

namespace {

// P_n(z) and P_n'(z)
void legendre(int n, double z, double& p, double& dp) {
  double p0 = 1.0, p1 = z;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = n == 0 ? 1.0 : p1;
  dp = n * (z * p1 - p0) / (z * z - 1.0);
}

Rule1D compute_gauss_legendre(int n) {
  Rule1D r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5)), p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre(n, z, p, dp);
      double dz = p / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    legendre(n, z, p, dp);
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = 0.5 * (1.0 - z);
    r.x[n - 1 - i] = 0.5 * (1.0 + z);
    r.w[i] = r.w[n - 1 - i] = 0.5 * w;
  }
  return r;
}

}  // namespace

const Rule1D& gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Rule1D>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule1D>(compute_gauss_legendre(n));
  return *slot;
}

Rule1D graded_rule(int n, int m) {
  const auto& g = gauss_legendre(n);
  Rule1D r;
  for (int i = 0; i < n; ++i) {
    double u = g.x[i];
    r.x.push_back(std::pow(u, m));
    r.w.push_back(g.w[i] * m * std::pow(u, m - 1));
  }
  return r;
}

Rule2D diagonal_rule(int n, int m, bool apex_at_origin) {
  Rule1D rho = graded_rule(n, m), w = graded_rule(n, m);
  Rule2D r;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // w graded toward the diagonal w = 1
      double p = rho.x[i], q = p * (1.0 - w.x[j]), wt = rho.w[i] * w.w[j] * p;
      double xs[2] = {p, q}, ys[2] = {q, p}, gap = p * w.x[j];
      double ds[2] = {gap, -gap};
      for (int t = 0; t < 2; ++t) {
        if (apex_at_origin) r.add(xs[t], ys[t], wt, ds[t]);
        else r.add(1.0 - xs[t], 1.0 - ys[t], wt, -ds[t]);
      }
    }
  }
  return r;
}

Rule2D corner_rule(int n, int m, int cx, int cy) {
  Rule1D rho = graded_rule(n, m);
  const auto& w = gauss_legendre(n);
  const double Cx = cx, Cy = cy, Ox = 1 - cx, Oy = 1 - cy;
  const double P[2][2] = {{double(1 - cx), double(cy)}, {double(cx), double(1 - cy)}};
  Rule2D r;
  for (int t = 0; t < 2; ++t) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double p = rho.x[i], s = w.x[j];
        double x = Cx + p * (P[t][0] - Cx) + p * s * (Ox - P[t][0]);
        double y = Cy + p * (P[t][1] - Cy) + p * s * (Oy - P[t][1]);
        r.add(x, y, rho.w[i] * w.w[j] * p);
      }
    }
  }
  return r;
}

}  // namespace arcbem
