#include "arcbem/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arcbem/quadrature.hpp"
#include "arcbem/specfun.hpp"

namespace arcbem {

namespace {

enum class Layer { single, dbl };

class FieldIntegrator {
 public:
  FieldIntegrator(const GalerkinSpace& sp, const VecC& c, double k, Layer layer)
      : sp_(sp), c_(c), k_(k), layer_(layer), hl_(0.5 * sp.arc().length()) {
    if (c.size() != sp.dof_count()) throw ConfigError("density size does not match the space");
    if (layer == Layer::dbl && sp.weight() != Weight::omega)
      throw ConfigError("double-layer field needs an omega-weighted density");
    if (layer == Layer::single && sp.weight() == Weight::omega)
      throw ConfigError("single-layer field needs an inv-omega or unit density");
  }

  cplx at(const Vec2& z) const {
    cplx u = 0.0;
    for (int a = 0; a < sp_.panels(); ++a) u += piece(z, a, 0.0, 1.0, 0);
    return u;
  }

  // on-curve: split the panels touching t and grade toward it
  cplx trace(double t) const {
    const Vec2 z = sp_.arc().point(t);
    const auto& T = sp_.mesh().t;
    const Rule1D g = graded_rule(24, 5);
    cplx u = 0.0;
    for (int a = 0; a < sp_.panels(); ++a) {
      if (t < T[a] || t > T[a + 1]) {
        u += piece(z, a, 0.0, 1.0, 0);
        continue;
      }
      double xs;
      if (sp_.graded()) {
        double al = std::acos(std::clamp(-t, -1.0, 1.0));
        xs = (al - sp_.coord_lo(a)) / (sp_.coord_hi(a) - sp_.coord_lo(a));
      } else {
        xs = (t - T[a]) / (T[a + 1] - T[a]);
      }
      xs = std::clamp(xs, 0.0, 1.0);
      for (std::size_t q = 0; q < g.x.size(); ++q) {
        if (xs > 0.0) u += point(z, a, xs - xs * g.x[q], g.w[q] * xs);
        if (xs < 1.0) u += point(z, a, xs + (1.0 - xs) * g.x[q], g.w[q] * (1.0 - xs));
      }
    }
    return u;
  }

 private:
  cplx point(const Vec2& z, int a, double x, double w) const {
    auto p = sp_.sample(a, x);
    auto d = sp_.dofs(a);
    const cplx dens = p.phi[0] * c_(d[0]) + p.phi[1] * c_(d[1]);
    const Vec2 diff = p.pos - z;
    const double r = diff.norm();
    if (!(r > 0.0)) return 0.0;
    double wt = w * p.jac;
    if (layer_ == Layer::single) {
      if (sp_.weight() == Weight::unit) wt *= hl_;
      return wt * green_kernel(k_, r) * dens;
    }
    wt *= hl_ * hl_ * p.sin_a * p.sin_a;
    const double dn = diff.dot(sp_.arc().normal(p.t)) / r;
    return wt * green_kernel_dr(k_, r) * dn * dens;
  }

  cplx piece(const Vec2& z, int a, double x0, double x1, int depth) const {
    const double lo = sp_.coord_lo(a), hi = sp_.coord_hi(a);
    auto tpar = [&](double x) {
      double c = lo + x * (hi - lo);
      return sp_.graded() ? -std::cos(c) : c;
    };
    const double t0 = tpar(x0), t1 = tpar(x1);
    const double len = hl_ * (t1 - t0);
    const double d = (sp_.arc().point(0.5 * (t0 + t1)) - z).norm();
    if ((d > 3.0 * len && k_ * len <= 2.0) || depth > 40) {
      const auto& g = gauss_legendre(depth > 40 ? 16 : 8);
      cplx u = 0.0;
      for (std::size_t q = 0; q < g.x.size(); ++q) u += point(z, a, x0 + (x1 - x0) * g.x[q], g.w[q] * (x1 - x0));
      return u;
    }
    const double xm = 0.5 * (x0 + x1);
    return piece(z, a, x0, xm, depth + 1) + piece(z, a, xm, x1, depth + 1);
  }

  const GalerkinSpace& sp_;
  const VecC& c_;
  double k_;
  Layer layer_;
  double hl_;
};

}  // namespace

cplx single_layer_field(const GalerkinSpace& space, const VecC& alpha, double k, const Vec2& z) {
  return FieldIntegrator(space, alpha, k, Layer::single).at(z);
}

cplx double_layer_field(const GalerkinSpace& space, const VecC& beta, double k, const Vec2& z) {
  return FieldIntegrator(space, beta, k, Layer::dbl).at(z);
}

cplx single_layer_trace(const GalerkinSpace& space, const VecC& alpha, double k, double t) {
  return FieldIntegrator(space, alpha, k, Layer::single).trace(t);
}

double distance_to_arc(const GalerkinSpace& space, const Vec2& z) {
  const Arc& arc = space.arc();
  const auto& T = space.mesh().t;
  const double hl = 0.5 * arc.length();
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < space.panels(); ++a) {
    const double len = hl * (T[a + 1] - T[a]);
    const Vec2 mid = arc.point(0.5 * (T[a] + T[a + 1]));
    if ((mid - z).norm() - len > best) continue;
    // golden-section search; panels are short enough for the distance to be unimodal
    double lo = T[a], hi = T[a + 1];
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = (arc.point(c) - z).norm(), fd = (arc.point(d) - z).norm();
    for (int it = 0; it < 60 && hi - lo > 1e-14; ++it) {
      if (fc < fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = (arc.point(c) - z).norm();
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = (arc.point(d) - z).norm();
      }
    }
    best = std::min({best, fc, fd, (arc.point(T[a]) - z).norm(), (arc.point(T[a + 1]) - z).norm()});
  }
  return best;
}

FieldGrid evaluate_field(const GalerkinSpace& space, const VecC& density, double k, Side side, double incident_angle,
                         const GridSpec& grid) {
  if (grid.nx < 1 || grid.ny < 1) throw ConfigError("field grid needs at least one point per axis");
  FieldGrid out;
  out.spec = grid;
  out.scattered.resize(grid.ny, grid.nx);
  out.total.resize(grid.ny, grid.nx);
  const Vec2 dir(std::cos(incident_angle), std::sin(incident_angle));
  FieldIntegrator I(space, density, k, side == Side::dirichlet ? Layer::single : Layer::dbl);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int j = 0; j < grid.ny; ++j) {
    const double y = grid.ny == 1 ? grid.y0 : grid.y0 + (grid.y1 - grid.y0) * j / (grid.ny - 1);
    for (int i = 0; i < grid.nx; ++i) {
      const double x = grid.nx == 1 ? grid.x0 : grid.x0 + (grid.x1 - grid.x0) * i / (grid.nx - 1);
      const Vec2 z(x, y);
      if (distance_to_arc(space, z) < grid.mask) {
        out.scattered(j, i) = out.total(j, i) = cplx(nan, nan);
        continue;
      }
      // u_scat = -S lambda on the Dirichlet side
      const cplx us = side == Side::dirichlet ? -I.at(z) : I.at(z);
      out.scattered(j, i) = us;
      out.total(j, i) = us + std::exp(cplx(0.0, k * dir.dot(z)));
    }
  }
  return out;
}

}  // namespace arcbem
