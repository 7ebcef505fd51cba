#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arcbem/krylov.hpp"
#include "arcbem/potential.hpp"

using namespace arcbem;

TEST_CASE("zero density gives zero field") {
  auto s = make_weighted_space(make_spiral(), 40, Weight::inv_omega);
  VecC z = VecC::Zero(s.dof_count());
  CHECK(std::abs(single_layer_field(s, z, 5.0, Vec2(0.3, 0.4))) == 0.0);
  auto n = make_weighted_space(make_spiral(), 40, Weight::omega);
  CHECK(std::abs(double_layer_field(n, z, 5.0, Vec2(0.3, 0.4))) == 0.0);
}

TEST_CASE("single layer of the equilibrium density") {
  // alpha = 1 on the flat segment: S_w 1 = ln(2)/2 on the arc, and
  // -1/(2pi) int ln|z - t| dt / sqrt(1 - t^2) = -ln(|z + sqrt(z^2 - 1)| / 2) / 2 off it
  auto s = make_weighted_space(make_flat(), 64, Weight::inv_omega);
  VecC one = VecC::Ones(s.dof_count());
  for (double t : {-0.9, -0.2, 0.0, 0.55, 0.999})
    CHECK(std::abs(single_layer_trace(s, one, 0.0, t) - std::log(2.0) / 2) < 1e-10);
  for (Vec2 z : {Vec2(0.3, 0.2), Vec2(2.0, -1.0), Vec2(-0.999, 0.002), Vec2(10.0, 10.0)}) {
    std::complex<double> w(z.x(), z.y());
    std::complex<double> r = std::sqrt(w - 1.0) * std::sqrt(w + 1.0);
    double ref = -std::log(std::abs(w + r) / 2.0) / 2.0;
    CHECK(std::abs(single_layer_field(s, one, 0.0, z).real() - ref) < 1e-9);
  }
}

TEST_CASE("double layer jump and decay") {
  // beta = 1 on the flat segment: the double layer jumps by mu = omega,
  // positive on the side the normal points to
  const double k = 3.0;
  auto n = make_weighted_space(make_flat(), 64, Weight::omega);
  VecC one = VecC::Ones(n.dof_count());
  const double h = 1e-3;
  for (double x : {-0.5, 0.2}) {
    cplx up = double_layer_field(n, one, k, Vec2(x, h)), dn = double_layer_field(n, one, k, Vec2(x, -h));
    CHECK(std::abs((up - dn) - std::sqrt(1 - x * x)) < 5e-3);
  }
  CHECK(std::abs(double_layer_field(n, one, k, Vec2(0.0, 100.0))) <
        std::abs(double_layer_field(n, one, k, Vec2(0.0, 10.0))));
}

TEST_CASE("distance and masking") {
  auto s = make_weighted_space(make_vshape(kPi / 2), 32, Weight::inv_omega);
  const Arc& a = s.arc();
  Vec2 p = a.point(0.4);
  CHECK(std::abs(distance_to_arc(s, p + 0.05 * a.normal(0.4)) - 0.05) < 1e-10);
  CHECK(distance_to_arc(s, a.point(-0.7)) < 1e-12);
  GridSpec g;
  g.nx = 5;
  g.ny = 3;
  g.x0 = -1.0;
  g.x1 = 1.0;
  g.y0 = 0.0;
  g.y1 = 0.0;
  auto f = make_weighted_space(make_flat(), 16, Weight::inv_omega);
  FieldGrid F = evaluate_field(f, VecC::Ones(17), 2.0, Side::dirichlet, 0.0, g);
  for (int i = 0; i < 5; ++i) CHECK(std::isnan(F.total(1, i).real()));
}

TEST_CASE("solved Dirichlet density cancels the incident trace") {
  Arc sp = make_spiral();
  const double k = 50 * kPi / sp.length();
  const int N = static_cast<int>(std::lround(5 * k * sp.length()));
  auto s = make_weighted_space(sp, N, Weight::inv_omega);
  MatC S = assemble_single_layer_weighted(s, k);
  VecC b = assemble_rhs(s, plane_wave_trace(k, 0.0));
  auto res = gmres(LinearOperator::dense(S), b, build_dirichlet_preconditioner(s, k));
  REQUIRE(res.report.converged);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    double t = -0.98 + 1.96 * (i + 0.5) / 50;
    cplx us = -single_layer_trace(s, res.x, k, t);
    cplx ui = std::exp(cplx(0.0, k * sp.point(t).x()));
    worst = std::max(worst, std::abs(us + ui));
  }
  CHECK(worst <= 0.05);
}
