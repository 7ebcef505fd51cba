#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arcbem/geometry.hpp"
#include "arcbem/specfun.hpp"

using namespace arcbem;

namespace {

// closed-form arclength inverse of the spiral (speed e^{0.4 v} sqrt(4.16))
double spiral_u(double t) {
  double e0 = std::exp(-0.48), e1 = std::exp(0.32);
  return 0.2 + std::log(e0 + 0.5 * (t + 1.0) * (e1 - e0)) / 0.4;
}

}  // namespace

TEST_CASE("flat segment") {
  Arc a = make_flat();
  CHECK(a.length() == doctest::Approx(2.0).epsilon(1e-14));
  for (double t : {-1.0, -0.3, 0.0, 0.8}) {
    CHECK((a.point(t) - Vec2(t, 0)).norm() < 1e-15);
    CHECK((a.normal(t) - Vec2(0, 1)).norm() < 1e-15);
  }
  CHECK(weight_omega(a, 0.0) == doctest::Approx(1.0));
  CHECK(weight_omega(a, 1.0) == 0.0);
  CHECK(weight_omega(a, -1.0) == 0.0);
}

TEST_CASE("spiral length and normalization") {
  Arc a = make_spiral();
  const double L = std::sqrt(4.16) / 0.4 * (std::exp(0.32) - std::exp(-0.48));
  CHECK(std::abs(a.length() - L) < 1e-12);
  CHECK(std::abs(a.length() - 3.88) < 0.02);
  for (double t = -1.0; t <= 1.0; t += 0.0371) CHECK(std::abs(a.raw_parameter(t) - spiral_u(t)) < 1e-12);
  // dense finite-difference sampling of the normalized speed
  double worst = 0.0;
  for (int i = 1; i < 2000; ++i) {
    double t = -1.0 + 2.0 * i / 2000.0, h = 1e-5;
    double sp = (a.point(t + h) - a.point(t - h)).norm() / (2 * h);
    worst = std::max(worst, std::abs(sp - 0.5 * L) / (0.5 * L));
  }
  CHECK(worst < 1e-8);
  CHECK(std::abs(weight_omega(a, 0.0) - 1.94) < 0.01);
  CHECK(std::abs(a.normal(0.0).dot(a.derivative(0.0))) < 1e-12);
  CHECK(std::abs(a.normal(0.0).norm() - 1.0) < 1e-14);
}

TEST_CASE("normalization is idempotent") {
  Arc a = make_spiral();
  RawCurve raw;
  raw.point = [a](double t) { return a.point(t); };
  raw.derivative = [a](double t) { return a.derivative(t); };
  Arc b = normalize_parametrization(raw);
  CHECK(std::abs(a.length() - b.length()) < 1e-12);
  for (double t : {-0.95, -0.4, 0.1, 0.77}) CHECK((a.point(t) - b.point(t)).norm() < 1e-12);
}

TEST_CASE("v-shape") {
  Arc v = make_vshape(kPi / 2);
  CHECK(v.length() == doctest::Approx(2.0).epsilon(1e-14));
  Vec2 n = v.normal(0.5);
  CHECK((n - Vec2(-std::cos(kPi / 4), std::sin(kPi / 4))).norm() < 1e-14);
  CHECK_THROWS_AS(v.normal(0.0), GeometryError);
  CHECK(std::abs(v.raw_parameter(0.3) - 0.3) < 1e-15);
  Arc straight = make_vshape(kPi), flat = make_flat();
  for (double t : {-0.7, 0.0, 0.45}) CHECK((straight.point(t) - flat.point(t)).norm() < 1e-15);
  CHECK_THROWS_AS(make_vshape(0.0), GeometryError);
  CHECK_THROWS_AS(make_vshape(4.0), GeometryError);
  // chord across the corner
  Vec2 c = v.chord(0.2, -0.1, 0.3);
  CHECK((c - (v.point(0.2) - v.point(-0.1))).norm() < 1e-15);
}

TEST_CASE("custom curves") {
  std::vector<double> t;
  std::vector<Vec2> p;
  for (int i = 0; i <= 40; ++i) {
    double s = -1.0 + i / 20.0;
    t.push_back(s);
    p.emplace_back(s, 0.25 * s * s);
  }
  Arc a = make_custom(t, p);
  // exact length of y = x^2/4 on [-1,1]
  double L = std::sqrt(1.25) + 2.0 * std::asinh(0.5);
  CHECK(std::abs(a.length() - L) < 1e-5);
  CHECK(std::abs(a.derivative(0.3).norm() - 0.5 * a.length()) < 1e-12);

  std::vector<double> t8;
  std::vector<Vec2> p8;
  for (int i = 0; i <= 60; ++i) {
    double s = 2.0 * kPi * i / 60.0 * 0.98;
    t8.push_back(s);
    p8.emplace_back(std::sin(s), std::sin(2 * s));
  }
  CHECK_THROWS_AS(make_custom(t8, p8), GeometryError);
}

TEST_CASE("graded meshes") {
  Arc a = make_flat();
  auto m2 = graded_mesh(a, 2);
  CHECK(m2.t == std::vector<double>{-1.0, 0.0, 1.0});
  auto m4 = graded_mesh(a, 4);
  const double r = std::sqrt(2.0) / 2;
  std::vector<double> e4{-1.0, -r, 0.0, r, 1.0};
  for (int i = 0; i <= 4; ++i) CHECK(std::abs(m4.t[i] - e4[i]) < 1e-15);
  auto m = graded_mesh(a, 100);
  for (int i = 0; i < 100; ++i) CHECK(std::abs(std::acos(-m.t[i + 1]) - std::acos(-m.t[i]) - kPi / 100) < 1e-12);
  for (int i = 0; i <= 100; ++i) CHECK(m.t[i] == -m.t[100 - i]);
  for (int i = 0; i < 100; ++i) CHECK(m.t[i] < m.t[i + 1]);
  CHECK(std::abs(m.t[1] - m.t[0] - (1 - std::cos(kPi / 100))) < 1e-15);
  auto m400 = graded_mesh(a, 400);
  double ratio = (m400.t[2] - m400.t[1]) / (m400.t[1] - m400.t[0]);
  CHECK(std::abs(ratio - 3.0) < 0.3);
  for (double t : {0.1, 0.5, 0.93}) CHECK(weight_omega(make_spiral(), t) == weight_omega(make_spiral(), -t));

  auto b1 = beta_graded_mesh(a, 10, 1.0);
  for (int i = 0; i <= 10; ++i) CHECK(std::abs(b1.t[i] - (-1.0 + 0.2 * i)) < 1e-15);
  auto b3 = beta_graded_mesh(a, 10, 3.0);
  CHECK(std::abs(b3.t[1] + 1.0 - std::pow(0.2, 3)) < 1e-15);
}
