#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "arcbem/error.hpp"

namespace arcbem {

using Vec2 = Eigen::Vector2d;

enum class ArcKind { flat, spiral, vshape, custom };

std::string to_string(ArcKind kind);
ArcKind arc_kind_from_string(const std::string& s);

// raw parametrization u in [-1,1], possibly non-constant speed
struct RawCurve {
  std::function<Vec2(double)> point;
  std::function<Vec2(double)> derivative;
  // parameters where the curve is only piecewise smooth, strictly inside (-1,1)
  std::vector<double> breaks;
  // smooth-but-not-analytic joints (spline knots), used only for arclength quadrature
  std::vector<double> knots;
};

class Arc {
 public:
  Arc() = default;

  ArcKind kind() const { return kind_; }
  double angle() const { return angle_; }
  double length() const { return length_; }
  const std::vector<double>& breaks() const { return breaks_; }

  Vec2 point(double t) const;
  // d r / d t, norm length/2
  Vec2 derivative(double t) const;
  Vec2 normal(double t) const;
  // r(t) - r(s) given dt = t - s computed accurately by the caller
  Vec2 chord(double t, double s, double dt) const;
  // raw parameter u(t)
  double raw_parameter(double t) const;

  bool same_piece(double t, double s) const;

  friend Arc normalize_parametrization(const RawCurve& raw, ArcKind kind, double angle);

 struct Table;

 private:
  ArcKind kind_ = ArcKind::flat;
  double angle_ = 0.0;
  double length_ = 0.0;
  std::vector<double> breaks_;
  RawCurve raw_;
  std::shared_ptr<const Table> table_;  // null when the raw curve already has constant speed
};

Arc normalize_parametrization(const RawCurve& raw, ArcKind kind = ArcKind::custom, double angle = 0.0);

Arc make_flat();
Arc make_spiral();
Arc make_vshape(double theta);
// samples (t, x, y) with strictly increasing t; fitted by natural cubic splines
Arc make_custom(const std::vector<double>& t, const std::vector<Vec2>& pts);
Arc load_custom_csv(const std::string& path);

double weight_omega(const Arc& arc, double t);
Vec2 normal_vector(const Arc& arc, double t);

struct GradedMesh {
  std::vector<double> t;
  std::vector<Vec2> nodes;
  int panels() const { return static_cast<int>(t.size()) - 1; }
};

// t_i = -cos(i pi / N)
GradedMesh graded_mesh(const Arc& arc, int N);
// panel widths ~ (i h)^beta from each end, symmetric; beta = 1 is uniform
GradedMesh beta_graded_mesh(const Arc& arc, int N, double beta);

}  // namespace arcbem
