#include "arcbem/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "arcbem/quadrature.hpp"
#include "arcbem/specfun.hpp"

namespace arcbem {

std::string to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::flat: return "flat";
    case ArcKind::spiral: return "spiral";
    case ArcKind::vshape: return "v-shape";
    case ArcKind::custom: return "custom";
  }
  return "custom";
}

ArcKind arc_kind_from_string(const std::string& s) {
  if (s == "flat" || s == "flat-segment") return ArcKind::flat;
  if (s == "spiral") return ArcKind::spiral;
  if (s == "v-shape" || s == "vshape") return ArcKind::vshape;
  if (s == "custom") return ArcKind::custom;
  throw ConfigError("unknown arc kind '" + s + "'");
}

// cumulative arclength of the raw curve, one block of sub-intervals per smooth piece
struct Arc::Table {
  std::vector<double> edges;  // u values
  std::vector<double> cum;    // arclength at edges
};

namespace {

constexpr int kSubPerPiece = 256;

double raw_speed(const RawCurve& raw, double u) { return raw.derivative(u).norm(); }

double gl8_integral(const RawCurve& raw, double a, double b) {
  const auto& g = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * raw_speed(raw, a + (b - a) * g.x[i]);
  return s * (b - a);
}

std::vector<double> piece_ends(const RawCurve& raw) {
  std::vector<double> ends{-1.0, 1.0};
  for (double b : raw.breaks) ends.push_back(b);
  for (double b : raw.knots)
    if (b > -1.0 && b < 1.0) ends.push_back(b);
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  return ends;
}

Arc::Table build_table(const RawCurve& raw, int sub) {
  Arc::Table tab;
  auto ends = piece_ends(raw);
  tab.edges.push_back(-1.0);
  tab.cum.push_back(0.0);
  for (std::size_t p = 0; p + 1 < ends.size(); ++p) {
    double a = ends[p], b = ends[p + 1];
    for (int i = 0; i < sub; ++i) {
      double u0 = a + (b - a) * i / sub;
      double u1 = (i + 1 == sub) ? b : a + (b - a) * (i + 1) / sub;
      tab.cum.push_back(tab.cum.back() + gl8_integral(raw, u0, u1));
      tab.edges.push_back(u1);
    }
  }
  return tab;
}

}  // namespace

Arc normalize_parametrization(const RawCurve& raw, ArcKind kind, double angle) {
  for (double b : raw.breaks)
    if (!(b > -1.0 && b < 1.0)) throw GeometryError("curve break outside (-1,1)");
  Arc arc;
  arc.kind_ = kind;
  arc.angle_ = angle;
  arc.raw_ = raw;
  arc.breaks_ = raw.breaks;

  int sub = kSubPerPiece;
  auto tab = build_table(raw, sub);
  double len = tab.cum.back();
  for (int pass = 0;; ++pass) {
    auto coarse = build_table(raw, sub / 2);
    if (std::abs(coarse.cum.back() - len) <= 1e-13 * len) break;
    if (pass == 4) throw GeometryError("arclength quadrature did not converge");
    sub *= 2;
    tab = build_table(raw, sub);
    len = tab.cum.back();
  }
  if (!(len > 0.0) || !std::isfinite(len)) throw GeometryError("degenerate curve length");
  arc.length_ = len;

  const auto& g = gauss_legendre(8);
  double smin = 1e300;
  bool constant_speed = true;
  for (std::size_t i = 0; i + 1 < tab.edges.size(); ++i) {
    for (double x : g.x) {
      double u = tab.edges[i] + (tab.edges[i + 1] - tab.edges[i]) * x;
      double sp = raw_speed(raw, u);
      smin = std::min(smin, sp);
      if (std::abs(sp - 0.5 * len) > 1e-13 * len) constant_speed = false;
    }
  }
  if (!(smin > 1e-10 * len)) throw GeometryError("raw speed vanishes: degenerate parametrization");
  if (!constant_speed) arc.table_ = std::make_shared<const Arc::Table>(std::move(tab));
  return arc;
}

double Arc::raw_parameter(double t) const {
  if (!table_) return t;
  if (t <= -1.0) return -1.0;
  if (t >= 1.0) return 1.0;
  const auto& e = table_->edges;
  const auto& c = table_->cum;
  const double target = 0.5 * length_ * (t + 1.0);
  std::size_t j = std::upper_bound(c.begin(), c.end(), target) - c.begin();
  j = std::clamp<std::size_t>(j, 1, c.size() - 1) - 1;
  double lo = e[j], hi = e[j + 1];
  double u = lo + (hi - lo) * (target - c[j]) / (c[j + 1] - c[j]);
  const double tol = 1e-15 * length_;
  for (int it = 0; it < 60; ++it) {
    double f = c[j] + gl8_integral(raw_, e[j], u) - target;
    if (std::abs(f) <= tol) return u;
    if (f > 0) hi = u;
    else lo = u;
    double un = u - f / raw_speed(raw_, u);
    if (!(un > lo && un < hi)) un = 0.5 * (lo + hi);
    if (std::abs(un - u) <= 1e-16 * (1.0 + std::abs(u))) return un;
    u = un;
  }
  throw GeometryError("arclength inversion did not converge");
}

Vec2 Arc::point(double t) const { return raw_.point(raw_parameter(t)); }

Vec2 Arc::derivative(double t) const {
  Vec2 d = raw_.derivative(raw_parameter(t));
  if (!table_) return d;
  return d * (0.5 * length_ / d.norm());
}

bool Arc::same_piece(double t, double s) const {
  double lo = std::min(t, s), hi = std::max(t, s);
  for (double b : breaks_)
    if (b > lo && b < hi) return false;
  return true;
}

Vec2 Arc::chord(double t, double s, double dt) const {
  if (same_piece(t, s)) {
    if (kind_ == ArcKind::flat || kind_ == ArcKind::vshape) {
      double m = 0.5 * (t + s);
      // the midpoint of a piece is never the corner unless t = -s
      if (kind_ == ArcKind::vshape && m == 0.0) return point(t) - point(s);
      return derivative(m) * dt;
    }
    if (std::abs(dt) < 1e-5) return derivative(0.5 * (t + s)) * dt;
  }
  return point(t) - point(s);
}

Vec2 Arc::normal(double t) const {
  for (double b : breaks_)
    if (t == b) throw GeometryError("normal undefined at a corner");
  Vec2 d = derivative(t);
  d /= d.norm();
  return Vec2(-d.y(), d.x());
}

Arc make_flat() {
  RawCurve raw;
  raw.point = [](double u) { return Vec2(u, 0.0); };
  raw.derivative = [](double) { return Vec2(1.0, 0.0); };
  return normalize_parametrization(raw, ArcKind::flat, 0.0);
}

Arc make_spiral() {
  RawCurve raw;
  raw.point = [](double u) {
    double v = u - 0.2, e = std::exp(0.4 * v);
    return Vec2(e * std::cos(2.0 * v), e * std::sin(2.0 * v));
  };
  raw.derivative = [](double u) {
    double v = u - 0.2, e = std::exp(0.4 * v);
    double c = std::cos(2.0 * v), s = std::sin(2.0 * v);
    return Vec2(e * (0.4 * c - 2.0 * s), e * (0.4 * s + 2.0 * c));
  };
  return normalize_parametrization(raw, ArcKind::spiral, 0.0);
}

Arc make_vshape(double theta) {
  if (!(theta > 0.0 && theta <= kPi)) throw GeometryError("v-shape angle must lie in (0, pi]");
  const double s = std::sin(0.5 * theta), c = std::cos(0.5 * theta);
  RawCurve raw;
  raw.point = [s, c](double u) { return Vec2(u * s, std::abs(u) * c); };
  raw.derivative = [s, c](double u) { return Vec2(s, u < 0.0 ? -c : c); };
  raw.breaks = {0.0};
  return normalize_parametrization(raw, ArcKind::vshape, theta);
}

namespace {

struct NaturalSpline {
  std::vector<double> x, y, m;  // m = second derivatives

  NaturalSpline(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    const std::size_t n = x.size();
    m.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
      a[i] = h0 / 6.0;
      b[i] = (h0 + h1) / 3.0;
      c[i] = h1 / 6.0;
      d[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
    }
    for (std::size_t i = 1; i < n; ++i) {
      double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    m[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m[i] = (d[i] - c[i] * m[i + 1]) / b[i];
  }

  std::size_t seg(double u) const {
    std::size_t j = std::upper_bound(x.begin(), x.end(), u) - x.begin();
    return std::clamp<std::size_t>(j, 1, x.size() - 1) - 1;
  }
  double value(double u) const {
    std::size_t j = seg(u);
    double h = x[j + 1] - x[j], A = (x[j + 1] - u) / h, B = (u - x[j]) / h;
    return A * y[j] + B * y[j + 1] + ((A * A * A - A) * m[j] + (B * B * B - B) * m[j + 1]) * h * h / 6.0;
  }
  double deriv(double u) const {
    std::size_t j = seg(u);
    double h = x[j + 1] - x[j], A = (x[j + 1] - u) / h, B = (u - x[j]) / h;
    return (y[j + 1] - y[j]) / h + (-(3 * A * A - 1) * m[j] + (3 * B * B - 1) * m[j + 1]) * h / 6.0;
  }
};

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
  double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

Arc make_custom(const std::vector<double>& t, const std::vector<Vec2>& pts) {
  if (t.size() != pts.size() || t.size() < 2) throw GeometryError("custom curve needs at least 2 samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw GeometryError("custom curve parameters must increase strictly");
  const double t0 = t.front(), t1 = t.back();
  std::vector<double> u(t.size()), xs(t.size()), ys(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    u[i] = -1.0 + 2.0 * (t[i] - t0) / (t1 - t0);
    xs[i] = pts[i].x();
    ys[i] = pts[i].y();
  }
  u.front() = -1.0;
  u.back() = 1.0;
  auto sx = std::make_shared<NaturalSpline>(u, xs);
  auto sy = std::make_shared<NaturalSpline>(u, ys);

  const int m = std::max<int>(512, 8 * static_cast<int>(t.size()));
  std::vector<Vec2> poly(m + 1);
  for (int i = 0; i <= m; ++i) {
    double v = -1.0 + 2.0 * i / m;
    poly[i] = Vec2(sx->value(v), sy->value(v));
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j)
      if (segments_intersect(poly[i], poly[i + 1], poly[j], poly[j + 1]))
        throw GeometryError("custom curve is self-intersecting");

  RawCurve raw;
  raw.point = [sx, sy](double v) { return Vec2(sx->value(v), sy->value(v)); };
  raw.derivative = [sx, sy](double v) { return Vec2(sx->deriv(v), sy->deriv(v)); };
  raw.knots = u;
  return normalize_parametrization(raw, ArcKind::custom, 0.0);
}

Arc load_custom_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open curve file " + path);
  std::vector<double> t;
  std::vector<Vec2> p;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, x, y;
    if (!(ss >> a >> x >> y)) continue;  // header
    t.push_back(a);
    p.emplace_back(x, y);
  }
  return make_custom(t, p);
}

double weight_omega(const Arc& arc, double t) {
  double v = (1.0 - t) * (1.0 + t);
  return 0.5 * arc.length() * std::sqrt(std::max(v, 0.0));
}

Vec2 normal_vector(const Arc& arc, double t) { return arc.normal(t); }

namespace {

GradedMesh mesh_from_params(const Arc& arc, std::vector<double> t) {
  GradedMesh m;
  m.nodes.reserve(t.size());
  for (double v : t) m.nodes.push_back(arc.point(v));
  m.t = std::move(t);
  return m;
}

}  // namespace

GradedMesh graded_mesh(const Arc& arc, int N) {
  if (N < 2) throw ConfigError("graded_mesh: N must be >= 2");
  std::vector<double> t(N + 1);
  for (int i = 0; i <= N; ++i) t[i] = -std::cos(i * kPi / N);
  t[0] = -1.0;
  t[N] = 1.0;
  if (N % 2 == 0) t[N / 2] = 0.0;
  for (int i = 0; i < N / 2; ++i) t[N - i] = -t[i];
  return mesh_from_params(arc, std::move(t));
}

GradedMesh beta_graded_mesh(const Arc& arc, int N, double beta) {
  if (N < 2) throw ConfigError("beta_graded_mesh: N must be >= 2");
  if (!(beta >= 1.0)) throw ConfigError("beta_graded_mesh: beta must be >= 1");
  auto g = [beta](double x) {
    return x <= 0.5 ? 0.5 * std::pow(2.0 * x, beta) : 1.0 - 0.5 * std::pow(2.0 - 2.0 * x, beta);
  };
  std::vector<double> t(N + 1);
  for (int i = 0; i <= N; ++i) t[i] = -1.0 + 2.0 * g(double(i) / N);
  for (int i = 0; i < N / 2; ++i) t[N - i] = -t[i];
  if (N % 2 == 0) t[N / 2] = 0.0;
  return mesh_from_params(arc, std::move(t));
}

}  // namespace arcbem
