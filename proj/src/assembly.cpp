#include "arcbem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "arcbem/quadrature.hpp"
#include "arcbem/specfun.hpp"

namespace arcbem {

GalerkinSpace::GalerkinSpace(Arc arc, GradedMesh mesh, Continuity c, Weight w, bool graded)
    : arc_(std::move(arc)), mesh_(std::move(mesh)), continuity_(c), weight_(w), graded_(graded) {
  if (mesh_.panels() < 1) throw ConfigError("Galerkin space needs at least one panel");
  h_ = graded_ ? kPi / mesh_.panels() : 0.0;
}

int GalerkinSpace::dof_count() const {
  return continuity_ == Continuity::continuous ? panels() + 1 : 2 * panels();
}

std::array<int, 2> GalerkinSpace::dofs(int panel) const {
  if (continuity_ == Continuity::continuous) return {panel, panel + 1};
  return {2 * panel, 2 * panel + 1};
}

PanelPoint GalerkinSpace::sample(int a, double x) const {
  PanelPoint p;
  const auto& T = mesh_.t;
  if (graded_) {
    const double aa = a * h_, ab = (a + 1) * h_;
    const double al = aa + x * h_;
    p.alpha = al;
    p.sin_a = std::sin(al);
    p.cos_a = std::cos(al);
    p.t = -p.cos_a;
    const double dt = 2.0 * std::sin(0.5 * (aa + ab)) * std::sin(0.5 * h_);
    p.phi[0] = 2.0 * std::sin(0.5 * (al + ab)) * std::sin(0.5 * (ab - al)) / dt;
    p.phi[1] = 2.0 * std::sin(0.5 * (al + aa)) * std::sin(0.5 * (al - aa)) / dt;
    p.dphi[0] = -1.0 / dt;
    p.dphi[1] = 1.0 / dt;
    p.jac = h_;
  } else {
    const double dt = T[a + 1] - T[a];
    p.t = T[a] + x * dt;
    p.alpha = std::numeric_limits<double>::quiet_NaN();
    p.sin_a = std::sqrt(std::max(0.0, (1.0 - p.t) * (1.0 + p.t)));
    p.cos_a = -p.t;
    p.phi[0] = 1.0 - x;
    p.phi[1] = x;
    p.dphi[0] = -1.0 / dt;
    p.dphi[1] = 1.0 / dt;
    p.jac = dt;
  }
  p.pos = arc_.point(p.t);
  return p;
}

double GalerkinSpace::coord_lo(int a) const { return graded_ ? a * h_ : mesh_.t[a]; }
double GalerkinSpace::coord_hi(int a) const { return graded_ ? (a + 1) * h_ : mesh_.t[a + 1]; }

VecC GalerkinSpace::interpolate(const std::function<cplx(double)>& f) const {
  VecC c(dof_count());
  const auto& T = mesh_.t;
  if (continuity_ == Continuity::continuous) {
    for (int i = 0; i <= panels(); ++i) c(i) = f(T[i]);
  } else {
    for (int a = 0; a < panels(); ++a) {
      c(2 * a) = f(T[a]);
      c(2 * a + 1) = f(T[a + 1]);
    }
  }
  return c;
}

cplx GalerkinSpace::evaluate(const VecC& c, double t) const {
  const auto& T = mesh_.t;
  int a = static_cast<int>(std::upper_bound(T.begin(), T.end(), t) - T.begin()) - 1;
  a = std::clamp(a, 0, panels() - 1);
  double x = (t - T[a]) / (T[a + 1] - T[a]);
  auto d = dofs(a);
  return (1.0 - x) * c(d[0]) + x * c(d[1]);
}

GalerkinSpace make_weighted_space(const Arc& arc, int N, Weight w, Continuity c) {
  if (w == Weight::unit) throw ConfigError("weighted space needs omega or inv-omega weight");
  if (arc.kind() == ArcKind::vshape && N % 2 != 0)
    throw GeometryError("v-shape meshes need an even panel count so the corner is a breakpoint");
  return GalerkinSpace(arc, graded_mesh(arc, N), c, w, true);
}

GalerkinSpace make_standard_space(const Arc& arc, int N, double beta) {
  return GalerkinSpace(arc, beta_graded_mesh(arc, N, beta), Continuity::continuous, Weight::unit, false);
}

namespace {

void add_local(SymTridiag& M, const std::array<int, 2>& d, const double (&blk)[2][2]) {
  for (int i = 0; i < 2; ++i) M.diag(d[i]) += blk[i][i];
  int lo = std::min(d[0], d[1]);
  if (std::abs(d[0] - d[1]) == 1) M.off(lo) += blk[0][1];
}

double half_len(const GalerkinSpace& s) { return 0.5 * s.arc().length(); }

}  // namespace

SymTridiag assemble_mass(const GalerkinSpace& space) {
  SymTridiag M(space.dof_count());
  const auto& g = gauss_legendre(16);
  const double hl = half_len(space);
  for (int a = 0; a < space.panels(); ++a) {
    double blk[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      auto p = space.sample(a, g.x[q]);
      double w = g.w[q] * p.jac;
      switch (space.weight()) {
        case Weight::inv_omega: w /= kPi; break;
        case Weight::omega: w *= hl * hl * p.sin_a * p.sin_a; break;
        case Weight::unit: w *= hl; break;
      }
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) blk[i][j] += w * p.phi[i] * p.phi[j];
    }
    add_local(M, space.dofs(a), blk);
  }
  return M;
}

SymTridiag assemble_sqrt_argument(const GalerkinSpace& space, double k, Side side) {
  if (space.continuity() != Continuity::continuous)
    throw ConfigError("square-root argument needs a continuous space");
  if (!space.graded()) throw ConfigError("square-root argument needs a graded weighted space");
  SymTridiag X(space.dof_count());
  const auto& g = gauss_legendre(16);
  const double hl = half_len(space), k2 = k * k;
  for (int a = 0; a < space.panels(); ++a) {
    double blk[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      auto p = space.sample(a, g.x[q]);
      const double w = g.w[q] * p.jac, s2 = p.sin_a * p.sin_a;
      const double pot = 1.0 - hl * hl * s2;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          if (side == Side::dirichlet) {
            blk[i][j] += w / kPi * (s2 * p.dphi[i] * p.dphi[j] + k2 * pot * p.phi[i] * p.phi[j]);
          } else {
            double Di = p.cos_a * p.phi[i] + s2 * p.dphi[i];
            double Dj = p.cos_a * p.phi[j] + s2 * p.dphi[j];
            blk[i][j] += w * hl * hl * (Di * Dj + k2 * pot * s2 * p.phi[i] * p.phi[j]);
          }
        }
      }
    }
    add_local(X, space.dofs(a), blk);
  }
  return X;
}

SymTridiag assemble_stiffness_standard(const GalerkinSpace& space) {
  SymTridiag K(space.dof_count());
  const auto& g = gauss_legendre(4);
  const double hl = half_len(space);
  for (int a = 0; a < space.panels(); ++a) {
    double blk[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      auto p = space.sample(a, g.x[q]);
      double w = g.w[q] * p.jac;
      if (space.graded()) w /= p.sin_a;  // dt = sin(alpha) d(alpha)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) blk[i][j] += w / hl * p.dphi[i] * p.dphi[j];
    }
    add_local(K, space.dofs(a), blk);
  }
  return K;
}

namespace {

enum class Form { single_weighted, hyper_weighted, single_standard };

struct EvalPoint {
  Vec2 pos, nrm;
  double A[2], B[2];
  double w;
  double t, alpha, base, off;
};

using Block = std::array<std::array<cplx, 2>, 2>;

class PairIntegrator {
 public:
  PairIntegrator(const GalerkinSpace& sp, double k, Form form, const AssemblyOptions& opt)
      : sp_(sp), k_(k), form_(form), opt_(opt) {
    const double hl = half_len(sp);
    switch (form) {
      case Form::single_weighted: c1_ = 1.0 / kPi; c2_ = 0.0; break;
      case Form::hyper_weighted: c1_ = hl * hl; c2_ = -k * k * hl * hl * hl * hl; break;
      case Form::single_standard: c1_ = hl * hl; c2_ = 0.0; break;
    }
    diag0_ = diagonal_rule(opt.near_order, opt.grading, true);
    diag1_ = diagonal_rule(opt.near_order, opt.grading, false);
    corner10_ = corner_rule(opt.near_order, opt.grading, 1, 0);
    corner01_ = corner_rule(opt.near_order, opt.grading, 0, 1);
    const int n = sp.panels();
    far_hi_.resize(n);
    far_lo_.resize(n);
    mid_.resize(n);
    len_.resize(n);
    const auto& gh = gauss_legendre(opt.far_order);
    const auto& gl = gauss_legendre(opt.far_order_distant);
    for (int a = 0; a < n; ++a) {
      for (std::size_t q = 0; q < gh.x.size(); ++q) far_hi_[a].push_back(eval(a, gh.x[q], gh.w[q]));
      for (std::size_t q = 0; q < gl.x.size(); ++q) far_lo_[a].push_back(eval(a, gl.x[q], gl.w[q]));
      mid_[a] = sp.arc().point(0.5 * (sp.mesh().t[a] + sp.mesh().t[a + 1]));
      len_[a] = 0.5 * sp.arc().length() * (sp.mesh().t[a + 1] - sp.mesh().t[a]);
    }
  }

  Block pair(int a, int b) const {
    Block B{};
    if (a == b) {
      const bool apex_end = sp_.graded() && a == sp_.panels() - 1;
      apply_rule(apex_end ? diag1_ : diag0_, a, 0.0, 1.0, b, 0.0, 1.0, B);
    } else {
      rect(a, 0.0, 1.0, b, 0.0, 1.0, 0, B);
    }
    return B;
  }

 private:
  EvalPoint eval(int a, double x, double wq) const {
    auto p = sp_.sample(a, x);
    EvalPoint e;
    e.pos = p.pos;
    e.t = p.t;
    e.alpha = p.alpha;
    e.base = sp_.mesh().t[a];
    e.off = x * (sp_.mesh().t[a + 1] - sp_.mesh().t[a]);
    e.w = wq * p.jac;
    if (form_ == Form::hyper_weighted) {
      const double s2 = p.sin_a * p.sin_a;
      for (int i = 0; i < 2; ++i) {
        e.A[i] = p.cos_a * p.phi[i] + s2 * p.dphi[i];
        e.B[i] = s2 * p.phi[i];
      }
      e.nrm = sp_.arc().normal(p.t);
    } else {
      for (int i = 0; i < 2; ++i) {
        e.A[i] = p.phi[i];
        e.B[i] = 0.0;
      }
      e.nrm = Vec2::Zero();
    }
    return e;
  }

  cplx kernel(double r) const {
    if (k_ == 0.0) return cplx(-std::log(r) / (2.0 * kPi), 0.0);
    return green_kernel(k_, r);
  }

  // dc: exact difference of quadrature coordinates on a self pair, NaN otherwise
  void accumulate(const EvalPoint& P, const EvalPoint& Q, double w, Block& B, bool near, double dc = NAN) const {
    double r;
    if (near) {
      double dt;
      if (sp_.graded()) {
        double da = std::isnan(dc) ? P.alpha - Q.alpha : dc;
        dt = 2.0 * std::sin(0.5 * (P.alpha + Q.alpha)) * std::sin(0.5 * da);
      } else if (!std::isnan(dc)) {
        dt = dc;
      } else {
        dt = (P.base - Q.base) + (P.off - Q.off);
      }
      r = sp_.arc().chord(P.t, Q.t, dt).norm();
    } else {
      r = (P.pos - Q.pos).norm();
    }
    if (!(r > 0.0)) return;
    const cplx K = kernel(r) * w;
    const double nn = c2_ != 0.0 ? P.nrm.dot(Q.nrm) : 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) B[i][j] += K * (c1_ * P.A[i] * Q.A[j] + c2_ * nn * P.B[i] * Q.B[j]);
  }

  void apply_rule(const Rule2D& R, int a, double x0, double x1, int b, double y0, double y1, Block& B) const {
    const double sx = x1 - x0, sy = y1 - y0;
    const bool self = a == b && x0 == y0 && x1 == y1 && !R.d.empty();
    const double width = sp_.coord_hi(a) - sp_.coord_lo(a);
    for (std::size_t q = 0; q < R.size(); ++q) {
      EvalPoint P = eval(a, x0 + sx * R.x[q], 1.0);
      EvalPoint Q = eval(b, y0 + sy * R.y[q], 1.0);
      accumulate(P, Q, R.w[q] * sx * sy * P.w * Q.w, B, true, self ? R.d[q] * sx * width : NAN);
    }
  }

  void tensor(int a, double x0, double x1, int b, double y0, double y1, int order, Block& B) const {
    const auto& g = gauss_legendre(order);
    std::vector<EvalPoint> Ps, Qs;
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      Ps.push_back(eval(a, x0 + (x1 - x0) * g.x[q], g.w[q] * (x1 - x0)));
      Qs.push_back(eval(b, y0 + (y1 - y0) * g.x[q], g.w[q] * (y1 - y0)));
    }
    for (const auto& P : Ps)
      for (const auto& Q : Qs) accumulate(P, Q, P.w * Q.w, B, false);
  }

  void cached(const std::vector<EvalPoint>& Ps, const std::vector<EvalPoint>& Qs, Block& B) const {
    for (const auto& P : Ps)
      for (const auto& Q : Qs) accumulate(P, Q, P.w * Q.w, B, false);
  }

  void rect(int a, double x0, double x1, int b, double y0, double y1, int depth, Block& B) const {
    const bool full = x0 == 0.0 && x1 == 1.0 && y0 == 0.0 && y1 == 1.0;
    const double wa = (sp_.coord_hi(a) - sp_.coord_lo(a)) * (x1 - x0);
    const double wb = (sp_.coord_hi(b) - sp_.coord_lo(b)) * (y1 - y0);
    const bool touch = (a + 1 == b && x1 == 1.0 && y0 == 0.0) || (b + 1 == a && x0 == 0.0 && y1 == 1.0);
    auto split = [&]() {
      if (wa >= wb) {
        double xm = 0.5 * (x0 + x1);
        rect(a, x0, xm, b, y0, y1, depth + 1, B);
        rect(a, xm, x1, b, y0, y1, depth + 1, B);
      } else {
        double ym = 0.5 * (y0 + y1);
        rect(a, x0, x1, b, y0, ym, depth + 1, B);
        rect(a, x0, x1, b, ym, y1, depth + 1, B);
      }
    };
    if (touch) {
      if (std::max(wa, wb) <= 2.0 * std::min(wa, wb) || depth > 40) {
        apply_rule(a + 1 == b ? corner10_ : corner01_, a, x0, x1, b, y0, y1, B);
      } else {
        split();
      }
      return;
    }
    double la, lb, gap;
    if (full) {
      la = len_[a];
      lb = len_[b];
      gap = (mid_[a] - mid_[b]).norm() - 0.5 * (la + lb);
    } else {
      const auto& T = sp_.mesh().t;
      const double hl = half_len(sp_);
      auto tpar = [&](int p, double x) {
        if (sp_.graded()) return -std::cos(sp_.coord_lo(p) + x * (sp_.coord_hi(p) - sp_.coord_lo(p)));
        return T[p] + x * (T[p + 1] - T[p]);
      };
      double ta0 = tpar(a, x0), ta1 = tpar(a, x1), tb0 = tpar(b, y0), tb1 = tpar(b, y1);
      la = hl * (ta1 - ta0);
      lb = hl * (tb1 - tb0);
      Vec2 ma = sp_.arc().point(0.5 * (ta0 + ta1)), mb = sp_.arc().point(0.5 * (tb0 + tb1));
      gap = (ma - mb).norm() - 0.5 * (la + lb);
    }
    const double lmax = std::max(la, lb);
    if (gap >= opt_.distant_ratio * lmax && k_ * lmax <= 0.5 && full) {
      cached(far_lo_[a], far_lo_[b], B);
    } else if (gap >= lmax && k_ * lmax <= 2.0) {
      if (full) cached(far_hi_[a], far_hi_[b], B);
      else tensor(a, x0, x1, b, y0, y1, opt_.far_order, B);
    } else if (depth > 40) {
      tensor(a, x0, x1, b, y0, y1, opt_.near_order, B);
    } else {
      split();
    }
  }

  const GalerkinSpace& sp_;
  double k_;
  Form form_;
  AssemblyOptions opt_;
  double c1_ = 0.0, c2_ = 0.0;
  Rule2D diag0_, diag1_, corner10_, corner01_;
  std::vector<std::vector<EvalPoint>> far_hi_, far_lo_;
  std::vector<Vec2> mid_;
  std::vector<double> len_;
};

MatC assemble_dense(const GalerkinSpace& space, double k, Form form, const AssemblyOptions& opt) {
  if (k < 0.0) throw ConfigError("wavenumber must be nonnegative");
  PairIntegrator I(space, k, form, opt);
  const int n = space.dof_count(), np = space.panels();
  MatC A = MatC::Zero(n, n);
  for (int a = 0; a < np; ++a) {
    auto da = space.dofs(a);
    for (int b = a; b < np; ++b) {
      auto db = space.dofs(b);
      Block B = I.pair(a, b);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          A(da[i], db[j]) += B[i][j];
          if (a != b) A(db[j], da[i]) += B[i][j];
        }
      }
    }
  }
  if (!A.allFinite()) throw NumericalError("assembled matrix has non-finite entries");
  return A;
}

}  // namespace

MatC assemble_single_layer_weighted(const GalerkinSpace& space, double k, const AssemblyOptions& opt) {
  if (space.weight() != Weight::inv_omega || !space.graded())
    throw ConfigError("weighted single layer needs a graded inv-omega space");
  return assemble_dense(space, k, Form::single_weighted, opt);
}

MatC assemble_hypersingular_weighted(const GalerkinSpace& space, double k, const AssemblyOptions& opt) {
  if (space.weight() != Weight::omega || !space.graded() || space.continuity() != Continuity::continuous)
    throw ConfigError("weighted hypersingular operator needs a continuous graded omega space");
  return assemble_dense(space, k, Form::hyper_weighted, opt);
}

MatC assemble_single_layer_standard(const GalerkinSpace& space, double k, const AssemblyOptions& opt) {
  if (space.weight() != Weight::unit || space.graded())
    throw ConfigError("standard single layer needs a unit-weight space");
  return assemble_dense(space, k, Form::single_standard, opt);
}

double quadrature_self_check(const GalerkinSpace& space, double k, Side side, int pairs) {
  Form form = space.weight() == Weight::unit ? Form::single_standard
              : side == Side::dirichlet     ? Form::single_weighted
                                            : Form::hyper_weighted;
  AssemblyOptions fine;
  fine.far_order = 16;
  fine.far_order_distant = 16;
  fine.distant_ratio = 1e300;
  fine.near_order = 32;
  fine.grading = 6;
  PairIntegrator coarse_int(space, k, form, {}), fine_int(space, k, form, fine);
  std::mt19937 rng(12345);
  const int np = space.panels();
  std::uniform_int_distribution<int> pick(0, np - 1);
  double worst = 0.0;
  for (int p = 0; p < pairs; ++p) {
    int a = pick(rng), b;
    switch (p % 4) {
      case 0: b = a; break;
      case 1: b = std::min(a + 1, np - 1); break;
      case 2: b = std::min(a + 2, np - 1); break;
      default: b = pick(rng);
    }
    if (p == 0) a = b = 0;
    if (p == 1) a = b = np - 1;
    auto B0 = coarse_int.pair(a, b), B1 = fine_int.pair(a, b);
    double scale = 0.0, diff = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        scale = std::max(scale, std::abs(B1[i][j]));
        diff = std::max(diff, std::abs(B1[i][j] - B0[i][j]));
      }
    if (scale > 0.0) worst = std::max(worst, diff / scale);
  }
  return worst;
}

VecC assemble_rhs(const GalerkinSpace& space, const TraceData& data) {
  VecC b = VecC::Zero(space.dof_count());
  const auto& g = gauss_legendre(16);
  const double hl = half_len(space);
  for (int a = 0; a < space.panels(); ++a) {
    auto d = space.dofs(a);
    for (std::size_t q = 0; q < g.x.size(); ++q) {
      auto p = space.sample(a, g.x[q]);
      double w = g.w[q] * p.jac;
      switch (space.weight()) {
        case Weight::inv_omega: w /= kPi; break;
        case Weight::omega: w *= hl * hl * p.sin_a * p.sin_a; break;
        case Weight::unit: w *= hl; break;
      }
      cplx u = data(p.pos, space.arc().normal(p.t), p.t);
      for (int i = 0; i < 2; ++i) b(d[i]) += w * u * p.phi[i];
    }
  }
  return b;
}

TraceData plane_wave_trace(double k, double angle) {
  const Vec2 d(std::cos(angle), std::sin(angle));
  return [k, d](const Vec2& x, const Vec2&, double) { return std::exp(cplx(0.0, k * d.dot(x))); };
}

TraceData plane_wave_normal_derivative(double k, double angle) {
  const Vec2 d(std::cos(angle), std::sin(angle));
  return [k, d](const Vec2& x, const Vec2& n, double) {
    return cplx(0.0, k * d.dot(n)) * std::exp(cplx(0.0, k * d.dot(x)));
  };
}

}  // namespace arcbem
