#pragma once

#include <array>
#include <functional>

#include "arcbem/geometry.hpp"
#include "arcbem/linalg.hpp"

namespace arcbem {

enum class Continuity { continuous, discontinuous };
enum class Weight { inv_omega, omega, unit };
enum class Side { dirichlet, neumann };

// one evaluation point on a panel, local coordinate x in [0,1]
struct PanelPoint {
  double t = 0.0;
  double alpha = 0.0;  // t = -cos(alpha); only meaningful on graded spaces
  double sin_a = 0.0, cos_a = 0.0;
  double phi[2] = {0.0, 0.0};
  double dphi[2] = {0.0, 0.0};  // d/dt
  double jac = 0.0;             // d(alpha)/dx on graded spaces, dt/dx otherwise
  Vec2 pos;
};

class GalerkinSpace {
 public:
  GalerkinSpace(Arc arc, GradedMesh mesh, Continuity c, Weight w, bool graded);

  const Arc& arc() const { return arc_; }
  const GradedMesh& mesh() const { return mesh_; }
  Continuity continuity() const { return continuity_; }
  Weight weight() const { return weight_; }
  // true when breakpoints are t_i = -cos(i pi/N) and panels are parametrized by alpha
  bool graded() const { return graded_; }

  int panels() const { return mesh_.panels(); }
  int dof_count() const;
  std::array<int, 2> dofs(int panel) const;
  double step() const { return h_; }

  PanelPoint sample(int panel, double x) const;
  // panel extent in the quadrature coordinate (alpha or t)
  double coord_lo(int panel) const;
  double coord_hi(int panel) const;

  // nodal interpolant of f(t); continuous spaces only use node values
  VecC interpolate(const std::function<cplx(double)>& f) const;
  // value of sum_i c_i phi_i at parameter t
  cplx evaluate(const VecC& c, double t) const;

 private:
  Arc arc_;
  GradedMesh mesh_;
  Continuity continuity_;
  Weight weight_;
  bool graded_;
  double h_ = 0.0;
};

// graded space t_i = -cos(i pi / N); weight inv_omega (Dirichlet) or omega (Neumann)
GalerkinSpace make_weighted_space(const Arc& arc, int N, Weight w, Continuity c = Continuity::continuous);
// unit-weight continuous P1 on a beta-graded mesh
GalerkinSpace make_standard_space(const Arc& arc, int N, double beta);

struct AssemblyOptions {
  int far_order = 8;
  int far_order_distant = 4;   // used when gap >= distant_ratio * panel width
  double distant_ratio = 8.0;
  int near_order = 20;
  int grading = 5;
};

SymTridiag assemble_mass(const GalerkinSpace& space);
// argument of the square root, X = -(w d)^2 + k^2 (1 - w^2) or -(d w)^2 + k^2 (1 - w^2)
SymTridiag assemble_sqrt_argument(const GalerkinSpace& space, double k, Side side);
// standard space: stiffness int dtau phi_i dtau phi_j dsigma
SymTridiag assemble_stiffness_standard(const GalerkinSpace& space);

MatC assemble_single_layer_weighted(const GalerkinSpace& space, double k, const AssemblyOptions& opt = {});
MatC assemble_hypersingular_weighted(const GalerkinSpace& space, double k, const AssemblyOptions& opt = {});
MatC assemble_single_layer_standard(const GalerkinSpace& space, double k, const AssemblyOptions& opt = {});

// max relative difference between default and refined quadrature on `pairs` panel pairs
double quadrature_self_check(const GalerkinSpace& space, double k, Side side, int pairs);

using TraceData = std::function<cplx(const Vec2& point, const Vec2& normal, double t)>;
VecC assemble_rhs(const GalerkinSpace& space, const TraceData& data);

TraceData plane_wave_trace(double k, double angle);
TraceData plane_wave_normal_derivative(double k, double angle);

}  // namespace arcbem
