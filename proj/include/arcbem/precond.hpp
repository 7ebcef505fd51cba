#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>

#include "arcbem/assembly.hpp"
#include "arcbem/specfun.hpp"

namespace arcbem {

// square matrix-free map with an application counter and a per-application
// complex multiply-add estimate
class LinearOperator {
 public:
  using Apply = std::function<VecC(const VecC&)>;

  LinearOperator() = default;
  LinearOperator(Eigen::Index n, Apply f, double cost);

  static LinearOperator identity(Eigen::Index n);
  static LinearOperator dense(MatC A);

  VecC operator()(const VecC& v) const;
  Eigen::Index size() const { return n_; }
  double cost() const { return cost_; }
  long applications() const { return count_ ? count_->load() : 0; }
  void reset_count() const {
    if (count_) count_->store(0);
  }

 private:
  Eigen::Index n_ = 0;
  Apply f_;
  double cost_ = 0.0;
  std::shared_ptr<std::atomic<long>> count_;
};

enum class PrecondKind { none, sqrt, sqrt_laplace, standard_sqrt, calderon };
std::string to_string(PrecondKind k);
PrecondKind precond_kind_from_string(const std::string& s);

struct PrecondConfig {
  PrecondKind kind = PrecondKind::sqrt;
  int pade_order = 15;
  double theta = kPi / 3;
  double eps = -1.0;  // negative: 0.05 k^(1/3)
  double eps_for(double k) const { return eps < 0.0 ? 0.05 * std::cbrt(k) : eps; }
};

// M V f(Lambda) V^T M for the pencil (X, M), f(l) = l^exponent, exponent = +-1/2
MatR spectral_power(const SymTridiag& X, const SymTridiag& M, double exponent);

// rational approximation of sqrt(X_op - k^2) where X_op = M^{-1} X
class PadeSqrt {
 public:
  PadeSqrt(const SymTridiag& X, const SymTridiag& M, double k, int order, double theta, double eps);

  // Galerkin matrix of the square root times v: ik (C0 M v + sum A_j X (B_j X - kappa^2 M)^{-1} M v)
  VecC galerkin(const VecC& v) const;
  // M^{-1} [sqrt] M^{-1} v
  VecC operator_form(const VecC& v) const;
  const PadeCoefficients& coefficients() const { return c_; }
  // multiply-adds of one operator_form application
  double cost() const;

 private:
  VecC sum_terms(const VecC& v) const;

  SymTridiag X_, M_;
  double k_;
  cplx kappa2_;
  PadeCoefficients c_;
  TridiagLU mass_;
  std::vector<TridiagLU> terms_;
};

LinearOperator build_dirichlet_preconditioner(const GalerkinSpace& space, double k, const PrecondConfig& cfg = {});
LinearOperator build_neumann_preconditioner(const GalerkinSpace& space, double k, const PrecondConfig& cfg = {});
// sqrt(-(w d)^2 + I) on an inv-omega space
LinearOperator build_laplace_shifted_preconditioner(const GalerkinSpace& space);
// sqrt(-d^2 - k^2) on a unit-weight space, exact through the pencil
LinearOperator build_standard_sqrt_preconditioner(const GalerkinSpace& space, double k);
// inv-omega space: M_w^{-1} [N] M_{1/w}^{-1}; omega space: M_{1/w}^{-1} [S] M_w^{-1}
LinearOperator build_calderon_preconditioner(const GalerkinSpace& space, double k, const AssemblyOptions& opt = {});

// dispatch on cfg.kind for a weighted space (standard spaces use standard_sqrt or none)
LinearOperator build_preconditioner(const GalerkinSpace& space, double k, Side side, const PrecondConfig& cfg);

}  // namespace arcbem
