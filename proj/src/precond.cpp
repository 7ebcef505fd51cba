#include "arcbem/precond.hpp"

#include <cmath>

namespace arcbem {

LinearOperator::LinearOperator(Eigen::Index n, Apply f, double cost)
    : n_(n), f_(std::move(f)), cost_(cost), count_(std::make_shared<std::atomic<long>>(0)) {}

LinearOperator LinearOperator::identity(Eigen::Index n) {
  return LinearOperator(n, [](const VecC& v) { return v; }, 0.0);
}

LinearOperator LinearOperator::dense(MatC A) {
  if (A.rows() != A.cols()) throw ConfigError("dense operator must be square");
  auto M = std::make_shared<const MatC>(std::move(A));
  const Eigen::Index n = M->rows();
  return LinearOperator(n, [M](const VecC& v) { return VecC(*M * v); }, double(n) * double(n));
}

VecC LinearOperator::operator()(const VecC& v) const {
  if (!f_) return v;
  if (v.size() != n_) throw ConfigError("operator applied to a vector of the wrong size");
  count_->fetch_add(1);
  return f_(v);
}

std::string to_string(PrecondKind k) {
  switch (k) {
    case PrecondKind::none: return "none";
    case PrecondKind::sqrt: return "sqrt";
    case PrecondKind::sqrt_laplace: return "sqrt-laplace";
    case PrecondKind::standard_sqrt: return "standard-sqrt";
    case PrecondKind::calderon: return "calderon";
  }
  return "none";
}

PrecondKind precond_kind_from_string(const std::string& s) {
  for (auto k : {PrecondKind::none, PrecondKind::sqrt, PrecondKind::sqrt_laplace, PrecondKind::standard_sqrt,
                 PrecondKind::calderon})
    if (to_string(k) == s) return k;
  throw ConfigError("unknown preconditioner type: " + s);
}

namespace {

PencilEigen checked_pencil(const SymTridiag& X, const SymTridiag& M) {
  PencilEigen E = pencil_eigen(X, M);
  const double scale = std::max(1.0, std::abs(E.lambda(E.lambda.size() - 1)));
  if (E.lambda(0) < -1e-10 * scale)
    throw NumericalError("square-root argument has a negative eigenvalue " + std::to_string(E.lambda(0)));
  return E;
}

// v -> V diag(f) V^T v + c e e^T v, V real
LinearOperator spectral_operator(const MatR& V, const VecC& f, double c) {
  auto Vp = std::make_shared<const MatR>(V);
  auto fp = std::make_shared<const VecC>(f);
  const Eigen::Index n = V.rows();
  return LinearOperator(
      n,
      [Vp, fp, c](const VecC& v) {
        const MatR& W = *Vp;
        VecR re = W.transpose() * v.real(), im = W.transpose() * v.imag();
        VecC y = fp->cwiseProduct(VecC(re.cast<cplx>() + cplx(0.0, 1.0) * im.cast<cplx>()));
        VecR yr = W * y.real(), yi = W * y.imag();
        VecC out = yr.cast<cplx>() + cplx(0.0, 1.0) * yi.cast<cplx>();
        if (c != 0.0) out.array() += c * v.sum();
        return out;
      },
      2.0 * double(n) * double(n));
}

double tri_solve_cost(Eigen::Index n) { return 5.0 * n; }
double tri_apply_cost(Eigen::Index n) { return 3.0 * n; }

GalerkinSpace partner_space(const GalerkinSpace& s, Weight w) {
  return GalerkinSpace(s.arc(), s.mesh(), Continuity::continuous, w, true);
}

LinearOperator mass_sandwich(const GalerkinSpace& left, MatC A, const GalerkinSpace& right) {
  auto ML = std::make_shared<const TridiagLU>(assemble_mass(left));
  auto MR = std::make_shared<const TridiagLU>(assemble_mass(right));
  auto D = std::make_shared<const MatC>(std::move(A));
  const Eigen::Index n = D->rows();
  return LinearOperator(
      n, [ML, MR, D](const VecC& v) { return ML->solve(*D * MR->solve(v)); },
      double(n) * double(n) + 2.0 * tri_solve_cost(n));
}

}  // namespace

MatR spectral_power(const SymTridiag& X, const SymTridiag& M, double exponent) {
  if (exponent != 0.5 && exponent != -0.5) throw ConfigError("spectral square root supports exponents +-1/2");
  PencilEigen E = checked_pencil(X, M);
  VecR f(E.lambda.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double l = std::max(E.lambda(i), 0.0);
    if (exponent > 0) {
      f(i) = std::sqrt(l);
    } else {
      if (l <= 0.0) throw NumericalError("inverse square root of a singular pencil");
      f(i) = 1.0 / std::sqrt(l);
    }
  }
  MatR MV = M.dense() * E.V;
  return MV * f.asDiagonal() * MV.transpose();
}

PadeSqrt::PadeSqrt(const SymTridiag& X, const SymTridiag& M, double k, int order, double theta, double eps)
    : X_(X), M_(M), k_(k), c_(pade_coefficients(order, theta)), mass_(M) {
  if (!(k > 0.0)) throw ConfigError("rational square root needs k > 0");
  if (eps < 0.0) throw ConfigError("damping must be nonnegative");
  const cplx kappa(k, eps);
  kappa2_ = kappa * kappa;
  terms_.reserve(order);
  for (int j = 0; j < order; ++j) terms_.emplace_back(X_, c_.B[j], M_, -kappa2_);
}

VecC PadeSqrt::sum_terms(const VecC& v) const {
  VecC w = VecC::Zero(v.size());
  for (std::size_t j = 0; j < terms_.size(); ++j) w += c_.A[j] * terms_[j].solve(v);
  return w;
}

VecC PadeSqrt::galerkin(const VecC& v) const {
  const VecC Mv = M_.apply(v);
  return cplx(0.0, k_) * (c_.C0 * Mv + X_.apply(sum_terms(Mv)));
}

VecC PadeSqrt::operator_form(const VecC& v) const {
  VecC y = c_.C0 * v + X_.apply(sum_terms(v));
  mass_.solve_in_place(y);
  return cplx(0.0, k_) * y;
}

double PadeSqrt::cost() const {
  const Eigen::Index n = M_.size();
  return terms_.size() * (tri_solve_cost(n) + n) + tri_apply_cost(n) + tri_solve_cost(n) + 2.0 * n;
}

LinearOperator build_dirichlet_preconditioner(const GalerkinSpace& space, double k, const PrecondConfig& cfg) {
  if (space.weight() != Weight::inv_omega) throw ConfigError("Dirichlet preconditioner needs an inv-omega space");
  SymTridiag M = assemble_mass(space);
  SymTridiag X = assemble_sqrt_argument(space, k, Side::dirichlet);
  const Eigen::Index n = M.size();
  if (k == 0.0) {
    PencilEigen E = checked_pencil(X, M);
    VecR f = 2.0 * E.lambda.cwiseMax(0.0).cwiseSqrt();
    // pi_0 term: M^{-1} r r^T M^{-1} = e e^T
    return spectral_operator(E.V, f.cast<cplx>(), 2.0 / std::log(2.0));
  }
  auto P = std::make_shared<const PadeSqrt>(X, M, k, cfg.pade_order, cfg.theta, cfg.eps_for(k));
  return LinearOperator(n, [P](const VecC& v) { return P->operator_form(v); }, P->cost());
}

LinearOperator build_neumann_preconditioner(const GalerkinSpace& space, double k, const PrecondConfig& cfg) {
  if (space.weight() != Weight::omega) throw ConfigError("Neumann preconditioner needs an omega space");
  SymTridiag M = assemble_mass(space);
  SymTridiag X = assemble_sqrt_argument(space, k, Side::neumann);
  const Eigen::Index n = M.size();
  if (k == 0.0) {
    PencilEigen E = checked_pencil(X, M);
    if (!(E.lambda(0) > 0.0)) throw NumericalError("Neumann square-root argument is singular");
    VecR f = 2.0 * E.lambda.cwiseSqrt().cwiseInverse();
    return spectral_operator(E.V, f.cast<cplx>(), 0.0);
  }
  PadeSqrt P(X, M, k, cfg.pade_order, cfg.theta, cfg.eps_for(k));
  MatC C(n, n);
  for (Eigen::Index j = 0; j < n; ++j) C.col(j) = P.galerkin(VecC::Unit(n, j));
  auto lu = std::make_shared<const DenseLU>(std::move(C));
  if (lu->rcond() < 1e-14)
    throw NumericalError("Neumann square-root matrix is near singular, rcond " + std::to_string(lu->rcond()));
  return LinearOperator(n, [lu](const VecC& v) { return lu->solve(v); }, double(n) * double(n));
}

LinearOperator build_laplace_shifted_preconditioner(const GalerkinSpace& space) {
  if (space.weight() != Weight::inv_omega) throw ConfigError("shifted Laplace square root needs an inv-omega space");
  SymTridiag M = assemble_mass(space);
  PencilEigen E = checked_pencil(assemble_sqrt_argument(space, 0.0, Side::dirichlet), M);
  VecR f = (E.lambda.cwiseMax(0.0).array() + 1.0).sqrt().matrix();
  return spectral_operator(E.V, f.cast<cplx>(), 0.0);
}

LinearOperator build_standard_sqrt_preconditioner(const GalerkinSpace& space, double k) {
  if (space.weight() != Weight::unit) throw ConfigError("standard square root needs a unit-weight space");
  SymTridiag M = assemble_mass(space);
  PencilEigen E = checked_pencil(assemble_stiffness_standard(space), M);
  VecC f(E.lambda.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double l = std::max(E.lambda(i), 0.0);
    f(i) = k > 0.0 ? cplx(0.0, k) * std::sqrt(cplx(1.0 - l / (k * k), 0.0)) : cplx(std::sqrt(l), 0.0);
  }
  return spectral_operator(E.V, f, 0.0);
}

LinearOperator build_calderon_preconditioner(const GalerkinSpace& space, double k, const AssemblyOptions& opt) {
  if (!space.graded() || space.continuity() != Continuity::continuous)
    throw ConfigError("Calderon preconditioner needs a continuous graded space");
  if (space.weight() == Weight::inv_omega) {
    GalerkinSpace w = partner_space(space, Weight::omega);
    return mass_sandwich(w, assemble_hypersingular_weighted(w, k, opt), space);
  }
  if (space.weight() == Weight::omega) {
    GalerkinSpace w = partner_space(space, Weight::inv_omega);
    return mass_sandwich(w, assemble_single_layer_weighted(w, k, opt), space);
  }
  throw ConfigError("Calderon preconditioner needs a weighted space");
}

LinearOperator build_preconditioner(const GalerkinSpace& space, double k, Side side, const PrecondConfig& cfg) {
  switch (cfg.kind) {
    case PrecondKind::none: return LinearOperator::identity(space.dof_count());
    case PrecondKind::sqrt:
      return side == Side::dirichlet ? build_dirichlet_preconditioner(space, k, cfg)
                                     : build_neumann_preconditioner(space, k, cfg);
    case PrecondKind::sqrt_laplace:
      if (side != Side::dirichlet) throw ConfigError("sqrt-laplace is a Dirichlet preconditioner");
      return build_laplace_shifted_preconditioner(space);
    case PrecondKind::standard_sqrt: return build_standard_sqrt_preconditioner(space, k);
    case PrecondKind::calderon: return build_calderon_preconditioner(space, k);
  }
  throw ConfigError("unknown preconditioner type");
}

}  // namespace arcbem
