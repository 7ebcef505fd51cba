#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "arcbem/precond.hpp"

using namespace arcbem;

namespace {

VecC random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  VecC v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(d(rng), d(rng));
  return v;
}

MatC as_matrix(const LinearOperator& op) {
  const Eigen::Index n = op.size();
  MatC A(n, n);
  for (Eigen::Index j = 0; j < n; ++j) A.col(j) = op(VecC::Unit(n, j));
  return A;
}

// fraction of eigenvalues of A within distance r of z
double clustered(const MatC& A, cplx z, double r) {
  Eigen::ComplexEigenSolver<MatC> es(A, false);
  const auto& ev = es.eigenvalues();
  int in = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) in += std::abs(ev(i) - z) < r;
  return double(in) / ev.size();
}

}  // namespace

TEST_CASE("spectral power of the identity pencil") {
  SymTridiag M(6);
  for (int i = 0; i < 6; ++i) M.diag(i) = 2.0 + 0.1 * i;
  for (int i = 0; i < 5; ++i) M.off(i) = 0.3;
  for (double e : {0.5, -0.5}) CHECK((spectral_power(M, M, e) - M.dense()).cwiseAbs().maxCoeff() < 1e-12);
  // square of the square root recovers X through M^{-1}
  SymTridiag X(6);
  for (int i = 0; i < 6; ++i) X.diag(i) = 4.0 + i;
  for (int i = 0; i < 5; ++i) X.off(i) = -1.0;
  MatR S = spectral_power(X, M, 0.5), Md = M.dense();
  CHECK((S * Md.inverse() * S - X.dense()).cwiseAbs().maxCoeff() < 1e-10);
  X.diag(0) = -40.0;
  CHECK_THROWS_AS(spectral_power(X, M, 0.5), NumericalError);
}

TEST_CASE("rational square root reduces to the scalar formula") {
  const double k = 3.0, m = 0.7;
  for (double x : {0.5, 4.0, 30.0, 200.0}) {
    SymTridiag X(1), M(1);
    X.diag(0) = x * m;
    M.diag(0) = m;
    PadeSqrt P(X, M, k, 15, kPi / 3, 0.0);
    VecC one = VecC::Ones(1);
    cplx ref = cplx(0.0, k) * pade_sqrt_scalar(-x / (k * k), P.coefficients()) * m;
    CHECK(std::abs(P.galerkin(one)(0) - ref) < 1e-12 * std::abs(ref));
    CHECK(std::abs(P.operator_form(one)(0) - ref / (m * m)) < 1e-12 * std::abs(ref / (m * m)));
  }
}

TEST_CASE("rational square root on pencil eigenvectors") {
  const double k = 2 * kPi;
  auto s = make_weighted_space(make_flat(), 1024, Weight::inv_omega);
  SymTridiag M = assemble_mass(s), X = assemble_sqrt_argument(s, k, Side::dirichlet);
  PencilEigen E = pencil_eigen(X, M);
  PadeSqrt P(X, M, k, 15, kPi / 3, 0.0);
  for (int n : {0, 3, 10, 20}) {
    VecC v = E.V.col(n).cast<cplx>();
    cplx lam = cplx(0.0, k) * rotated_sqrt(-E.lambda(n) / (k * k), kPi / 3);
    VecC ref = lam * M.apply(v);
    CHECK((P.galerkin(v) - ref).norm() < 1e-3 * ref.norm());
  }
  // n = 10 is evanescent: the displayed formula carries the -sqrt branch
  double l10 = E.lambda(10) - k * k;
  CHECK(l10 > 0.0);
  VecC v = E.V.col(10).cast<cplx>();
  cplx ratio = v.dot(P.galerkin(v)) / v.dot(M.apply(v));
  CHECK(std::abs(ratio + std::sqrt(l10)) < 1e-3 * std::sqrt(l10));
}

TEST_CASE("preconditioners are linear and bounded") {
  const double k = 40.0;
  auto s = make_weighted_space(make_flat(), 200, Weight::inv_omega);
  auto D = build_dirichlet_preconditioner(s, k);
  VecC u = random_vector(D.size(), 1), v = random_vector(D.size(), 2);
  cplx a(0.3, -1.2), b(2.0, 0.5);
  VecC lhs = D(a * u + b * v), rhs = a * D(u) + b * D(v);
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  SymTridiag M = assemble_mass(s), X = assemble_sqrt_argument(s, k, Side::dirichlet);
  PadeSqrt P(X, M, k, 15, kPi / 3, PrecondConfig{}.eps_for(k));
  CHECK(P.galerkin(u).norm() <= 2.0 * k * 200 * u.norm());
  CHECK(D.applications() == 3);
  auto Z = build_dirichlet_preconditioner(s, k);
  CHECK(Z(u) == D(u));
  CHECK(build_preconditioner(s, k, Side::dirichlet, {PrecondKind::none}).cost() == 0.0);
  CHECK(D.cost() < 200.0 * 201.0);
}

TEST_CASE("Neumann preconditioner inverts the square-root matrix") {
  const double k = 25.0;
  auto s = make_weighted_space(make_flat(), 120, Weight::omega);
  SymTridiag M = assemble_mass(s), X = assemble_sqrt_argument(s, k, Side::neumann);
  PrecondConfig cfg;
  PadeSqrt P(X, M, k, cfg.pade_order, cfg.theta, cfg.eps_for(k));
  auto Q = build_neumann_preconditioner(s, k, cfg);
  VecC v = random_vector(Q.size(), 3);
  CHECK((Q(P.galerkin(v)) - v).norm() < 1e-8 * v.norm());
}

TEST_CASE("exact inverses at k = 0 cluster the spectrum at one") {
  const int N = 512;
  auto d = make_weighted_space(make_flat(), N, Weight::inv_omega);
  MatC Sd = assemble_single_layer_weighted(d, 0.0);
  MatC PD = as_matrix(build_dirichlet_preconditioner(d, 0.0)) * Sd;
  Eigen::ComplexEigenSolver<MatC> es(PD, false);
  CHECK(es.eigenvalues().real().minCoeff() > 0.99);
  CHECK(es.eigenvalues().real().maxCoeff() < 1.15);
  CHECK(es.eigenvalues().imag().cwiseAbs().maxCoeff() < 1e-8);
  CHECK(clustered(PD, 1.0, 0.1) >= 0.55);
  // smooth modes are mapped to themselves
  SymTridiag M = assemble_mass(d);
  PencilEigen E = pencil_eigen(assemble_sqrt_argument(d, 0.0, Side::dirichlet), M);
  MatC V = E.V.leftCols(N / 4).cast<cplx>();
  CHECK((PD * V - V).norm() < 0.05 * V.norm());
  auto n = make_weighted_space(make_flat(), N, Weight::omega);
  MatC Nn = assemble_hypersingular_weighted(n, 0.0);
  MatC PN = as_matrix(build_neumann_preconditioner(n, 0.0)) * Nn;
  CHECK(clustered(PN, 1.0, 0.15) >= 0.55);
}

TEST_CASE("second-kind clustering at k > 0") {
  const double L = 2.0, k = 20 * kPi / L;
  // five points per wavelength
  const int N = int(std::lround(5.0 * k * L));
  auto d = make_weighted_space(make_flat(), N, Weight::inv_omega);
  MatC S = assemble_single_layer_weighted(d, k);
  MatC P = as_matrix(build_dirichlet_preconditioner(d, k)) * S;
  // the displayed rational formula approximates -P_k, so the cluster sits at -1
  CHECK(clustered(-2.0 * P, 1.0, 0.3) >= 0.8);
}

TEST_CASE("comparison preconditioners") {
  auto d = make_weighted_space(make_flat(), 64, Weight::inv_omega);
  auto none = build_preconditioner(d, 5.0, Side::dirichlet, {PrecondKind::none});
  VecC u = random_vector(65, 4);
  CHECK(none(u) == u);
  auto lap = build_laplace_shifted_preconditioner(d);
  CHECK(lap.size() == 65);
  // shifted square root is symmetric positive definite
  MatC L = as_matrix(lap);
  CHECK((L - L.transpose()).cwiseAbs().maxCoeff() < 1e-10 * L.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<MatR> es(L.real());
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  auto st = make_standard_space(make_flat(), 64, 2.0);
  auto Pk = build_standard_sqrt_preconditioner(st, 5.0);
  CHECK(Pk.size() == 65);
  CHECK_THROWS_AS(build_standard_sqrt_preconditioner(d, 5.0), ConfigError);

  auto cal = build_calderon_preconditioner(d, 5.0);
  CHECK(cal.cost() > 65.0 * 65.0);
  auto n = make_weighted_space(make_flat(), 64, Weight::omega);
  CHECK(build_calderon_preconditioner(n, 5.0).size() == 65);
  CHECK(precond_kind_from_string("sqrt-laplace") == PrecondKind::sqrt_laplace);
  CHECK_THROWS_AS(precond_kind_from_string("bogus"), ConfigError);
}

TEST_CASE("Calderon product clusters away from zero") {
  const double k = 10.0;
  auto d = make_weighted_space(make_flat(), 128, Weight::inv_omega);
  MatC S = assemble_single_layer_weighted(d, k);
  MatC P = as_matrix(build_calderon_preconditioner(d, k)) * S;
  // N_w S_w = I/4 + compact for the positive hypersingular form
  CHECK(clustered(P, 0.25, 0.05) >= 0.8);
}
