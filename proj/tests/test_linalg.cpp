#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <random>

#include "arcbem/linalg.hpp"

using namespace arcbem;

namespace {

SymTridiag random_pencil_part(int n, std::mt19937& rng, double shift) {
  std::uniform_real_distribution<double> u(-1, 1);
  SymTridiag T(n);
  for (int i = 0; i < n; ++i) T.diag(i) = shift + u(rng);
  for (int i = 0; i + 1 < n; ++i) T.off(i) = 0.3 * u(rng);
  return T;
}

}  // namespace

TEST_CASE("pencil eigendecomposition against the dense generalized solver") {
  std::mt19937 rng(7);
  const int n = 40;
  SymTridiag X = random_pencil_part(n, rng, 0.0), M = random_pencil_part(n, rng, 2.0);
  auto pe = pencil_eigen(X, M);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatR> ref(X.dense(), M.dense());
  for (int i = 0; i < n; ++i) CHECK(std::abs(pe.lambda(i) - ref.eigenvalues()(i)) < 1e-12);
  MatR G = pe.V.transpose() * M.dense() * pe.V;
  CHECK((G - MatR::Identity(n, n)).norm() < 1e-12);
  MatR R = X.dense() * pe.V - M.dense() * pe.V * pe.lambda.asDiagonal();
  CHECK(R.norm() < 1e-11);
  VecR ev = pencil_eigenvalues(X, M);
  CHECK((ev - pe.lambda).norm() < 1e-12);
}

TEST_CASE("tridiagonal LU with complex shift") {
  std::mt19937 rng(3);
  const int n = 30;
  SymTridiag X = random_pencil_part(n, rng, 0.0), M = random_pencil_part(n, rng, 2.0);
  cplx a(0.3, -0.2), b(-1.5, 0.7);
  TridiagLU lu(X, a, M, b);
  VecC v = VecC::Random(n);
  VecC x = lu.solve(v);
  VecC r = a * X.apply(x) + b * M.apply(x) - v;
  CHECK(r.norm() < 1e-12 * v.norm());
  MatC D = a * X.dense().cast<cplx>() + b * M.dense().cast<cplx>();
  CHECK((D * x - v).norm() < 1e-12);
}

TEST_CASE("dense LU") {
  const int n = 25;
  MatC A = MatC::Random(n, n) + 5.0 * MatC::Identity(n, n);
  DenseLU lu(A);
  VecC b = VecC::Random(n);
  CHECK((A * lu.solve(b) - b).norm() < 1e-12);
  CHECK(lu.rcond() > 0.0);
  CHECK_THROWS_AS(DenseLU(MatC::Zero(3, 3)), NumericalError);
}
