#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/LU>
#include <random>

#include "arcbem/krylov.hpp"

using namespace arcbem;

namespace {

MatC random_matrix(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d;
  MatC A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cplx(d(rng), d(rng));
  return A;
}

bool monotone(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1] * (1.0 + 1e-12)) return false;
  return true;
}

}  // namespace

TEST_CASE("identity system") {
  VecC b = random_matrix(7, 1).col(0);
  auto r = gmres(LinearOperator::identity(7), b, LinearOperator::identity(7));
  CHECK(r.report.iterations == 1);
  CHECK(r.report.converged);
  CHECK(r.report.history.back() == 0.0);
  CHECK((r.x - b).norm() < 1e-15 * b.norm());
}

TEST_CASE("two by two diagonal") {
  MatC A = MatC::Zero(2, 2);
  A(0, 0) = 1.0;
  A(1, 1) = 2.0;
  VecC b(2);
  b << 1.0, 1.0;
  auto r = gmres(LinearOperator::dense(A), b, LinearOperator::identity(2));
  CHECK(r.report.converged);
  CHECK(r.report.iterations <= 2);
  CHECK(std::abs(r.x(1) - 0.5) < 1e-12);
}

TEST_CASE("exact preconditioner") {
  MatR R = random_matrix(50, 3).real();
  MatC A = (R * R.transpose() + 50.0 * MatR::Identity(50, 50)).cast<cplx>();
  MatC Ainv = A.inverse();
  VecC b = random_matrix(50, 4).col(0);
  auto r = gmres(LinearOperator::dense(A), b, LinearOperator::dense(Ainv), {1e-12, 500, false});
  CHECK(r.report.iterations == 1);
  CHECK(r.report.converged);
  CHECK((A * r.x - b).norm() < 1e-12 * b.norm());
}

TEST_CASE("nonsymmetric complex system: history, true residual, determinism") {
  const int n = 120;
  MatC A = random_matrix(n, 5) / std::sqrt(double(n)) + 3.0 * MatC::Identity(n, n);
  VecC b = random_matrix(n, 6).col(0);
  GmresOptions opt;
  opt.track_true_residual = true;
  auto r = gmres(LinearOperator::dense(A), b, LinearOperator::identity(n), opt);
  CHECK(r.report.converged);
  CHECK(monotone(r.report.history));
  CHECK(r.report.history.size() == std::size_t(r.report.iterations + 1));
  CHECK(r.report.true_history.size() == r.report.history.size());
  CHECK(r.report.true_residual <= 100 * opt.tol);
  CHECK(r.report.history.back() <= opt.tol);
  // unpreconditioned: true and recorded residuals coincide
  for (std::size_t i = 0; i < r.report.history.size(); ++i)
    CHECK(std::abs(r.report.history[i] - r.report.true_history[i]) < 1e-9);
  auto r2 = gmres(LinearOperator::dense(A), b, LinearOperator::identity(n), opt);
  CHECK(r2.report.history == r.report.history);
}

TEST_CASE("iteration cap and zero right-hand side") {
  const int n = 60;
  MatC A = random_matrix(n, 8);
  VecC b = random_matrix(n, 9).col(0);
  auto r = gmres(LinearOperator::dense(A), b, LinearOperator::identity(n), {1e-8, 10, false});
  CHECK_FALSE(r.report.converged);
  CHECK(r.report.iterations == 10);
  CHECK(monotone(r.report.history));
  auto z = gmres(LinearOperator::dense(A), VecC::Zero(n), LinearOperator::identity(n));
  CHECK(z.report.iterations == 0);
  CHECK(z.report.converged);
  CHECK(z.x.norm() == 0.0);
}

TEST_CASE("operator counters") {
  MatC A = MatC::Identity(5, 5);
  auto op = LinearOperator::dense(A);
  CHECK(op.cost() == 25.0);
  op(VecC::Ones(5));
  op(VecC::Ones(5));
  CHECK(op.applications() == 2);
  op.reset_count();
  CHECK(op.applications() == 0);
  CHECK_THROWS_AS(op(VecC::Ones(4)), ConfigError);
}
