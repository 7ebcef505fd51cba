#include "arcbem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

extern "C" {
void zgttrf_(const int* n, std::complex<double>* dl, std::complex<double>* d, std::complex<double>* du,
             std::complex<double>* du2, int* ipiv, int* info);
void zgttrs_(const char* trans, const int* n, const int* nrhs, const std::complex<double>* dl,
             const std::complex<double>* d, const std::complex<double>* du, const std::complex<double>* du2,
             const int* ipiv, std::complex<double>* b, const int* ldb, int* info);
void dsbgvd_(const char* jobz, const char* uplo, const int* n, const int* ka, const int* kb, double* ab,
             const int* ldab, double* bb, const int* ldbb, double* w, double* z, const int* ldz, double* work,
             const int* lwork, int* iwork, const int* liwork, int* info);
void dgttrf_(const int* n, double* dl, double* d, double* du, double* du2, int* ipiv, int* info);
void dgttrs_(const char* trans, const int* n, const int* nrhs, const double* dl, const double* d, const double* du,
             const double* du2, const int* ipiv, double* b, const int* ldb, int* info);
void zgetrf_(const int* m, const int* n, std::complex<double>* a, const int* lda, int* ipiv, int* info);
void zgetrs_(const char* trans, const int* n, const int* nrhs, const std::complex<double>* a, const int* lda,
             const int* ipiv, std::complex<double>* b, const int* ldb, int* info);
void zgecon_(const char* norm, const int* n, const std::complex<double>* a, const int* lda, const double* anorm,
             double* rcond, std::complex<double>* work, double* rwork, int* info);
}

namespace arcbem {

VecC SymTridiag::apply(const VecC& v) const {
  const Eigen::Index n = size();
  VecC r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx s = diag(i) * v(i);
    if (i > 0) s += off(i - 1) * v(i - 1);
    if (i + 1 < n) s += off(i) * v(i + 1);
    r(i) = s;
  }
  return r;
}

VecR SymTridiag::apply(const VecR& v) const {
  const Eigen::Index n = size();
  VecR r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = diag(i) * v(i);
    if (i > 0) s += off(i - 1) * v(i - 1);
    if (i + 1 < n) s += off(i) * v(i + 1);
    r(i) = s;
  }
  return r;
}

MatR SymTridiag::dense() const {
  const Eigen::Index n = size();
  MatR A = MatR::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) A(i, i) = diag(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = off(i);
  return A;
}

SymTridiag SymTridiag::scaled_sum(double a, const SymTridiag& other, double b) const {
  SymTridiag r;
  r.diag = a * diag + b * other.diag;
  r.off = a * off + b * other.off;
  return r;
}

TridiagLU::TridiagLU(const SymTridiag& X, cplx a, const SymTridiag& M, cplx b) {
  n_ = static_cast<int>(X.size());
  d_.resize(n_);
  dl_.resize(std::max(n_ - 1, 0));
  du_.resize(std::max(n_ - 1, 0));
  du2_.resize(std::max(n_ - 2, 0));
  ipiv_.resize(n_);
  for (int i = 0; i < n_; ++i) d_[i] = a * X.diag(i) + b * M.diag(i);
  for (int i = 0; i + 1 < n_; ++i) dl_[i] = du_[i] = a * X.off(i) + b * M.off(i);
  int info = 0;
  zgttrf_(&n_, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data(), &info);
  if (info != 0)
    throw NumericalError("tridiagonal factorization failed (exactly singular pivot " + std::to_string(info) + ")");
}

void TridiagLU::solve_in_place(VecC& v) const {
  if (v.size() != n_) throw NumericalError("tridiagonal solve: size mismatch");
  const char tr = 'N';
  const int one = 1;
  int info = 0;
  zgttrs_(&tr, &n_, &one, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data(), v.data(), &n_, &info);
  if (info != 0) throw NumericalError("tridiagonal solve failed");
}

namespace {

PencilEigen pencil_values(const SymTridiag& X, const SymTridiag& M) {
  const int n = static_cast<int>(X.size());
  if (M.size() != n) throw NumericalError("pencil_eigen: size mismatch");
  const int ka = 1, kb = 1, ld = 2;
  // upper band storage: row 0 superdiagonal, row 1 diagonal
  std::vector<double> ab(2 * n, 0.0), bb(2 * n, 0.0);
  for (int j = 0; j < n; ++j) {
    ab[2 * j + 1] = X.diag(j);
    bb[2 * j + 1] = M.diag(j);
    if (j > 0) {
      ab[2 * j] = X.off(j - 1);
      bb[2 * j] = M.off(j - 1);
    }
  }
  PencilEigen out;
  out.lambda.resize(n);
  const char uplo = 'U';
  const int ldz = 1;
  int info = 0, lwork = -1, liwork = -1, iwq = 0;
  double wq = 0.0;
  const char jobz = 'N';
  dsbgvd_(&jobz, &uplo, &n, &ka, &kb, ab.data(), &ld, bb.data(), &ld, out.lambda.data(), nullptr, &ldz, &wq, &lwork,
          &iwq, &liwork, &info);
  lwork = std::max(static_cast<int>(wq), 2 * n);
  liwork = std::max(iwq, 1);
  std::vector<double> work(lwork);
  std::vector<int> iwork(liwork);
  dsbgvd_(&jobz, &uplo, &n, &ka, &kb, ab.data(), &ld, bb.data(), &ld, out.lambda.data(), nullptr, &ldz, work.data(),
          &lwork, iwork.data(), &liwork, &info);
  if (info != 0) {
    if (info > n) throw NumericalError("pencil_eigen: mass matrix is not positive definite");
    throw NumericalError("pencil_eigen: eigensolver did not converge");
  }
  return out;
}

// shifted inverse iteration on (X - s M), M-orthogonalized inside eigenvalue clusters
void inverse_iteration(const SymTridiag& X, const SymTridiag& M, PencilEigen& E) {
  const int n = static_cast<int>(X.size());
  E.V.resize(n, n);
  const double scale = std::max({std::abs(E.lambda(0)), std::abs(E.lambda(n - 1)), 1e-300});
  const double cluster = 1e-7 * scale;
  std::vector<double> dl(n), d(n), du(n), du2(n);
  std::vector<int> ipiv(n);
  VecR start(n);
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int i = 0; i < n; ++i) start(i) = u(rng);
  int first = 0;  // first index of the current cluster
  for (int j = 0; j < n; ++j) {
    if (j > 0 && E.lambda(j) - E.lambda(j - 1) > cluster) first = j;
    // nudge the shift off the eigenvalue so the factorization stays finite
    double shift = E.lambda(j) + 4.0 * std::numeric_limits<double>::epsilon() * scale * (j - first + 1);
    for (int i = 0; i < n; ++i) {
      d[i] = X.diag(i) - shift * M.diag(i);
      if (i + 1 < n) dl[i] = du[i] = X.off(i) - shift * M.off(i);
    }
    int info = 0;
    dgttrf_(&n, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(), &info);
    if (info < 0) throw NumericalError("pencil inverse iteration: factorization failed");
    for (int i = 0; i < n; ++i)
      if (d[i] == 0.0) d[i] = std::numeric_limits<double>::epsilon() * scale;
    VecR v = start;
    for (int it = 0; it < 3; ++it) {
      VecR y = M.apply(v);
      const char tr = 'N';
      const int one = 1;
      dgttrs_(&tr, &n, &one, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(), y.data(), &n, &info);
      for (int p = 0; p < 2 && first < j; ++p) {
        const VecR My = M.apply(y);
        VecR c = E.V.middleCols(first, j - first).transpose() * My;
        y -= E.V.middleCols(first, j - first) * c;
      }
      v = y / std::sqrt(y.dot(M.apply(y)));
    }
    // deterministic sign: largest entry positive
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0) v = -v;
    E.V.col(j) = v;
  }
}

}  // namespace

PencilEigen pencil_eigen(const SymTridiag& X, const SymTridiag& M) {
  PencilEigen E = pencil_values(X, M);
  if (X.size() > 0) inverse_iteration(X, M, E);
  return E;
}

VecR pencil_eigenvalues(const SymTridiag& X, const SymTridiag& M) { return pencil_values(X, M).lambda; }

DenseLU::DenseLU(MatC A) : lu_(std::move(A)) {
  const int n = static_cast<int>(lu_.rows());
  if (lu_.cols() != n) throw NumericalError("DenseLU: matrix must be square");
  ipiv_.resize(n);
  const char norm = '1';
  double anorm = n > 0 ? lu_.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  int info = 0;
  zgetrf_(&n, &n, lu_.data(), &n, ipiv_.data(), &info);
  if (info != 0) throw NumericalError("dense factorization failed: exactly singular pivot " + std::to_string(info));
  std::vector<cplx> work(2 * std::max(n, 1));
  std::vector<double> rwork(2 * std::max(n, 1));
  zgecon_(&norm, &n, lu_.data(), &n, &anorm, &rcond_, work.data(), rwork.data(), &info);
}

VecC DenseLU::solve(const VecC& b) const {
  const int n = static_cast<int>(lu_.rows());
  if (b.size() != n) throw NumericalError("DenseLU: size mismatch");
  VecC x = b;
  const char tr = 'N';
  const int one = 1;
  int info = 0;
  zgetrs_(&tr, &n, &one, lu_.data(), &n, ipiv_.data(), x.data(), &n, &info);
  if (info != 0) throw NumericalError("dense solve failed");
  return x;
}

}  // namespace arcbem
