#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "arcbem/error.hpp"

namespace arcbem {

using cplx = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;

// real symmetric tridiagonal matrix
struct SymTridiag {
  VecR diag, off;  // off(i) couples i and i+1

  SymTridiag() = default;
  explicit SymTridiag(Eigen::Index n) : diag(VecR::Zero(n)), off(VecR::Zero(n > 0 ? n - 1 : 0)) {}

  Eigen::Index size() const { return diag.size(); }
  VecC apply(const VecC& v) const;
  VecR apply(const VecR& v) const;
  MatR dense() const;
  SymTridiag scaled_sum(double a, const SymTridiag& other, double b) const;  // a*this + b*other
};

// LU with partial pivoting of a general complex tridiagonal matrix
class TridiagLU {
 public:
  TridiagLU() = default;
  // a*X + b*M with complex scalars
  TridiagLU(const SymTridiag& X, cplx a, const SymTridiag& M, cplx b);
  explicit TridiagLU(const SymTridiag& M) : TridiagLU(M, 1.0, M, 0.0) {}

  void solve_in_place(VecC& v) const;
  VecC solve(const VecC& v) const {
    VecC r = v;
    solve_in_place(r);
    return r;
  }
  Eigen::Index size() const { return n_; }

 private:
  int n_ = 0;
  std::vector<cplx> dl_, d_, du_, du2_;
  std::vector<int> ipiv_;
};

// X V = M V diag(lambda), V^T M V = I, eigenvalues ascending
struct PencilEigen {
  VecR lambda;
  MatR V;
};
PencilEigen pencil_eigen(const SymTridiag& X, const SymTridiag& M);
// eigenvalues only
VecR pencil_eigenvalues(const SymTridiag& X, const SymTridiag& M);

class DenseLU {
 public:
  DenseLU() = default;
  explicit DenseLU(MatC A);
  VecC solve(const VecC& b) const;
  Eigen::Index size() const { return lu_.rows(); }
  // reciprocal 1-norm condition estimate
  double rcond() const { return rcond_; }

 private:
  MatC lu_;
  std::vector<int> ipiv_;
  double rcond_ = 0.0;
};

}  // namespace arcbem
