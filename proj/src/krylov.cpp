#include "arcbem/krylov.hpp"

#include <chrono>
#include <cmath>

namespace arcbem {

namespace {

// conjugate-free Givens: [c s; -conj(s) c] [a; b] = [r; 0]
void givens(cplx a, cplx b, double& c, cplx& s) {
  const double na = std::abs(a), nb = std::abs(b);
  if (nb == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (na == 0.0) {
    c = 0.0;
    s = std::conj(b) / nb;
  } else {
    const double nr = std::hypot(na, nb);
    c = na / nr;
    s = (a / na) * std::conj(b) / nr;
  }
}

VecC solution(const std::vector<VecC>& V, const MatC& H, const VecC& g, int m) {
  VecC y = g.head(m);
  for (int i = m - 1; i >= 0; --i) {
    for (int j = i + 1; j < m; ++j) y(i) -= H(i, j) * y(j);
    y(i) /= H(i, i);
  }
  VecC x = VecC::Zero(V[0].size());
  for (int i = 0; i < m; ++i) x += y(i) * V[i];
  return x;
}

}  // namespace

GmresResult gmres(const LinearOperator& A, const VecC& b, const LinearOperator& M, const GmresOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = b.size();
  if (A.size() != n || (M.size() != 0 && M.size() != n)) throw ConfigError("gmres: dimension mismatch");
  if (opt.max_iter < 1 || !(opt.tol > 0.0)) throw ConfigError("gmres: bad tolerance or iteration cap");

  GmresResult out;
  SolveReport& rep = out.report;
  rep.dof_count = n;
  rep.tol = opt.tol;
  rep.max_iter = opt.max_iter;
  out.x = VecC::Zero(n);
  auto finish = [&]() {
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  };

  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    rep.history = {0.0};
    rep.converged = true;
    return finish();
  }
  VecC r0 = M(b);
  const double beta = r0.norm();
  if (beta == 0.0) throw NumericalError("gmres: preconditioner annihilates the right-hand side");

  const int m = opt.max_iter;
  std::vector<VecC> V;
  V.reserve(m + 1);
  V.push_back(r0 / beta);
  MatC H = MatC::Zero(m + 1, m);
  std::vector<double> cs(m);
  std::vector<cplx> sn(m);
  VecC g = VecC::Zero(m + 1);
  g(0) = beta;
  rep.history.push_back(1.0);
  if (opt.track_true_residual) rep.true_history.push_back(1.0);

  int j = 0;
  for (; j < m; ++j) {
    VecC w = M(A(V[j]));
    const double before = w.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        const cplx h = V[i].dot(w);
        H(i, j) += h;
        w -= h * V[i];
      }
      if (w.norm() * 1e3 > before) break;
    }
    const double hn = w.norm();
    H(j + 1, j) = hn;
    for (int i = 0; i < j; ++i) {
      const cplx t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
      H(i + 1, j) = -std::conj(sn[i]) * H(i, j) + cs[i] * H(i + 1, j);
      H(i, j) = t;
    }
    givens(H(j, j), H(j + 1, j), cs[j], sn[j]);
    H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
    H(j + 1, j) = 0.0;
    g(j + 1) = -std::conj(sn[j]) * g(j);
    g(j) = cs[j] * g(j);

    const double res = std::abs(g(j + 1)) / beta;
    rep.history.push_back(res);
    if (opt.track_true_residual) {
      VecC xj = solution(V, H, g, j + 1);
      rep.true_history.push_back((A(xj) - b).norm() / bnorm);
    }
    if (res <= opt.tol) {
      rep.converged = true;
      ++j;
      break;
    }
    if (hn <= 1e-14 * before) {
      rep.breakdown = true;
      ++j;
      break;
    }
    V.push_back(w / hn);
  }
  rep.iterations = j;
  out.x = solution(V, H, g, j);
  rep.true_residual = (A(out.x) - b).norm() / bnorm;
  if (rep.breakdown && rep.history.back() <= opt.tol) rep.converged = true;
  return finish();
}

}  // namespace arcbem
