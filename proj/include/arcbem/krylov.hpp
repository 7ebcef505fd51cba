#pragma once

#include <vector>

#include "arcbem/precond.hpp"

namespace arcbem {

struct GmresOptions {
  double tol = 1e-8;
  int max_iter = 500;
  // also record the unpreconditioned residual each iteration (one extra product with A per step)
  bool track_true_residual = false;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> history;       // preconditioned relative residual, entry 0 is the initial one
  std::vector<double> true_history;  // filled when tracking is on
  bool converged = false;
  bool breakdown = false;
  Eigen::Index dof_count = 0;
  double true_residual = 0.0;  // ||Ax - b|| / ||b|| at exit
  double wall_time = 0.0;
  double tol = 0.0;
  int max_iter = 0;
};

struct GmresResult {
  VecC x;
  SolveReport report;
};

// left-preconditioned GMRES without restart, zero initial guess
GmresResult gmres(const LinearOperator& A, const VecC& b, const LinearOperator& M, const GmresOptions& opt = {});

}  // namespace arcbem
