#pragma once

#include <complex>
#include <vector>

#include "arcbem/error.hpp"

namespace arcbem {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

double chebyshev_T(int n, double x);
double chebyshev_U(int n, double x);

enum class ChebKind { first, second };

struct ChebyshevSeries {
  ChebKind kind = ChebKind::first;
  std::vector<cplx> coeffs;

  // Clenshaw
  cplx operator()(double x) const;
};

double bessel_j0(double x);
double bessel_y0(double x);
double bessel_j1(double x);
double bessel_y1(double x);

// G_k(r); k = 0 gives the Laplace kernel -ln(r)/(2pi)
cplx green_kernel(double k, double r);
// d/dr G_k(r)
cplx green_kernel_dr(double k, double r);
// G_k(r) + ln(r)/(2pi), smooth in r, finite limit at r = 0
cplx smooth_remainder(double k, double r);

struct PadeCoefficients {
  int order = 0;
  double theta = 0.0;
  double c0 = 1.0;
  std::vector<double> a, b;
  cplx C0;
  std::vector<cplx> A, B;
};

PadeCoefficients pade_coefficients(int order, double theta);

// C0 + sum A_j z / (1 + B_j z)
cplx pade_sqrt_scalar(cplx z, const PadeCoefficients& c);

// sqrt(1+z) with the branch cut rotated by theta
cplx rotated_sqrt(cplx z, double theta);

// 2 sqrt(r) |gamma(r,theta)|^(2Np+1), r = |1+z|
double pade_error_bound(double r, double theta, int order);

enum class MathieuParity { even, odd };

// characteristic value a_n(q) (even, ce_n) or b_n(q) (odd, se_n)
double mathieu_char(MathieuParity parity, int n, double q);

}  // namespace arcbem
