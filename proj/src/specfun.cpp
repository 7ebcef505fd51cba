#include "arcbem/specfun.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

namespace arcbem {

double chebyshev_T(int n, double x) {
  if (n == 0) return 1.0;
  double t0 = 1.0, t1 = x;
  for (int i = 1; i < n; ++i) {
    double t2 = 2.0 * x * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

double chebyshev_U(int n, double x) {
  if (n == 0) return 1.0;
  double u0 = 1.0, u1 = 2.0 * x;
  for (int i = 1; i < n; ++i) {
    double u2 = 2.0 * x * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

cplx ChebyshevSeries::operator()(double x) const {
  cplx b1 = 0.0, b2 = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    cplx b0 = coeffs[i] + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  // b1 = b_0, b2 = b_1 here
  if (kind == ChebKind::first) return b1 - x * b2;
  return b1;
}

namespace {

struct Bessel01 {
  double j0, y0, j1, y1;
};

// power series, accurate for x <= 8
Bessel01 bessel_series(double x, bool want1) {
  const double q = 0.25 * x * x;
  double term = 1.0, j0 = 1.0, s0 = 0.0, h = 0.0;
  double term1 = 0.5 * x, j1 = term1, s1 = 0.0;
  double hk = 0.0, hk1 = 1.0;  // harmonic numbers H_m, H_{m+1}
  s1 = -(hk + hk1) * term1;
  for (int m = 1; m < 60; ++m) {
    term *= -q / (double(m) * m);
    h += 1.0 / m;
    j0 += term;
    s0 -= h * term;
    if (want1) {
      term1 *= -q / (double(m) * (m + 1));
      hk = h;
      hk1 = h + 1.0 / (m + 1);
      j1 += term1;
      s1 -= (hk + hk1) * term1;
    }
    if (std::abs(term) < 1e-18 * std::abs(j0) && std::abs(term) * h < 1e-18) break;
  }
  const double lg = std::log(0.5 * x) + kEulerGamma;
  Bessel01 r{};
  r.j0 = j0;
  r.y0 = (2.0 / kPi) * (lg * j0 + s0);
  if (want1) {
    r.j1 = j1;
    r.y1 = (2.0 / kPi) * lg * j1 - 2.0 / (kPi * x) + s1 / kPi;
  }
  return r;
}

// Miller backward recurrence with the Neumann series for Y0, Y1
Bessel01 bessel_miller(double x, bool want1) {
  int start = 2 * static_cast<int>((x + 25.0 + 8.0 * std::cbrt(x)) / 2.0);
  double jp1 = 0.0, jn = 1e-300;
  double norm = 0.0, ysum = 0.0, y1sum = 0.0;
  // j[n] values needed for the Y1 series: keep a short window
  double jnm1;
  double jkp1 = 0.0;  // J_{n+1}
  for (int n = start; n >= 1; --n) {
    jnm1 = (2.0 * n / x) * jn - jp1;
    // jnm1 is J_{n-1}, jn is J_n, jp1 is J_{n+1}
    if (n % 2 == 0) {
      int k = n / 2;
      norm += 2.0 * jn;
      ysum += ((k % 2) ? -1.0 : 1.0) * jn / k;
    } else if (want1) {
      // n = 2k-1 odd: contributes to k and k-1 terms of sum (-1)^k (J_{2k-1} - J_{2k+1})/k
      int k = (n + 1) / 2;
      y1sum += ((k % 2) ? -1.0 : 1.0) * jn / k;
      if (k - 1 >= 1) y1sum -= (((k - 1) % 2) ? -1.0 : 1.0) * jn / (k - 1);
    }
    jkp1 = jp1;
    jp1 = jn;
    jn = jnm1;
    if (std::abs(jn) > 1e250) {
      jn *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      ysum *= 1e-250;
      y1sum *= 1e-250;
    }
  }
  (void)jkp1;
  norm += jn;  // J_0
  const double j0 = jn / norm;
  const double j1 = jp1 / norm;
  const double lg = std::log(0.5 * x) + kEulerGamma;
  Bessel01 r{};
  r.j0 = j0;
  r.y0 = (2.0 / kPi) * (lg * j0 - 2.0 * ysum / norm);
  if (want1) {
    r.j1 = j1;
    r.y1 = (2.0 / kPi) * (lg * j1 - j0 / x) + (2.0 / kPi) * y1sum / norm;
  }
  return r;
}

// Hankel asymptotic expansion, x >= 25
void hankel_asym(double nu, double x, double& j, double& y) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, qs = 0.0;
  double term = 1.0, prev = 1e300;
  for (int k = 1; k < 60; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > prev) break;
    prev = std::abs(term);
    // k odd -> Q, k even -> P, alternating signs in pairs
    int m = k / 2;
    double sign = (m % 2) ? -1.0 : 1.0;
    if (k % 2) qs += sign * term;
    else p += sign * term;
    if (prev < 1e-17) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * kPi;
  const double c = std::cos(chi), s = std::sin(chi);
  const double amp = std::sqrt(2.0 / (kPi * x));
  j = amp * (p * c - qs * s);
  y = amp * (p * s + qs * c);
}

Bessel01 bessel_all(double x, bool want1) {
  if (x <= 8.0) return bessel_series(x, want1);
  if (x < 25.0) return bessel_miller(x, want1);
  Bessel01 r{};
  hankel_asym(0.0, x, r.j0, r.y0);
  if (want1) hankel_asym(1.0, x, r.j1, r.y1);
  return r;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw NumericalError(std::string(what) + ": argument must be positive");
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  if (x == 0.0) return 1.0;
  return bessel_all(x, false).j0;
}

double bessel_y0(double x) {
  require_positive(x, "bessel_y0");
  return bessel_all(x, false).y0;
}

double bessel_j1(double x) {
  if (x == 0.0) return 0.0;
  double s = x < 0 ? -1.0 : 1.0;
  return s * bessel_all(std::abs(x), true).j1;
}

double bessel_y1(double x) {
  require_positive(x, "bessel_y1");
  return bessel_all(x, true).y1;
}

cplx green_kernel(double k, double r) {
  if (!(r > 0.0)) throw NumericalError("green_kernel: singular evaluation at r = 0");
  if (k == 0.0) return cplx(-std::log(r) / (2.0 * kPi), 0.0);
  auto b = bessel_all(k * r, false);
  return cplx(-0.25 * b.y0, 0.25 * b.j0);
}

cplx green_kernel_dr(double k, double r) {
  if (!(r > 0.0)) throw NumericalError("green_kernel_dr: singular evaluation at r = 0");
  if (k == 0.0) return cplx(-1.0 / (2.0 * kPi * r), 0.0);
  auto b = bessel_all(k * r, true);
  // -(ik/4) (J1 + i Y1)
  return cplx(0.25 * k * b.y1, -0.25 * k * b.j1);
}

cplx smooth_remainder(double k, double r) {
  if (r < 0.0) throw NumericalError("smooth_remainder: negative distance");
  const double c = std::log(0.5 * k) + kEulerGamma;
  if (r == 0.0) return cplx(-c / (2.0 * kPi), 0.25);
  const double x = k * r;
  if (x > 8.0) return green_kernel(k, r) + std::log(r) / (2.0 * kPi);
  // J0 - 1 and the harmonic tail without cancellation against ln r
  const double q = 0.25 * x * x;
  double term = 1.0, j0m1 = 0.0, s0 = 0.0, h = 0.0;
  for (int m = 1; m < 60; ++m) {
    term *= -q / (double(m) * m);
    h += 1.0 / m;
    j0m1 += term;
    s0 -= h * term;
    if (std::abs(term) * (1.0 + h) < 1e-18) break;
  }
  const double j0 = 1.0 + j0m1;
  const double re = -(c * j0 + std::log(r) * j0m1 + s0) / (2.0 * kPi);
  return cplx(re, 0.25 * j0);
}

PadeCoefficients pade_coefficients(int order, double theta) {
  if (order < 1) throw ConfigError("pade_coefficients: order must be >= 1");
  if (!(std::abs(theta) < kPi)) throw ConfigError("pade_coefficients: theta must lie in (-pi, pi)");
  PadeCoefficients c;
  c.order = order;
  c.theta = theta;
  c.c0 = 1.0;
  const double den = 2.0 * order + 1.0;
  c.a.resize(order);
  c.b.resize(order);
  for (int j = 1; j <= order; ++j) {
    double s = std::sin(j * kPi / den), co = std::cos(j * kPi / den);
    c.a[j - 1] = (2.0 / den) * s * s;
    c.b[j - 1] = co * co;
  }
  const cplx rot = std::polar(1.0, -theta);
  const cplx half = std::polar(1.0, 0.5 * theta);
  const cplx zr = rot - 1.0;
  cplx r = c.c0;
  for (int j = 0; j < order; ++j) r += c.a[j] * zr / (1.0 + c.b[j] * zr);
  c.C0 = half * r;
  c.A.resize(order);
  c.B.resize(order);
  for (int j = 0; j < order; ++j) {
    cplx d = 1.0 + c.b[j] * zr;
    c.A[j] = std::conj(half) * c.a[j] / (d * d);
    c.B[j] = rot * c.b[j] / d;
  }
  return c;
}

cplx pade_sqrt_scalar(cplx z, const PadeCoefficients& c) {
  cplx s = c.C0;
  for (int j = 0; j < c.order; ++j) {
    cplx d = 1.0 + c.B[j] * z;
    if (std::abs(d) < 1e-300) throw NumericalError("pade_sqrt_scalar: pole hit");
    s += c.A[j] * z / d;
  }
  return s;
}

cplx rotated_sqrt(cplx z, double theta) {
  return std::polar(1.0, 0.5 * theta) * std::sqrt(std::polar(1.0, -theta) * (1.0 + z));
}

double pade_error_bound(double r, double theta, int order) {
  const cplx w = std::sqrt(r) * std::polar(1.0, 0.5 * theta);
  const double g = std::abs((w - 1.0) / (w + 1.0));
  return 2.0 * std::sqrt(r) * std::pow(g, 2 * order + 1);
}

namespace {

// one Fourier block of the Mathieu operator; returns sorted eigenvalues
Eigen::VectorXd mathieu_block(MathieuParity parity, bool odd_index, int size, double q) {
  Eigen::VectorXd d(size), e(std::max(size - 1, 0));
  for (int i = 0; i < size; ++i) {
    int m = odd_index ? 2 * i + 1 : (parity == MathieuParity::even ? 2 * i : 2 * i + 2);
    d(i) = double(m) * m;
  }
  for (int i = 0; i + 1 < size; ++i) e(i) = q;
  if (odd_index) d(0) += parity == MathieuParity::even ? q : -q;
  else if (parity == MathieuParity::even && size > 1) e(0) = std::sqrt(2.0) * q;
  if (size == 1) return d;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

double mathieu_char(MathieuParity parity, int n, double q) {
  if (n < 0 || (parity == MathieuParity::odd && n < 1))
    throw ConfigError("mathieu_char: invalid index");
  if (q < 0.0) throw ConfigError("mathieu_char: q must be nonnegative");
  const bool odd_index = n % 2 == 1;
  const int idx = parity == MathieuParity::even ? n / 2 : (odd_index ? n / 2 : n / 2 - 1);
  int size = 64 + n;
  double prev = mathieu_block(parity, odd_index, size, q)(idx);
  for (int pass = 0; pass < 4; ++pass) {
    size *= 2;
    double cur = mathieu_block(parity, odd_index, size, q)(idx);
    if (std::abs(cur - prev) <= 1e-10 * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw NumericalError("mathieu_char: truncation did not converge");
}

}  // namespace arcbem
