#pragma once

#include "arcbem/assembly.hpp"

namespace arcbem {

// u(z) = int G_k(|z - y|) alpha(y) / omega(y) dsigma(y); unit-weight spaces carry the density directly
cplx single_layer_field(const GalerkinSpace& space, const VecC& alpha, double k, const Vec2& z);
// u(z) = int d/dn(y) G_k(|z - y|) omega(y) beta(y) dsigma(y)
cplx double_layer_field(const GalerkinSpace& space, const VecC& beta, double k, const Vec2& z);
// single-layer potential evaluated on the arc at parameter t
cplx single_layer_trace(const GalerkinSpace& space, const VecC& alpha, double k, double t);

double distance_to_arc(const GalerkinSpace& space, const Vec2& z);

struct GridSpec {
  double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0;
  int nx = 101, ny = 101;
  double mask = 1e-3;
};

struct FieldGrid {
  GridSpec spec;
  MatC scattered, total;  // rows are y, columns x; masked points hold NaN
};

// scattered field of the solved density plus the incident plane wave
FieldGrid evaluate_field(const GalerkinSpace& space, const VecC& density, double k, Side side, double incident_angle,
                         const GridSpec& grid);

}  // namespace arcbem
