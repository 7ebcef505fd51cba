#pragma once

#include <string>

#include "arcbem/krylov.hpp"
#include "arcbem/potential.hpp"

namespace arcbem {

// Binary layout, all fields little-endian:
//   char[8]  magic "ARCBEM\0\1"
//   uint32   storage kind (0 dense complex, 1 dense real, 2 complex grid)
//   uint32   reserved, zero
//   uint64   rows, uint64 cols
//   grid only: float64 x0, x1, y0, y1
//   payload  row-major float64 (re, im interleaved for complex kinds)
enum class StorageKind : std::uint32_t { dense_complex = 0, dense_real = 1, complex_grid = 2 };

void write_matrix_binary(const std::string& path, const MatC& A);
void write_matrix_binary(const std::string& path, const MatR& A);
MatC read_matrix_binary(const std::string& path);

void write_grid_binary(const std::string& path, const FieldGrid& grid, bool total = true);
FieldGrid read_grid_binary(const std::string& path);

// row,col,re,im
void write_matrix_csv(const std::string& path, const MatC& A);
// x,y,scat_re,scat_im,total_re,total_im
void write_grid_csv(const std::string& path, const FieldGrid& grid);
// index,t,re,im
void write_density_csv(const std::string& path, const GalerkinSpace& space, const VecC& c);
// iteration,preconditioned_residual,true_residual (empty when not tracked)
void write_history_csv(const std::string& path, const SolveReport& report);

// write to path.tmp then rename
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace arcbem
