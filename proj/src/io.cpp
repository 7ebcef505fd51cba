#include "arcbem/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace arcbem {

namespace {

constexpr char kMagic[8] = {'A', 'R', 'C', 'B', 'E', 'M', '\0', '\1'};

template <class T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
  }
}

class Writer {
 public:
  explicit Writer(const std::string& path) : path_(path), tmp_(path + ".tmp"), out_(tmp_, std::ios::binary) {
    if (!out_) throw Error("cannot open " + tmp_ + " for writing");
  }
  template <class T>
  void put(T v) {
    v = to_le(v);
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const char* p, std::size_t n) { out_.write(p, std::streamsize(n)); }
  void commit() {
    out_.close();
    if (!out_) throw Error("write failed: " + tmp_);
    std::filesystem::rename(tmp_, path_);
  }

 private:
  std::string path_, tmp_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw Error("cannot open " + path);
  }
  template <class T>
  T get() {
    T v;
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw Error("truncated file " + path_);
    return to_le(v);
  }
  void bytes(char* p, std::size_t n) {
    in_.read(p, std::streamsize(n));
    if (!in_) throw Error("truncated file " + path_);
  }

 private:
  std::ifstream in_;
  std::string path_;
};

void header(Writer& w, StorageKind kind, Eigen::Index rows, Eigen::Index cols) {
  w.bytes(kMagic, 8);
  w.put(static_cast<std::uint32_t>(kind));
  w.put(std::uint32_t(0));
  w.put(static_cast<std::uint64_t>(rows));
  w.put(static_cast<std::uint64_t>(cols));
}

void payload(Writer& w, const MatC& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      w.put(A(i, j).real());
      w.put(A(i, j).imag());
    }
}

struct Header {
  StorageKind kind;
  Eigen::Index rows, cols;
};

Header read_header(Reader& r, const std::string& path) {
  char m[8];
  r.bytes(m, 8);
  if (std::memcmp(m, kMagic, 8) != 0) throw Error(path + " is not an arcbem binary file");
  const auto kind = r.get<std::uint32_t>();
  r.get<std::uint32_t>();
  const auto rows = r.get<std::uint64_t>(), cols = r.get<std::uint64_t>();
  if (kind > 2) throw Error(path + ": unknown storage kind " + std::to_string(kind));
  return {StorageKind(kind), Eigen::Index(rows), Eigen::Index(cols)};
}

MatC read_payload(Reader& r, const Header& h) {
  MatC A(h.rows, h.cols);
  for (Eigen::Index i = 0; i < h.rows; ++i)
    for (Eigen::Index j = 0; j < h.cols; ++j) {
      const double re = r.get<double>();
      const double im = h.kind == StorageKind::dense_real ? 0.0 : r.get<double>();
      A(i, j) = cplx(re, im);
    }
  return A;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

void write_matrix_binary(const std::string& path, const MatC& A) {
  Writer w(path);
  header(w, StorageKind::dense_complex, A.rows(), A.cols());
  payload(w, A);
  w.commit();
}

void write_matrix_binary(const std::string& path, const MatR& A) {
  Writer w(path);
  header(w, StorageKind::dense_real, A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) w.put(A(i, j));
  w.commit();
}

MatC read_matrix_binary(const std::string& path) {
  Reader r(path);
  Header h = read_header(r, path);
  if (h.kind == StorageKind::complex_grid) {
    for (int i = 0; i < 4; ++i) r.get<double>();
  }
  return read_payload(r, h);
}

void write_grid_binary(const std::string& path, const FieldGrid& grid, bool total) {
  const MatC& A = total ? grid.total : grid.scattered;
  Writer w(path);
  header(w, StorageKind::complex_grid, A.rows(), A.cols());
  for (double v : {grid.spec.x0, grid.spec.x1, grid.spec.y0, grid.spec.y1}) w.put(v);
  payload(w, A);
  w.commit();
}

FieldGrid read_grid_binary(const std::string& path) {
  Reader r(path);
  Header h = read_header(r, path);
  if (h.kind != StorageKind::complex_grid) throw Error(path + " does not hold a field grid");
  FieldGrid g;
  g.spec.x0 = r.get<double>();
  g.spec.x1 = r.get<double>();
  g.spec.y0 = r.get<double>();
  g.spec.y1 = r.get<double>();
  g.spec.ny = int(h.rows);
  g.spec.nx = int(h.cols);
  g.total = read_payload(r, h);
  return g;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  Writer w(path);
  w.bytes(text.data(), text.size());
  w.commit();
}

void write_matrix_csv(const std::string& path, const MatC& A) {
  std::ostringstream s;
  s << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      s << i << ',' << j << ',' << num(A(i, j).real()) << ',' << num(A(i, j).imag()) << '\n';
  write_text_atomic(path, s.str());
}

void write_grid_csv(const std::string& path, const FieldGrid& g) {
  std::ostringstream s;
  s << "x,y,scat_re,scat_im,total_re,total_im\n";
  const auto& sp = g.spec;
  for (int j = 0; j < g.scattered.rows(); ++j) {
    const double y = sp.ny == 1 ? sp.y0 : sp.y0 + (sp.y1 - sp.y0) * j / (sp.ny - 1);
    for (int i = 0; i < g.scattered.cols(); ++i) {
      const double x = sp.nx == 1 ? sp.x0 : sp.x0 + (sp.x1 - sp.x0) * i / (sp.nx - 1);
      s << num(x) << ',' << num(y) << ',' << num(g.scattered(j, i).real()) << ',' << num(g.scattered(j, i).imag())
        << ',' << num(g.total(j, i).real()) << ',' << num(g.total(j, i).imag()) << '\n';
    }
  }
  write_text_atomic(path, s.str());
}

void write_density_csv(const std::string& path, const GalerkinSpace& space, const VecC& c) {
  if (c.size() != space.dof_count()) throw ConfigError("density size does not match the space");
  std::ostringstream s;
  s << "index,t,re,im\n";
  const auto& T = space.mesh().t;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    // continuous spaces: dof i sits at node i; discontinuous: two dofs per panel
    double t;
    if (space.continuity() == Continuity::continuous)
      t = T[std::size_t(i)];
    else
      t = i % 2 == 0 ? T[std::size_t(i / 2)] : T[std::size_t(i / 2 + 1)];
    s << i << ',' << num(t) << ',' << num(c(i).real()) << ',' << num(c(i).imag()) << '\n';
  }
  write_text_atomic(path, s.str());
}

void write_history_csv(const std::string& path, const SolveReport& r) {
  std::ostringstream s;
  s << "iteration,preconditioned_residual,true_residual\n";
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    s << i << ',' << num(r.history[i]) << ',';
    if (i < r.true_history.size()) s << num(r.true_history[i]);
    s << '\n';
  }
  write_text_atomic(path, s.str());
}

}  // namespace arcbem
