#pragma once

#include <array>
#include <vector>

namespace arcbem {

// nodes and weights on [0,1]
struct Rule1D {
  std::vector<double> x, w;
};

const Rule1D& gauss_legendre(int n);

// n-point rule on [0,1] graded toward 0 with u -> u^m
Rule1D graded_rule(int n, int m);

struct Rule2D {
  std::vector<double> x, y, w;
  std::vector<double> d;  // x - y without cancellation (diagonal rules only)
  void add(double xi, double yi, double wi) {
    x.push_back(xi);
    y.push_back(yi);
    w.push_back(wi);
  }
  void add(double xi, double yi, double wi, double di) {
    add(xi, yi, wi);
    d.push_back(di);
  }
  std::size_t size() const { return w.size(); }
};

// unit square, singular along the diagonal x = y; apex is (0,0) or (1,1)
Rule2D diagonal_rule(int n, int m, bool apex_at_origin);
// unit square, singular at one corner (cx, cy) in {0,1}^2
Rule2D corner_rule(int n, int m, int cx, int cy);

}  // namespace arcbem
