#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

namespace hlab {

using cplx = std::complex<double>;

// Nonlinearity-strength regimes: eps^alpha with alpha = 1, 1/2, 0, plus the
// linear case (kernel off).
enum class Regime { LinearK0, Critical, Half, Zero };

inline double regime_alpha(Regime r) {
  switch (r) {
    case Regime::LinearK0: return 1.0;  // unused, K is off
    case Regime::Critical: return 1.0;
    case Regime::Half: return 0.5;
    case Regime::Zero: return 0.0;
  }
  return 1.0;
}

// Small d-vectors and matrices, d in {1,2}. Stack-allocated (max size 2)
// so trajectory integration and potential evaluation never touch the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

inline Vec vec1(double x) {
  Vec v(1);
  v[0] = x;
  return v;
}

inline Vec vec2(double x, double y) {
  Vec v(2);
  v[0] = x;
  v[1] = y;
  return v;
}

// Symmetric 3-tensor of third derivatives, d in {1,2}.
struct Tensor3 {
  int dim = 1;
  std::array<double, 8> v{};  // v[i*4+j*2+k]

  static Tensor3 zero(int d) {
    Tensor3 t;
    t.dim = d;
    return t;
  }
  double operator()(int i, int j, int k) const { return v[4 * i + 2 * j + k]; }
  double& at(int i, int j, int k) { return v[4 * i + 2 * j + k]; }

  // t[y,y,y]
  double contract(const Vec& y) const {
    double s = 0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) s += (*this)(i, j, k) * y[i] * y[j] * y[k];
    return s;
  }
  Tensor3& operator*=(double c) {
    for (auto& x : v) x *= c;
    return *this;
  }
};

}  // namespace hlab
