#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hartreelab/types.hpp"

namespace hlab {

// Uniform periodic grid, d = 1 or 2. Points along axis a are
//   x_m = c - L/2 + m*L/N,  m = 0..N-1,
// with N a power of two. Spectral frequencies are xi_k = 2*pi*k/L,
// k = -N/2..N/2-1.
struct GridAxis {
  int n = 0;
  double length = 0;
  double center = 0;
  double h() const { return length / n; }
  double x0() const { return center - 0.5 * length; }
  double point(int m) const { return x0() + m * h(); }
  double freq(int k) const {  // k is the storage index (FFT layout)
    int s = (k < n / 2) ? k : k - n;
    return 2.0 * M_PI * s / length;
  }
};

struct Grid {
  int dim = 1;
  std::array<GridAxis, 2> ax{};

  std::size_t size() const {
    std::size_t s = ax[0].n;
    if (dim == 2) s *= ax[1].n;
    return s;
  }
  double cell() const {  // h^d quadrature weight
    double w = ax[0].h();
    if (dim == 2) w *= ax[1].h();
    return w;
  }
  bool operator==(const Grid& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a)
      if (ax[a].n != o.ax[a].n || ax[a].length != o.ax[a].length ||
          ax[a].center != o.ax[a].center)
        return false;
    return true;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

Grid make_grid(int n, double length, double center = 0.0);
Grid make_grid2(int n0, double l0, double c0, int n1, double l1, double c1);

// Complex field sampled on a Grid, row-major for d=2.
struct SpectralField {
  Grid grid;
  std::vector<cplx> v;

  SpectralField() = default;
  explicit SpectralField(const Grid& g) : grid(g), v(g.size(), cplx(0)) {}
  std::size_t size() const { return v.size(); }
  cplx& operator[](std::size_t i) { return v[i]; }
  const cplx& operator[](std::size_t i) const { return v[i]; }
};

// Sample an analytic function on the grid (d=1 overload and generic).
template <class F>
SpectralField sample_field(const Grid& g, F&& f) {
  SpectralField out(g);
  if (g.dim == 1) {
    for (int m = 0; m < g.ax[0].n; ++m) out.v[m] = f(vec1(g.ax[0].point(m)));
  } else {
    std::size_t i = 0;
    for (int m0 = 0; m0 < g.ax[0].n; ++m0)
      for (int m1 = 0; m1 < g.ax[1].n; ++m1, ++i)
        out.v[i] = f(vec2(g.ax[0].point(m0), g.ax[1].point(m1)));
  }
  return out;
}

// --- transforms (unnormalized forward; inverse carries 1/N^d) ---
void fft(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out);
void ifft(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out);
std::vector<cplx> fft(const SpectralField& f);
SpectralField ifft(const Grid& g, const std::vector<cplx>& coef);

// --- norms and quadrature ---
double l2_norm(const SpectralField& f);
cplx l2_inner(const SpectralField& f, const SpectralField& g);  // int conj(f) g
// Sigma^k norm: sum over |alpha|+|beta| <= k of ||x^alpha d^beta f||_L2,
// x relative to the grid center, derivatives spectral.
double sigma_norm(const SpectralField& f, int k);

// Parseval check value: |h^d sum|f|^2 - (h^d/N^d) sum|fhat|^2| / (h^d sum|f|^2).
double parseval_residual(const SpectralField& f);

// Relative L2 mass outside the central half box (truncation diagnostic).
double mass_outside_half_box(const SpectralField& f);
// Relative spectral mass in the top third of the frequency range.
double spectral_tail_fraction(const SpectralField& f);

// --- convolution ---
// h^d-scaled circular convolution via the spectral transform. The kernel is
// given by its samples on the same grid; the sample at coordinate 0 is taken
// as the zero-offset value (the grid must contain the origin as a point).
SpectralField periodic_convolve(const SpectralField& kernel_samples,
                                const SpectralField& density);

// Non-periodic discrete convolution h*sum_n k((m-n)h) f_n via zero-padded
// FFT (d=1). Kernel samples are taken on the difference grid, so growing
// kernels (Taylor remainders) are handled without wrap-around.
class LinearKernel {
 public:
  template <class F>
  LinearKernel(const Grid& g, F&& kfun) {
    if (g.dim != 1) throw std::invalid_argument("LinearKernel: d=1 only");
    n_ = g.ax[0].n;
    h_ = g.ax[0].h();
    std::vector<cplx> samples(2 * n_, cplx(0));
    for (int j = 0; j < n_; ++j) samples[j] = kfun(j * h_);
    for (int j = n_; j < 2 * n_; ++j) samples[j] = kfun((j - 2 * n_) * h_);
    init(samples);
  }
  // apply to density f (length n); returns length-n result
  std::vector<cplx> apply(std::span<const cplx> f) const;
  std::vector<double> apply_real(std::span<const cplx> f) const;

 private:
  void init(const std::vector<cplx>& samples);
  int n_ = 0;
  double h_ = 0;
  Grid pad_;                  // length-2n grid used for the padded transforms
  std::vector<cplx> khat_;    // FFT of padded kernel samples
};

// --- interpolation ---
// Trigonometric-polynomial evaluation at arbitrary points; points are
// wrapped into the periodic box. Exact for band-limited fields.
std::vector<cplx> spectral_interpolate(const SpectralField& f,
                                       const std::vector<Vec>& points);
// Same, but points outside the box evaluate to zero instead of wrapping
// (d=1). Used when the periodic image would be spurious.
std::vector<cplx> interpolate_zero_extended(const SpectralField& f,
                                            std::span<const double> points);

// Spectral derivative along axis `a`.
SpectralField spectral_derivative(const SpectralField& f, int a = 0);

// f(. + s) on its own grid with zero extension outside the box (d=1).
SpectralField shift_zero_extended(const SpectralField& f, double s);

// pointwise helpers
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cplx c, const SpectralField& a);
double l2_distance(const SpectralField& a, const SpectralField& b);

}  // namespace hlab
