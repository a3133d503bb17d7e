#include "hartreelab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hlab {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_axis(int n, double length) {
  if (n < 8 || !power_of_two(n))
    throw std::invalid_argument("grid: N must be a power of two >= 8");
  if (!(length > 0)) throw std::invalid_argument("grid: L must be positive");
}
}  // namespace

Grid make_grid(int n, double length, double center) {
  check_axis(n, length);
  Grid g;
  g.dim = 1;
  g.ax[0] = {n, length, center};
  return g;
}

Grid make_grid2(int n0, double l0, double c0, int n1, double l1, double c1) {
  check_axis(n0, l0);
  check_axis(n1, l1);
  Grid g;
  g.dim = 2;
  g.ax[0] = {n0, l0, c0};
  g.ax[1] = {n1, l1, c1};
  return g;
}

double l2_norm(const SpectralField& f) {
  double s = 0;
  for (const auto& z : f.v) s += std::norm(z);
  return std::sqrt(f.grid.cell() * s);
}

cplx l2_inner(const SpectralField& f, const SpectralField& g) {
  if (f.grid != g.grid) throw std::invalid_argument("l2_inner: grid mismatch");
  cplx s = 0;
  for (std::size_t i = 0; i < f.v.size(); ++i) s += std::conj(f.v[i]) * g.v[i];
  return f.grid.cell() * s;
}

double parseval_residual(const SpectralField& f) {
  double phys = 0;
  for (const auto& z : f.v) phys += std::norm(z);
  auto coef = fft(f);
  double spec = 0;
  for (const auto& z : coef) spec += std::norm(z);
  spec /= double(f.grid.size());
  if (phys == 0) return 0;
  return std::abs(phys - spec) / phys;
}

SpectralField spectral_derivative(const SpectralField& f, int a) {
  auto coef = fft(f);
  const Grid& g = f.grid;
  if (g.dim == 1) {
    for (int k = 0; k < g.ax[0].n; ++k) coef[k] *= cplx(0, g.ax[0].freq(k));
  } else {
    std::size_t i = 0;
    for (int k0 = 0; k0 < g.ax[0].n; ++k0)
      for (int k1 = 0; k1 < g.ax[1].n; ++k1, ++i)
        coef[i] *= cplx(0, a == 0 ? g.ax[0].freq(k0) : g.ax[1].freq(k1));
  }
  return ifft(g, coef);
}

double sigma_norm(const SpectralField& f, int k) {
  if (k < 0 || k > 7) throw std::invalid_argument("sigma_norm: k in 0..7");
  const Grid& g = f.grid;
  double total = 0;
  if (g.dim == 1) {
    // derivatives d^b f once per b, then weight by y^a
    SpectralField db = f;
    for (int b = 0; b <= k; ++b) {
      if (b > 0) db = spectral_derivative(db, 0);
      for (int a = 0; a + b <= k; ++a) {
        double s = 0;
        for (int m = 0; m < g.ax[0].n; ++m) {
          double y = g.ax[0].point(m) - g.ax[0].center;
          s += std::pow(y, 2 * a) * std::norm(db.v[m]);
        }
        total += std::sqrt(g.cell() * s);
      }
    }
    return total;
  }
  // d=2: loop over multi-indices
  for (int b0 = 0; b0 <= k; ++b0)
    for (int b1 = 0; b0 + b1 <= k; ++b1) {
      SpectralField db = f;
      for (int i = 0; i < b0; ++i) db = spectral_derivative(db, 0);
      for (int i = 0; i < b1; ++i) db = spectral_derivative(db, 1);
      for (int a0 = 0; a0 + b0 + b1 <= k; ++a0)
        for (int a1 = 0; a0 + a1 + b0 + b1 <= k; ++a1) {
          double s = 0;
          std::size_t i = 0;
          for (int m0 = 0; m0 < g.ax[0].n; ++m0)
            for (int m1 = 0; m1 < g.ax[1].n; ++m1, ++i) {
              double y0 = g.ax[0].point(m0) - g.ax[0].center;
              double y1 = g.ax[1].point(m1) - g.ax[1].center;
              s += std::pow(y0, 2 * a0) * std::pow(y1, 2 * a1) *
                   std::norm(db.v[i]);
            }
          total += std::sqrt(g.cell() * s);
        }
    }
  return total;
}

double mass_outside_half_box(const SpectralField& f) {
  const Grid& g = f.grid;
  double inside = 0, outside = 0;
  if (g.dim == 1) {
    for (int m = 0; m < g.ax[0].n; ++m) {
      double r = std::abs(g.ax[0].point(m) - g.ax[0].center);
      (r <= 0.25 * g.ax[0].length ? inside : outside) += std::norm(f.v[m]);
    }
  } else {
    std::size_t i = 0;
    for (int m0 = 0; m0 < g.ax[0].n; ++m0)
      for (int m1 = 0; m1 < g.ax[1].n; ++m1, ++i) {
        bool in = std::abs(g.ax[0].point(m0) - g.ax[0].center) <=
                      0.25 * g.ax[0].length &&
                  std::abs(g.ax[1].point(m1) - g.ax[1].center) <=
                      0.25 * g.ax[1].length;
        (in ? inside : outside) += std::norm(f.v[i]);
      }
  }
  double tot = inside + outside;
  return tot > 0 ? outside / tot : 0.0;
}

double spectral_tail_fraction(const SpectralField& f) {
  auto coef = fft(f);
  const Grid& g = f.grid;
  if (g.dim != 1) throw std::invalid_argument("spectral_tail_fraction: d=1");
  double tail = 0, tot = 0;
  int n = g.ax[0].n;
  for (int k = 0; k < n; ++k) {
    int s = (k < n / 2) ? k : n - k;
    double m = std::norm(coef[k]);
    tot += m;
    if (s > n / 3) tail += m;
  }
  return tot > 0 ? tail / tot : 0.0;
}

SpectralField periodic_convolve(const SpectralField& kernel_samples,
                                const SpectralField& density) {
  const Grid& g = density.grid;
  if (kernel_samples.grid != g)
    throw std::invalid_argument("periodic_convolve: grid mismatch");
  // rotate kernel so that the sample at coordinate 0 sits at index 0
  SpectralField rot(g);
  if (g.dim == 1) {
    const GridAxis& ax = g.ax[0];
    double idx = -ax.x0() / ax.h();
    long i0 = std::lround(idx);
    if (std::abs(idx - double(i0)) > 1e-9)
      throw std::invalid_argument("periodic_convolve: grid must contain 0");
    int n = ax.n;
    int r0 = int(((i0 % n) + n) % n);
    for (int m = 0; m < n; ++m) rot.v[m] = kernel_samples.v[(m + r0) % n];
  } else {
    int n0 = g.ax[0].n, n1 = g.ax[1].n;
    long i0 = std::lround(-g.ax[0].x0() / g.ax[0].h());
    long i1 = std::lround(-g.ax[1].x0() / g.ax[1].h());
    int r0 = int(((i0 % n0) + n0) % n0), r1 = int(((i1 % n1) + n1) % n1);
    for (int m0 = 0; m0 < n0; ++m0)
      for (int m1 = 0; m1 < n1; ++m1)
        rot.v[std::size_t(m0) * n1 + m1] =
            kernel_samples.v[std::size_t((m0 + r0) % n0) * n1 + (m1 + r1) % n1];
  }
  auto kh = fft(rot);
  auto dh = fft(density);
  for (std::size_t i = 0; i < kh.size(); ++i) kh[i] *= dh[i];
  SpectralField out = ifft(g, kh);
  double w = g.cell();
  for (auto& z : out.v) z *= w;
  return out;
}

void LinearKernel::init(const std::vector<cplx>& samples) {
  pad_ = make_grid(2 * n_, 2.0 * n_ * h_, 0.0);
  fft(pad_, samples, khat_);
}

std::vector<cplx> LinearKernel::apply(std::span<const cplx> f) const {
  if (int(f.size()) != n_) throw std::invalid_argument("LinearKernel: size");
  std::vector<cplx> padded(2 * n_, cplx(0));
  std::copy(f.begin(), f.end(), padded.begin());
  std::vector<cplx> fh;
  fft(pad_, padded, fh);
  for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= khat_[i];
  std::vector<cplx> conv;
  ifft(pad_, fh, conv);
  std::vector<cplx> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = h_ * conv[i];
  return out;
}

std::vector<double> LinearKernel::apply_real(std::span<const cplx> f) const {
  auto c = apply(f);
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].real();
  return out;
}

std::vector<cplx> spectral_interpolate(const SpectralField& f,
                                       const std::vector<Vec>& points) {
  const Grid& g = f.grid;
  auto coef = fft(f);
  std::vector<cplx> out(points.size());
  if (g.dim == 1) {
    const GridAxis& ax = g.ax[0];
    int n = ax.n;
    double dxi = 2.0 * M_PI / ax.length;
    for (std::size_t p = 0; p < points.size(); ++p) {
      double y = points[p][0] - ax.x0();
      y -= ax.length * std::floor(y / ax.length);  // wrap into box
      // f(y) = (1/N) sum_k F_k e^{i xi_k y}, evaluated by incremental
      // rotation over k = -N/2..N/2-1
      cplx rot = std::exp(cplx(0, dxi * y));
      cplx ph = std::exp(cplx(0, -dxi * (n / 2) * y));
      cplx acc = 0;
      for (int k = -n / 2; k < n / 2; ++k) {
        int ks = (k + n) % n;
        acc += coef[ks] * ph;
        ph *= rot;
      }
      out[p] = acc / double(n);
    }
    return out;
  }
  // d=2: direct double sum (test-scale use only)
  int n0 = g.ax[0].n, n1 = g.ax[1].n;
  for (std::size_t p = 0; p < points.size(); ++p) {
    double y0 = points[p][0] - g.ax[0].x0();
    double y1 = points[p][1] - g.ax[1].x0();
    y0 -= g.ax[0].length * std::floor(y0 / g.ax[0].length);
    y1 -= g.ax[1].length * std::floor(y1 / g.ax[1].length);
    cplx acc = 0;
    for (int k0 = 0; k0 < n0; ++k0)
      for (int k1 = 0; k1 < n1; ++k1)
        acc += coef[std::size_t(k0) * n1 + k1] *
               std::exp(cplx(0, g.ax[0].freq(k0) * y0 + g.ax[1].freq(k1) * y1));
    out[p] = acc / double(g.size());
  }
  return out;
}

std::vector<cplx> interpolate_zero_extended(const SpectralField& f,
                                            std::span<const double> points) {
  if (f.grid.dim != 1)
    throw std::invalid_argument("interpolate_zero_extended: d=1 only");
  const GridAxis& ax = f.grid.ax[0];
  std::vector<Vec> pts;
  pts.reserve(points.size());
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] >= ax.x0() && points[i] < ax.x0() + ax.length) {
      keep.push_back(i);
      pts.push_back(vec1(points[i]));
    }
  }
  auto vals = spectral_interpolate(f, pts);
  std::vector<cplx> out(points.size(), cplx(0));
  for (std::size_t j = 0; j < keep.size(); ++j) out[keep[j]] = vals[j];
  return out;
}

SpectralField shift_zero_extended(const SpectralField& f, double s) {
  const Grid& g = f.grid;
  if (g.dim != 1) throw std::invalid_argument("shift_zero_extended: d=1 only");
  const GridAxis& ax = g.ax[0];
  SpectralField out(g);
  if (std::abs(s) >= 0.5 * ax.length) return out;  // disjoint: all zero
  auto coef = fft(f);
  for (int k = 0; k < ax.n; ++k) coef[k] *= std::exp(cplx(0, ax.freq(k) * s));
  out = ifft(g, coef);
  // zero the wrapped strip: output points z with z+s outside the box
  for (int m = 0; m < ax.n; ++m) {
    double z = ax.point(m) + s;
    if (z < ax.x0() || z >= ax.x0() + ax.length) out.v[m] = 0;
  }
  return out;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("field op: grid mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("field op: grid mismatch");
  SpectralField out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

SpectralField operator*(cplx c, const SpectralField& a) {
  SpectralField out = a;
  for (auto& z : out.v) z *= c;
  return out;
}

double l2_distance(const SpectralField& a, const SpectralField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("l2_distance: grid mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += std::norm(a.v[i] - b.v[i]);
  return std::sqrt(a.grid.cell() * s);
}

}  // namespace hlab
