#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "hartreelab/grid.hpp"

namespace hlab {
namespace {

// Process-wide plan cache. Plans are created once per (shape, sign) with
// FFTW_ESTIMATE|FFTW_UNALIGNED and executed on caller buffers through the
// new-array interface, which is safe to call concurrently.
struct PlanCache {
  std::mutex mu;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  fftw_plan get(int n0, int n1, int sign) {
    std::scoped_lock lock(mu);
    auto key = std::make_tuple(n0, n1, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::vector<cplx> a(std::size_t(n0) * (n1 > 0 ? n1 : 1));
    std::vector<cplx> b(a.size());
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    fftw_plan p = (n1 > 0)
                      ? fftw_plan_dft_2d(n0, n1, pa, pb, sign,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED)
                      : fftw_plan_dft_1d(n0, pa, pb, sign,
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fftw plan creation failed");
    plans[key] = p;
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void exec(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out,
          int sign) {
  if (in.size() != g.size()) throw std::invalid_argument("fft: size mismatch");
  out.resize(in.size());
  fftw_plan p = cache().get(g.ax[0].n, g.dim == 2 ? g.ax[1].n : 0, sign);
  fftw_execute_dft(p,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void fft(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
  exec(g, in, out, FFTW_FORWARD);
}

void ifft(const Grid& g, const std::vector<cplx>& in, std::vector<cplx>& out) {
  exec(g, in, out, FFTW_BACKWARD);
  double s = 1.0 / double(g.size());
  for (auto& z : out) z *= s;
}

std::vector<cplx> fft(const SpectralField& f) {
  std::vector<cplx> out;
  fft(f.grid, f.v, out);
  return out;
}

SpectralField ifft(const Grid& g, const std::vector<cplx>& coef) {
  SpectralField out(g);
  ifft(g, coef, out.v);
  return out;
}

}  // namespace hlab
