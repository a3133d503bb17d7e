#include "hartreelab/pde.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

void PDEConfig::validate() const {
  if (xgrid.dim != 1) throw std::invalid_argument("pde: d=1 only");
  if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("pde: eps in (0,1]");
  if (dt_factor > 0.1 + 1e-12)
    throw std::invalid_argument("pde: dt must satisfy dt <= 0.1 eps");
  double pm = pmax_hint;
  for (std::size_t j = 0; j < p0.size(); ++j) pm = std::max(pm, p0[j].norm());
  if (pm > 0 && xgrid.ax[0].h() > (2.0 * M_PI / pm) * eps / 8.0)
    throw std::invalid_argument(
        "pde: x-grid under-resolves e^{ipx/eps}; refine h or shrink the box");
}

PDESolver::PDESolver(const PDEConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  st_.eps = cfg_.eps;
  st_.t = 0;
  st_.psi = initial_data(cfg_.amps, cfg_.q0, cfg_.p0, cfg_.eps, cfg_.xgrid).psi;
  const Grid& g = cfg_.xgrid;
  int n = g.ax[0].n;
  double dt = cfg_.dt();
  kin_full_.resize(n);
  for (int k = 0; k < n; ++k) {
    double xi = g.ax[0].freq(k);
    kin_full_[k] = std::exp(cplx(0, -0.5 * cfg_.eps * xi * xi * dt));
  }
  has_kernel_ = cfg_.regime != Regime::LinearK0 && !cfg_.K.is_zero();
  alpha_pref_ = std::pow(cfg_.eps, regime_alpha(cfg_.regime));
  if (has_kernel_) {
    // kernel sampled on the difference grid and wrapped on the torus
    double h = g.ax[0].h();
    std::vector<cplx> samples(n);
    for (int j = 0; j < n; ++j) {
      double d = (j < n / 2) ? j * h : (j - n) * h;
      samples[j] = eval_K(cfg_.K, vec1(d));
    }
    fft(g, samples, kernel_hat_);
  }
}

double PDESolver::mass() const { return l2_norm(st_.psi); }

void PDESolver::half_potential(double tpot, double dt) {
  const Grid& g = cfg_.xgrid;
  int n = g.ax[0].n;
  std::vector<double> W(n);
  for (int m = 0; m < n; ++m)
    W[m] = eval_V(cfg_.V, tpot, vec1(g.ax[0].point(m)));
  if (has_kernel_) {
    // K * |psi|^2 via the circular convolution theorem
    buf_.resize(n);
    for (int m = 0; m < n; ++m) buf_[m] = std::norm(st_.psi.v[m]);
    fft(g, buf_, buf2_);
    for (int k = 0; k < n; ++k) buf2_[k] *= kernel_hat_[k];
    ifft(g, buf2_, buf_);
    double h = g.ax[0].h();
    for (int m = 0; m < n; ++m) W[m] += alpha_pref_ * h * buf_[m].real();
  }
  double c = 0.5 * dt / cfg_.eps;
  for (int m = 0; m < n; ++m)
    st_.psi.v[m] *= std::exp(cplx(0, -c * W[m]));
}

void PDESolver::step_with(double dt) {
  const Grid& g = cfg_.xgrid;
  half_potential(st_.t, dt);
  fft(g, st_.psi.v, buf2_);
  if (dt == cfg_.dt()) {
    for (std::size_t k = 0; k < buf2_.size(); ++k) buf2_[k] *= kin_full_[k];
  } else {
    for (int k = 0; k < g.ax[0].n; ++k) {
      double xi = g.ax[0].freq(k);
      buf2_[k] *= std::exp(cplx(0, -0.5 * cfg_.eps * xi * xi * dt));
    }
  }
  ifft(g, buf2_, st_.psi.v);
  half_potential(st_.t + dt, dt);
  st_.t += dt;
}

void PDESolver::step() { step_with(cfg_.dt()); }

bool PDESolver::energy_conserved_preconditions() const {
  return !cfg_.V.time_dependent() && cfg_.K.is_even();
}

double PDESolver::energy() const {
  const Grid& g = cfg_.xgrid;
  int n = g.ax[0].n;
  double h = g.ax[0].h();
  // kinetic: (eps^2/2) |grad psi|^2 via Parseval
  auto coef = fft(st_.psi);
  double kin = 0;
  for (int k = 0; k < n; ++k) {
    double xi = g.ax[0].freq(k);
    kin += xi * xi * std::norm(coef[k]);
  }
  kin *= 0.5 * cfg_.eps * cfg_.eps * h / double(n);
  double pot = 0;
  for (int m = 0; m < n; ++m)
    pot += eval_V(cfg_.V, st_.t, vec1(g.ax[0].point(m))) * std::norm(st_.psi.v[m]);
  pot *= h;
  double inter = 0;
  if (has_kernel_) {
    std::vector<cplx> rho(n), tmp, conv;
    for (int m = 0; m < n; ++m) rho[m] = std::norm(st_.psi.v[m]);
    fft(g, rho, tmp);
    for (int k = 0; k < n; ++k) tmp[k] *= kernel_hat_[k];
    ifft(g, tmp, conv);
    for (int m = 0; m < n; ++m) inter += conv[m].real() * rho[m].real();
    inter *= 0.5 * alpha_pref_ * h * h;
  }
  return kin + pot + inter;
}

std::map<double, SpectralField> PDESolver::run(
    const std::vector<double>& snapshot_times,
    const std::function<void(const PDEState&)>& obs) {
  double dt = cfg_.dt();
  int nsteps = int(std::lround(cfg_.T / dt));
  std::map<long, double> want;
  for (double ts : snapshot_times) {
    long i = std::lround(ts / dt);
    if (std::abs(i * dt - ts) > 1e-9)
      throw std::invalid_argument("pde run: snapshot times must be step multiples");
    want[i] = ts;
  }
  std::map<double, SpectralField> out;
  if (want.count(0)) out.emplace(want[0], st_.psi);
  if (obs) obs(st_);
  for (int i = 1; i <= nsteps; ++i) {
    step();
    if (obs) obs(st_);
    auto it = want.find(i);
    if (it != want.end()) out.emplace(it->second, st_.psi);
  }
  return out;
}

}  // namespace hlab
