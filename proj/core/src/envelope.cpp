#include "hartreelab/envelope.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

namespace {

struct StrangWorkspace {
  Grid g;
  std::vector<cplx> kin_half;  // exp(-i |xi|^2 dt / 4)
  std::vector<double> y;       // grid coordinates relative to center
  std::vector<cplx> buf;

  StrangWorkspace(const Grid& grid, double dt) : g(grid) {
    if (grid.dim != 1)
      throw std::invalid_argument("envelope solver: d=1 grids only");
    int n = g.ax[0].n;
    kin_half.resize(n);
    y.resize(n);
    for (int k = 0; k < n; ++k) {
      double xi = g.ax[0].freq(k);
      kin_half[k] = std::exp(cplx(0, -0.25 * xi * xi * dt));
    }
    for (int m = 0; m < n; ++m) y[m] = g.ax[0].point(m) - g.ax[0].center;
  }

  void half_kinetic(SpectralField& f) {
    fft(g, f.v, buf);
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= kin_half[k];
    ifft(g, buf, f.v);
  }

  void phase(SpectralField& f, const std::vector<double>& Phi, double dt) {
    for (std::size_t m = 0; m < f.v.size(); ++m)
      f.v[m] *= std::exp(cplx(0, -dt * Phi[m]));
  }
};

// One Strang loop shared by every regime. `make_phase(tmid, predictor, Phi)`
// fills the real potential for each packet from the half-kinetic predictor,
// which carries the first moments to the step midpoint exactly under the
// free flow.
using PhaseFn = std::function<void(double, const std::vector<SpectralField*>&,
                                   std::vector<std::vector<double>>&)>;

EnvelopeHistory strang_loop(const Grid& g, std::vector<SpectralField> f,
                            double T, double dt, int snap_stride,
                            EnvelopeRegime regime, const PhaseFn& make_phase) {
  int npk = int(f.size());
  int n = int(std::lround(T / dt));
  if (n <= 0 || std::abs(n * dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("envelope solve: T must be a multiple of dt");
  if (snap_stride <= 0) snap_stride = std::max(1, n / 128);

  StrangWorkspace ws(g, dt);
  EnvelopeHistory h;
  h.grid = g;
  h.regime = regime;
  h.two_packets = npk == 2;
  h.dt = dt;
  h.T = T;
  h.gauge1.assign(n + 1, 0.0);
  h.gauge2.assign(n + 1, 0.0);

  std::vector<double> mass0(npk);
  for (int j = 0; j < npk; ++j) mass0[j] = l2_norm(f[j]);

  auto record_moments = [&](double t) {
    h.moments.times.push_back(t);
    auto [G1, J1] = moments(f[0]);
    h.moments.G1.push_back(G1);
    h.moments.J1.push_back(J1);
    h.moments.Q1.push_back(quadratic_moment(f[0]));
    if (npk == 2) {
      auto [G2, J2] = moments(f[1]);
      h.moments.G2.push_back(G2);
      h.moments.J2.push_back(J2);
      h.moments.Q2.push_back(quadratic_moment(f[1]));
    }
  };
  auto record_snap = [&](int step) {
    h.snap_steps.push_back(step);
    h.snap_times.push_back(step * dt);
    h.u1.push_back(f[0]);
    if (npk == 2) h.u2.push_back(f[1]);
  };

  record_moments(0.0);
  record_snap(0);

  std::vector<std::vector<double>> Phi(npk,
                                       std::vector<double>(g.size(), 0.0));
  std::vector<SpectralField*> pred(npk);
  for (int j = 0; j < npk; ++j) pred[j] = &f[j];

  for (int i = 0; i < n; ++i) {
    double tmid = (i + 0.5) * dt;
    for (int j = 0; j < npk; ++j) ws.half_kinetic(f[j]);
    make_phase(tmid, pred, Phi);
    for (int j = 0; j < npk; ++j) {
      ws.phase(f[j], Phi[j], dt);
      ws.half_kinetic(f[j]);
    }
    record_moments((i + 1) * dt);
    if ((i + 1) % snap_stride == 0 || i + 1 == n) record_snap(i + 1);
    for (int j = 0; j < npk; ++j) {
      double drift = std::abs(l2_norm(f[j]) - mass0[j]) /
                     std::max(mass0[j], 1e-300);
      h.max_mass_drift = std::max(h.max_mass_drift, drift);
    }
  }
  return h;
}

std::vector<double> half_grid_y(const Grid& g) {
  std::vector<double> y(g.ax[0].n);
  for (int m = 0; m < g.ax[0].n; ++m)
    y[m] = g.ax[0].point(m) - g.ax[0].center;
  return y;
}

// apply a per-step time phase to the snapshot fields of a history
void apply_gauge(EnvelopeHistory& h, const std::vector<double>& phase1,
                 const std::vector<double>& phase2) {
  h.gauge1 = phase1;
  h.gauge2 = phase2;
  for (std::size_t s = 0; s < h.snap_steps.size(); ++s) {
    int i = h.snap_steps[s];
    cplx f1 = std::exp(cplx(0, phase1[i]));
    for (auto& z : h.u1[s].v) z *= f1;
    if (h.two_packets) {
      cplx f2 = std::exp(cplx(0, phase2[i]));
      for (auto& z : h.u2[s].v) z *= f2;
    }
  }
}

}  // namespace

int EnvelopeHistory::snap_index(double t) const {
  for (std::size_t s = 0; s < snap_times.size(); ++s)
    if (std::abs(snap_times[s] - t) <= 1e-9 * std::max(1.0, T)) return int(s);
  throw std::invalid_argument("EnvelopeHistory: no snapshot at requested time");
}

const SpectralField& EnvelopeHistory::field(int j, int snap) const {
  return j == 1 ? u1.at(snap) : u2.at(snap);
}

Vec EnvelopeHistory::G(int j, double t) const {
  const auto& G = (j == 1) ? moments.G1 : moments.G2;
  if (G.empty()) return Vec::Zero(1);
  double u = t / dt;
  if (u <= 0) return G.front();
  std::size_t i = std::size_t(u);
  if (i >= G.size() - 1) return G.back();
  double w = u - double(i);
  return Vec((1 - w) * G[i] + w * G[i + 1]);
}

double EnvelopeHistory::gauge(int j, double t) const {
  const auto& ph = (j == 1) ? gauge1 : gauge2;
  if (ph.empty()) return 0;
  double u = t / dt;
  if (u <= 0) return ph.front();
  std::size_t i = std::size_t(u);
  if (i >= ph.size() - 1) return ph.back();
  double w = u - double(i);
  return (1 - w) * ph[i] + w * ph[i + 1];
}

MomentFn EnvelopeHistory::moment_fn() const {
  const EnvelopeHistory* self = this;
  return [self](int j, double t) { return self->G(j, t); };
}

std::pair<Vec, Vec> moments(const SpectralField& f) {
  const Grid& g = f.grid;
  if (g.dim != 1) throw std::invalid_argument("moments: d=1 only");
  auto y = half_grid_y(g);
  double Gs = 0;
  for (std::size_t m = 0; m < f.v.size(); ++m) Gs += y[m] * std::norm(f.v[m]);
  SpectralField df = spectral_derivative(f, 0);
  double Js = 0;
  for (std::size_t m = 0; m < f.v.size(); ++m)
    Js += std::imag(std::conj(f.v[m]) * df.v[m]);
  double w = g.cell();
  return {vec1(w * Gs), vec1(w * Js)};
}

Mat quadratic_moment(const SpectralField& f) {
  const Grid& g = f.grid;
  if (g.dim != 1) throw std::invalid_argument("quadratic_moment: d=1 only");
  auto y = half_grid_y(g);
  double s = 0;
  for (std::size_t m = 0; m < f.v.size(); ++m)
    s += y[m] * y[m] * std::norm(f.v[m]);
  Mat Q(1, 1);
  Q(0, 0) = g.cell() * s;
  return Q;
}

CouplingMatrices coupling_matrices(const PotentialSpec& V, const KernelSpec& K,
                                   double alpha1, double alpha2,
                                   const TrajectoryState& s) {
  Vec zero = Vec::Zero(s.q1.size());
  Mat K0 = hess_K(K, zero);
  CouplingMatrices cm;
  cm.M1 = alpha1 * K0 + alpha2 * hess_K(K, s.dq()) + hess_V(V, s.t, s.q1);
  cm.M2 = alpha2 * K0 + alpha1 * hess_K(K, Vec(-s.dq())) + hess_V(V, s.t, s.q2);
  return cm;
}

EnvelopeHistory solve_linear_envelope(const SpectralField& a,
                                      const TrajectorySolution& traj, int j,
                                      const PotentialSpec& V,
                                      const EnvelopeOptions& opt) {
  const Grid& g = a.grid;
  if (spectral_tail_fraction(a) > 1e-8)
    std::fprintf(stderr,
                 "hartreelab: warning: envelope initial data under-resolved "
                 "(spectral tail %.2e)\n",
                 spectral_tail_fraction(a));
  auto y = half_grid_y(g);
  PhaseFn phase = [&, j, y](double tmid, const std::vector<SpectralField*>&,
                            std::vector<std::vector<double>>& Phi) {
    TrajectoryState s = traj.state(tmid);
    const Vec& q = (j == 1) ? s.q1 : s.q2;
    double h2 = hess_V(V, tmid, q)(0, 0);
    for (std::size_t m = 0; m < y.size(); ++m)
      Phi[0][m] = 0.5 * h2 * y[m] * y[m];
  };
  return strang_loop(g, {a}, opt.T, opt.dt, opt.snap_stride,
                     EnvelopeRegime::Linear, phase);
}

EnvelopeHistory dress_critical(const EnvelopeHistory& lin1,
                               const EnvelopeHistory& lin2,
                               const TrajectorySolution& traj,
                               const KernelSpec& K, double alpha1,
                               double alpha2, bool with_coupling_phase) {
  if (lin1.dt != lin2.dt || lin1.nsteps() != lin2.nsteps())
    throw std::invalid_argument("dress_critical: mismatched histories");
  int n = lin1.nsteps();
  double dt = lin1.dt;
  double K0 = eval_K(K, Vec::Zero(traj.dim));
  std::vector<double> kp(n + 1), km(n + 1);
  for (int i = 0; i <= n; ++i) {
    TrajectoryState s = traj.state(i * dt);
    kp[i] = eval_K(K, s.dq());
    km[i] = eval_K(K, Vec(-s.dq()));
  }
  auto Ip = cumulative_simpson(kp, dt), Im = cumulative_simpson(km, dt);
  std::vector<double> ph1(n + 1), ph2(n + 1);
  for (int i = 0; i <= n; ++i) {
    double t = i * dt;
    ph1[i] = -t * K0 * alpha1 - (with_coupling_phase ? alpha2 * Ip[i] : 0.0);
    ph2[i] = -t * K0 * alpha2 - (with_coupling_phase ? alpha1 * Im[i] : 0.0);
  }
  // merge the two single-packet histories into one two-packet record
  EnvelopeHistory out = lin1;
  out.regime = EnvelopeRegime::Critical;
  out.two_packets = true;
  out.u2 = lin2.u1;
  out.moments.G2 = lin2.moments.G1;
  out.moments.J2 = lin2.moments.J1;
  out.moments.Q2 = lin2.moments.Q1;
  out.max_mass_drift = std::max(lin1.max_mass_drift, lin2.max_mass_drift);
  apply_gauge(out, ph1, ph2);
  return out;
}

EnvelopeHistory solve_half_tilde(const SpectralField& a1,
                                 const SpectralField& a2,
                                 const TrajectorySolution& traj,
                                 const PotentialSpec& V, const KernelSpec& K,
                                 double alpha1, double alpha2,
                                 const EnvelopeOptions& opt) {
  const Grid& g = a1.grid;
  if (a2.grid != g) throw std::invalid_argument("solve_half_tilde: grids differ");
  Vec zero = Vec::Zero(traj.dim);
  double gK0 = grad_K(K, zero)[0];
  PhaseFn phase = [&](double tmid, const std::vector<SpectralField*>&,
                      std::vector<std::vector<double>>& Phi) {
    TrajectoryState s = traj.state(tmid);
    auto y = half_grid_y(g);
    double h1 = hess_V(V, tmid, s.q1)(0, 0);
    double h2 = hess_V(V, tmid, s.q2)(0, 0);
    double gp = grad_K(K, s.dq())[0];
    double gm = grad_K(K, Vec(-s.dq()))[0];
    for (std::size_t m = 0; m < y.size(); ++m) {
      Phi[0][m] = 0.5 * h1 * y[m] * y[m] + (alpha1 * gK0 + alpha2 * gp) * y[m];
      Phi[1][m] = 0.5 * h2 * y[m] * y[m] + (alpha2 * gK0 + alpha1 * gm) * y[m];
    }
  };
  return strang_loop(g, {a1, a2}, opt.T, opt.dt, opt.snap_stride,
                     EnvelopeRegime::HalfTilde, phase);
}

EnvelopeHistory gauge_half(const EnvelopeHistory& tilde, const KernelSpec& K,
                           const TrajectorySolution& traj) {
  int n = tilde.nsteps();
  double dt = tilde.dt;
  Vec zero = Vec::Zero(traj.dim);
  double gK0 = grad_K(K, zero)[0];
  std::vector<double> i1(n + 1), i2(n + 1);
  for (int i = 0; i <= n; ++i) {
    TrajectoryState s = traj.state(i * dt);
    double gp = grad_K(K, s.dq())[0];
    double gm = grad_K(K, Vec(-s.dq()))[0];
    double G1 = tilde.moments.G1[i][0], G2 = tilde.moments.G2[i][0];
    i1[i] = gK0 * G1 + gp * G2;
    i2[i] = gK0 * G2 + gm * G1;
  }
  auto ph1 = cumulative_simpson(i1, dt);
  auto ph2 = cumulative_simpson(i2, dt);
  EnvelopeHistory out = tilde;
  out.regime = EnvelopeRegime::Half;
  apply_gauge(out, ph1, ph2);
  return out;
}

EnvelopeHistory solve_zero_v(const SpectralField& a1, const SpectralField& a2,
                             const TrajectorySolution& traj,
                             const PotentialSpec& V, const KernelSpec& K,
                             double alpha1, double alpha2,
                             const EnvelopeOptions& opt) {
  const Grid& g = a1.grid;
  if (a2.grid != g) throw std::invalid_argument("solve_zero_v: grids differ");
  PhaseFn phase = [&](double tmid, const std::vector<SpectralField*>& pred,
                      std::vector<std::vector<double>>& Phi) {
    TrajectoryState s = traj.state(tmid);
    auto cm = coupling_matrices(V, K, alpha1, alpha2, s);
    Vec zero = Vec::Zero(traj.dim);
    double k0 = hess_K(K, zero)(0, 0);
    double kp = hess_K(K, s.dq())(0, 0);
    double km = hess_K(K, Vec(-s.dq()))(0, 0);
    double G1 = moments(*pred[0]).first[0];
    double G2 = moments(*pred[1]).first[0];
    auto y = half_grid_y(g);
    double c1 = k0 * G1 + kp * G2;   // <hess K(0) G1 + hess K(dq) G2, y>
    double c2 = k0 * G2 + km * G1;
    for (std::size_t m = 0; m < y.size(); ++m) {
      Phi[0][m] = 0.5 * cm.M1(0, 0) * y[m] * y[m] - c1 * y[m];
      Phi[1][m] = 0.5 * cm.M2(0, 0) * y[m] * y[m] - c2 * y[m];
    }
  };
  return strang_loop(g, {a1, a2}, opt.T, opt.dt, opt.snap_stride,
                     EnvelopeRegime::ZeroV, phase);
}

EnvelopeHistory solve_zero_u_direct(const SpectralField& a1,
                                    const SpectralField& a2,
                                    const TrajectorySolution& traj,
                                    const PotentialSpec& V, const KernelSpec& K,
                                    double alpha1, double alpha2,
                                    const EnvelopeOptions& opt) {
  const Grid& g = a1.grid;
  PhaseFn phase = [&](double tmid, const std::vector<SpectralField*>& pred,
                      std::vector<std::vector<double>>& Phi) {
    TrajectoryState s = traj.state(tmid);
    auto cm = coupling_matrices(V, K, alpha1, alpha2, s);
    Vec zero = Vec::Zero(traj.dim);
    double k0 = hess_K(K, zero)(0, 0);
    double kp = hess_K(K, s.dq())(0, 0);
    double km = hess_K(K, Vec(-s.dq()))(0, 0);
    double G1 = moments(*pred[0]).first[0];
    double G2 = moments(*pred[1]).first[0];
    double Q1 = quadratic_moment(*pred[0])(0, 0);
    double Q2 = quadratic_moment(*pred[1])(0, 0);
    auto y = half_grid_y(g);
    double c1 = k0 * G1 + kp * G2, c2 = k0 * G2 + km * G1;
    double s1 = 0.5 * (k0 * Q1 + kp * Q2);  // scalar nonlocal terms
    double s2 = 0.5 * (k0 * Q2 + km * Q1);
    for (std::size_t m = 0; m < y.size(); ++m) {
      Phi[0][m] = 0.5 * cm.M1(0, 0) * y[m] * y[m] - c1 * y[m] + s1;
      Phi[1][m] = 0.5 * cm.M2(0, 0) * y[m] * y[m] - c2 * y[m] + s2;
    }
  };
  return strang_loop(g, {a1, a2}, opt.T, opt.dt, opt.snap_stride,
                     EnvelopeRegime::ZeroU, phase);
}

EnvelopeHistory gauge_zero(const EnvelopeHistory& v, const KernelSpec& K,
                           const TrajectorySolution& traj) {
  int n = v.nsteps();
  double dt = v.dt;
  Vec zero = Vec::Zero(traj.dim);
  double k0 = hess_K(K, zero)(0, 0);
  std::vector<double> i1(n + 1), i2(n + 1);
  for (int i = 0; i <= n; ++i) {
    TrajectoryState s = traj.state(i * dt);
    double kp = hess_K(K, s.dq())(0, 0);
    double km = hess_K(K, Vec(-s.dq()))(0, 0);
    double Q1 = v.moments.Q1[i](0, 0), Q2 = v.moments.Q2[i](0, 0);
    i1[i] = k0 * Q1 + kp * Q2;
    i2[i] = k0 * Q2 + km * Q1;
  }
  auto ph1 = cumulative_simpson(i1, dt);
  auto ph2 = cumulative_simpson(i2, dt);
  EnvelopeHistory out = v;
  out.regime = EnvelopeRegime::ZeroU;
  apply_gauge(out, ph1, ph2);
  return out;
}

PicardResult picard_zero_v(const SpectralField& a1, const SpectralField& a2,
                           const TrajectorySolution& traj,
                           const PotentialSpec& V, const KernelSpec& K,
                           double alpha1, double alpha2,
                           const EnvelopeOptions& opt, int n_iter) {
  if (n_iter < 1) throw std::invalid_argument("picard_zero_v: n_iter >= 1");
  const Grid& g = a1.grid;
  int n = int(std::lround(opt.T / opt.dt));
  // v^(0) constant in time: frozen moments are those of the initial data
  std::vector<double> G1(n + 1, moments(a1).first[0]);
  std::vector<double> G2(n + 1, moments(a2).first[0]);

  PicardResult res;
  EnvelopeHistory prev;
  bool have_prev = false;
  EnvelopeOptions o = opt;
  o.snap_stride = std::max(1, n / 64);

  for (int it = 1; it <= n_iter; ++it) {
    PhaseFn phase = [&](double tmid, const std::vector<SpectralField*>&,
                        std::vector<std::vector<double>>& Phi) {
      TrajectoryState s = traj.state(tmid);
      auto cm = coupling_matrices(V, K, alpha1, alpha2, s);
      Vec zero = Vec::Zero(traj.dim);
      double k0 = hess_K(K, zero)(0, 0);
      double kp = hess_K(K, s.dq())(0, 0);
      double km = hess_K(K, Vec(-s.dq()))(0, 0);
      // frozen moments interpolated at the midpoint
      double u = tmid / opt.dt;
      std::size_t i = std::size_t(u);
      double w = u - double(i);
      double G1m = (1 - w) * G1[i] + w * G1[std::min<std::size_t>(i + 1, n)];
      double G2m = (1 - w) * G2[i] + w * G2[std::min<std::size_t>(i + 1, n)];
      auto y = half_grid_y(g);
      double c1 = k0 * G1m + kp * G2m, c2 = k0 * G2m + km * G1m;
      for (std::size_t m = 0; m < y.size(); ++m) {
        Phi[0][m] = 0.5 * cm.M1(0, 0) * y[m] * y[m] - c1 * y[m];
        Phi[1][m] = 0.5 * cm.M2(0, 0) * y[m] * y[m] - c2 * y[m];
      }
    };
    EnvelopeHistory h = strang_loop(g, {a1, a2}, opt.T, opt.dt, o.snap_stride,
                                    EnvelopeRegime::ZeroV, phase);
    // f_n(t) = |J1|^2 + |J2|^2 + |G1|^2 + |G2|^2
    double fn = 0;
    for (int i = 0; i <= n; ++i) {
      double v = h.moments.J1[i].squaredNorm() + h.moments.J2[i].squaredNorm() +
                 h.moments.G1[i].squaredNorm() + h.moments.G2[i].squaredNorm();
      fn = std::max(fn, v);
    }
    res.fn_max.push_back(fn);
    if (have_prev) {
      double dsig = 0, dl2 = 0;
      for (std::size_t s = 0; s < h.snap_steps.size(); ++s) {
        SpectralField d1 = h.u1[s] - prev.u1[s];
        SpectralField d2 = h.u2[s] - prev.u2[s];
        dsig = std::max(dsig, std::max(sigma_norm(d1, 1), sigma_norm(d2, 1)));
        dl2 = std::max(dl2, std::max(l2_norm(d1), l2_norm(d2)));
      }
      res.sigma_diffs.push_back(dsig);
      res.l2_diffs.push_back(dl2);
    }
    for (int i = 0; i <= n; ++i) {
      G1[i] = h.moments.G1[i][0];
      G2[i] = h.moments.G2[i][0];
    }
    prev = std::move(h);
    have_prev = true;
  }
  res.final = std::move(prev);
  res.contracting = true;
  for (std::size_t i = 2; i < res.sigma_diffs.size(); ++i)
    if (res.sigma_diffs[i] >= res.sigma_diffs[i - 1]) res.contracting = false;
  if (!res.contracting)
    std::fprintf(stderr,
                 "hartreelab: warning: Picard iterates not contracting; "
                 "consider a smaller T\n");
  return res;
}

MomentResidual moment_ode_residual(const MomentRecord& rec, int j,
                                   const std::function<Mat(double)>& M,
                                   const std::function<Vec(double)>& F,
                                   double mass) {
  const auto& G = (j == 1) ? rec.G1 : rec.G2;
  std::size_t n = rec.times.size();
  if (n < 3) throw std::invalid_argument("moment_ode_residual: need >= 3 samples");
  double dt = rec.times[1] - rec.times[0];
  MomentResidual out;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    Vec gdd = (G[i + 1] - 2 * G[i] + G[i - 1]) / (dt * dt);
    Vec r = gdd + M(rec.times[i]) * G[i] + mass * F(rec.times[i]);
    out.times.push_back(rec.times[i]);
    double rn = r.cwiseAbs().maxCoeff();
    out.residual.push_back(rn);
    out.max_residual = std::max(out.max_residual, rn);
  }
  return out;
}

}  // namespace hlab
