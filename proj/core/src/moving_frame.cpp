#include "hartreelab/moving_frame.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace hlab {

namespace {

// g(z) = e^{i z.dp/se} u1(z) conj(u2)(z + dq/se)
std::vector<cplx> rectangle_integrand(const RectangleTermConfig& cfg) {
  const Grid& g = cfg.u1->grid;
  double se = std::sqrt(cfg.eps);
  double shift = cfg.dq[0] / se;
  if (std::abs(shift) < 0.5 * g.ax[0].length &&
      mass_outside_half_box(*cfg.u2) > 1e-8)
    throw std::runtime_error(
        "rectangle_term: shifted envelope not representable (mass outside "
        "central half box > 1e-8)");
  SpectralField sh = shift_zero_extended(*cfg.u2, shift);
  int n = g.ax[0].n;
  std::vector<cplx> out(n);
  double w = cfg.dp[0] / se;
  for (int m = 0; m < n; ++m) {
    double z = g.ax[0].point(m);
    out[m] = std::exp(cplx(0, z * w)) * cfg.u1->v[m] * std::conj(sh.v[m]);
  }
  return out;
}

}  // namespace

SpectralField rectangle_term(const RectangleTermConfig& cfg,
                             bool direct_quadrature) {
  if (!cfg.u1 || !cfg.u2) throw std::invalid_argument("rectangle_term: fields");
  const Grid& g = cfg.u1->grid;
  if (g.dim != 1 || cfg.u2->grid != g)
    throw std::invalid_argument("rectangle_term: mismatched 1d grids");
  auto integ = rectangle_integrand(cfg);
  double se = std::sqrt(cfg.eps);
  SpectralField out(g);
  if (direct_quadrature) {
    int n = g.ax[0].n;
    double h = g.ax[0].h();
    for (int m = 0; m < n; ++m) {
      cplx acc = 0;
      double y = g.ax[0].point(m);
      for (int j = 0; j < n; ++j)
        acc += cfg.window(se * (y - g.ax[0].point(j))) * integ[j];
      out.v[m] = h * acc;
    }
    return out;
  }
  LinearKernel lk(g, [&](double w) { return cfg.window(se * w); });
  auto conv = lk.apply(integ);
  out.v = std::move(conv);
  return out;
}

RectangleDecayResult rectangle_decay_fit(const RectangleDecayConfig& cfg) {
  double eta = std::max(cfg.dq.norm(), cfg.dp.norm());
  if (!(eta > 0))
    throw std::invalid_argument(
        "rectangle_decay_fit: separation hypothesis violated (eta = 0)");
  SpectralField u1 = sample_amplitude(cfg.a1, cfg.ygrid);
  SpectralField u2 = sample_amplitude(cfg.a2, cfg.ygrid);
  RectangleDecayResult res;
  res.branch = cfg.dq.norm() >= cfg.dp.norm() ? "position" : "momentum";
  std::vector<double> le, lv;
  for (double eps : cfg.eps) {
    RectangleTermConfig rc;
    rc.window = cfg.window;
    rc.eps = eps;
    rc.dq = cfg.dq;
    rc.dp = cfg.dp;
    rc.u1 = &u1;
    rc.u2 = &u2;
    SpectralField I = rectangle_term(rc);
    double sup = 0;
    for (const auto& z : I.v) sup = std::max(sup, std::abs(z));
    if (sup > cfg.floor) {
      res.used_eps.push_back(eps);
      res.sup_values.push_back(sup);
      le.push_back(std::log(eps));
      lv.push_back(std::log(sup));
    }
  }
  if (le.size() < 2)
    throw std::runtime_error("rectangle_decay_fit: too few points above floor");
  double n = double(le.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < le.size(); ++i) {
    sx += le[i];
    sy += lv[i];
    sxx += le[i] * le[i];
    sxy += le[i] * lv[i];
  }
  res.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  res.intercept = (sy - res.slope * sx) / n;
  return res;
}

MovingFrameResult solve_moving_frame(const SpectralField& a1,
                                     const SpectralField& a2,
                                     const TrajectorySolution& traj,
                                     const PotentialSpec& V,
                                     const KernelSpec& K, double alpha1,
                                     double alpha2, double eps, Regime regime,
                                     const EnvelopeHistory& ref,
                                     const ActionIntegrals& actions,
                                     const MovingFrameOptions& opt) {
  (void)alpha1;
  (void)alpha2;
  if (regime != Regime::Zero && regime != Regime::Half)
    throw std::invalid_argument("solve_moving_frame: regime Zero or Half");
  const Grid& g = a1.grid;
  if (g.dim != 1 || a2.grid != g)
    throw std::invalid_argument("solve_moving_frame: mismatched 1d grids");
  int n = int(std::lround(opt.T / opt.dt));
  if (n <= 0 || std::abs(n * opt.dt - opt.T) > 1e-9)
    throw std::invalid_argument("solve_moving_frame: T must be multiple of dt");
  int stride = opt.snap_stride > 0 ? opt.snap_stride : std::max(1, n / 128);

  double se = std::sqrt(eps);
  double kweight = (regime == Regime::Half) ? se : 1.0;     // K-term weight
  double wpref = kweight / eps;                             // W~ prefactor
  double theta_pref = (regime == Regime::Half) ? 1.0 : 1.0 / se;

  int N = g.ax[0].n;
  double dt = opt.dt;
  std::vector<double> y(N);
  for (int m = 0; m < N; ++m) y[m] = g.ax[0].point(m) - g.ax[0].center;
  std::vector<cplx> kin_half(N), buf(N);
  for (int k = 0; k < N; ++k) {
    double xi = g.ax[0].freq(k);
    kin_half[k] = std::exp(cplx(0, -0.25 * xi * xi * dt));
  }
  auto half_kin = [&](SpectralField& f) {
    fft(g, f.v, buf);
    for (int k = 0; k < N; ++k) buf[k] *= kin_half[k];
    ifft(g, buf, f.v);
  };

  bool kernel_on = !K.is_zero();
  Vec zero = Vec::Zero(traj.dim);
  // eps-independent kernels, cached for the whole run
  std::unique_ptr<LinearKernel> Kdiag, Kwindow;
  if (kernel_on) {
    Kdiag = std::make_unique<LinearKernel>(
        g, [&](double w) { return taylor_remainder_K(K, zero, vec1(w), eps); });
    Kwindow = std::make_unique<LinearKernel>(
        g, [&](double w) { return eval_K(K, vec1(se * w)); });
  }

  MovingFrameResult res;
  res.hist.grid = g;
  res.hist.regime = EnvelopeRegime::ZeroU;
  res.hist.two_packets = true;
  res.hist.dt = dt;
  res.hist.T = opt.T;
  res.theta1.assign(n + 1, 0.0);
  res.theta2.assign(n + 1, 0.0);
  res.theta1_dot.assign(n + 1, 0.0);
  res.theta2_dot.assign(n + 1, 0.0);
  res.wcoupling.assign(n + 1, 0.0);

  SpectralField u1 = a1, u2 = a2;
  double m1 = l2_norm(a1), m2 = l2_norm(a2);

  auto record = [&](int step) {
    double t = step * dt;
    res.hist.moments.times.push_back(t);
    auto [G1, J1] = moments(u1);
    auto [G2, J2] = moments(u2);
    res.hist.moments.G1.push_back(G1);
    res.hist.moments.J1.push_back(J1);
    res.hist.moments.G2.push_back(G2);
    res.hist.moments.J2.push_back(J2);
    res.hist.moments.Q1.push_back(quadratic_moment(u1));
    res.hist.moments.Q2.push_back(quadratic_moment(u2));
    if (step % stride == 0 || step == n) {
      res.hist.snap_steps.push_back(step);
      res.hist.snap_times.push_back(t);
      res.hist.u1.push_back(u1);
      res.hist.u2.push_back(u2);
    }
    double d1 = std::abs(l2_norm(u1) - m1) / std::max(m1, 1e-300);
    double d2 = std::abs(l2_norm(u2) - m2) / std::max(m2, 1e-300);
    res.hist.max_mass_drift = std::max({res.hist.max_mass_drift, d1, d2});
  };
  record(0);

  // theta integrand at a step boundary, from current states
  auto theta_integrand = [&](double t, double& i1, double& i2) {
    if (!kernel_on) {
      i1 = i2 = 0;
      return;
    }
    TrajectoryState s = traj.state(t);
    Vec gK0 = grad_K(K, zero);
    Vec gKp = grad_K(K, s.dq());
    Vec gKm = grad_K(K, Vec(-s.dq()));
    Vec G1 = moments(u1).first, G2 = moments(u2).first;
    Vec R1 = ref.G(1, t), R2 = ref.G(2, t);
    i1 = theta_pref * (gK0.dot(Vec(G1 - R1)) + gKp.dot(Vec(G2 - R2)));
    i2 = theta_pref * (gK0.dot(Vec(G2 - R2)) + gKm.dot(Vec(G1 - R1)));
  };
  double prev_i1 = 0, prev_i2 = 0;
  theta_integrand(0.0, prev_i1, prev_i2);
  res.theta1_dot[0] = prev_i1;
  res.theta2_dot[0] = prev_i2;

  std::vector<double> Phi1(N), Phi2(N);
  for (int i = 0; i < n; ++i) {
    double t = i * dt, tm = t + 0.5 * dt;
    TrajectoryState s = traj.state(tm);
    half_kin(u1);
    half_kin(u2);

    // V_j^eps on the grid
    for (int m = 0; m < N; ++m) {
      Phi1[m] = taylor_remainder_V(V, tm, s.q1, vec1(y[m]), eps);
      Phi2[m] = taylor_remainder_V(V, tm, s.q2, vec1(y[m]), eps);
    }
    if (kernel_on) {
      std::vector<cplx> rho1(N), rho2(N);
      for (int m = 0; m < N; ++m) {
        rho1[m] = std::norm(u1.v[m]);
        rho2[m] = std::norm(u2.v[m]);
      }
      auto d1 = Kdiag->apply_real(rho1);
      auto d2 = Kdiag->apply_real(rho2);
      LinearKernel Koff1(g, [&](double w) {
        return taylor_remainder_K(K, s.dq(), vec1(w), eps);
      });
      LinearKernel Koff2(g, [&](double w) {
        return taylor_remainder_K(K, Vec(-s.dq()), vec1(w), eps);
      });
      auto o1 = Koff1.apply_real(rho2);
      auto o2 = Koff2.apply_real(rho1);
      for (int m = 0; m < N; ++m) {
        Phi1[m] += kweight * (d1[m] + o1[m]);
        Phi2[m] += kweight * (d2[m] + o2[m]);
      }
      if (opt.with_wtilde) {
        // W~_j at the midpoint, frozen over the step
        double S1 = actions.eval(1, tm, eps), S2 = actions.eval(2, tm, eps);
        double qp = s.q1.dot(s.p1) - s.q2.dot(s.p2);
        double th1 = res.theta1[i];  // theta frozen at the step start
        double th2 = res.theta2[i];
        if (regime == Regime::Half) {
          th1 += ref.gauge(1, tm);
          th2 += ref.gauge(2, tm);
        }
        double ph = (S1 - S2 - qp) / eps + (th1 - th2);
        double shift = s.dq()[0] / se;
        SpectralField sh2 = shift_zero_extended(u2, shift);
        SpectralField sh1 = shift_zero_extended(u1, -shift);
        std::vector<cplx> g1(N), g2(N);
        double wv = s.dp()[0] / se;
        for (int m = 0; m < N; ++m) {
          double z = g.ax[0].point(m);
          g1[m] = std::exp(cplx(0, z * wv)) * u1.v[m] * std::conj(sh2.v[m]);
          g2[m] = std::exp(cplx(0, -z * wv)) * u2.v[m] * std::conj(sh1.v[m]);
        }
        auto I1 = Kwindow->apply(g1);
        auto I2 = Kwindow->apply(g2);
        cplx e1 = std::exp(cplx(0, ph)), e2 = std::conj(e1);
        double w1 = 0, w2 = 0;
        for (int m = 0; m < N; ++m) {
          double c1 = 2.0 * wpref * std::real(e1 * I1[m]);
          double c2 = 2.0 * wpref * std::real(e2 * I2[m]);
          Phi1[m] += c1;
          Phi2[m] += c2;
          w1 += c1 * c1 * std::norm(u1.v[m]);
          w2 += c2 * c2 * std::norm(u2.v[m]);
        }
        double cell = g.cell();
        double wn = std::sqrt(cell * std::max(w1, w2));
        res.wcoupling[i + 1] = wn;
        res.max_wcoupling = std::max(res.max_wcoupling, wn);
      }
    }
    for (int m = 0; m < N; ++m) {
      u1.v[m] *= std::exp(cplx(0, -dt * Phi1[m]));
      u2.v[m] *= std::exp(cplx(0, -dt * Phi2[m]));
    }
    half_kin(u1);
    half_kin(u2);

    double i1 = 0, i2 = 0;
    theta_integrand((i + 1) * dt, i1, i2);
    res.theta1[i + 1] = res.theta1[i] + 0.5 * dt * (prev_i1 + i1);
    res.theta2[i + 1] = res.theta2[i] + 0.5 * dt * (prev_i2 + i2);
    res.theta1_dot[i + 1] = i1;
    res.theta2_dot[i + 1] = i2;
    prev_i1 = i1;
    prev_i2 = i2;
    record(i + 1);
  }
  res.hist.gauge1 = res.theta1;
  res.hist.gauge2 = res.theta2;
  return res;
}

}  // namespace hlab
