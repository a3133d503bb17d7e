#include "hartreelab/corrector.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace hlab {

namespace {

double cross_moment(const Grid& g, const SpectralField& u,
                    const SpectralField& uc) {
  double s = 0;
  for (int m = 0; m < g.ax[0].n; ++m) {
    double z = g.ax[0].point(m) - g.ax[0].center;
    s += z * std::real(std::conj(u.v[m]) * uc.v[m]);
  }
  return 2.0 * g.cell() * s;
}

}  // namespace

int CorrectorResult::snap_index(double t) const {
  for (std::size_t s = 0; s < snap_times.size(); ++s)
    if (std::abs(snap_times[s] - t) <= 1e-9 * std::max(1.0, T)) return int(s);
  throw std::invalid_argument("CorrectorResult: no snapshot at requested time");
}

CorrectorResult solve_corrector(const SpectralField& a1, const SpectralField& a2,
                                const TrajectorySolution& traj,
                                const PotentialSpec& V, const KernelSpec& K,
                                double alpha1, double alpha2,
                                const CorrectorOptions& opt) {
  const Grid& g = a1.grid;
  if (g.dim != 1 || a2.grid != g)
    throw std::invalid_argument("solve_corrector: mismatched 1d grids");
  int n = int(std::lround(opt.T / opt.dt));
  if (n <= 0 || std::abs(n * opt.dt - opt.T) > 1e-9)
    throw std::invalid_argument("solve_corrector: T must be multiple of dt");
  int stride = opt.snap_stride > 0 ? opt.snap_stride : std::max(1, n / 128);
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
  // hess K(0) and grad^3 K(0) kernels are time independent
  std::unique_ptr<LinearKernel> K0diag, Kcdiag;
  if (kernel_on) {
    K0diag = std::make_unique<LinearKernel>(g, [&](double w) {
      return taylor_remainder_K(K, zero, vec1(w), 0.0);
    });
    Kcdiag = std::make_unique<LinearKernel>(g, [&](double w) {
      return third_K(K, zero).contract(vec1(w)) / 6.0;
    });
  }

  CorrectorResult res;
  res.grid = g;
  res.dt = dt;
  res.T = opt.T;

  SpectralField u1 = a1, u2 = a2;       // base envelopes (eq:systenv0, direct)
  SpectralField c1(g), c2(g);           // correctors, zero Cauchy data
  double m1 = l2_norm(a1), m2 = l2_norm(a2);

  auto record = [&](int step) {
    double t = step * dt;
    res.times.push_back(t);
    res.X1.push_back(cross_moment(g, u1, c1));
    res.X2.push_back(cross_moment(g, u2, c2));
    if (step % stride == 0 || step == n) {
      res.snap_steps.push_back(step);
      res.snap_times.push_back(t);
      res.u1c.push_back(c1);
      res.u2c.push_back(c2);
      res.u1.push_back(u1);
      res.u2.push_back(u2);
    }
    double d1 = std::abs(l2_norm(u1) - m1) / std::max(m1, 1e-300);
    double d2 = std::abs(l2_norm(u2) - m2) / std::max(m2, 1e-300);
    res.base_mass_drift = std::max({res.base_mass_drift, d1, d2});
  };
  record(0);

  std::vector<double> P1(N), P2(N);
  std::vector<cplx> S1(N), S2(N), rho1(N), rho2(N);
  for (int i = 0; i < n; ++i) {
    double tm = (i + 0.5) * dt;
    TrajectoryState s = traj.state(tm);

    // midpoint base envelopes via the half-kinetic predictor
    SpectralField u1m = u1, u2m = u2;
    half_kin(u1m);
    half_kin(u2m);
    for (int m = 0; m < N; ++m) {
      rho1[m] = std::norm(u1m.v[m]);
      rho2[m] = std::norm(u2m.v[m]);
    }

    // homogeneous real potential P_j = V_j^0 + K0_diag*|u_j|^2 + K0_off*|u_k|^2
    double h1 = hess_V(V, tm, s.q1)(0, 0), h2 = hess_V(V, tm, s.q2)(0, 0);
    for (int m = 0; m < N; ++m) {
      P1[m] = 0.5 * h1 * y[m] * y[m];
      P2[m] = 0.5 * h2 * y[m] * y[m];
    }
    std::unique_ptr<LinearKernel> K0off1, K0off2, Kcoff1, Kcoff2;
    if (kernel_on) {
      K0off1 = std::make_unique<LinearKernel>(g, [&](double w) {
        return taylor_remainder_K(K, s.dq(), vec1(w), 0.0);
      });
      K0off2 = std::make_unique<LinearKernel>(g, [&](double w) {
        return taylor_remainder_K(K, Vec(-s.dq()), vec1(w), 0.0);
      });
      Kcoff1 = std::make_unique<LinearKernel>(g, [&](double w) {
        return third_K(K, s.dq()).contract(vec1(w)) / 6.0;
      });
      Kcoff2 = std::make_unique<LinearKernel>(g, [&](double w) {
        return third_K(K, Vec(-s.dq())).contract(vec1(w)) / 6.0;
      });
      auto d1 = K0diag->apply_real(rho1);
      auto d2 = K0diag->apply_real(rho2);
      auto o1 = K0off1->apply_real(rho2);
      auto o2 = K0off2->apply_real(rho1);
      for (int m = 0; m < N; ++m) {
        P1[m] += d1[m] + o1[m];
        P2[m] += d2[m] + o2[m];
      }
    }

    // sources S_j = (Vcal_j + Kcal_diag*|u_j|^2 + Kcal_off*|u_k|^2) u_j
    Tensor3 tv1 = third_V(V, tm, s.q1), tv2 = third_V(V, tm, s.q2);
    std::vector<double> src1(N, 0.0), src2(N, 0.0);
    for (int m = 0; m < N; ++m) {
      src1[m] = tv1.contract(vec1(y[m])) / 6.0;
      src2[m] = tv2.contract(vec1(y[m])) / 6.0;
    }
    if (kernel_on) {
      auto cd1 = Kcdiag->apply_real(rho1);
      auto cd2 = Kcdiag->apply_real(rho2);
      auto co1 = Kcoff1->apply_real(rho2);
      auto co2 = Kcoff2->apply_real(rho1);
      for (int m = 0; m < N; ++m) {
        src1[m] += cd1[m] + co1[m];
        src2[m] += cd2[m] + co2[m];
      }
    }
    for (int m = 0; m < N; ++m) {
      S1[m] = opt.source_scale * src1[m] * u1m.v[m];
      S2[m] = opt.source_scale * src2[m] * u2m.v[m];
    }

    // RHS of i c' = P c + L[c] u + S in field space
    auto rhs = [&](const SpectralField& x1, const SpectralField& x2,
                   SpectralField& r1, SpectralField& r2) {
      std::vector<double> L1(N, 0.0), L2(N, 0.0);
      if (kernel_on) {
        std::vector<cplx> cr1(N), cr2(N);
        for (int m = 0; m < N; ++m) {
          cr1[m] = std::real(std::conj(u1m.v[m]) * x1.v[m]);
          cr2[m] = std::real(std::conj(u2m.v[m]) * x2.v[m]);
        }
        auto a1v = K0diag->apply_real(cr1);
        auto b1v = K0off1->apply_real(cr2);
        auto a2v = K0diag->apply_real(cr2);
        auto b2v = K0off2->apply_real(cr1);
        for (int m = 0; m < N; ++m) {
          L1[m] = 2.0 * (a1v[m] + b1v[m]);
          L2[m] = 2.0 * (a2v[m] + b2v[m]);
        }
      }
      for (int m = 0; m < N; ++m) {
        r1.v[m] = cplx(0, -1) * (P1[m] * x1.v[m] + L1[m] * u1m.v[m] + S1[m]);
        r2.v[m] = cplx(0, -1) * (P2[m] * x2.v[m] + L2[m] * u2m.v[m] + S2[m]);
      }
    };

    // Strang: half kinetic, RK2 midpoint for potential+coupling+source,
    // half kinetic
    half_kin(c1);
    half_kin(c2);
    SpectralField r1(g), r2(g), h1f(g), h2f(g);
    rhs(c1, c2, r1, r2);
    for (int m = 0; m < N; ++m) {
      h1f.v[m] = c1.v[m] + 0.5 * dt * r1.v[m];
      h2f.v[m] = c2.v[m] + 0.5 * dt * r2.v[m];
    }
    rhs(h1f, h2f, r1, r2);
    for (int m = 0; m < N; ++m) {
      c1.v[m] += dt * r1.v[m];
      c2.v[m] += dt * r2.v[m];
    }
    half_kin(c1);
    half_kin(c2);

    // advance the base envelopes (direct eq:systenv0 step, shared predictor)
    {
      TrajectoryState sm = s;
      auto cm = coupling_matrices(V, K, alpha1, alpha2, sm);
      double k0 = kernel_on ? hess_K(K, zero)(0, 0) : 0.0;
      double kp = kernel_on ? hess_K(K, sm.dq())(0, 0) : 0.0;
      double km = kernel_on ? hess_K(K, Vec(-sm.dq()))(0, 0) : 0.0;
      double G1 = moments(u1m).first[0], G2 = moments(u2m).first[0];
      double Q1 = quadratic_moment(u1m)(0, 0), Q2 = quadratic_moment(u2m)(0, 0);
      double cc1 = k0 * G1 + kp * G2, cc2 = k0 * G2 + km * G1;
      double sc1 = 0.5 * (k0 * Q1 + kp * Q2), sc2 = 0.5 * (k0 * Q2 + km * Q1);
      for (int m = 0; m < N; ++m) {
        double F1 = 0.5 * cm.M1(0, 0) * y[m] * y[m] - cc1 * y[m] + sc1;
        double F2 = 0.5 * cm.M2(0, 0) * y[m] * y[m] - cc2 * y[m] + sc2;
        u1m.v[m] *= std::exp(cplx(0, -dt * F1));
        u2m.v[m] *= std::exp(cplx(0, -dt * F2));
      }
      half_kin(u1m);
      half_kin(u2m);
      u1 = std::move(u1m);
      u2 = std::move(u2m);
    }
    record(i + 1);
  }
  return res;
}

double PhaseShiftRecord::theta(int j, double t) const {
  const auto& th = (j == 1) ? theta1 : theta2;
  if (th.empty()) return 0;
  double dt = times.size() > 1 ? times[1] - times[0] : 1;
  double u = t / dt;
  if (u <= 0) return th.front();
  std::size_t i = std::size_t(u);
  if (i >= th.size() - 1) return th.back();
  double w = u - double(i);
  return (1 - w) * th[i] + w * th[i + 1];
}

PhaseShiftRecord theta_limit(const CorrectorResult& corr,
                             const TrajectorySolution& traj,
                             const KernelSpec& K) {
  std::size_t n = corr.times.size();
  PhaseShiftRecord rec;
  rec.times = corr.times;
  Vec zero = Vec::Zero(traj.dim);
  Vec gK0 = grad_K(K, zero);
  std::vector<double> f1(n), f2(n);
  for (std::size_t i = 0; i < n; ++i) {
    TrajectoryState s = traj.state(corr.times[i]);
    f1[i] = gK0[0] * corr.X1[i] + grad_K(K, s.dq())[0] * corr.X2[i];
    f2[i] = gK0[0] * corr.X2[i] + grad_K(K, Vec(-s.dq()))[0] * corr.X1[i];
  }
  rec.theta1 = cumulative_simpson(f1, corr.dt);
  rec.theta2 = cumulative_simpson(f2, corr.dt);
  rec.theta1_dot = f1;
  rec.theta2_dot = f2;
  rec.theta1_T = rec.theta1.back();
  rec.theta2_T = rec.theta2.back();
  return rec;
}

ThetaDdotZero theta_ddot_zero(const SpectralField& a1, const SpectralField& a2,
                              const PotentialSpec& V, const KernelSpec& K,
                              const Vec& q10, const Vec& q20) {
  const Grid& g = a1.grid;
  if (g.dim != 1 || a2.grid != g)
    throw std::invalid_argument("theta_ddot_zero: mismatched 1d grids");
  int N = g.ax[0].n;
  Vec zero = Vec::Zero(q10.size());
  Vec gK0 = grad_K(K, zero);
  std::vector<cplx> rho1(N), rho2(N);
  for (int m = 0; m < N; ++m) {
    rho1[m] = std::norm(a1.v[m]);
    rho2[m] = std::norm(a2.v[m]);
  }
  ThetaDdotZero out;
  for (int j = 1; j <= 2; ++j) {
    const SpectralField& aj = (j == 1) ? a1 : a2;
    const SpectralField& ak = (j == 1) ? a2 : a1;
    const auto& rj = (j == 1) ? rho1 : rho2;
    const auto& rk = (j == 1) ? rho2 : rho1;
    Vec qj = (j == 1) ? q10 : q20;
    Vec dq = (j == 1) ? Vec(q10 - q20) : Vec(q20 - q10);
    Tensor3 tv = third_V(V, 0.0, qj);
    LinearKernel kd(g, [&](double w) { return third_K(K, zero).contract(vec1(w)) / 6.0; });
    LinearKernel ko(g, [&](double w) { return third_K(K, dq).contract(vec1(w)) / 6.0; });
    auto cd = kd.apply_real(rj);
    auto co = ko.apply_real(rk);
    double acc = 0, first = 0;
    for (int m = 0; m < N; ++m) {
      double z = g.ax[0].point(m) - g.ax[0].center;
      double R = tv.contract(vec1(z)) / 6.0 + cd[m] + co[m];
      double im_cross = 2.0 * std::imag(std::conj(ak.v[m]) * aj.v[m]);
      double im_self = 2.0 * std::imag(std::conj(aj.v[m]) * aj.v[m]);
      acc += z * R * im_cross;
      first += z * R * im_self;  // identically zero
    }
    out.value[j - 1] = grad_K(K, dq)[0] * g.cell() * acc;
    out.first_line[j - 1] = gK0[0] * g.cell() * first;
  }
  return out;
}

}  // namespace hlab
