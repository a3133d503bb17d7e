#include "hartreelab/trajectories.hpp"

#include <cmath>
#include <stdexcept>

namespace hlab {

namespace {

using RHS = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

void check_finite(const Eigen::VectorXd& s) {
  if (!s.allFinite())
    throw std::runtime_error("trajectory integration produced non-finite state");
}

// fixed-step RK4 with stored node derivatives (for Hermite dense output)
void rk4(const RHS& f, Eigen::VectorXd s, double T, double dt,
         std::vector<Eigen::VectorXd>& states,
         std::vector<Eigen::VectorXd>& derivs) {
  int n = int(std::lround(T / dt));
  if (n <= 0 || std::abs(n * dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("rk4: T must be a multiple of dt");
  states.clear();
  derivs.clear();
  states.reserve(n + 1);
  derivs.reserve(n + 1);
  states.push_back(s);
  derivs.push_back(f(0, s));
  double t = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd k1 = f(t, s);
    Eigen::VectorXd k2 = f(t + dt / 2, s + (dt / 2) * k1);
    Eigen::VectorXd k3 = f(t + dt / 2, s + (dt / 2) * k2);
    Eigen::VectorXd k4 = f(t + dt, s + dt * k3);
    s += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    t += dt;
    check_finite(s);
    states.push_back(s);
    derivs.push_back(f(t, s));
  }
}

}  // namespace

TrajectoryState TrajectorySolution::unpack(const Eigen::VectorXd& s,
                                           double t) const {
  TrajectoryState st;
  st.t = t;
  st.two_packets = two_packets;
  st.q1 = s.segment(0, dim);
  st.p1 = s.segment(dim, dim);
  if (two_packets) {
    st.q2 = s.segment(2 * dim, dim);
    st.p2 = s.segment(3 * dim, dim);
  } else {
    st.q2 = Vec::Zero(dim);
    st.p2 = Vec::Zero(dim);
  }
  return st;
}

TrajectoryState TrajectorySolution::node(int i) const {
  return unpack(states.at(i), i * dt);
}

TrajectoryState TrajectorySolution::state(double t) const {
  if (t <= 0) return node(0);
  if (t >= T) return node(nsteps());
  double u = t / dt;
  int i = int(u);
  if (i >= nsteps()) i = nsteps() - 1;
  double s = u - i;
  // cubic Hermite on [t_i, t_{i+1}]
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  Eigen::VectorXd v = h00 * states[i] + (h10 * dt) * derivs[i] +
                      h01 * states[i + 1] + (h11 * dt) * derivs[i + 1];
  return unpack(v, t);
}

TrajectorySolution integrate_standard(const PotentialSpec& V, const Vec& q10,
                                      const Vec& p10,
                                      const std::optional<Vec>& q20,
                                      const std::optional<Vec>& p20, double T,
                                      double dt, double alpha1, double alpha2) {
  int d = int(q10.size());
  bool two = q20.has_value();
  TrajectorySolution out;
  out.dt = dt;
  out.T = T;
  out.dim = d;
  out.two_packets = two;
  out.alpha1 = alpha1;
  out.alpha2 = two ? alpha2 : 0.0;
  int n = two ? 4 * d : 2 * d;
  Eigen::VectorXd s0(n);
  s0.segment(0, d) = q10;
  s0.segment(d, d) = p10;
  if (two) {
    s0.segment(2 * d, d) = *q20;
    s0.segment(3 * d, d) = *p20;
  }
  RHS f = [&V, d, two](double t, const Eigen::VectorXd& s) {
    Eigen::VectorXd r(s.size());
    Vec q = s.segment(0, d);
    r.segment(0, d) = s.segment(d, d);
    r.segment(d, d) = -grad_V(V, t, q);
    if (two) {
      Vec q2 = s.segment(2 * d, d);
      r.segment(2 * d, d) = s.segment(3 * d, d);
      r.segment(3 * d, d) = -grad_V(V, t, q2);
    }
    return r;
  };
  rk4(f, s0, T, dt, out.states, out.derivs);
  return out;
}

TrajectorySolution integrate_coupled(const PotentialSpec& V, const KernelSpec& K,
                                     const Vec& q10, const Vec& p10,
                                     const Vec& q20, const Vec& p20,
                                     double alpha1, double alpha2, double T,
                                     double dt) {
  if (alpha1 < 0 || alpha2 < 0)
    throw std::invalid_argument("integrate_coupled: masses must be >= 0");
  int d = int(q10.size());
  TrajectorySolution out;
  out.dt = dt;
  out.T = T;
  out.dim = d;
  out.two_packets = true;
  out.alpha1 = alpha1;
  out.alpha2 = alpha2;
  Eigen::VectorXd s0(4 * d);
  s0.segment(0, d) = q10;
  s0.segment(d, d) = p10;
  s0.segment(2 * d, d) = q20;
  s0.segment(3 * d, d) = p20;
  Vec zero = Vec::Zero(d);
  Vec gK0 = grad_K(K, zero);
  RHS f = [&, d](double t, const Eigen::VectorXd& s) {
    Eigen::VectorXd r(4 * d);
    Vec q1 = s.segment(0, d), q2 = s.segment(2 * d, d);
    r.segment(0, d) = s.segment(d, d);
    r.segment(d, d) =
        -grad_V(V, t, q1) - alpha1 * gK0 - alpha2 * grad_K(K, Vec(q1 - q2));
    r.segment(2 * d, d) = s.segment(3 * d, d);
    r.segment(3 * d, d) =
        -grad_V(V, t, q2) - alpha2 * gK0 - alpha1 * grad_K(K, Vec(q2 - q1));
    return r;
  };
  rk4(f, s0, T, dt, out.states, out.derivs);
  return out;
}

std::vector<double> cumulative_simpson(const std::vector<double>& f, double dt) {
  // composite Simpson on even panels; odd endpoints via local quadratic
  std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + dt / 3.0 * (f[i - 2] + 4 * f[i - 1] + f[i]);
    } else if (i + 1 < n) {
      // integrate the quadratic through (i-1, i, i+1) over its first half
      out[i] = out[i - 1] + dt / 12.0 * (5 * f[i - 1] + 8 * f[i] - f[i + 1]);
    } else {
      out[i] = out[i - 1] + dt / 2.0 * (f[i - 1] + f[i]);
    }
  }
  return out;
}

std::vector<double> action_classical(const TrajectorySolution& traj,
                                     const PotentialSpec& V, int j) {
  if (j != 1 && j != 2) throw std::invalid_argument("action_classical: j in {1,2}");
  std::vector<double> lag(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    TrajectoryState s = traj.node(int(i));
    const Vec& q = (j == 1) ? s.q1 : s.q2;
    const Vec& p = (j == 1) ? s.p1 : s.p2;
    lag[i] = 0.5 * p.squaredNorm() - eval_V(V, s.t, q);
  }
  return cumulative_simpson(lag, traj.dt);
}

double ActionIntegrals::eval(int j, double t, double eps) const {
  const auto& S = scl[j - 1];
  double u = t / dt;
  auto interp = [&](const std::vector<double>& a) {
    if (a.empty()) return 0.0;
    if (u <= 0) return a.front();
    std::size_t i = std::size_t(u);
    if (i >= a.size() - 1) return a.back();
    double w = u - double(i);
    return (1 - w) * a[i] + w * a[i + 1];
  };
  double se = std::sqrt(eps);
  double v = interp(S);
  switch (regime) {
    case ActionRegime::Critical: break;
    case ActionRegime::Half: v += se * interp(coupling[j - 1]); break;
    case ActionRegime::Zero:
      v += interp(coupling[j - 1]) + se * interp(moment[j - 1]);
      break;
  }
  return v;
}

std::vector<double> ActionIntegrals::series(int j, double eps) const {
  std::vector<double> out(scl[j - 1].size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = eval(j, double(i) * dt, eps);
  return out;
}

ActionIntegrals action_modified(const TrajectorySolution& traj,
                                const PotentialSpec& V, const KernelSpec& K,
                                ActionRegime regime, const MomentFn& moments) {
  ActionIntegrals ai;
  ai.regime = regime;
  ai.dt = traj.dt;
  ai.scl[0] = action_classical(traj, V, 1);
  ai.scl[1] = traj.two_packets ? action_classical(traj, V, 2)
                               : std::vector<double>(ai.scl[0].size(), 0.0);
  if (regime == ActionRegime::Critical) return ai;
  if (regime == ActionRegime::Zero && !moments)
    throw std::invalid_argument(
        "action_modified: Zero regime requires envelope moments G_j");

  std::size_t n = traj.states.size();
  double K0 = eval_K(K, Vec::Zero(traj.dim));
  std::vector<double> c1(n), c2(n), m1(n), m2(n);
  for (std::size_t i = 0; i < n; ++i) {
    TrajectoryState s = traj.node(int(i));
    Vec dq = s.dq();
    double Kp = eval_K(K, dq), Km = eval_K(K, Vec(-dq));
    c1[i] = -K0 * traj.alpha1 - Kp * traj.alpha2;
    c2[i] = -K0 * traj.alpha2 - Km * traj.alpha1;
    if (regime == ActionRegime::Zero) {
      Vec G1 = moments(1, s.t), G2 = moments(2, s.t);
      Vec g0 = grad_K(K, Vec::Zero(traj.dim));
      m1[i] = g0.dot(G1) + grad_K(K, dq).dot(G2);
      m2[i] = g0.dot(G2) + grad_K(K, Vec(-dq)).dot(G1);
    }
  }
  ai.coupling[0] = cumulative_simpson(c1, traj.dt);
  ai.coupling[1] = cumulative_simpson(c2, traj.dt);
  if (regime == ActionRegime::Zero) {
    ai.moment[0] = cumulative_simpson(m1, traj.dt);
    ai.moment[1] = cumulative_simpson(m2, traj.dt);
  }
  return ai;
}

HamiltonianValue hamiltonianvalue_make(double v, bool ok) {
  HamiltonianValue h;
  h.value = v;
  h.conserved_preconditions = ok;
  return h;
}

HamiltonianValue hamiltonian_invariant(const TrajectoryState& s,
                                       const PotentialSpec& V,
                                       const KernelSpec& K, double alpha1,
                                       double alpha2) {
  double v = alpha1 * (0.5 * s.p1.squaredNorm() + eval_V(V, 0.0, s.q1));
  if (s.two_packets && alpha2 != 0) {
    v += alpha2 * (0.5 * s.p2.squaredNorm() + eval_V(V, 0.0, s.q2));
    v += alpha1 * alpha2 * eval_K(K, s.dq());
  }
  bool ok = !V.time_dependent() && K.is_even();
  return hamiltonianvalue_make(v, ok);
}

double separation_eta(const TrajectorySolution& traj, double T) {
  if (!traj.two_packets)
    throw std::invalid_argument("separation_eta: two-packet trajectory required");
  double eta = std::numeric_limits<double>::infinity();
  int n = traj.nsteps();
  for (int i = 0; i <= n; ++i) {
    if (i * traj.dt > T + 1e-12) break;
    TrajectoryState s = traj.node(i);
    eta = std::min(eta, std::max(s.dq().norm(), s.dp().norm()));
  }
  return eta;
}

}  // namespace hlab
