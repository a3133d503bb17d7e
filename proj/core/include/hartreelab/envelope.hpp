#pragma once

#include <functional>
#include <vector>

#include "hartreelab/grid.hpp"
#include "hartreelab/potential.hpp"
#include "hartreelab/trajectories.hpp"

namespace hlab {

enum class EnvelopeRegime { Linear, Critical, HalfTilde, Half, ZeroV, ZeroU };

// First moments G_j = int z |u_j|^2, momentum moments J_j = Im int conj(u_j) grad u_j,
// and quadratic moments Q_j = int z z^T |u_j|^2, recorded at every step.
struct MomentRecord {
  std::vector<double> times;
  std::vector<Vec> G1, J1, G2, J2;
  std::vector<Mat> Q1, Q2;
};

// Result of an envelope solve: per-step moments and gauge phases, fields at
// snapshot steps.
struct EnvelopeHistory {
  Grid grid;
  EnvelopeRegime regime = EnvelopeRegime::Linear;
  bool two_packets = true;
  double dt = 0, T = 0;
  MomentRecord moments;
  std::vector<double> gauge1, gauge2;  // accumulated phase per step
  std::vector<int> snap_steps;
  std::vector<double> snap_times;
  std::vector<SpectralField> u1, u2;  // fields at snapshots
  double max_mass_drift = 0;          // relative, over all steps and packets

  int nsteps() const { return int(moments.times.size()) - 1; }
  // index of the snapshot at time t (must match a snapshot time)
  int snap_index(double t) const;
  const SpectralField& field(int j, int snap) const;
  Vec G(int j, double t) const;      // linear interpolation between steps
  double gauge(int j, double t) const;
  MomentFn moment_fn() const;        // adapter for action_modified
};

struct EnvelopeOptions {
  double T = 1.0;
  double dt = 1e-3;
  int snap_stride = 0;  // 0 = auto (~128 snapshots)
};

std::pair<Vec, Vec> moments(const SpectralField& f);  // (G, J)
Mat quadratic_moment(const SpectralField& f);         // int z z^T |f|^2

// M_j(t) of the alpha=0 envelope system.
struct CouplingMatrices {
  Mat M1, M2;
};
CouplingMatrices coupling_matrices(const PotentialSpec& V, const KernelSpec& K,
                                   double alpha1, double alpha2,
                                   const TrajectoryState& s);

// --- regime solves (d=1) ---

// i dt u + 1/2 u_yy = 1/2 <y, hess V(t, q_j(t)) y> u
EnvelopeHistory solve_linear_envelope(const SpectralField& a,
                                      const TrajectorySolution& traj, int j,
                                      const PotentialSpec& V,
                                      const EnvelopeOptions& opt);

// critical regime: multiply linear envelopes by the self-modulation and
// coupling phases exp(-i t K(0) a_j - i a_{j+1} int K(+-dq)).
EnvelopeHistory dress_critical(const EnvelopeHistory& lin1,
                               const EnvelopeHistory& lin2,
                               const TrajectorySolution& traj,
                               const KernelSpec& K, double alpha1,
                               double alpha2, bool with_coupling_phase = true);

// alpha=1/2 tilde system (linear-in-y kernel gradients added).
EnvelopeHistory solve_half_tilde(const SpectralField& a1,
                                 const SpectralField& a2,
                                 const TrajectorySolution& traj,
                                 const PotentialSpec& V, const KernelSpec& K,
                                 double alpha1, double alpha2,
                                 const EnvelopeOptions& opt);

// gauge eq:solenvhalf: u_j = tilde u_j exp(+i int grad K . G phases)
EnvelopeHistory gauge_half(const EnvelopeHistory& tilde, const KernelSpec& K,
                           const TrajectorySolution& traj);

// alpha=0 v-system (self-consistent first moments via half-kinetic predictor).
EnvelopeHistory solve_zero_v(const SpectralField& a1, const SpectralField& a2,
                             const TrajectorySolution& traj,
                             const PotentialSpec& V, const KernelSpec& K,
                             double alpha1, double alpha2,
                             const EnvelopeOptions& opt);

// gauge eq:gaugeinv: u_j = v_j exp(+i int quadratic-moment phases)
EnvelopeHistory gauge_zero(const EnvelopeHistory& v, const KernelSpec& K,
                           const TrajectorySolution& traj);

// diagnostic: eq:systenv0 solved directly (scalar nonlocal terms in the phase)
EnvelopeHistory solve_zero_u_direct(const SpectralField& a1,
                                    const SpectralField& a2,
                                    const TrajectorySolution& traj,
                                    const PotentialSpec& V, const KernelSpec& K,
                                    double alpha1, double alpha2,
                                    const EnvelopeOptions& opt);

// Picard scheme eq:vn: iterate linear solves with frozen moments.
struct PicardResult {
  EnvelopeHistory final;                 // last iterate
  std::vector<double> sigma_diffs;       // sup_t Sigma^1 |v^n - v^(n-1)| per n>=1
  std::vector<double> l2_diffs;
  std::vector<double> fn_max;            // max_t f_n per iterate
  bool contracting = false;              // diffs decreasing from n >= 3
};
PicardResult picard_zero_v(const SpectralField& a1, const SpectralField& a2,
                           const TrajectorySolution& traj,
                           const PotentialSpec& V, const KernelSpec& K,
                           double alpha1, double alpha2,
                           const EnvelopeOptions& opt, int n_iter);

// Residual of the moment law  Gdd + M(t) G = -mass * F(t), with Gdd by
// second-order central differences of the recorded G series.
struct MomentResidual {
  std::vector<double> times;
  std::vector<double> residual;  // max-norm over components
  double max_residual = 0;
};
MomentResidual moment_ode_residual(const MomentRecord& rec, int j,
                                   const std::function<Mat(double)>& M,
                                   const std::function<Vec(double)>& F,
                                   double mass);

}  // namespace hlab
