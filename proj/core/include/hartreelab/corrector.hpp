#pragma once

#include <vector>

#include "hartreelab/envelope.hpp"
#include "hartreelab/grid.hpp"
#include "hartreelab/potential.hpp"
#include "hartreelab/trajectories.hpp"

namespace hlab {

// Second-order corrector system: linear coupled equations for (u1c, u2c)
// with zero Cauchy data, driven by the third-order Taylor sources. The base
// envelopes (alpha=0 limit system) are co-evolved on the same step grid.
struct CorrectorOptions {
  double T = 0.5;
  double dt = 5e-4;
  int snap_stride = 0;
  double source_scale = 1.0;  // scales the cubic sources (linearity checks)
};

struct CorrectorResult {
  Grid grid;
  double dt = 0, T = 0;
  std::vector<double> times;        // per step
  std::vector<double> X1, X2;       // 2 Re int z conj(u_j) u_j^(1) dz per step
  std::vector<int> snap_steps;
  std::vector<double> snap_times;
  std::vector<SpectralField> u1c, u2c;  // corrector fields at snapshots
  std::vector<SpectralField> u1, u2;    // base envelopes at the same snapshots
  double base_mass_drift = 0;

  int snap_index(double t) const;
};

CorrectorResult solve_corrector(const SpectralField& a1, const SpectralField& a2,
                                const TrajectorySolution& traj,
                                const PotentialSpec& V, const KernelSpec& K,
                                double alpha1, double alpha2,
                                const CorrectorOptions& opt);

// Limiting phase shifts theta_j(t) (Simpson accumulation of the recorded
// cross moments) and their derivative evaluated directly from the integrand.
struct PhaseShiftRecord {
  std::vector<double> times;
  std::vector<double> theta1, theta2;
  std::vector<double> theta1_dot, theta2_dot;
  double theta1_T = 0, theta2_T = 0;

  double theta(int j, double t) const;  // linear interpolation
};
PhaseShiftRecord theta_limit(const CorrectorResult& corr,
                             const TrajectorySolution& traj,
                             const KernelSpec& K);

// The closed-form expression for (theta1''(0), theta2''(0)) printed at the
// end of the source analysis, plus the first-line terms (which vanish).
struct ThetaDdotZero {
  double value[2] = {0, 0};       // the three-term closed form
  double first_line[2] = {0, 0};  // grad K(0) line (identically zero)
};
ThetaDdotZero theta_ddot_zero(const SpectralField& a1, const SpectralField& a2,
                              const PotentialSpec& V, const KernelSpec& K,
                              const Vec& q10, const Vec& q20);

}  // namespace hlab
