#pragma once

#include <functional>
#include <vector>

#include "hartreelab/envelope.hpp"
#include "hartreelab/grid.hpp"
#include "hartreelab/potential.hpp"
#include "hartreelab/trajectories.hpp"

namespace hlab {

// I^eps(y) = int W(sqrt(eps)(y-z)) e^{i z.dp/sqrt(eps)} u1(z)
//            conj(u2)(z + dq/sqrt(eps)) dz
// The shifted factor is evaluated spectrally with zero extension outside the
// box; a hard error is raised if the shifted supports overlap but the fields
// are not concentrated in the central half box.
struct RectangleTermConfig {
  std::function<double(double)> window;  // script-K
  double eps = 1;
  Vec dq, dp;
  const SpectralField* u1 = nullptr;
  const SpectralField* u2 = nullptr;
};
SpectralField rectangle_term(const RectangleTermConfig& cfg,
                             bool direct_quadrature = false);

struct RectangleDecayConfig {
  std::function<double(double)> window;
  AmplitudeSpec a1, a2;
  Grid ygrid;
  Vec dq, dp;
  std::vector<double> eps;
  double floor = 1e-12;  // drop points below quadrature roundoff
};
struct RectangleDecayResult {
  std::string branch;  // "position" (|dq|>=eta) or "momentum" (|dp|>=eta)
  double slope = 0, intercept = 0;
  std::vector<double> used_eps, sup_values;
};
RectangleDecayResult rectangle_decay_fit(const RectangleDecayConfig& cfg);

// Moving-frame system for the exact envelopes u~_j^eps.
struct MovingFrameOptions {
  double T = 0.5;
  double dt = 5e-4;
  int snap_stride = 0;
  bool with_wtilde = true;  // decoupled mode when false
};

struct MovingFrameResult {
  EnvelopeHistory hist;          // fields/moments of u~_j^eps
  std::vector<double> theta1, theta2;        // theta_j^eps per step
  std::vector<double> theta1_dot, theta2_dot;
  std::vector<double> wcoupling;             // max_j ||(1/eps)2Re W~ u~||_L2 per step
  double max_wcoupling = 0;
};

// regime Zero: eq:exactesimplif; regime Half: the same system with every
// K-derived term weighted by sqrt(eps) and the eps-free gauge (Remark 12).
// `ref` supplies the limit moments G_j (and, for Half, the limit gauge
// phases) on the same schedule; `actions` supplies S_j^eps for the rectangle
// prefactor.
MovingFrameResult solve_moving_frame(const SpectralField& a1,
                                     const SpectralField& a2,
                                     const TrajectorySolution& traj,
                                     const PotentialSpec& V,
                                     const KernelSpec& K, double alpha1,
                                     double alpha2, double eps, Regime regime,
                                     const EnvelopeHistory& ref,
                                     const ActionIntegrals& actions,
                                     const MovingFrameOptions& opt);

}  // namespace hlab
