#pragma once

#include <functional>
#include <map>
#include <vector>

#include "hartreelab/assembly.hpp"
#include "hartreelab/grid.hpp"
#include "hartreelab/potential.hpp"

namespace hlab {

struct PDEConfig {
  double eps = 0.0625;
  Regime regime = Regime::Critical;
  double dt_factor = 0.1;  // dt = dt_factor * eps
  double T = 1.0;
  Grid xgrid;
  PotentialSpec V;
  KernelSpec K;
  std::vector<AmplitudeSpec> amps;
  std::vector<Vec> q0, p0;
  double pmax_hint = 0;  // max |p_j(t)| for the resolution guard

  double dt() const { return dt_factor * eps; }
  void validate() const;  // throws on guard violations
};

struct PDEState {
  double t = 0;
  SpectralField psi;
  double eps = 0;
};

class PDESolver {
 public:
  explicit PDESolver(const PDEConfig& cfg);

  const PDEState& state() const { return st_; }
  void step();                      // one Strang step of size cfg.dt()
  void step_with(double dt);        // custom (possibly negative) step
  double mass() const;              // L2 norm
  double energy() const;            // Remark hamil energy (see below)
  bool energy_conserved_preconditions() const;

  // advance to T, calling `obs(state)` after every step; snapshots copied
  // at the requested times (must be multiples of dt).
  std::map<double, SpectralField> run(
      const std::vector<double>& snapshot_times,
      const std::function<void(const PDEState&)>& obs = nullptr);

 private:
  void half_potential(double tpot, double dt);
  PDEConfig cfg_;
  PDEState st_;
  std::vector<cplx> kin_full_;   // exp(-i eps |xi|^2 dt / 2)
  std::vector<cplx> kernel_hat_; // FFT of wrapped kernel samples
  std::vector<cplx> buf_, buf2_;
  bool has_kernel_ = false;
  double alpha_pref_ = 0;        // eps^alpha
};

}  // namespace hlab
