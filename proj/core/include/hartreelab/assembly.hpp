#pragma once

#include <optional>
#include <vector>

#include "hartreelab/grid.hpp"
#include "hartreelab/types.hpp"

namespace hlab {

// Analytic amplitude profiles a_j(y) used for initial data. `gaussian` is
// pi^{-1/4} exp(-(y-shift)^2/(2 sigma^2)) exp(i beta y); `heavy_tail` is
// c (1+y^2)^{-p/2} exp(i beta y), normalized on the grid.
struct AmplitudeSpec {
  enum class Kind { Zero, Gaussian, HeavyTail };
  Kind kind = Kind::Gaussian;
  double sigma = 1.0;
  double shift = 0.0;
  double beta = 0.0;   // momentum phase e^{i beta y}
  double p = 2.6;      // heavy-tail exponent
  double amp = 1.0;    // overall scale (before heavy-tail normalization)

  static AmplitudeSpec zero();
  static AmplitudeSpec gaussian(double sigma = 1.0, double beta = 0.0,
                                double shift = 0.0);
  static AmplitudeSpec heavy_tail(double p, double beta = 0.0);
  cplx eval(double y) const;
  bool is_zero() const { return kind == Kind::Zero; }
};

// sample on a y-grid; heavy tails are L2-normalized on the grid
SpectralField sample_amplitude(const AmplitudeSpec& a, const Grid& g);

// One packet's ingredients at a fixed time.
struct WavePacketFrame {
  Vec q, p;
  double S = 0;          // S_j(t) or S_j^eps(t)
  double theta = 0;      // optional phase shift theta_j(t)
  const SpectralField* u = nullptr;  // envelope on the y-grid
};

struct AssembledState {
  SpectralField psi;  // on the physical x-grid
  double eps = 0;
  double t = 0;
};

// eq:ci2 sampled analytically on the x-grid.
AssembledState initial_data(const std::vector<AmplitudeSpec>& amps,
                            const std::vector<Vec>& q0,
                            const std::vector<Vec>& p0, double eps,
                            const Grid& xgrid);

// eps^{-d/4} sum_j u_j(t,(x-q_j)/sqrt(eps)) e^{i(S_j+p_j.(x-q_j))/eps} e^{i theta_j}.
// The envelope is evaluated by trigonometric interpolation with zero
// extension outside its y-box. Throws if h > (2 pi/|p_j|) eps/8.
AssembledState assemble(const std::vector<WavePacketFrame>& frames, double eps,
                        const Grid& xgrid, double t, bool with_theta = true);

double l2_error(const AssembledState& a, const AssembledState& b);

// Windowed observables around per-packet centers (C^inf bump window).
struct PacketObservables {
  double mass = 0;
  Vec centroid;
  Vec momentum_centroid;
};
std::vector<PacketObservables> packet_observables(const AssembledState& psi,
                                                  const std::vector<Vec>& centers,
                                                  double radius);

double bump_window(double r);  // 1 on |r|<=1/2, 0 on |r|>=1, C^inf

}  // namespace hlab
