#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hartreelab/potential.hpp"
#include "hartreelab/types.hpp"

namespace hlab {

struct TrajectoryState {
  double t = 0;
  Vec q1, p1, q2, p2;
  bool two_packets = true;
  Vec dq() const { return q1 - q2; }
  Vec dp() const { return p1 - p2; }
};

// Densely sampled solution of eq. of motion on a uniform step grid, with
// cubic-Hermite dense output (node values + node derivatives).
class TrajectorySolution {
 public:
  double dt = 0;
  double T = 0;
  int dim = 1;
  bool two_packets = true;
  double alpha1 = 1, alpha2 = 1;  // packet mass weights ||a_j||^2

  std::vector<Eigen::VectorXd> states;  // (q1,p1[,q2,p2]) flattened per node
  std::vector<Eigen::VectorXd> derivs;

  int nsteps() const { return int(states.size()) - 1; }
  TrajectoryState state(double t) const;  // cubic Hermite between nodes
  TrajectoryState node(int i) const;

 private:
  TrajectoryState unpack(const Eigen::VectorXd& s, double t) const;
  friend TrajectorySolution integrate_standard(const PotentialSpec&, const Vec&,
                                               const Vec&,
                                               const std::optional<Vec>&,
                                               const std::optional<Vec>&, double,
                                               double, double, double);
  friend TrajectorySolution integrate_coupled(const PotentialSpec&,
                                              const KernelSpec&, const Vec&,
                                              const Vec&, const Vec&, const Vec&,
                                              double, double, double, double);
};

// Standard Hamiltonian flow, each packet independent. Packet 2 optional.
TrajectorySolution integrate_standard(const PotentialSpec& V, const Vec& q10,
                                      const Vec& p10,
                                      const std::optional<Vec>& q20,
                                      const std::optional<Vec>& p20, double T,
                                      double dt, double alpha1 = 1,
                                      double alpha2 = 1);

// Nonlinearly coupled flow (alpha = 0 regime).
TrajectorySolution integrate_coupled(const PotentialSpec& V, const KernelSpec& K,
                                     const Vec& q10, const Vec& p10,
                                     const Vec& q20, const Vec& p20,
                                     double alpha1, double alpha2, double T,
                                     double dt);

// Classical action S_j(t) = int 1/2|p|^2 - V(s,q) ds on the node grid
// (composite Simpson).
std::vector<double> action_classical(const TrajectorySolution& traj,
                                     const PotentialSpec& V, int j);

enum class ActionRegime { Critical, Half, Zero };

// Action pieces stored separately so S_j^eps assembles for any eps:
//   Half: S_j^eps = Scl_j + sqrt(eps) * coupling_j
//   Zero: S_j^eps = Scl_j + coupling_j + sqrt(eps) * moment_j
struct ActionIntegrals {
  ActionRegime regime = ActionRegime::Critical;
  double dt = 0;
  std::vector<double> scl[2];       // classical part per packet
  std::vector<double> coupling[2];  // -K(0)a_j - K(+-dq) a_{j+1} integral
  std::vector<double> moment[2];    // grad K . G integral (Zero regime)

  double eval(int j, double t, double eps) const;  // S_j^eps(t), j in {1,2}
  std::vector<double> series(int j, double eps) const;
};

// Moments callback: G_j(t) for j in {1,2} (needed in the Zero regime).
using MomentFn = std::function<Vec(int j, double t)>;

ActionIntegrals action_modified(const TrajectorySolution& traj,
                                const PotentialSpec& V, const KernelSpec& K,
                                ActionRegime regime,
                                const MomentFn& moments = nullptr);

// Conserved Hamiltonian of the coupled flow (time-independent V, even K):
//   H = a1(|p1|^2/2 + V(q1)) + a2(|p2|^2/2 + V(q2)) + a1 a2 K(q1-q2)
struct HamiltonianValue {
  double value = 0;
  bool conserved_preconditions = false;  // V time-independent and K even
};
HamiltonianValue hamiltonian_invariant(const TrajectoryState& s,
                                       const PotentialSpec& V,
                                       const KernelSpec& K, double alpha1,
                                       double alpha2);

// min over nodes of max(|dq|, |dp|)  (phase-space separation eta).
double separation_eta(const TrajectorySolution& traj, double T);

// cumulative composite Simpson with uniform spacing; out[0] = 0
std::vector<double> cumulative_simpson(const std::vector<double>& f, double dt);

}  // namespace hlab
