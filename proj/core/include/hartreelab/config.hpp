#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hartreelab/assembly.hpp"
#include "hartreelab/potential.hpp"
#include "hartreelab/types.hpp"

namespace hlab {

enum class ExperimentKind {
  Converge,
  Conserve,
  RectangleDecay,
  Corrector,
  Wigner,
  MovingFrame
};
std::string kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);
std::string regime_name(Regime r);
Regime parse_regime(const std::string& s);

struct PacketConfig {
  AmplitudeSpec amp;
  Vec q0 = vec1(0), p0 = vec1(0);
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Converge;
  Regime regime = Regime::Critical;
  std::vector<double> eps;  // distinct, descending
  double T = 1.0;
  double dt_factor = 0.1;   // PDE dt = dt_factor * eps
  double env_dt = 1e-3;
  double traj_dt = 1e-4;
  int snapshots = 5;        // comparison times, including 0 and T
  int xgrid_n = 0;          // 0 = auto from the resolution guard
  double xgrid_length = 0;  // 0 = auto from the trajectory span
  int ygrid_n = 2048;
  double ygrid_length = 40.0;
  PotentialSpec V = PotentialSpec::harmonic();
  KernelSpec K = KernelSpec::bec(1, 0, 0, 0, 1, 1);
  PacketConfig pk1, pk2;
  bool two_packets = true;
  std::string out_dir;
  int jobs = 1;
  // regime switches / negative controls
  bool with_theta = true;
  bool with_wtilde = true;
  bool drop_coupling_phase = false;
  bool drop_action_correction = false;
  bool use_standard_flow = false;
  // pass/fail tolerances
  double slope_expect = 0.5;
  double slope_tol = 0.15;
  // rectangle-decay options
  double rect_dq = 0, rect_dp = 1;
  std::string rect_window = "gaussian";  // gaussian | one | kernel

  void validate() const;  // throws std::invalid_argument with a message
  std::string canonical() const;  // deterministic key=value dump
  std::uint64_t hash() const;     // FNV-1a of canonical()
};

// Parse a config file. Format decided by extension: .json via JSON, anything
// else via the TOML-subset grammar ([section], key = value, # comments;
// values: bool, integer, float, string, arrays of numbers). Unknown keys are
// rejected with file:line messages.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& filename);

// built-in defaults per experiment kind (the headline setups)
ExperimentConfig default_config(ExperimentKind kind, Regime regime);

}  // namespace hlab
