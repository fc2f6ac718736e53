#ifndef BPP_ENVELOPE_HPP
#define BPP_ENVELOPE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bpp/bijections.hpp"
#include "bpp/paths.hpp"

namespace bpp {

// Deterministic envelope sets S_t^- and S_t^+ on the block decomposition of
// the cube [0,M]^3. Blocks have even side ~ (log M)^2; the schedule advances
// one S^- rule index per time slab tau = C(alpha) (log M)^8 / 7. S^- is
// left-continuous in t, S^+ right-continuous; both are monotone cube sets.
struct EnvelopeSchedule {
  int M = 0;
  int block_side = 2;
  int K = 1;  // blocks per axis (last one may be clipped by the cube)
  double tau = 1.0;
  double c_alpha = 1.0;

  int lower_index(double t) const;              // 0 at t = 0, else ceil(t/tau)
  int upper_index(double t) const;               // floor(t/tau)
  bool block_in_lower(int v1, int v2, int v3, int index) const {
    return v3 + 2 * (v1 + v2) <= 5 * (K - 1) - index;
  }
  bool cube_in_lower(int r1, int r2, int r3, double t) const;

  enum class Cover { Out, Half, Full };
  Cover block_upper_cover(int v1, int v2, int v3, int index) const;
  bool cube_in_upper(int r1, int r2, int r3, double t) const;

  // Max height of S^+ above base cell (r1, r2) at time t, clipped to M.
  int upper_column_height(int r1, int r2, double t) const;

  double end_time() const { return 6.0 * K * tau; }  // S^- empty from here
};

EnvelopeSchedule build_envelope(int M, double c_alpha);

// Even block side used for the envelope and halo decompositions.
int envelope_block_side(int M);

struct CensoredRunResult {
  std::vector<std::pair<double, MonotoneCubeSet>> snapshots;
  std::uint64_t events = 0;
  std::uint64_t flips = 0;
  std::uint64_t censored_moves = 0;
  double ground_hit_time = -1.0;  // first time the cube set becomes empty
};

// Square-case dynamics started from the full cube, in cube coordinates; cube
// removals that would breach the current S_t^- are rejected when a schedule
// is given. Snapshot times are clamped to the horizon.
CensoredRunResult run_censored_dynamics(int M, double alpha,
                                        const EnvelopeSchedule* schedule,
                                        double horizon, std::uint64_t seed,
                                        const std::vector<double>& snapshot_times = {});

struct EnvelopeReplicaReport {
  double first_violation = -1.0;  // upper inclusion; -1 = clean run
  long long worst_excess = 0;     // max |s_t \ S_t^+| over the run
};

struct EnvelopeReport {
  int M = 0;
  double alpha = 0.0;
  double c_alpha = 0.0;
  double horizon = 0.0;
  std::vector<EnvelopeReplicaReport> replicas;
  double violation_frequency = 0.0;
};

EnvelopeReport check_envelope_containment(int M, double alpha, double c_alpha,
                                          int replicas, double horizon,
                                          std::uint64_t seed);

struct ScalingRow {
  int M = 0;
  std::vector<double> times;  // per replica, censored runs at horizon
  std::vector<char> censored;
  double median = 0.0;
  double quantile = 0.0;  // 1 - 1/(2e) quantile
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double exponent = 0.0;  // fitted a in quantile ~ M^a
};

// Hitting time of the maximal configuration from the minimal one in the
// square case, across sizes.
ScalingResult hitting_scaling_experiment(const std::vector<int>& sizes,
                                         double alpha, int replicas,
                                         std::uint64_t seed,
                                         double horizon_per_m3 = 10.0);

// Base-layer halo of a jagged ceiling: A2 holds the base blocks meeting the
// ground state, A3 the base blocks shadowed by A2 (out-of-cube neighbors
// count as shadowed), A1 their union.
struct HaloSets {
  int M = 0;
  int block_side = 2;
  int K = 1;
  MonotoneCubeSet ground;              // s^-: full-height prism columns
  std::vector<std::vector<char>> a2;   // K x K flags over base blocks
  std::vector<std::vector<char>> a3;
  long long halo_volume = 0;           // |A1 \ s^-|

  bool in_a1(int v1, int v2) const {
    return a2[static_cast<std::size_t>(v1)][static_cast<std::size_t>(v2)] ||
           a3[static_cast<std::size_t>(v1)][static_cast<std::size_t>(v2)];
  }
  // Allowed column height of s^- ∪ A1 above base cell (r1, r2).
  int allowed_column(int r1, int r2) const;
};

HaloSets build_halo(const Path& xi, int M);

struct HaloReplicaReport {
  bool confined = true;
  double first_violation = -1.0;  // within the observation window
};

struct HaloReport {
  int M = 0;
  double alpha = 0.0;
  double c_alpha = 0.0;
  double burn_in = 0.0;
  double horizon = 0.0;
  long long halo_volume = 0;
  long long volume_bound = 0;  // 4 M side^2
  std::vector<HaloReplicaReport> replicas;
  double confinement_frequency = 0.0;
};

// Dynamics on E_{xi, vee} from the full cube; confinement of s_t inside
// s^- ∪ A1 is checked at every event in [burn_in, horizon].
HaloReport check_halo_confinement(const Path& xi, int M, double alpha,
                                  double c_alpha, int replicas, double horizon,
                                  std::uint64_t seed);

// Uniformly random jagged ceiling in Omega^0_{1,2M}.
Path random_ceiling(int M, std::uint64_t seed);

}  // namespace bpp

#endif  // BPP_ENVELOPE_HPP
