#ifndef BPP_COUPLING_HPP
#define BPP_COUPLING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "bpp/enumeration.hpp"
#include "bpp/glauber.hpp"
#include "bpp/paths.hpp"
#include "bpp/rng.hpp"

namespace bpp {

// Distance functions between configurations of the same shape.
struct DistanceSpec {
  enum class Kind {
    ParticleCount,     // d_0: number of disagreeing particle labels
    ParticleWeighted,  // d_gamma: sum e^{-gamma i} over disagreements
    HeightL1,          // D_0: sum |eta - eta'| / 2
    HeightWeighted     // D_rho: sum_j e^{-j rho} sum_x |eta - eta'| / 2
  };
  Kind kind = Kind::ParticleCount;
  double decay = 0.0;

  static DistanceSpec d0() { return {Kind::ParticleCount, 0.0}; }
  static DistanceSpec d_gamma(double g) { return {Kind::ParticleWeighted, g}; }
  static DistanceSpec D0() { return {Kind::HeightL1, 0.0}; }
  static DistanceSpec D_rho(double r) { return {Kind::HeightWeighted, r}; }
};

double distance(const DistanceSpec& spec, const PolymerConfig& a,
                const PolymerConfig& b);

// Checks that the weighted distance equals the shortest-path value over the
// discrepancy graph (edges where the unweighted distance is 1).
bool path_metric_check(const DistanceSpec& spec, const BoundaryPair& bounds,
                       int k, const PolymerConfig& a, const PolymerConfig& b,
                       std::uint64_t cap = 1000);

// Several trajectories driven by one event stream (same clocks, same site,
// same uniform). Members ordered at construction stay ordered.
class CoupledBundle {
 public:
  CoupledBundle(std::vector<std::pair<PolymerConfig, BoundaryPair>> members,
                double alpha, std::uint64_t seed);

  int size() const { return static_cast<int>(members_.size()); }
  const SurfaceState& member(int idx) const {
    return members_[static_cast<std::size_t>(idx)];
  }
  PolymerConfig config(int idx) const {
    return members_[static_cast<std::size_t>(idx)].snapshot();
  }
  double time() const { return time_; }
  std::uint64_t events() const { return events_; }

  // check_order: verify, after every event, every pair that was ordered at
  // construction; throws std::logic_error on a violation.
  void evolve(double horizon, bool check_order = false);

  bool members_equal(int a, int b) const;

 private:
  double alpha_;
  std::vector<SurfaceState> members_;
  std::vector<std::pair<int, int>> ordered_pairs_;
  RngStream rng_;
  double time_ = 0.0;
  std::uint64_t events_ = 0;
};

struct RateEstimate {
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int discrepancies = 0;
  int replicas = 0;
  bool censored = false;  // no surviving discrepancy: rate is a lower bound
};

// Coupling lower bound on the spectral gap from max/min starts.
RateEstimate gap_lower_bound_coupling(const DynamicsParams& params,
                                      double horizon, int replicas);

// Exact sampling from mu^{xi,sigma} by coupling from the past with doubling
// event epochs and the monotone max/min sandwich.
PolymerConfig cftp_sample(const DynamicsParams& params,
                          std::uint64_t event_cap = (1ull << 30));

struct HittingResult {
  double time = 0.0;
  bool censored = false;
  std::uint64_t events = 0;
};

// First time the trajectory reaches the maximal configuration (all polymers
// equal to the ceiling). Censored at params.horizon.
HittingResult hitting_time_max(const DynamicsParams& params,
                               const PolymerConfig& init);

}  // namespace bpp

#endif  // BPP_COUPLING_HPP
