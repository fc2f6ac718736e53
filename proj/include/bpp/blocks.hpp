#ifndef BPP_BLOCKS_HPP
#define BPP_BLOCKS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bpp/chain.hpp"
#include "bpp/coupling.hpp"
#include "bpp/enumeration.hpp"
#include "bpp/paths.hpp"
#include "bpp/rng.hpp"

namespace bpp {

// Particle block: labels [center-ell, center+ell] are resampled on every
// polymer; labels center-ell-1 and center+ell+1 (path ends when the label
// runs off {1..N}) anchor the free path segments.
struct ParticleWindow {
  int center = 1;
  int ell = 0;
};

// Polymer slab: polymers [max(center-s,1), min(center+s,k)] are resampled
// between the two enclosing fixed paths (ceiling/floor at the edges).
struct PolymerWindow {
  int center = 1;
  int s = 0;
};

// Exact conditional law of a block update from a given base configuration.
// States are full configurations agreeing with the frozen exterior; the
// frame key identifies the conditioning data, so two bases with equal keys
// have index-aligned identical laws.
struct WindowDistribution {
  std::vector<PolymerConfig> states;
  std::vector<double> probs;
  std::string frame_key;

  std::size_t sample(double u) const;
};

WindowDistribution particle_window_distribution(const PolymerConfig& base,
                                                const BoundaryPair& bounds,
                                                const ParticleWindow& w,
                                                double alpha,
                                                std::uint64_t cap = 200000);

WindowDistribution polymer_window_distribution(const PolymerConfig& base,
                                               const BoundaryPair& bounds,
                                               const PolymerWindow& w,
                                               double alpha,
                                               std::uint64_t cap = 200000);

// Whole-polymer move of the crude chain: polymer `u` is resampled on the
// segment between its window anchor particles, conditioned on all other
// polymers; `r` is the number of free particle labels (centered window).
WindowDistribution crude_window_distribution(const PolymerConfig& base,
                                             const BoundaryPair& bounds,
                                             int u, int r, double alpha,
                                             std::uint64_t cap = 200000);

PolymerConfig resample_particle_block(const PolymerConfig& config,
                                      const BoundaryPair& bounds,
                                      const ParticleWindow& w, double alpha,
                                      RngStream& rng,
                                      std::uint64_t cap = 200000);

PolymerConfig resample_polymer_block(const PolymerConfig& config,
                                     const BoundaryPair& bounds,
                                     const PolymerWindow& w, double alpha,
                                     RngStream& rng,
                                     std::uint64_t cap = 200000);

enum class BlockKind { Particle, Polymer, Crude };

// Explicit generator of the chosen coarse-grained chain on the enumerated
// state space. param is ell (Particle), s (Polymer) or the free-label count
// r (Crude).
ExactChain block_generator_exact(BlockKind kind, const BoundaryPair& bounds,
                                 int k, double alpha, int param,
                                 std::uint64_t cap = 10000);

struct BlockInstance {
  BoundaryPair bounds;
  int k;
};

struct GapTrendRow {
  int n = 0;
  int k = 0;
  int param = 0;
  double alpha = 0.0;
  double gap = 0.0;
  bool first_reaching_one = false;  // smallest scanned param with gap >= 1
};

// Exact gaps across an instance family and a parameter scan.
std::vector<GapTrendRow> gap_trend_report(BlockKind kind,
                                          const std::vector<BlockInstance>& instances,
                                          const std::vector<int>& params,
                                          double alpha,
                                          std::uint64_t cap = 10000);

struct DriftEstimate {
  double drift = 0.0;    // expected distance change per unit time
  double ci_low = 0.0;   // 95% confidence interval
  double ci_high = 0.0;
  std::uint64_t events = 0;
  std::uint64_t boundary_events = 0;  // updates where the two laws differ
  double match_rate = 0.0;            // full window match among those
};

// Monte-Carlo drift of d_gamma (Particle) or D_rho (Polymer) for a pair at
// unit distance, under the coupled block update: identical draws when the
// conditioning frames agree, independent draws (polymer by polymer, top to
// bottom) when they differ.
DriftEstimate contraction_estimate(BlockKind kind, const BoundaryPair& bounds,
                                   int k, double alpha, int param,
                                   double decay, const PolymerConfig& a,
                                   const PolymerConfig& b,
                                   std::uint64_t events, std::uint64_t seed,
                                   std::uint64_t cap = 200000);

// A valid pair at unit particle/height distance: the first legal single
// flip off the maximal configuration.
std::pair<PolymerConfig, PolymerConfig> single_flip_pair(
    const BoundaryPair& bounds, int k, double alpha);

}  // namespace bpp

#endif  // BPP_BLOCKS_HPP
