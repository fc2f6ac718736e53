#ifndef BPP_ENUMERATION_HPP
#define BPP_ENUMERATION_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bpp/paths.hpp"

namespace bpp {

// All of E_{xi,sigma} for k polymers, in canonical order (lexicographic on
// the concatenated increment strings, '+' before '-'). Throws CapExceeded
// when the state count passes `cap`.
std::vector<PolymerConfig> enumerate_states(const BoundaryPair& bounds, int k,
                                            std::uint64_t cap = 1000000);

// Exact equilibrium measure on an enumerated instance; probabilities are
// proportional to exp(-2 alpha V^xi(eta)), normalized in log space.
struct ExactMeasure {
  BoundaryPair bounds;
  int k = 1;
  double alpha = 1.0;
  std::vector<PolymerConfig> states;
  std::vector<long long> volumes;  // V^xi per state
  std::vector<double> probs;
  double log_zhat = 0.0;
  std::unordered_map<std::string, std::size_t> index_map;  // encode() -> index

  std::size_t size() const { return states.size(); }
  std::size_t index_of(const PolymerConfig& config) const;
};

ExactMeasure exact_measure(const BoundaryPair& bounds, int k, double alpha,
                           std::uint64_t cap = 1000000);

// P(V^wedge >= i) for i = 0..max volume; requires xi = wedge and h = 0.
std::vector<double> tail_excess_volume(const ExactMeasure& measure);

// P(eta^(j)_x != xi_x).
double sticking_probability(const ExactMeasure& measure, int j, int x);

// P(eta^(k)_x != xi_x for all a <= x <= b), 0 < a <= b < n.
double detachment_run_probability(const ExactMeasure& measure, int a, int b);

enum class DominationResult { Dominates, Fails, NotFalsified };

// Decides whether measure A stochastically dominates measure B by scanning
// the up-sets of the union poset. Above `upset_cap` visited up-sets the scan
// falls back to sampled falsification and reports NotFalsified instead of a
// positive verdict.
DominationResult check_stochastic_domination(const ExactMeasure& a,
                                             const ExactMeasure& b,
                                             std::uint64_t upset_cap = 4000000,
                                             int sample_trials = 2000,
                                             std::uint64_t sample_seed = 7);

}  // namespace bpp

#endif  // BPP_ENUMERATION_HPP
