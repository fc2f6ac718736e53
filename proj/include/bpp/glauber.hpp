#ifndef BPP_GLAUBER_HPP
#define BPP_GLAUBER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bpp/paths.hpp"
#include "bpp/rng.hpp"

namespace bpp {

// Heat-bath conditional law of one height given its four neighbors.
// low == high means the move is forced (midpoint or fully constrained).
struct LocalUpdate {
  Height low;
  Height high;
  double p_high;
};

// left/right: same-polymer neighbor heights; above/below: adjacent polymer
// heights (ceiling/floor at the edges).
LocalUpdate heat_bath_law(Height left, Height right, Height above,
                          Height below, double alpha);

// Conditional law of height (j, x) in a configuration, 1 <= j <= k,
// 1 <= x <= n-1.
LocalUpdate local_update_law(const PolymerConfig& config, int j, int x,
                             const BoundaryPair& bounds, double alpha);

struct DynamicsParams {
  double alpha;
  BoundaryPair bounds;
  int k;
  std::uint64_t seed;
  double horizon;

  DynamicsParams(double a, BoundaryPair b, int kk, std::uint64_t s, double hor);
};

// Mutable height field for simulation. Neighbor rows 0 and k+1 are the
// ceiling and floor. apply_threshold() uses the fixed rule u <= p_high ->
// high, which is what makes the grand coupling monotone.
class SurfaceState {
 public:
  SurfaceState(const BoundaryPair& bounds, const PolymerConfig& init);

  int k() const { return k_; }
  int n() const { return n_; }
  const BoundaryPair& bounds() const { return bounds_; }

  Height at(int j, int x) const {  // j in [0, k+1]
    if (j == 0) return bounds_.xi.at(x);
    if (j == k_ + 1) return bounds_.sigma.at(x);
    return h_[static_cast<std::size_t>(j - 1) * (static_cast<std::size_t>(n_) + 1) +
              static_cast<std::size_t>(x)];
  }

  LocalUpdate law(int j, int x, double alpha) const {
    return heat_bath_law(at(j, x - 1), at(j, x + 1), at(j - 1, x),
                         at(j + 1, x), alpha);
  }

  struct Applied {
    bool changed;
    Height old_height;
    Height new_height;
  };
  Applied apply_threshold(int j, int x, double alpha, double u);

  PolymerConfig snapshot() const;

 private:
  BoundaryPair bounds_;
  int k_, n_;
  std::vector<Height> h_;
};

// Shared event layout: per event one exponential gap at total rate k*(n-1),
// one uniform site index, one uniform variate. on_event(t, j, x, u) returns
// false to stop early. Returns the number of events delivered.
template <class OnEvent>
std::uint64_t run_event_loop(RngStream& rng, int k, int n, double horizon,
                             double& t, OnEvent&& on_event) {
  const double rate = static_cast<double>(k) * (n - 1);
  std::uint64_t events = 0;
  for (;;) {
    const double gap_time = rng.exponential(rate);
    if (t + gap_time > horizon) {
      t = horizon;
      return events;
    }
    t += gap_time;
    const std::uint64_t idx = rng.below(static_cast<std::uint64_t>(k) *
                                        static_cast<std::uint64_t>(n - 1));
    const int j = 1 + static_cast<int>(idx / static_cast<std::uint64_t>(n - 1));
    const int x = 1 + static_cast<int>(idx % static_cast<std::uint64_t>(n - 1));
    const double u = rng.uniform();
    ++events;
    if (!on_event(t, j, x, u)) return events;
  }
}

struct Event {
  double time;
  std::uint16_t polymer;
  std::uint16_t site;
  std::int16_t new_height;
};

struct Trajectory {
  PolymerConfig final_state;
  double final_time;
  std::uint64_t events = 0;
  std::uint64_t flips = 0;
  std::vector<Event> log;  // configuration-changing events, when requested
};

Trajectory simulate(const DynamicsParams& params, const PolymerConfig& init,
                    bool keep_log = false);

// Little-endian binary event log: (time f64, polymer u16, site u16,
// new_height i16) per record.
void write_event_log(const std::string& path, const std::vector<Event>& log);
std::vector<Event> read_event_log(const std::string& path);

}  // namespace bpp

#endif  // BPP_GLAUBER_HPP
