#include "bpp/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "bpp/rng.hpp"
#include "bpp/util.hpp"

namespace bpp {

namespace {

// DFS over increments polymer by polymer, '+' branch first, so completed
// configurations come out in canonical (lexicographic) order. Each polymer
// is bounded above by the previous one (the ceiling for the first) and below
// by the floor, which prunes without losing states.
struct Enumerator {
  const BoundaryPair& bounds;
  const int k;
  const std::uint64_t cap;
  std::vector<PolymerConfig>& out;
  std::vector<std::vector<bool>> steps;
  std::vector<std::vector<Height>> ceilings;  // per polymer, heights view

  Enumerator(const BoundaryPair& b, int kk, std::uint64_t c,
             std::vector<PolymerConfig>& o)
      : bounds(b), k(kk), cap(c), out(o) {
    steps.assign(static_cast<std::size_t>(k),
                 std::vector<bool>(static_cast<std::size_t>(b.length())));
    ceilings.assign(static_cast<std::size_t>(k), {});
    ceilings[0] = b.xi.heights();
  }

  void extend(int j, int x, Height y) {
    const int n = bounds.length();
    if (x == n) {
      complete(j);
      return;
    }
    const auto& ceil = ceilings[static_cast<std::size_t>(j - 1)];
    for (int up = 1; up >= 0; --up) {
      const Height y2 = y + (up ? 1 : -1);
      if (y2 > ceil[static_cast<std::size_t>(x) + 1]) continue;
      if (y2 < bounds.sigma.at(x + 1)) continue;
      if (std::abs(bounds.terminal() - y2) > n - x - 1) continue;
      steps[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(x)] = up != 0;
      extend(j, x + 1, y2);
    }
  }

  void complete(int j) {
    if (j == k) {
      if (out.size() >= cap)
        throw CapExceeded("enumerate_states: state count exceeds cap", cap);
      std::vector<Path> polys;
      polys.reserve(static_cast<std::size_t>(k));
      for (const auto& s : steps)
        polys.emplace_back(bounds.length(), bounds.terminal(), s);
      out.emplace_back(std::move(polys));
      return;
    }
    auto& next = ceilings[static_cast<std::size_t>(j)];
    next.assign(static_cast<std::size_t>(bounds.length()) + 1, 0);
    Height cur = 0;
    for (int x = 0; x < bounds.length(); ++x) {
      cur += steps[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(x)] ? 1 : -1;
      next[static_cast<std::size_t>(x) + 1] = cur;
    }
    extend(j + 1, 0, 0);
  }
};

}  // namespace

std::vector<PolymerConfig> enumerate_states(const BoundaryPair& bounds, int k,
                                            std::uint64_t cap) {
  if (k < 1) throw std::invalid_argument("enumerate_states: k must be >= 1");
  std::vector<PolymerConfig> out;
  Enumerator e(bounds, k, cap, out);
  e.extend(1, 0, 0);
  return out;
}

ExactMeasure exact_measure(const BoundaryPair& bounds, int k, double alpha,
                           std::uint64_t cap) {
  if (alpha <= 0)
    throw std::invalid_argument("exact_measure: alpha must be positive");
  ExactMeasure m{bounds, k, alpha, {}, {}, {}, 0.0, {}};
  m.states = enumerate_states(bounds, k, cap);
  m.volumes.reserve(m.states.size());
  std::vector<double> logw;
  logw.reserve(m.states.size());
  for (const auto& s : m.states) {
    const long long v = excess_volume(s, bounds.xi);
    m.volumes.push_back(v);
    logw.push_back(-2.0 * alpha * static_cast<double>(v));
  }
  const double peak = *std::max_element(logw.begin(), logw.end());
  double total = 0.0;
  for (double lw : logw) total += std::exp(lw - peak);
  m.log_zhat = peak + std::log(total);
  m.probs.reserve(logw.size());
  for (double lw : logw) m.probs.push_back(std::exp(lw - peak) / total);
  for (std::size_t i = 0; i < m.states.size(); ++i)
    m.index_map[m.states[i].encode()] = i;
  return m;
}

std::size_t ExactMeasure::index_of(const PolymerConfig& config) const {
  auto it = index_map.find(config.encode());
  if (it == index_map.end())
    throw std::invalid_argument("state not in the enumerated space");
  return it->second;
}

std::vector<double> tail_excess_volume(const ExactMeasure& measure) {
  if (measure.bounds.terminal() != 0 ||
      !(measure.bounds.xi ==
        Path::wedge(measure.bounds.length(), 0)))
    throw std::invalid_argument(
        "tail_excess_volume: requires h = 0 and the wedge ceiling");
  const long long max_v =
      *std::max_element(measure.volumes.begin(), measure.volumes.end());
  std::vector<double> tail(static_cast<std::size_t>(max_v) + 1, 0.0);
  for (std::size_t i = 0; i < measure.size(); ++i)
    for (long long v = 0; v <= measure.volumes[i]; ++v)
      tail[static_cast<std::size_t>(v)] += measure.probs[i];
  return tail;
}

double sticking_probability(const ExactMeasure& measure, int j, int x) {
  if (j < 1 || j > measure.k || x < 0 || x > measure.bounds.length())
    throw std::invalid_argument("sticking_probability: index out of range");
  double p = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i)
    if (measure.states[i].at(j, x) != measure.bounds.xi.at(x))
      p += measure.probs[i];
  return p;
}

double detachment_run_probability(const ExactMeasure& measure, int a, int b) {
  if (!(0 < a && a <= b && b < measure.bounds.length()))
    throw std::invalid_argument(
        "detachment_run_probability: need 0 < a <= b < n");
  double p = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    bool detached = true;
    for (int x = a; x <= b && detached; ++x)
      detached = measure.states[i].at(measure.k, x) != measure.bounds.xi.at(x);
    if (detached) p += measure.probs[i];
  }
  return p;
}

namespace {

struct UnionPoset {
  std::vector<PolymerConfig> states;
  std::vector<double> pa, pb;                 // probabilities per measure
  std::vector<std::vector<int>> dominators;   // strictly greater states
  std::vector<int> order;                     // linear extension, greatest first
};

UnionPoset build_union(const ExactMeasure& a, const ExactMeasure& b) {
  UnionPoset u;
  std::unordered_map<std::string, int> seen;
  auto add = [&](const PolymerConfig& s) -> int {
    auto [it, fresh] = seen.try_emplace(s.encode(), static_cast<int>(u.states.size()));
    if (fresh) {
      u.states.push_back(s);
      u.pa.push_back(0.0);
      u.pb.push_back(0.0);
    }
    return it->second;
  };
  for (std::size_t i = 0; i < a.size(); ++i) u.pa[static_cast<std::size_t>(add(a.states[i]))] += a.probs[i];
  for (std::size_t i = 0; i < b.size(); ++i) u.pb[static_cast<std::size_t>(add(b.states[i]))] += b.probs[i];
  const int m = static_cast<int>(u.states.size());
  u.dominators.assign(static_cast<std::size_t>(m), {});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && dominates(u.states[static_cast<std::size_t>(j)],
                              u.states[static_cast<std::size_t>(i)]))
        u.dominators[static_cast<std::size_t>(i)].push_back(j);
  u.order.resize(static_cast<std::size_t>(m));
  std::iota(u.order.begin(), u.order.end(), 0);
  auto height_sum = [&](int i) {
    long long s = 0;
    const auto& cfg = u.states[static_cast<std::size_t>(i)];
    for (int j = 1; j <= cfg.k(); ++j)
      for (int x = 0; x <= cfg.length(); ++x) s += cfg.at(j, x);
    return s;
  };
  std::vector<long long> keys(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) keys[static_cast<std::size_t>(i)] = height_sum(i);
  std::sort(u.order.begin(), u.order.end(), [&](int i, int j) {
    return keys[static_cast<std::size_t>(i)] > keys[static_cast<std::size_t>(j)];
  });
  return u;
}

// Depth-first scan over all up-sets in a linear extension (dominators come
// earlier, so a state may join only if all its dominators already did).
struct UpsetScan {
  const UnionPoset& u;
  std::uint64_t budget;
  std::vector<char> in;
  double sum_a = 0.0, sum_b = 0.0;
  bool violated = false;
  bool exhausted = false;

  void visit(std::size_t pos) {
    if (violated || exhausted) return;
    if (budget == 0) {
      exhausted = true;
      return;
    }
    --budget;
    if (pos == u.order.size()) {
      if (sum_a < sum_b - 1e-12) violated = true;
      return;
    }
    const int s = u.order[pos];
    visit(pos + 1);  // exclude s
    if (violated || exhausted) return;
    for (int d : u.dominators[static_cast<std::size_t>(s)])
      if (!in[static_cast<std::size_t>(d)]) return;  // cannot include s
    in[static_cast<std::size_t>(s)] = 1;
    sum_a += u.pa[static_cast<std::size_t>(s)];
    sum_b += u.pb[static_cast<std::size_t>(s)];
    visit(pos + 1);
    in[static_cast<std::size_t>(s)] = 0;
    sum_a -= u.pa[static_cast<std::size_t>(s)];
    sum_b -= u.pb[static_cast<std::size_t>(s)];
  }
};

}  // namespace

DominationResult check_stochastic_domination(const ExactMeasure& a,
                                             const ExactMeasure& b,
                                             std::uint64_t upset_cap,
                                             int sample_trials,
                                             std::uint64_t sample_seed) {
  if (a.k != b.k || a.bounds.length() != b.bounds.length() ||
      a.bounds.terminal() != b.bounds.terminal())
    throw std::invalid_argument("domination check: dimension mismatch");
  if (!a.bounds.xi.dominates(b.bounds.xi) ||
      !a.bounds.sigma.dominates(b.bounds.sigma))
    throw std::invalid_argument("domination check: boundaries not ordered");
  UnionPoset u = build_union(a, b);
  const std::size_t m = u.states.size();

  // Principal filters first: cheap and usually where violations show up.
  for (std::size_t i = 0; i < m; ++i) {
    double sa = u.pa[i], sb = u.pb[i];
    for (int d : u.dominators[i]) {
      sa += u.pa[static_cast<std::size_t>(d)];
      sb += u.pb[static_cast<std::size_t>(d)];
    }
    if (sa < sb - 1e-12) return DominationResult::Fails;
  }

  UpsetScan scan{u, upset_cap, std::vector<char>(m, 0)};
  scan.visit(0);
  if (scan.violated) return DominationResult::Fails;
  if (!scan.exhausted) return DominationResult::Dominates;

  // Budget hit: sampled falsification with random up-closures.
  RngStream rng(sample_seed);
  for (int trial = 0; trial < sample_trials; ++trial) {
    std::vector<char> in(m, 0);
    const double p = rng.uniform();
    for (std::size_t i = 0; i < m; ++i)
      if (rng.uniform() < p) {
        in[i] = 1;
        for (int d : u.dominators[i]) in[static_cast<std::size_t>(d)] = 1;
      }
    double sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (in[i]) {
        sa += u.pa[i];
        sb += u.pb[i];
      }
    if (sa < sb - 1e-12) return DominationResult::Fails;
  }
  return DominationResult::NotFalsified;
}

}  // namespace bpp
