#include "bpp/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "bpp/bijections.hpp"
#include "bpp/util.hpp"

namespace bpp {

double distance(const DistanceSpec& spec, const PolymerConfig& a,
                const PolymerConfig& b) {
  if (a.k() != b.k() || a.length() != b.length() ||
      a.terminal() != b.terminal())
    throw std::invalid_argument("distance: dimension mismatch");
  using Kind = DistanceSpec::Kind;
  if (spec.kind == Kind::ParticleCount || spec.kind == Kind::ParticleWeighted) {
    const ParticleConfig pa = to_particles(a);
    const ParticleConfig pb = to_particles(b);
    const int N = pa.particles_per_polymer();
    double total = 0.0;
    for (int j = 1; j <= a.k(); ++j)
      for (int i = 1; i <= N; ++i)
        if (pa.position(j, i) != pb.position(j, i))
          total += spec.kind == Kind::ParticleCount
                       ? 1.0
                       : std::exp(-spec.decay * i);
    return total;
  }
  double total = 0.0;
  for (int j = 1; j <= a.k(); ++j) {
    double row = 0.0;
    for (int x = 1; x < a.length(); ++x)
      row += std::abs(a.at(j, x) - b.at(j, x)) / 2.0;
    total += spec.kind == Kind::HeightL1 ? row : std::exp(-spec.decay * j) * row;
  }
  return total;
}

bool path_metric_check(const DistanceSpec& spec, const BoundaryPair& bounds,
                       int k, const PolymerConfig& a, const PolymerConfig& b,
                       std::uint64_t cap) {
  using Kind = DistanceSpec::Kind;
  const DistanceSpec unit = (spec.kind == Kind::ParticleWeighted ||
                             spec.kind == Kind::ParticleCount)
                                ? DistanceSpec::d0()
                                : DistanceSpec::D0();
  const std::vector<PolymerConfig> states = enumerate_states(bounds, k, cap);
  const std::size_t m = states.size();
  std::size_t src = m, dst = m;
  for (std::size_t i = 0; i < m; ++i) {
    if (states[i] == a) src = i;
    if (states[i] == b) dst = i;
  }
  if (src == m || dst == m)
    throw std::invalid_argument("path_metric_check: states not in E");
  // Dijkstra over the discrepancy graph.
  std::vector<double> dist_to(m, std::numeric_limits<double>::infinity());
  dist_to[src] = 0.0;
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [d, i] = heap.top();
    heap.pop();
    if (d > dist_to[i]) continue;
    if (i == dst) break;
    for (std::size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      if (distance(unit, states[i], states[j]) != 1.0) continue;
      const double w = distance(spec, states[i], states[j]);
      if (dist_to[i] + w < dist_to[j]) {
        dist_to[j] = dist_to[i] + w;
        heap.push({dist_to[j], j});
      }
    }
  }
  const double direct = distance(spec, a, b);
  return std::abs(direct - dist_to[dst]) <= 1e-9 * std::max(1.0, direct);
}

CoupledBundle::CoupledBundle(
    std::vector<std::pair<PolymerConfig, BoundaryPair>> members, double alpha,
    std::uint64_t seed)
    : alpha_(alpha), rng_(seed) {
  if (members.empty())
    throw std::invalid_argument("bundle needs at least one member");
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  const int k = members.front().first.k();
  const int n = members.front().first.length();
  const int h = members.front().first.terminal();
  for (auto& [cfg, bnd] : members) {
    if (cfg.k() != k || cfg.length() != n || cfg.terminal() != h)
      throw std::invalid_argument("bundle members must share (k, n, h)");
    members_.emplace_back(bnd, cfg);
  }
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (i == j) continue;
      const auto& a = members[static_cast<std::size_t>(i)];
      const auto& b = members[static_cast<std::size_t>(j)];
      if (dominates(a.first, b.first) && a.second.xi.dominates(b.second.xi) &&
          a.second.sigma.dominates(b.second.sigma))
        ordered_pairs_.emplace_back(i, j);
    }
  }
}

void CoupledBundle::evolve(double horizon, bool check_order) {
  const int k = members_.front().k();
  const int n = members_.front().n();
  events_ += run_event_loop(
      rng_, k, n, horizon, time_, [&](double, int j, int x, double u) {
        for (auto& s : members_) s.apply_threshold(j, x, alpha_, u);
        if (check_order) {
          for (const auto& [hi, lo] : ordered_pairs_) {
            const auto& a = members_[static_cast<std::size_t>(hi)];
            const auto& b = members_[static_cast<std::size_t>(lo)];
            for (int jj = 1; jj <= k; ++jj)
              for (int xx = 0; xx <= n; ++xx)
                if (a.at(jj, xx) < b.at(jj, xx))
                  throw std::logic_error(
                      "coupled order violated at an update event");
          }
        }
        return true;
      });
}

bool CoupledBundle::members_equal(int a, int b) const {
  const auto& sa = members_[static_cast<std::size_t>(a)];
  const auto& sb = members_[static_cast<std::size_t>(b)];
  for (int j = 1; j <= sa.k(); ++j)
    for (int x = 0; x <= sa.n(); ++x)
      if (sa.at(j, x) != sb.at(j, x)) return false;
  return true;
}

RateEstimate gap_lower_bound_coupling(const DynamicsParams& params,
                                      double horizon, int replicas) {
  if (replicas < 100)
    throw std::invalid_argument("gap_lower_bound_coupling: replicas >= 100");
  int survived = 0;
  std::vector<char> alive(static_cast<std::size_t>(replicas), 0);
  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    CoupledBundle bundle(
        {{PolymerConfig::maximal(params.bounds, params.k), params.bounds},
         {PolymerConfig::minimal(params.bounds, params.k), params.bounds}},
        params.alpha, params.seed + RngStream::kGolden * (r + 1));
    bundle.evolve(horizon, false);
    alive[r] = bundle.members_equal(0, 1) ? 0 : 1;
  });
  for (char c : alive) survived += c;

  RateEstimate est;
  est.replicas = replicas;
  est.discrepancies = survived;
  const double nn = static_cast<double>(replicas);
  if (survived == 0) {
    est.censored = true;
    est.rate = -std::log(0.5 / nn) / horizon;  // conservative placeholder
    est.ci_low = -std::log(1.0 - std::pow(0.025, 1.0 / nn)) / horizon;
    est.ci_high = std::numeric_limits<double>::infinity();
    return est;
  }
  const double p = survived / nn;
  est.rate = -std::log(p) / horizon;
  // Wilson interval on p, mapped through -log(p)/t (decreasing in p).
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / nn;
  const double center = (p + z * z / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  const double p_lo = std::max(1e-12, center - half);
  const double p_hi = std::min(1.0, center + half);
  est.ci_low = -std::log(p_hi) / horizon;
  est.ci_high = -std::log(p_lo) / horizon;
  return est;
}

PolymerConfig cftp_sample(const DynamicsParams& params,
                          std::uint64_t event_cap) {
  struct CachedEvent {
    double dt;
    std::uint32_t site;
    double u;
  };
  RngStream rng(params.seed);
  const int k = params.k;
  const int n = params.bounds.length();
  const std::uint64_t sites =
      static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(n - 1);
  const double rate = static_cast<double>(sites);

  // epochs[e] holds the randomness for events further in the past; replay
  // order is epochs.back() .. epochs.front(). Randomness, once drawn, is
  // reused verbatim in every later attempt (required for exactness).
  std::vector<std::vector<CachedEvent>> epochs;
  std::uint64_t total = 0;
  for (;;) {
    const std::uint64_t want = epochs.empty() ? 1 : total;  // doubling
    if (total + want > event_cap)
      throw CapExceeded("cftp_sample: event budget exhausted", event_cap);
    std::vector<CachedEvent> fresh;
    fresh.reserve(want);
    for (std::uint64_t i = 0; i < want; ++i)
      fresh.push_back({rng.exponential(rate),
                       static_cast<std::uint32_t>(rng.below(sites)),
                       rng.uniform()});
    epochs.push_back(std::move(fresh));
    total += want;

    SurfaceState hi(params.bounds, PolymerConfig::maximal(params.bounds, k));
    SurfaceState lo(params.bounds, PolymerConfig::minimal(params.bounds, k));
    for (auto e = epochs.rbegin(); e != epochs.rend(); ++e) {
      for (const CachedEvent& ev : *e) {
        const int j = 1 + static_cast<int>(ev.site / static_cast<std::uint32_t>(n - 1));
        const int x = 1 + static_cast<int>(ev.site % static_cast<std::uint32_t>(n - 1));
        hi.apply_threshold(j, x, params.alpha, ev.u);
        lo.apply_threshold(j, x, params.alpha, ev.u);
      }
    }
    bool coalesced = true;
    for (int j = 1; j <= k && coalesced; ++j)
      for (int x = 1; x < n && coalesced; ++x)
        coalesced = hi.at(j, x) == lo.at(j, x);
    if (coalesced) return hi.snapshot();
  }
}

HittingResult hitting_time_max(const DynamicsParams& params,
                               const PolymerConfig& init) {
  SurfaceState state(params.bounds, init);
  const Path& xi = params.bounds.xi;
  long long mismatches = 0;
  for (int j = 1; j <= state.k(); ++j)
    for (int x = 1; x < state.n(); ++x)
      if (state.at(j, x) != xi.at(x)) ++mismatches;

  HittingResult out;
  if (mismatches == 0) return out;
  RngStream rng(params.seed);
  double t = 0.0;
  double hit = -1.0;
  out.events = run_event_loop(
      rng, state.k(), state.n(), params.horizon, t,
      [&](double time, int j, int x, double u) {
        const auto applied = state.apply_threshold(j, x, params.alpha, u);
        if (applied.changed) {
          const Height target = xi.at(x);
          if (applied.old_height == target) ++mismatches;
          if (applied.new_height == target) --mismatches;
          if (mismatches == 0) {
            hit = time;
            return false;
          }
        }
        return true;
      });
  if (hit < 0) {
    out.censored = true;
    out.time = params.horizon;
  } else {
    out.time = hit;
  }
  return out;
}

}  // namespace bpp
