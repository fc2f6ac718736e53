#include "bpp/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "bpp/bijections.hpp"
#include "bpp/glauber.hpp"
#include "bpp/util.hpp"

namespace bpp {

namespace {

std::vector<std::vector<Height>> height_rows(const PolymerConfig& config,
                                             const BoundaryPair& bounds) {
  const int k = config.k();
  std::vector<std::vector<Height>> rows(static_cast<std::size_t>(k) + 2);
  rows[0] = bounds.xi.heights();
  for (int j = 1; j <= k; ++j) rows[static_cast<std::size_t>(j)] = config.polymer(j).heights();
  rows[static_cast<std::size_t>(k) + 1] = bounds.sigma.heights();
  return rows;
}

PolymerConfig config_from_rows(const std::vector<std::vector<Height>>& rows,
                               int k, int n, int h) {
  std::vector<Path> polys;
  polys.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const auto& r = rows[static_cast<std::size_t>(j)];
    std::vector<bool> up(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x)
      up[static_cast<std::size_t>(x)] = r[static_cast<std::size_t>(x) + 1] > r[static_cast<std::size_t>(x)];
    polys.emplace_back(n, h, std::move(up));
  }
  return PolymerConfig(std::move(polys));
}

struct Segment {
  int row = 0;  // polymer index, 1-based
  int lo = 0;   // heights at lo and hi are fixed; x in (lo, hi) are free
  int hi = 0;
  bool check_below = false;  // row+1 is frozen: enforce ordering against it
};

// DFS over the free heights of an ordered list of segments (rows ascending).
// Collects the full configurations and their relative log-weights
// alpha * (sum of free heights).
struct BlockEnumerator {
  const BoundaryPair& bounds;
  double alpha;
  std::uint64_t cap;
  std::vector<std::vector<Height>> work;  // rows 0..k+1
  std::vector<Segment> segments;
  int k, n, h;

  std::vector<PolymerConfig> states;
  std::vector<double> logw;
  double cur = 0.0;

  BlockEnumerator(const PolymerConfig& base, const BoundaryPair& b, double a,
                  std::uint64_t c)
      : bounds(b), alpha(a), cap(c), work(height_rows(base, b)),
        k(base.k()), n(base.length()), h(base.terminal()) {}

  void run() {
    std::sort(segments.begin(), segments.end(),
              [](const Segment& s, const Segment& t) { return s.row < t.row; });
    descend(0);
    if (states.empty())
      throw std::logic_error("block enumeration produced no states");
  }

  void descend(std::size_t seg_idx) {
    if (seg_idx == segments.size()) {
      if (states.size() >= cap)
        throw CapExceeded("block window enumeration exceeds cap", cap);
      states.push_back(config_from_rows(work, k, n, h));
      logw.push_back(cur);
      return;
    }
    const Segment& seg = segments[seg_idx];
    assign(seg_idx, seg.lo + 1,
           work[static_cast<std::size_t>(seg.row)][static_cast<std::size_t>(seg.lo)]);
  }

  void assign(std::size_t seg_idx, int x, Height prev) {
    const Segment& seg = segments[seg_idx];
    auto& row = work[static_cast<std::size_t>(seg.row)];
    if (x == seg.hi) {
      if (std::abs(prev - row[static_cast<std::size_t>(seg.hi)]) != 1)
        return;  // cannot close the bridge
      descend(seg_idx + 1);
      return;
    }
    const auto& above = work[static_cast<std::size_t>(seg.row) - 1];
    const Height end = row[static_cast<std::size_t>(seg.hi)];
    for (int up = 1; up >= 0; --up) {
      const Height y = prev + (up ? 1 : -1);
      if (y > above[static_cast<std::size_t>(x)]) continue;
      if (y < bounds.sigma.at(x)) continue;
      if (seg.check_below &&
          y < work[static_cast<std::size_t>(seg.row) + 1][static_cast<std::size_t>(x)])
        continue;
      if (std::abs(end - y) > seg.hi - x) continue;
      const Height saved = row[static_cast<std::size_t>(x)];
      row[static_cast<std::size_t>(x)] = y;
      cur += alpha * y;
      assign(seg_idx, x + 1, y);
      cur -= alpha * y;
      row[static_cast<std::size_t>(x)] = saved;
    }
  }

  WindowDistribution finish(std::string frame_key) {
    WindowDistribution dist;
    dist.states = std::move(states);
    dist.frame_key = std::move(frame_key);
    const double peak = *std::max_element(logw.begin(), logw.end());
    double total = 0.0;
    for (double lw : logw) total += std::exp(lw - peak);
    dist.probs.reserve(logw.size());
    for (double lw : logw) dist.probs.push_back(std::exp(lw - peak) / total);
    return dist;
  }
};

// Free-segment bounds of one polymer for a particle window: heights strictly
// between the anchors move; anchor labels off {1..N} pin the path ends.
Segment particle_segment(const ParticleConfig& particles, int j, int la,
                         int lb, int n) {
  Segment seg;
  seg.row = j;
  const int N = particles.particles_per_polymer();
  seg.lo = la >= 1 ? particles.position(j, la) + 1 : 0;
  seg.hi = lb <= N ? particles.position(j, lb) : n;
  return seg;
}

}  // namespace

std::size_t WindowDistribution::sample(double u) const {
  double cum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;
}

WindowDistribution particle_window_distribution(const PolymerConfig& base,
                                                const BoundaryPair& bounds,
                                                const ParticleWindow& w,
                                                double alpha,
                                                std::uint64_t cap) {
  const ParticleConfig particles = to_particles(base);
  const int N = particles.particles_per_polymer();
  if (w.center < 1 || w.center > N)
    throw std::invalid_argument("particle window: center label out of range");
  if (w.ell < 0) throw std::invalid_argument("particle window: ell < 0");
  const int la = w.center - w.ell - 1;
  const int lb = w.center + w.ell + 1;
  BlockEnumerator en(base, bounds, alpha, cap);
  std::string key = "P:" + std::to_string(la) + ":" + std::to_string(lb);
  for (int j = 1; j <= base.k(); ++j) {
    Segment seg = particle_segment(particles, j, la, lb, base.length());
    key += "|" + std::to_string(seg.lo) + "," + std::to_string(seg.hi);
    if (seg.hi - seg.lo > 1) en.segments.push_back(seg);
  }
  en.run();
  return en.finish(std::move(key));
}

WindowDistribution polymer_window_distribution(const PolymerConfig& base,
                                               const BoundaryPair& bounds,
                                               const PolymerWindow& w,
                                               double alpha,
                                               std::uint64_t cap) {
  const int k = base.k();
  if (w.center < 1 || w.center > k)
    throw std::invalid_argument("polymer window: center out of range");
  if (w.s < 0) throw std::invalid_argument("polymer window: s < 0");
  const int lo_row = std::max(w.center - w.s, 1);
  const int hi_row = std::min(w.center + w.s, k);
  BlockEnumerator en(base, bounds, alpha, cap);
  for (int u = lo_row; u <= hi_row; ++u) {
    Segment seg;
    seg.row = u;
    seg.lo = 0;
    seg.hi = base.length();
    seg.check_below = u == hi_row;  // the row below the slab is frozen
    en.segments.push_back(seg);
  }
  // The law is conditioned on the paths enclosing the slab.
  std::string key = "M:" + std::to_string(lo_row) + ":" + std::to_string(hi_row);
  const auto& above = en.work[static_cast<std::size_t>(lo_row) - 1];
  const auto& below = en.work[static_cast<std::size_t>(hi_row) + 1];
  for (Height v : above) key += "," + std::to_string(v);
  key += "|";
  for (Height v : below) key += "," + std::to_string(v);
  en.run();
  return en.finish(std::move(key));
}

WindowDistribution crude_window_distribution(const PolymerConfig& base,
                                             const BoundaryPair& bounds,
                                             int u, int r, double alpha,
                                             std::uint64_t cap) {
  const ParticleConfig particles = to_particles(base);
  const int N = particles.particles_per_polymer();
  if (u < 1 || u > base.k())
    throw std::invalid_argument("crude window: polymer out of range");
  if (r < 1) throw std::invalid_argument("crude window: need r >= 1");
  // Centered window of r free labels: anchors j and m with m - j - 1 = r.
  const int ja = std::max(0, (N - r) / 2);
  const int ma = ja + r + 1;
  BlockEnumerator en(base, bounds, alpha, cap);
  Segment seg = particle_segment(particles, u, ja, ma, base.length());
  seg.check_below = true;  // all other polymers stay frozen
  if (seg.hi - seg.lo > 1) en.segments.push_back(seg);
  en.run();
  std::string key = "C:" + std::to_string(u) + ":" + std::to_string(seg.lo) +
                    "," + std::to_string(seg.hi);
  return en.finish(std::move(key));
}

PolymerConfig resample_particle_block(const PolymerConfig& config,
                                      const BoundaryPair& bounds,
                                      const ParticleWindow& w, double alpha,
                                      RngStream& rng, std::uint64_t cap) {
  WindowDistribution dist =
      particle_window_distribution(config, bounds, w, alpha, cap);
  return dist.states[dist.sample(rng.uniform())];
}

PolymerConfig resample_polymer_block(const PolymerConfig& config,
                                     const BoundaryPair& bounds,
                                     const PolymerWindow& w, double alpha,
                                     RngStream& rng, std::uint64_t cap) {
  WindowDistribution dist =
      polymer_window_distribution(config, bounds, w, alpha, cap);
  return dist.states[dist.sample(rng.uniform())];
}

ExactChain block_generator_exact(BlockKind kind, const BoundaryPair& bounds,
                                 int k, double alpha, int param,
                                 std::uint64_t cap) {
  ExactMeasure measure = exact_measure(bounds, k, alpha, cap);
  const auto m = static_cast<Eigen::Index>(measure.size());
  const int N = (bounds.length() + bounds.terminal()) / 2;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  const int clocks = kind == BlockKind::Particle ? N : k;
  for (std::size_t s = 0; s < measure.size(); ++s) {
    for (int c = 1; c <= clocks; ++c) {
      WindowDistribution dist;
      switch (kind) {
        case BlockKind::Particle:
          dist = particle_window_distribution(measure.states[s], bounds,
                                              {c, param}, alpha, cap);
          break;
        case BlockKind::Polymer:
          dist = polymer_window_distribution(measure.states[s], bounds,
                                             {c, param}, alpha, cap);
          break;
        case BlockKind::Crude:
          dist = crude_window_distribution(measure.states[s], bounds, c,
                                           param, alpha, cap);
          break;
      }
      for (std::size_t t = 0; t < dist.states.size(); ++t)
        L(static_cast<Eigen::Index>(s),
          static_cast<Eigen::Index>(measure.index_of(dist.states[t]))) +=
            dist.probs[t];
      L(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) -= 1.0;
    }
  }
  return make_chain(std::move(measure), std::move(L));
}

std::vector<GapTrendRow> gap_trend_report(BlockKind kind,
                                          const std::vector<BlockInstance>& instances,
                                          const std::vector<int>& params,
                                          double alpha, std::uint64_t cap) {
  std::vector<GapTrendRow> rows;
  for (const BlockInstance& inst : instances) {
    bool reached = false;
    for (int p : params) {
      ExactChain chain = block_generator_exact(kind, inst.bounds, inst.k,
                                               alpha, p, cap);
      GapTrendRow row{inst.bounds.length(), inst.k, p, alpha,
                      spectral_gap_exact(chain), false};
      if (!reached && row.gap >= 1.0) {
        row.first_reaching_one = true;
        reached = true;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

// Compares window contents of the two sampled configurations.
bool window_match(BlockKind kind, const PolymerConfig& a,
                  const PolymerConfig& b, int center, int param) {
  if (kind == BlockKind::Particle) {
    const ParticleConfig pa = to_particles(a);
    const ParticleConfig pb = to_particles(b);
    const int N = pa.particles_per_polymer();
    const int lo = std::max(1, center - param);
    const int hi = std::min(N, center + param);
    for (int j = 1; j <= a.k(); ++j)
      for (int v = lo; v <= hi; ++v)
        if (pa.position(j, v) != pb.position(j, v)) return false;
    return true;
  }
  const int lo = std::max(center - param, 1);
  const int hi = std::min(center + param, a.k());
  for (int j = lo; j <= hi; ++j)
    if (!(a.polymer(j) == b.polymer(j))) return false;
  return true;
}

}  // namespace

DriftEstimate contraction_estimate(BlockKind kind, const BoundaryPair& bounds,
                                   int k, double alpha, int param,
                                   double decay, const PolymerConfig& a,
                                   const PolymerConfig& b,
                                   std::uint64_t events, std::uint64_t seed,
                                   std::uint64_t cap) {
  if (kind == BlockKind::Crude)
    throw std::invalid_argument("contraction_estimate: particle or polymer kind");
  const DistanceSpec unit = kind == BlockKind::Particle ? DistanceSpec::d0()
                                                        : DistanceSpec::D0();
  const DistanceSpec weighted = kind == BlockKind::Particle
                                    ? DistanceSpec::d_gamma(decay)
                                    : DistanceSpec::D_rho(decay);
  if (distance(unit, a, b) > 1.0)
    throw std::invalid_argument("contraction_estimate: pair not at unit distance");
  if (events == 0)
    throw std::invalid_argument("contraction_estimate: need events >= 1");
  const int N = (bounds.length() + bounds.terminal()) / 2;
  const int clocks = kind == BlockKind::Particle ? N : k;
  const double base_dist = distance(weighted, a, b);

  struct ClockLaws {
    WindowDistribution da, db;
    bool agree = false;
  };
  std::vector<ClockLaws> laws(static_cast<std::size_t>(clocks));
  for (int c = 1; c <= clocks; ++c) {
    auto& cl = laws[static_cast<std::size_t>(c - 1)];
    if (kind == BlockKind::Particle) {
      cl.da = particle_window_distribution(a, bounds, {c, param}, alpha, cap);
      cl.db = particle_window_distribution(b, bounds, {c, param}, alpha, cap);
    } else {
      cl.da = polymer_window_distribution(a, bounds, {c, param}, alpha, cap);
      cl.db = polymer_window_distribution(b, bounds, {c, param}, alpha, cap);
    }
    cl.agree = cl.da.frame_key == cl.db.frame_key;
    if (cl.agree && cl.da.states.size() != cl.db.states.size())
      throw std::logic_error("contraction_estimate: frame-aligned laws differ");
  }

  RngStream rng(seed);
  double sum = 0.0, sumsq = 0.0;
  std::uint64_t boundary = 0, matches = 0;
  for (std::uint64_t e = 0; e < events; ++e) {
    const int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(clocks)));
    const ClockLaws& cl = laws[static_cast<std::size_t>(c)];
    double delta;
    if (cl.agree) {
      const double u = rng.uniform();
      const std::size_t idx = cl.da.sample(u);
      delta = distance(weighted, cl.da.states[idx], cl.db.states[idx]) - base_dist;
    } else {
      const PolymerConfig& na = cl.da.states[cl.da.sample(rng.uniform())];
      const PolymerConfig& nb = cl.db.states[cl.db.sample(rng.uniform())];
      ++boundary;
      if (window_match(kind, na, nb, c + 1, param)) ++matches;
      delta = distance(weighted, na, nb) - base_dist;
    }
    sum += delta;
    sumsq += delta * delta;
  }
  DriftEstimate est;
  est.events = events;
  est.boundary_events = boundary;
  est.match_rate = boundary ? static_cast<double>(matches) / static_cast<double>(boundary) : 0.0;
  const double mean = sum / static_cast<double>(events);
  const double var =
      std::max(0.0, sumsq / static_cast<double>(events) - mean * mean);
  const double half =
      1.959963984540054 * std::sqrt(var / static_cast<double>(events));
  est.drift = clocks * mean;
  est.ci_low = clocks * (mean - half);
  est.ci_high = clocks * (mean + half);
  return est;
}

std::pair<PolymerConfig, PolymerConfig> single_flip_pair(
    const BoundaryPair& bounds, int k, double alpha) {
  const PolymerConfig top = PolymerConfig::maximal(bounds, k);
  SurfaceState state(bounds, top);
  for (int j = k; j >= 1; --j) {
    for (int x = 1; x < bounds.length(); ++x) {
      const LocalUpdate law = state.law(j, x, alpha);
      if (law.low < law.high) {
        auto rows = [&](Height newv) {
          std::vector<Path> polys;
          for (int jj = 1; jj <= k; ++jj) {
            std::vector<bool> up(static_cast<std::size_t>(bounds.length()));
            for (int xx = 0; xx < bounds.length(); ++xx) {
              Height lo_h = state.at(jj, xx), hi_h = state.at(jj, xx + 1);
              if (jj == j && xx == x) lo_h = newv;
              if (jj == j && xx + 1 == x) hi_h = newv;
              up[static_cast<std::size_t>(xx)] = hi_h > lo_h;
            }
            polys.emplace_back(bounds.length(), bounds.terminal(), std::move(up));
          }
          return PolymerConfig(std::move(polys));
        };
        return {rows(law.high), rows(law.low)};
      }
    }
  }
  throw std::invalid_argument("single_flip_pair: no legal flip (frozen instance)");
}

}  // namespace bpp
