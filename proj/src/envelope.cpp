#include "bpp/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bpp/coupling.hpp"
#include "bpp/glauber.hpp"
#include "bpp/rng.hpp"
#include "bpp/util.hpp"

namespace bpp {

int envelope_block_side(int M) {
  if (M < 2) throw std::invalid_argument("block decomposition needs M >= 2");
  const double l2 = std::log(static_cast<double>(M)) * std::log(static_cast<double>(M));
  int side = static_cast<int>(std::ceil(l2));
  if (side < 2) side = 2;
  if (side % 2) ++side;
  return side;
}

EnvelopeSchedule build_envelope(int M, double c_alpha) {
  if (c_alpha <= 0) throw std::invalid_argument("build_envelope: C(alpha) > 0");
  EnvelopeSchedule s;
  s.M = M;
  s.block_side = envelope_block_side(M);
  s.K = (M + s.block_side - 1) / s.block_side;
  s.c_alpha = c_alpha;
  const double lm = std::log(static_cast<double>(M));
  s.tau = c_alpha * std::pow(lm, 8) / 7.0;
  return s;
}

int EnvelopeSchedule::lower_index(double t) const {
  if (t <= 0.0) return 0;
  return static_cast<int>(std::ceil(t / tau - 1e-9));
}

int EnvelopeSchedule::upper_index(double t) const {
  if (t <= 0.0) return 0;
  return static_cast<int>(std::floor(t / tau + 1e-9));
}

bool EnvelopeSchedule::cube_in_lower(int r1, int r2, int r3, double t) const {
  return block_in_lower(r1 / block_side, r2 / block_side, r3 / block_side,
                        lower_index(t));
}

EnvelopeSchedule::Cover EnvelopeSchedule::block_upper_cover(int v1, int v2,
                                                            int v3,
                                                            int index) const {
  if (block_in_lower(v1, v2, v3, index)) return Cover::Full;
  // Out of S^- : drop the whole block if a neighbor below (inside the cube)
  // is also out, otherwise keep the bottom half.
  for (int axis = 0; axis < 3; ++axis) {
    int w[3] = {v1, v2, v3};
    --w[axis];
    if (w[axis] < 0) continue;  // outside the cube: not in V^-
    if (!block_in_lower(w[0], w[1], w[2], index)) return Cover::Out;
  }
  return Cover::Half;
}

bool EnvelopeSchedule::cube_in_upper(int r1, int r2, int r3, double t) const {
  const int idx = upper_index(t);
  const int v1 = r1 / block_side, v2 = r2 / block_side, v3 = r3 / block_side;
  switch (block_upper_cover(v1, v2, v3, idx)) {
    case Cover::Full:
      return true;
    case Cover::Out:
      return false;
    case Cover::Half:
      return r3 < v3 * block_side + block_side / 2;
  }
  return false;
}

int EnvelopeSchedule::upper_column_height(int r1, int r2, double t) const {
  const int idx = upper_index(t);
  const int v1 = r1 / block_side, v2 = r2 / block_side;
  int height = 0;
  for (int v3 = 0; v3 < K; ++v3) {
    const Cover c = block_upper_cover(v1, v2, v3, idx);
    if (c == Cover::Full) {
      height = (v3 + 1) * block_side;
      continue;
    }
    if (c == Cover::Half) height = v3 * block_side + block_side / 2;
    break;
  }
  return std::min(height, M);
}

namespace {

// Square-case dynamics driven in the polymer representation with an
// incrementally maintained column-height view of the cube set.
struct CubeDynamics {
  int M;
  double alpha;
  SurfaceState state;
  std::vector<std::vector<int>> cols;
  long long volume;

  CubeDynamics(const BoundaryPair& bounds, int M_, double alpha_)
      : M(M_), alpha(alpha_),
        state(bounds, PolymerConfig::minimal(bounds, M_)),
        cols(static_cast<std::size_t>(M_),
             std::vector<int>(static_cast<std::size_t>(M_), M_)),
        volume(static_cast<long long>(M_) * M_ * M_) {
    // Start = minimal configuration = full cube when sigma = vee. For a
    // jagged ceiling the minimal configuration is sigma-hat, still the full
    // cube only when sigma = vee; recompute to stay general.
    const MonotoneCubeSet s0 = to_cube_set(state.snapshot());
    volume = s0.volume();
    for (int r1 = 0; r1 < M; ++r1)
      for (int r2 = 0; r2 < M; ++r2)
        cols[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)] =
            s0.column(r1, r2);
  }

  struct Flip {
    bool removal = false;
    int r1 = 0, r2 = 0, r3 = 0;
  };

  // Applies the heat-bath event; returns the cube flip if the configuration
  // changed. `allow` may veto removals (censoring); the RNG cost is paid
  // either way so censored and free runs share their randomness.
  template <class Allow>
  std::optional<Flip> step(double t, int j, int x, double u, Allow&& allow) {
    const LocalUpdate law = state.law(j, x, alpha);
    if (law.low == law.high) return std::nullopt;
    const Height target = u <= law.p_high ? law.high : law.low;
    const Height cur = state.at(j, x);
    if (target == cur) return std::nullopt;
    const Height m = state.at(j, x - 1);
    Flip f;
    f.removal = target > cur;
    f.r3 = M - j;
    f.r1 = M - (x + m + 1) / 2;
    f.r2 = (x - m - 1) / 2;
    if (f.removal && !allow(f, t)) return std::nullopt;
    state.apply_threshold(j, x, alpha, u);
    auto& col = cols[static_cast<std::size_t>(f.r1)][static_cast<std::size_t>(f.r2)];
    col += f.removal ? -1 : 1;
    volume += f.removal ? -1 : 1;
    return f;
  }

  MonotoneCubeSet cube_set() const { return MonotoneCubeSet(M, cols); }
};

}  // namespace

CensoredRunResult run_censored_dynamics(int M, double alpha,
                                        const EnvelopeSchedule* schedule,
                                        double horizon, std::uint64_t seed,
                                        const std::vector<double>& snapshot_times) {
  if (M < 1) throw std::invalid_argument("run_censored_dynamics: M >= 1");
  const BoundaryPair bounds = BoundaryPair::extremal(2 * M, 0);
  CubeDynamics dyn(bounds, M, alpha);
  CensoredRunResult out;
  std::vector<double> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  RngStream rng(seed);
  double t = 0.0;
  out.events = run_event_loop(
      rng, M, 2 * M, horizon, t, [&](double time, int j, int x, double u) {
        while (next_snap < snaps.size() && snaps[next_snap] < time) {
          out.snapshots.emplace_back(snaps[next_snap], dyn.cube_set());
          ++next_snap;
        }
        const auto flip =
            dyn.step(time, j, x, u, [&](const CubeDynamics::Flip& f, double tt) {
              if (schedule && schedule->cube_in_lower(f.r1, f.r2, f.r3, tt)) {
                ++out.censored_moves;
                return false;
              }
              return true;
            });
        if (flip) {
          ++out.flips;
          if (dyn.volume == 0 && out.ground_hit_time < 0)
            out.ground_hit_time = time;
        }
        return true;
      });
  while (next_snap < snaps.size()) {
    out.snapshots.emplace_back(std::min(snaps[next_snap], horizon), dyn.cube_set());
    ++next_snap;
  }
  return out;
}

EnvelopeReport check_envelope_containment(int M, double alpha, double c_alpha,
                                          int replicas, double horizon,
                                          std::uint64_t seed) {
  EnvelopeReport report;
  report.M = M;
  report.alpha = alpha;
  report.c_alpha = c_alpha;
  report.horizon = horizon;
  report.replicas.assign(static_cast<std::size_t>(replicas), {});
  const EnvelopeSchedule schedule = build_envelope(M, c_alpha);
  const BoundaryPair bounds = BoundaryPair::extremal(2 * M, 0);

  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    EnvelopeReplicaReport& rep = report.replicas[r];
    CubeDynamics dyn(bounds, M, alpha);
    std::vector<std::vector<int>> allowed(
        static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(M), 0));
    long long excess = 0;
    int cached_index = -1;
    auto refresh = [&](double t) {
      cached_index = schedule.upper_index(t);
      excess = 0;
      for (int r1 = 0; r1 < M; ++r1)
        for (int r2 = 0; r2 < M; ++r2) {
          const int a = schedule.upper_column_height(r1, r2, t);
          allowed[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)] = a;
          excess += std::max(
              0, dyn.cols[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)] - a);
        }
    };
    refresh(0.0);
    auto note = [&](double t) {
      if (excess > 0 && rep.first_violation < 0) rep.first_violation = t;
      rep.worst_excess = std::max(rep.worst_excess, excess);
    };
    note(0.0);
    RngStream rng(seed + RngStream::kGolden * (r + 1));
    double t = 0.0;
    run_event_loop(rng, M, 2 * M, horizon, t, [&](double time, int j, int x,
                                                  double u) {
      if (schedule.upper_index(time) != cached_index) {
        refresh(time);
        note(time);
      }
      const auto flip =
          dyn.step(time, j, x, u, [&](const CubeDynamics::Flip& f, double tt) {
            return !schedule.cube_in_lower(f.r1, f.r2, f.r3, tt);
          });
      if (flip) {
        const int a = allowed[static_cast<std::size_t>(flip->r1)]
                             [static_cast<std::size_t>(flip->r2)];
        if (flip->r3 >= a) excess += flip->removal ? -1 : 1;
        note(time);
      }
      return true;
    });
    if (schedule.upper_index(horizon) != cached_index) {
      refresh(horizon);
      note(horizon);
    }
  });
  int violated = 0;
  for (const auto& rep : report.replicas)
    if (rep.first_violation >= 0) ++violated;
  report.violation_frequency =
      replicas ? static_cast<double>(violated) / replicas : 0.0;
  return report;
}

namespace {

double quantile_of(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  if (values.empty()) return 0.0;
  const double pos = q * (static_cast<double>(values.size()) - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(values.size() - 1, lo + 1);
  const double frac = pos - std::floor(pos);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace

ScalingResult hitting_scaling_experiment(const std::vector<int>& sizes,
                                         double alpha, int replicas,
                                         std::uint64_t seed,
                                         double horizon_per_m3) {
  ScalingResult result;
  for (int M : sizes) {
    ScalingRow row;
    row.M = M;
    row.times.assign(static_cast<std::size_t>(replicas), 0.0);
    row.censored.assign(static_cast<std::size_t>(replicas), 0);
    const BoundaryPair bounds = BoundaryPair::extremal(2 * M, 0);
    const double horizon =
        horizon_per_m3 * static_cast<double>(M) * M * M + 100.0;
    parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
      DynamicsParams params(alpha, bounds, M,
                            seed + RngStream::kGolden * (r + 1), horizon);
      const HittingResult hit =
          hitting_time_max(params, PolymerConfig::minimal(bounds, M));
      row.times[r] = hit.time;
      row.censored[r] = hit.censored ? 1 : 0;
    });
    row.median = quantile_of(row.times, 0.5);
    row.quantile = quantile_of(row.times, 1.0 - 1.0 / (2.0 * 2.718281828459045));
    result.rows.push_back(std::move(row));
  }
  if (result.rows.size() >= 2) {
    std::vector<double> lx, ly;
    for (const auto& row : result.rows) {
      lx.push_back(std::log(static_cast<double>(row.M)));
      ly.push_back(std::log(std::max(row.quantile, 1e-12)));
    }
    result.exponent = fit_line(lx, ly).slope;
  }
  return result;
}

int HaloSets::allowed_column(int r1, int r2) const {
  if (ground.column(r1, r2) > 0) return M;  // prism column of s^-
  if (in_a1(r1 / block_side, r2 / block_side)) return std::min(block_side, M);
  return 0;
}

HaloSets build_halo(const Path& xi, int M) {
  if (xi.length() != 2 * M || xi.terminal() != 0)
    throw std::invalid_argument("build_halo: ceiling must live in Omega^0_{1,2M}");
  const int side = envelope_block_side(M);
  const int K = (M + side - 1) / side;
  HaloSets halo{M, side, K, to_cube_set(PolymerConfig::constant(xi, M)), {}, {}, 0};
  halo.a2.assign(static_cast<std::size_t>(K),
                 std::vector<char>(static_cast<std::size_t>(K), 0));
  halo.a3 = halo.a2;
  for (int v1 = 0; v1 < K; ++v1)
    for (int v2 = 0; v2 < K; ++v2) {
      bool meets = false;
      for (int r1 = v1 * side; r1 < std::min((v1 + 1) * side, M) && !meets; ++r1)
        for (int r2 = v2 * side; r2 < std::min((v2 + 1) * side, M) && !meets; ++r2)
          meets = halo.ground.column(r1, r2) > 0;
      halo.a2[static_cast<std::size_t>(v1)][static_cast<std::size_t>(v2)] = meets;
    }
  auto shadowed = [&](int v1, int v2) {
    // "not in C_M \ A2": outside the cube or inside A2.
    if (v1 < 0 || v2 < 0) return true;
    return halo.a2[static_cast<std::size_t>(v1)][static_cast<std::size_t>(v2)] != 0;
  };
  for (int v1 = 0; v1 < K; ++v1)
    for (int v2 = 0; v2 < K; ++v2)
      halo.a3[static_cast<std::size_t>(v1)][static_cast<std::size_t>(v2)] =
          shadowed(v1 - 1, v2) && shadowed(v1, v2 - 1);
  for (int r1 = 0; r1 < M; ++r1)
    for (int r2 = 0; r2 < M; ++r2)
      if (halo.in_a1(r1 / side, r2 / side) && halo.ground.column(r1, r2) == 0)
        halo.halo_volume += std::min(side, M);
  return halo;
}

HaloReport check_halo_confinement(const Path& xi, int M, double alpha,
                                  double c_alpha, int replicas, double horizon,
                                  std::uint64_t seed) {
  const HaloSets halo = build_halo(xi, M);
  HaloReport report;
  report.M = M;
  report.alpha = alpha;
  report.c_alpha = c_alpha;
  const double lm = std::log(static_cast<double>(M));
  report.burn_in = (6.0 / 7.0) * c_alpha * M * std::pow(lm, 6);
  report.horizon = horizon;
  report.halo_volume = halo.halo_volume;
  report.volume_bound = 4ll * M * halo.block_side * halo.block_side;
  if (report.burn_in >= horizon)
    throw std::invalid_argument("check_halo_confinement: burn-in past horizon");
  report.replicas.assign(static_cast<std::size_t>(replicas), {});
  const BoundaryPair bounds(xi, Path::vee(2 * M, 0));

  parallel_for(static_cast<std::size_t>(replicas), [&](std::size_t r) {
    HaloReplicaReport& rep = report.replicas[r];
    CubeDynamics dyn(bounds, M, alpha);
    long long excess = 0;
    for (int r1 = 0; r1 < M; ++r1)
      for (int r2 = 0; r2 < M; ++r2)
        excess += std::max(0, dyn.cols[static_cast<std::size_t>(r1)]
                                      [static_cast<std::size_t>(r2)] -
                                  halo.allowed_column(r1, r2));
    RngStream rng(seed + RngStream::kGolden * (r + 1));
    double t = 0.0;
    bool past_burn_in = false;
    auto note = [&](double time) {
      if (time >= report.burn_in) {
        past_burn_in = true;
        if (excess > 0 && rep.confined) {
          rep.confined = false;
          rep.first_violation = time;
        }
      }
    };
    run_event_loop(rng, M, 2 * M, horizon, t,
                   [&](double time, int j, int x, double u) {
                     if (!past_burn_in && time >= report.burn_in) note(time);
                     const auto flip = dyn.step(time, j, x, u,
                                                [](const CubeDynamics::Flip&,
                                                   double) { return true; });
                     if (flip) {
                       const int a = halo.allowed_column(flip->r1, flip->r2);
                       if (flip->r3 >= a) excess += flip->removal ? -1 : 1;
                       note(time);
                     }
                     return true;
                   });
    note(horizon);
  });
  int confined = 0;
  for (const auto& rep : report.replicas)
    if (rep.confined) ++confined;
  report.confinement_frequency =
      replicas ? static_cast<double>(confined) / replicas : 0.0;
  return report;
}

Path random_ceiling(int M, std::uint64_t seed) {
  std::vector<bool> up(static_cast<std::size_t>(2 * M));
  for (int i = 0; i < M; ++i) up[static_cast<std::size_t>(i)] = true;
  RngStream rng(seed);
  for (std::size_t i = up.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    const bool tmp = up[i - 1];
    up[i - 1] = up[j];
    up[j] = tmp;
  }
  return Path(2 * M, 0, std::move(up));
}

}  // namespace bpp
