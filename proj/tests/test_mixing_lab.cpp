#include <doctest.h>

#include <cmath>
#include <set>

#include "bpp/coupling.hpp"
#include "bpp/envelope.hpp"
#include "bpp/glauber.hpp"
#include "bpp/rng.hpp"
#include "bpp/util.hpp"
#include "oracles.hpp"

using namespace bpp;

TEST_CASE("envelope schedule: rule arithmetic on the K=10 example") {
  EnvelopeSchedule s;
  s.M = 40;  // geometry irrelevant for the block rule itself
  s.block_side = 4;
  s.K = 10;
  s.tau = 1.0;
  s.c_alpha = 1.0;
  // For 14*tau < t <= 15*tau the rule index is 15.
  CHECK(s.lower_index(14.5) == 15);
  CHECK(s.block_in_lower(0, 0, 0, 15));   // 0 <= 5*9 - 15 = 30
  CHECK_FALSE(s.block_in_lower(9, 9, 9, 15));  // 45 > 30
}

TEST_CASE("envelope schedule: initial, final and sandwich properties") {
  const int M = 16;
  const EnvelopeSchedule s = build_envelope(M, 0.1);
  CHECK(s.block_side == 8);
  CHECK(s.K == 2);

  // t = 0: S^- is the full cube
  for (int r1 = 0; r1 < M; ++r1)
    for (int r2 = 0; r2 < M; ++r2)
      for (int r3 = 0; r3 < M; ++r3) CHECK(s.cube_in_lower(r1, r2, r3, 0.0));

  const std::vector<double> times = {0.0,      0.5 * s.tau, 1.0 * s.tau,
                                     1.5 * s.tau, 2.5 * s.tau, 4.5 * s.tau,
                                     5.5 * s.tau, 6 * s.K * s.tau,
                                     6 * s.K * s.tau + 3.0};
  for (double t : times) {
    long long lower = 0, upper = 0;
    for (int r1 = 0; r1 < M; ++r1)
      for (int r2 = 0; r2 < M; ++r2) {
        int col_low = 0, col_up = 0;
        for (int r3 = 0; r3 < M; ++r3) {
          const bool in_low = s.cube_in_lower(r1, r2, r3, t);
          const bool in_up = s.cube_in_upper(r1, r2, r3, t);
          if (in_low) CHECK(in_up);  // S^- inside S^+
          col_low += in_low;
          col_up += in_up;
          // columns are prefixes: a cube above another present cube
          if (r3 > 0 && in_low) CHECK(s.cube_in_lower(r1, r2, r3 - 1, t));
          if (r3 > 0 && in_up) CHECK(s.cube_in_upper(r1, r2, r3 - 1, t));
        }
        CHECK(col_up == s.upper_column_height(r1, r2, t));
        // monotone in the base coordinates
        if (r1 > 0) {
          int prev = 0;
          for (int r3 = 0; r3 < M; ++r3) prev += s.cube_in_lower(r1 - 1, r2, r3, t);
          CHECK(prev >= col_low);
        }
        lower += col_low;
        upper += col_up;
      }
    CHECK(lower <= upper);
  }

  // non-increasing S^- along time
  for (std::size_t i = 1; i < times.size(); ++i)
    for (int r1 = 0; r1 < M; r1 += 3)
      for (int r2 = 0; r2 < M; r2 += 3)
        for (int r3 = 0; r3 < M; r3 += 3)
          if (s.cube_in_lower(r1, r2, r3, times[i]))
            CHECK(s.cube_in_lower(r1, r2, r3, times[i - 1]));

  // terminal state: S^- empty, S^+ exactly the bottom half of block (0,0,0)
  const double end = s.end_time() + 1.0;
  for (int r1 = 0; r1 < M; ++r1)
    for (int r2 = 0; r2 < M; ++r2)
      for (int r3 = 0; r3 < M; ++r3) {
        CHECK_FALSE(s.cube_in_lower(r1, r2, r3, end));
        const bool expect = r1 < s.block_side && r2 < s.block_side &&
                            r3 < s.block_side / 2;
        CHECK(s.cube_in_upper(r1, r2, r3, end) == expect);
      }
}

TEST_CASE("censored dynamics: vacuous schedule matches the free run") {
  const int M = 4;
  EnvelopeSchedule stale = build_envelope(M, 1.0);
  stale.tau = 1e-9;  // schedule already exhausted: censoring is vacuous
  const auto censored =
      run_censored_dynamics(M, 1.0, &stale, 30.0, 77, {10.0, 30.0});
  const auto free = run_censored_dynamics(M, 1.0, nullptr, 30.0, 77, {10.0, 30.0});
  CHECK(censored.censored_moves == 0);
  REQUIRE(censored.snapshots.size() == free.snapshots.size());
  for (std::size_t i = 0; i < censored.snapshots.size(); ++i)
    CHECK(censored.snapshots[i].second == free.snapshots[i].second);
}

TEST_CASE("censored dynamics: strong bias empties the cube, never enters S^-") {
  const int M = 4;
  const EnvelopeSchedule s = build_envelope(M, 2.0);
  const auto run = run_censored_dynamics(M, 20.0, &s, 60.0, 5,
                                         {3.0, 8.0, 14.0, 19.0});
  CHECK(run.ground_hit_time > 0.0);  // reaches empty once S^- has receded
  CHECK(run.censored_moves > 0);     // the envelope actually held it back
  // the lower envelope is inside the trajectory at every snapshot
  for (const auto& [t, cubes] : run.snapshots)
    for (int r1 = 0; r1 < M; ++r1)
      for (int r2 = 0; r2 < M; ++r2)
        for (int r3 = 0; r3 < M; ++r3)
          if (s.cube_in_lower(r1, r2, r3, t)) CHECK(cubes.contains(r1, r2, r3));
}

TEST_CASE("censored dynamics dominates the free run event by event") {
  const int M = 4;
  const double alpha = 0.8;
  const EnvelopeSchedule sched = build_envelope(M, 0.05);
  const BoundaryPair bounds = BoundaryPair::extremal(2 * M, 0);
  SurfaceState censored(bounds, PolymerConfig::minimal(bounds, M));
  SurfaceState free(bounds, PolymerConfig::minimal(bounds, M));
  RngStream rng(123);
  double t = 0.0;
  run_event_loop(rng, M, 2 * M, 40.0, t, [&](double time, int j, int x, double u) {
    free.apply_threshold(j, x, alpha, u);
    // censor: reject removals of cubes still required by S^-
    const LocalUpdate law = censored.law(j, x, alpha);
    bool reject = false;
    if (law.low != law.high) {
      const Height target = u <= law.p_high ? law.high : law.low;
      const Height cur = censored.at(j, x);
      if (target > cur) {
        const Height m = censored.at(j, x - 1);
        const int r3 = M - j;
        const int r1 = M - (x + m + 1) / 2;
        const int r2 = (x - m - 1) / 2;
        reject = sched.cube_in_lower(r1, r2, r3, time);
      }
    }
    if (!reject) censored.apply_threshold(j, x, alpha, u);
    // censored trajectory has the larger cube set = lower polymer heights
    for (int jj = 1; jj <= M; ++jj)
      for (int xx = 0; xx <= 2 * M; ++xx)
        CHECK(censored.at(jj, xx) <= free.at(jj, xx));
    return true;
  });
}

TEST_CASE("envelope containment report: trend in C(alpha)") {
  const int M = 8;
  std::vector<double> freqs;
  for (double c : {0.05, 0.4}) {
    const double horizon = 64.0;
    const EnvelopeReport report =
        check_envelope_containment(M, 1.0, c, 16, horizon, 99);
    freqs.push_back(report.violation_frequency);
    for (const auto& rep : report.replicas)
      if (rep.first_violation >= 0) CHECK(rep.worst_excess > 0);
  }
  CHECK(freqs[1] <= freqs[0]);
}

TEST_CASE("hitting scaling: closed form at M=1 and decreasing q/M^3") {
  // M = 1: the two-state chain, mean hitting time 1/p(up)
  const BoundaryPair b2 = BoundaryPair::extremal(2, 0);
  const double alpha = 0.5 * std::log(2.0);
  double total = 0.0;
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    DynamicsParams p(alpha, b2, 1, 41 + RngStream::kGolden * (r + 1), 1e6);
    total += hitting_time_max(p, PolymerConfig::minimal(b2, 1)).time;
  }
  CHECK(total / reps == doctest::Approx(1.5).epsilon(0.1));

  const ScalingResult res = hitting_scaling_experiment({4, 8}, 1.0, 30, 13);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].quantile / 64.0 > res.rows[1].quantile / 512.0);
  CHECK(res.exponent > 0.0);
}

TEST_CASE("halo sets: wedge and vee endpoints, prism ground states") {
  const int M = 8;
  const HaloSets wedge_halo = build_halo(Path::wedge(2 * M, 0), M);
  CHECK(wedge_halo.ground.volume() == 0);
  for (int v1 = 0; v1 < wedge_halo.K; ++v1)
    for (int v2 = 0; v2 < wedge_halo.K; ++v2) {
      CHECK_FALSE(wedge_halo.a2[v1][v2]);
      CHECK(wedge_halo.a3[v1][v2] == (v1 == 0 && v2 == 0));
    }

  const HaloSets vee_halo = build_halo(Path::vee(2 * M, 0), M);
  CHECK(vee_halo.ground.volume() == static_cast<long long>(M) * M * M);
  for (int v1 = 0; v1 < vee_halo.K; ++v1)
    for (int v2 = 0; v2 < vee_halo.K; ++v2) CHECK(vee_halo.a2[v1][v2]);
  CHECK(vee_halo.halo_volume == 0);

  // ground-state columns are full prisms for any ceiling
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const HaloSets halo = build_halo(random_ceiling(M, seed), M);
    for (int r1 = 0; r1 < M; ++r1)
      for (int r2 = 0; r2 < M; ++r2) {
        const int col = halo.ground.column(r1, r2);
        CHECK((col == 0 || col == M));
      }
    CHECK(halo.halo_volume <=
          4ll * M * halo.block_side * halo.block_side);
  }
}

TEST_CASE("halo confinement: frozen ceiling is vacuous, strong bias confines") {
  const int M = 4;
  // xi = vee freezes the dynamics at the full cube
  const HaloReport frozen = check_halo_confinement(
      Path::vee(2 * M, 0), M, 1.0, 0.05, 4, 16.0, 3);
  CHECK(frozen.confinement_frequency == 1.0);

  const HaloReport biased = check_halo_confinement(
      random_ceiling(M, 5), M, 20.0, 0.7, 20, 40.0, 4);
  CHECK(biased.confinement_frequency >= 0.99);

  // burn-in beyond the horizon is rejected
  CHECK_THROWS_AS(
      check_halo_confinement(random_ceiling(M, 5), M, 1.0, 50.0, 2, 16.0, 4),
      std::invalid_argument);
}

TEST_CASE("single block with jagged ceiling: upper half empties after burn-in") {
  // exception frequency shrinks with the block side
  std::vector<double> rates;
  for (const int side : {4, 8, 16}) {
    const BoundaryPair bounds(random_ceiling(side, 71), Path::vee(2 * side, 0));
    const HaloSets halo = build_halo(bounds.xi, side);
    int exceptions = 0, checks = 0;
    for (int rep = 0; rep < 12; ++rep) {
      SurfaceState state(bounds, PolymerConfig::minimal(bounds, side));
      RngStream rng(200 + RngStream::kGolden * (rep + 1));
      double t = 0.0;
      const double burn = 9.0 * side;
      const double horizon = burn + 40.0;
      double next_check = burn;
      run_event_loop(rng, side, 2 * side, horizon, t,
                     [&](double time, int j, int x, double u) {
                       state.apply_threshold(j, x, 1.0, u);
                       if (time >= next_check) {
                         next_check += 1.0;
                         ++checks;
                         const MonotoneCubeSet cubes = to_cube_set(state.snapshot());
                         bool bad = false;
                         for (int r1 = 0; r1 < side && !bad; ++r1)
                           for (int r2 = 0; r2 < side && !bad; ++r2)
                             bad = cubes.column(r1, r2) > side / 2 &&
                                   halo.ground.column(r1, r2) == 0;
                         exceptions += bad;
                       }
                       return true;
                     });
    }
    REQUIRE(checks > 0);
    rates.push_back(static_cast<double>(exceptions) / checks);
  }
  CHECK(rates[2] <= rates[0] + 1e-12);
  CHECK(rates[2] <= 0.05);
}

TEST_CASE("after the first ground hit the excess volume stays small") {
  const int M = 16;
  const auto run = run_censored_dynamics(M, 1.0, nullptr, 400.0, 31,
                                         [] {
                                           std::vector<double> t;
                                           for (int i = 0; i < 200; ++i)
                                             t.push_back(200.0 + i);
                                           return t;
                                         }());
  REQUIRE(run.ground_hit_time > 0.0);
  REQUIRE(run.ground_hit_time < 200.0);
  int high = 0, total = 0;
  for (const auto& [t, cubes] : run.snapshots) {
    ++total;
    if (cubes.volume() > M / 10) ++high;
  }
  CHECK(static_cast<double>(high) / total <= 0.25);
}
