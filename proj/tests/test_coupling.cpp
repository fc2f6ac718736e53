#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "bpp/bijections.hpp"
#include "bpp/chain.hpp"
#include "bpp/coupling.hpp"
#include "bpp/glauber.hpp"
#include "bpp/util.hpp"
#include "oracles.hpp"

using namespace bpp;

namespace {

const double kAlphaHalf = 0.5 * std::log(2.0);

}  // namespace

TEST_CASE("distances: definitions and edge cases") {
  const BoundaryPair b6 = BoundaryPair::extremal(6, 0);
  const PolymerConfig a = PolymerConfig::maximal(b6, 1);
  CHECK(distance(DistanceSpec::d_gamma(0.5), a, a) == 0.0);

  // particle discrepancy at label 2 only: labels {0,1,2} vs {0,1,3}
  const PolymerConfig p1 = from_particles(ParticleConfig(1, 6, 0, {{0, 1, 2}}));
  const PolymerConfig p2 = from_particles(ParticleConfig(1, 6, 0, {{0, 1, 3}}));
  CHECK(distance(DistanceSpec::d_gamma(0.7), p1, p2) ==
        doctest::Approx(std::exp(-0.7 * 3)));
  CHECK(distance(DistanceSpec::d0(), p1, p2) == 1.0);

  // single height discrepancy of 2 on polymer 1
  CHECK(distance(DistanceSpec::D_rho(0.4), p1, p2) ==
        doctest::Approx(std::exp(-0.4)));
  CHECK(distance(DistanceSpec::D0(), p1, p2) == 1.0);

  const PolymerConfig other(std::vector<Path>{Path::wedge(4, 0)});
  CHECK_THROWS_AS(distance(DistanceSpec::d0(), a, other), std::invalid_argument);
}

TEST_CASE("path metric: weighted distances equal shortest paths") {
  const BoundaryPair b4 = BoundaryPair::extremal(4, 0);
  // extremal pair with gamma = 0.5
  CHECK(path_metric_check(DistanceSpec::d_gamma(0.5), b4, 1,
                          PolymerConfig::maximal(b4, 1),
                          PolymerConfig::minimal(b4, 1)));
  // all pairs on the 20-state M=2 square instance with rho = 0.7
  const auto states = enumerate_states(b4, 2);
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j) {
      CHECK(path_metric_check(DistanceSpec::D_rho(0.7), b4, 2, states[i], states[j]));
      CHECK(path_metric_check(DistanceSpec::d_gamma(0.5), b4, 2, states[i], states[j]));
    }
}

TEST_CASE("coupled bundle: single member reproduces simulate") {
  const BoundaryPair b = BoundaryPair::extremal(6, 0);
  const PolymerConfig init = PolymerConfig::minimal(b, 2);
  CoupledBundle bundle({{init, b}}, 1.0, 99);
  bundle.evolve(20.0);
  const DynamicsParams params(1.0, b, 2, 99, 20.0);
  CHECK(bundle.config(0) == simulate(params, init).final_state);
}

TEST_CASE("coupled bundle: order preserved from ordered starts") {
  const BoundaryPair b = BoundaryPair::extremal(4, 0);
  CoupledBundle bundle({{PolymerConfig::maximal(b, 2), b},
                        {PolymerConfig::minimal(b, 2), b}},
                       1.0, 7);
  CHECK_NOTHROW(bundle.evolve(300.0, true));
  CHECK(bundle.events() >= 1000);
}

TEST_CASE("coupled bundle: lower ceiling keeps the trajectory below") {
  const BoundaryPair wide = BoundaryPair::extremal(4, 0);
  const BoundaryPair tight(Path::vee(4, 0), Path::vee(4, 0));
  CoupledBundle bundle({{PolymerConfig::maximal(wide, 2), wide},
                        {PolymerConfig::minimal(tight, 2), tight}},
                       0.8, 21);
  CHECK_NOTHROW(bundle.evolve(200.0, true));
}

TEST_CASE("coupled marginals match the solo dynamics in distribution") {
  const BoundaryPair b = BoundaryPair::extremal(4, 0);
  const ExactChain chain = build_exact_chain(b, 1, 1.0);
  const double t = 3.0;
  const std::size_t init =
      chain.measure.index_of(PolymerConfig::minimal(b, 1));
  const Eigen::VectorXd exact = distribution_at(chain, init, t);
  std::vector<std::uint64_t> hist(chain.measure.size(), 0);
  const int reps = 30000;
  for (int r = 0; r < reps; ++r) {
    CoupledBundle bundle({{PolymerConfig::minimal(b, 1), b},
                          {PolymerConfig::maximal(b, 1), b}},
                         1.0, 1000 + static_cast<std::uint64_t>(r));
    bundle.evolve(t);
    ++hist[chain.measure.index_of(bundle.config(0))];
  }
  std::vector<double> probs(chain.measure.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    probs[i] = exact[static_cast<Eigen::Index>(i)];
  CHECK(oracles::tv_histogram(hist, probs) <= 0.02);
}

TEST_CASE("gap lower bound from coupling: two-state rate and consistency") {
  const BoundaryPair b2 = BoundaryPair::extremal(2, 0);
  const DynamicsParams params(kAlphaHalf, b2, 1, 31, 0.0);
  const RateEstimate est = gap_lower_bound_coupling(params, 5.0, 2000);
  CHECK_FALSE(est.censored);
  CHECK(est.rate == doctest::Approx(1.0).epsilon(0.15));
  CHECK(est.ci_low <= 1.0);
  CHECK(est.ci_high >= 1.0);

  CHECK_THROWS_AS(gap_lower_bound_coupling(params, 5.0, 0), std::invalid_argument);

  // estimate stays below the exact gap (within the interval)
  const BoundaryPair b4 = BoundaryPair::extremal(4, 0);
  const ExactChain chain = build_exact_chain(b4, 2, 1.0);
  const double gap = spectral_gap_exact(chain);
  const DynamicsParams p4(1.0, b4, 2, 77, 0.0);
  const RateEstimate est4 = gap_lower_bound_coupling(p4, 4.0, 1500);
  CHECK(est4.ci_low <= gap + 0.05);
}

TEST_CASE("cftp: determinism, concentration, exactness, chi-square fit") {
  const BoundaryPair b4 = BoundaryPair::extremal(4, 0);
  const DynamicsParams params(1.0, b4, 1, 5, 0.0);
  CHECK(cftp_sample(params) == cftp_sample(params));

  // strong bias pins the maximal configuration
  const DynamicsParams strong(20.0, b4, 2, 17, 0.0);
  int hits = 0;
  for (int r = 0; r < 1000; ++r) {
    DynamicsParams p(20.0, b4, 2, 17 + RngStream::kGolden * (r + 1), 0.0);
    if (cftp_sample(p) == PolymerConfig::maximal(b4, 2)) ++hits;
  }
  CHECK(hits >= 999);

  // goodness of fit against the exact measure on three small instances
  struct Case {
    int k, n;
    double alpha;
  };
  for (const Case c : {Case{1, 4, 1.0}, Case{2, 4, 0.5}, Case{1, 6, 0.7}}) {
    const BoundaryPair bounds = BoundaryPair::extremal(c.n, 0);
    const ExactMeasure m = exact_measure(bounds, c.k, c.alpha);
    std::vector<std::uint64_t> hist(m.size(), 0);
    const int reps = 20000;
    for (int r = 0; r < reps; ++r) {
      DynamicsParams p(c.alpha, bounds, c.k,
                       900 + RngStream::kGolden * static_cast<std::uint64_t>(r), 0.0);
      ++hist[m.index_of(cftp_sample(p))];
    }
    CHECK(oracles::tv_histogram(hist, m.probs) <= 0.02);
    // pool cells with expected count < 5 into one bin
    double stat = 0.0, pooled_exp = 0.0, pooled_obs = 0.0;
    int cells = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double expected = m.probs[i] * reps;
      if (expected < 5.0) {
        pooled_exp += expected;
        pooled_obs += static_cast<double>(hist[i]);
        continue;
      }
      const double diff = static_cast<double>(hist[i]) - expected;
      stat += diff * diff / expected;
      ++cells;
    }
    if (pooled_exp > 0.0) {
      const double diff = pooled_obs - pooled_exp;
      stat += diff * diff / pooled_exp;
      ++cells;
    }
    CHECK(oracles::chi_square_pvalue(stat, cells - 1) > 0.001);
  }
}

TEST_CASE("cftp: event cap is enforced") {
  const BoundaryPair b4 = BoundaryPair::extremal(4, 0);
  const DynamicsParams params(1.0, b4, 2, 3, 0.0);
  CHECK_THROWS_AS(cftp_sample(params, 4), CapExceeded);
}

TEST_CASE("hitting time: trivial start, two-state mean, M^3 survival") {
  const BoundaryPair b2 = BoundaryPair::extremal(2, 0);
  const DynamicsParams params(kAlphaHalf, b2, 1, 9, 100.0);
  CHECK(hitting_time_max(params, PolymerConfig::maximal(b2, 1)).time == 0.0);

  double total = 0.0;
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    DynamicsParams p(kAlphaHalf, b2, 1, 11 + RngStream::kGolden * (r + 1), 1e6);
    total += hitting_time_max(p, PolymerConfig::minimal(b2, 1)).time;
  }
  // first up-flip: rate-1 clock, success probability 2/3 -> mean 3/2
  CHECK(total / reps == doctest::Approx(1.5).epsilon(0.05));

  // survival curve of t(M) / M^3 at M = 4 decays roughly log-linearly
  const int M = 4;
  const BoundaryPair bm = BoundaryPair::extremal(2 * M, 0);
  std::vector<double> times;
  for (int r = 0; r < 400; ++r) {
    DynamicsParams p(1.0, bm, M, 500 + RngStream::kGolden * (r + 1), 1e9);
    times.push_back(hitting_time_max(p, PolymerConfig::minimal(bm, M)).time /
                    (static_cast<double>(M) * M * M));
  }
  // probe at empirical quantiles so each survival estimate is populated
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> xs, ys;
  for (double q : {0.50, 0.68, 0.80, 0.88, 0.94}) {
    const double T = sorted[static_cast<std::size_t>(q * (sorted.size() - 1))];
    int alive = 0;
    for (double t : times)
      if (t >= T) ++alive;
    REQUIRE(alive > 0);
    xs.push_back(T);
    ys.push_back(std::log(static_cast<double>(alive) / static_cast<double>(times.size())));
  }
  const LineFit sf = fit_line(xs, ys);
  CHECK(sf.slope < 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(std::abs(sf.intercept + sf.slope * xs[i] - ys[i]) < 0.5);

  // horizon exhaustion is flagged, not silently dropped
  DynamicsParams tight(1.0, bm, M, 1, 0.01);
  const HittingResult censored = hitting_time_max(tight, PolymerConfig::minimal(bm, M));
  CHECK(censored.censored);
  CHECK(censored.time == 0.01);
}
