#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bpp/counting.hpp"
#include "bpp/enumeration.hpp"
#include "bpp/util.hpp"
#include "oracles.hpp"

using namespace bpp;

namespace {

const double kAlphaHalf = 0.5 * std::log(2.0);  // e^{2 alpha} = 2

}  // namespace

TEST_CASE("enumerate_states: counts, order, caps") {
  CHECK(enumerate_states(BoundaryPair::extremal(2, 0), 1).size() == 2);
  CHECK(enumerate_states(BoundaryPair::extremal(4, 0), 1).size() == 6);
  const auto states = enumerate_states(BoundaryPair::extremal(4, 0), 2);
  CHECK(states.size() == 20);
  for (std::size_t i = 1; i < states.size(); ++i)
    CHECK(states[i - 1].encode() < states[i].encode());
  CHECK_THROWS_AS(enumerate_states(BoundaryPair::extremal(4, 0), 2, 10),
                  CapExceeded);
  try {
    enumerate_states(BoundaryPair::extremal(4, 0), 2, 10);
  } catch (const CapExceeded& e) {
    CHECK(e.bound() == 10);
  }
}

TEST_CASE("state counts match boxed plane partition counts up to n=6, k=3") {
  for (int k = 1; k <= 3; ++k)
    for (int n = 2; n <= 6; n += 2)
      for (int h = -2; h <= 2; h += 2) {
        if (std::abs(h) > n) continue;
        const auto states =
            enumerate_states(BoundaryPair::extremal(n, h), k);
        CHECK(static_cast<long long>(states.size()) ==
              oracles::count_boxed_plane_partitions((n - h) / 2, (n + h) / 2, k));
      }
}

TEST_CASE("exact measure: two-state instance and normalization") {
  const ExactMeasure m =
      exact_measure(BoundaryPair::extremal(2, 0), 1, kAlphaHalf);
  REQUIRE(m.size() == 2);
  const std::size_t up = m.index_of(
      PolymerConfig(std::vector<Path>{Path::from_string("+-")}));
  CHECK(m.probs[up] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(m.probs[1 - up] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // the maximal state has weight one: P = 1/Z-hat
  CHECK(std::log(m.probs[up]) == doctest::Approx(-m.log_zhat).epsilon(1e-12));
  CHECK_THROWS_AS(exact_measure(BoundaryPair::extremal(2, 0), 1, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(exact_measure(BoundaryPair::extremal(2, 0), 1, -1.0),
                  std::invalid_argument);
}

TEST_CASE("exact measure: probabilities sum to one and match exp(alpha sum eta)") {
  for (double alpha : {0.3, 1.0, 3.0}) {
    const BoundaryPair bounds = oracles::random_bounds(6, 0, 11);
    const ExactMeasure m = exact_measure(bounds, 2, alpha);
    double total = 0.0;
    for (double p : m.probs) total += p;
    CHECK(std::abs(total - 1.0) <= 1e-12);
    // unconditioned form: weights proportional to exp(alpha * sum of heights)
    auto height_sum = [&](const PolymerConfig& cfg) {
      long long s = 0;
      for (int j = 1; j <= cfg.k(); ++j)
        for (int x = 0; x <= cfg.length(); ++x) s += cfg.at(j, x);
      return static_cast<double>(s);
    };
    const double ref = std::log(m.probs[0]) - alpha * height_sum(m.states[0]);
    for (std::size_t i = 1; i < m.size(); ++i)
      CHECK(std::log(m.probs[i]) - alpha * height_sum(m.states[i]) ==
            doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("exact measure: large alpha concentrates on the maximal state") {
  for (int k : {1, 2}) {
    const BoundaryPair bounds = BoundaryPair::extremal(k == 1 ? 6 : 4, 0);
    const ExactMeasure m = exact_measure(bounds, k, 20.0);
    const std::size_t top = m.index_of(PolymerConfig::maximal(bounds, k));
    CHECK(m.probs[top] >= 1.0 - 1e-8);
  }
}

TEST_CASE("volume identity: mean volume equals the log-Z derivative") {
  const BoundaryPair bounds = BoundaryPair::extremal(6, 0);
  for (double alpha : {0.5, 1.0}) {
    const ExactMeasure m = exact_measure(bounds, 2, alpha);
    double mean_v = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      mean_v += m.probs[i] * static_cast<double>(m.volumes[i]);
    const double eps = 1e-5;
    const double up = exact_measure(bounds, 2, alpha + eps).log_zhat;
    const double down = exact_measure(bounds, 2, alpha - eps).log_zhat;
    const double derivative = -(up - down) / (2.0 * eps) / 2.0;
    CHECK(mean_v == doctest::Approx(derivative).epsilon(1e-6));
  }
}

TEST_CASE("count_by_volume: exact values and the cube-stack oracle") {
  const VolumeCountTable t = count_by_volume(10);
  CHECK(t.at(0).to_string() == "1");
  CHECK(t.at(1).to_string() == "1");
  CHECK(t.at(2).to_string() == "3");
  CHECK(t.at(3).to_string() == "6");
  CHECK(t.at(4).to_string() == "13");
  const auto oracle = oracles::plane_partitions_by_volume(10);
  for (int v = 0; v <= 10; ++v) {
    REQUIRE(t.at(v).fits_u64());
    CHECK(t.at(v).as_u64() == static_cast<std::uint64_t>(oracle[static_cast<std::size_t>(v)]));
  }
  // weakly increasing for v >= 1 over the computed range
  const VolumeCountTable big = count_by_volume(60);
  for (int v = 2; v <= 60; ++v)
    CHECK(big.at(v).log() >= big.at(v - 1).log());
  CHECK_THROWS_AS(count_by_volume(200, 100), CapExceeded);
}

TEST_CASE("big integers: addition, carries, printing") {
  BigUint a(UINT64_MAX);
  a += BigUint(1);
  CHECK(a.to_string() == "18446744073709551616");
  BigUint b;
  for (int i = 0; i < 100; ++i) b += a;
  CHECK(b.to_string() == "1844674407370955161600");
  CHECK(BigUint(0).to_string() == "0");
  CHECK(BigUint(7).log() == doctest::Approx(std::log(7.0)));
}

TEST_CASE("tail_excess_volume: examples and the N(v)-ratio bound") {
  const ExactMeasure two =
      exact_measure(BoundaryPair::extremal(2, 0), 1, kAlphaHalf);
  const auto tail2 = tail_excess_volume(two);
  CHECK(tail2[0] == doctest::Approx(1.0));
  CHECK(tail2[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  struct Case {
    int k, n;
  };
  for (double alpha : {0.5, 1.0}) {
    for (const Case c : {Case{1, 4}, Case{1, 6}, Case{2, 4}, Case{2, 6}, Case{2, 8}}) {
      const ExactMeasure m =
          exact_measure(BoundaryPair::extremal(c.n, 0), c.k, alpha);
      const auto tail = tail_excess_volume(m);
      const auto bound = volume_tail_bound(alpha, static_cast<int>(tail.size()) - 1);
      for (std::size_t i = 0; i < tail.size(); ++i) {
        if (i > 0) CHECK(tail[i] <= tail[i - 1] + 1e-15);
        CHECK(tail[i] <= bound[i] + 1e-12);
      }
    }
  }
  // wrong ceiling is rejected
  const BoundaryPair wrong(Path::vee(4, 0), Path::vee(4, 0));
  CHECK_THROWS_AS(tail_excess_volume(exact_measure(wrong, 1, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("sticking probability: endpoints, two-state value, squeeze in k") {
  const ExactMeasure two =
      exact_measure(BoundaryPair::extremal(2, 0), 1, kAlphaHalf);
  CHECK(sticking_probability(two, 1, 0) == 0.0);
  CHECK(sticking_probability(two, 1, 2) == 0.0);
  CHECK(sticking_probability(two, 1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(sticking_probability(two, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(sticking_probability(two, 1, 5), std::invalid_argument);

  // P(eta^(1)_x != xi_x) shrinks as more polymers push from below
  double prev = 1.0;
  for (int k = 1; k <= 3; ++k) {
    const ExactMeasure m = exact_measure(BoundaryPair::extremal(4, 0), k, 1.0);
    const double p = sticking_probability(m, 1, 2);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("detachment run probability: reduction, windows, decay") {
  const ExactMeasure m = exact_measure(BoundaryPair::extremal(6, 0), 1, 1.0);
  CHECK(detachment_run_probability(m, 2, 2) ==
        doctest::Approx(sticking_probability(m, 1, 2)));
  CHECK_THROWS_AS(detachment_run_probability(m, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(detachment_run_probability(m, 2, 6), std::invalid_argument);

  // windows growing from the wedge peak: clean exponential decay
  const ExactMeasure large = exact_measure(BoundaryPair::extremal(10, 0), 1, 1.0);
  std::vector<double> xs, ys;
  for (int len = 0; len <= 4; ++len) {
    const double p = detachment_run_probability(large, 5, 5 + len);
    REQUIRE(p > 0.0);
    xs.push_back(static_cast<double>(len));
    ys.push_back(std::log(p));
  }
  const LineFit fit = fit_line(xs, ys);
  CHECK(fit.slope < -1.0);  // exponential decay in the window length
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(std::abs(fit.intercept + fit.slope * xs[i] - ys[i]) < 0.15);
}

TEST_CASE("stochastic domination: identical, ordered boundaries, alpha order") {
  const BoundaryPair wide = BoundaryPair::extremal(4, 0);
  const ExactMeasure a = exact_measure(wide, 1, 1.0);
  CHECK(check_stochastic_domination(a, a) == DominationResult::Dominates);

  // higher ceiling dominates: (wedge, vee) vs (vee, vee)
  const BoundaryPair lowc(Path::vee(4, 0), Path::vee(4, 0));
  const ExactMeasure b = exact_measure(lowc, 1, 1.0);
  CHECK(check_stochastic_domination(a, b) == DominationResult::Dominates);

  // higher floor dominates: (wedge, wedge) vs (wedge, vee)
  const BoundaryPair highf(Path::wedge(4, 0), Path::wedge(4, 0));
  const ExactMeasure c = exact_measure(highf, 1, 1.0);
  CHECK(check_stochastic_domination(c, a) == DominationResult::Dominates);
  // the reversed comparison has unordered floors: a distinct error
  CHECK_THROWS_AS(check_stochastic_domination(a, c), std::invalid_argument);

  // larger alpha pushes the surface up
  const ExactMeasure hot = exact_measure(wide, 2, 2.0);
  const ExactMeasure cold = exact_measure(wide, 2, 1.0);
  CHECK(check_stochastic_domination(hot, cold) == DominationResult::Dominates);
  CHECK(check_stochastic_domination(cold, hot) == DominationResult::Fails);

  CHECK_THROWS_AS(check_stochastic_domination(b, a), std::invalid_argument);

  // tiny up-set budget falls back to sampling and reports NotFalsified
  CHECK(check_stochastic_domination(a, a, 3, 50) ==
        DominationResult::NotFalsified);
}
