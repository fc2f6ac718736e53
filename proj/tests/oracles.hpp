#ifndef BPP_TEST_ORACLES_HPP
#define BPP_TEST_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "bpp/paths.hpp"

namespace bpp::oracles {

// Every element of E_{xi,sigma} by filtering all 2^(k n) increment words;
// independent of the library's pruned enumeration. Keep k*n small.
std::vector<PolymerConfig> brute_force_states(const BoundaryPair& bounds, int k);

// Plane partitions in an a x b x c box by direct recursion over rows.
long long count_boxed_plane_partitions(int a, int b, int c);

// Counts of plane partitions (monotone cube stacks, no box) of each volume
// 0..max_v by explicit enumeration.
std::vector<long long> plane_partitions_by_volume(int max_v);

// Total variation between an empirical histogram and exact probabilities.
double tv_histogram(const std::vector<std::uint64_t>& counts,
                    const std::vector<double>& probs);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_pvalue(double statistic, int dof);

// Uniformly random path in Omega^h_{1,n}.
Path random_path(int n, int h, std::uint64_t seed);

// Random ordered ceiling/floor pair (pointwise max/min of two random paths).
BoundaryPair random_bounds(int n, int h, std::uint64_t seed);

}  // namespace bpp::oracles

#endif  // BPP_TEST_ORACLES_HPP
