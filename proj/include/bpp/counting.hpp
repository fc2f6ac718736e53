#ifndef BPP_COUNTING_HPP
#define BPP_COUNTING_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bpp {

// Unsigned big integer with just the operations the volume generating
// function needs: addition, comparison, decimal printing and a log view.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(std::uint64_t v) : limbs_{v} {}

  BigUint& operator+=(const BigUint& other);
  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }
  bool fits_u64() const { return limbs_.size() == 1; }
  std::uint64_t as_u64() const { return limbs_[0]; }

  friend bool operator==(const BigUint& a, const BigUint& b) {
    return a.limbs_ == b.limbs_;
  }

  std::string to_string() const;
  double log() const;  // natural log; -inf for zero

 private:
  std::vector<std::uint64_t> limbs_;  // little-endian base 2^64
};

// Exact counts of (unboxed) plane partitions by volume, N(0..max_v),
// computed from the volume generating function prod_i (1-q^i)^(-i).
struct VolumeCountTable {
  int max_v = 0;
  std::vector<BigUint> counts;

  const BigUint& at(int v) const { return counts[static_cast<std::size_t>(v)]; }
};

VolumeCountTable count_by_volume(int max_v, int cap = 100000);

// The limit bound of the excess-volume tail: for each i,
//   R(i) = sum_{v >= i} e^{-2 alpha v} N(v) / sum_{v >= 0} e^{-2 alpha v} N(v),
// evaluated in log space with a truncation whose tail is checked to be
// negligible. Returns R(0..max_i).
std::vector<double> volume_tail_bound(double alpha, int max_i);

}  // namespace bpp

#endif  // BPP_COUNTING_HPP
