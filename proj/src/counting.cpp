#include "bpp/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bpp/util.hpp"

namespace bpp {

BigUint& BigUint::operator+=(const BigUint& other) {
  if (other.limbs_.size() > limbs_.size())
    limbs_.resize(other.limbs_.size(), 0);
  unsigned __int128 carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    unsigned __int128 sum = carry + limbs_[i];
    if (i < other.limbs_.size()) sum += other.limbs_[i];
    limbs_[i] = static_cast<std::uint64_t>(sum);
    carry = sum >> 64;
  }
  if (carry) limbs_.push_back(static_cast<std::uint64_t>(carry));
  return *this;
}

std::string BigUint::to_string() const {
  std::vector<std::uint64_t> work = limbs_;
  std::string digits;
  const std::uint64_t base = 1000000000000000000ull;  // 10^18 per chunk
  while (!(work.size() == 1 && work[0] == 0)) {
    unsigned __int128 rem = 0;
    for (std::size_t i = work.size(); i-- > 0;) {
      unsigned __int128 cur = (rem << 64) | work[i];
      work[i] = static_cast<std::uint64_t>(cur / base);
      rem = cur % base;
    }
    while (work.size() > 1 && work.back() == 0) work.pop_back();
    std::string chunk = std::to_string(static_cast<std::uint64_t>(rem));
    const bool last = work.size() == 1 && work[0] == 0;
    if (!last)
      chunk = std::string(18 - chunk.size(), '0') + chunk;
    digits = chunk + digits;
  }
  return digits.empty() ? "0" : digits;
}

double BigUint::log() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  const std::size_t top = limbs_.size() - 1;
  double mantissa = static_cast<double>(limbs_[top]);
  if (top >= 1) mantissa += static_cast<double>(limbs_[top - 1]) * 0x1.0p-64;
  return std::log(mantissa) + 64.0 * std::log(2.0) * static_cast<double>(top);
}

VolumeCountTable count_by_volume(int max_v, int cap) {
  if (max_v < 0) throw std::invalid_argument("count_by_volume: max_v < 0");
  if (max_v > cap)
    throw CapExceeded("count_by_volume: max_v above cap",
                      static_cast<std::uint64_t>(cap));
  std::vector<BigUint> c(static_cast<std::size_t>(max_v) + 1);
  c[0] = BigUint(1);
  // prod_{i>=1} (1-q^i)^(-i): apply the factor 1/(1-q^i) i times, each
  // application is the prefix recurrence c[v] += c[v-i].
  for (int i = 1; i <= max_v; ++i)
    for (int rep = 0; rep < i; ++rep)
      for (int v = i; v <= max_v; ++v)
        c[static_cast<std::size_t>(v)] += c[static_cast<std::size_t>(v - i)];
  VolumeCountTable table;
  table.max_v = max_v;
  table.counts = std::move(c);
  return table;
}

std::vector<double> volume_tail_bound(double alpha, int max_i) {
  if (alpha <= 0) throw std::invalid_argument("volume_tail_bound: alpha <= 0");
  if (max_i < 0) throw std::invalid_argument("volume_tail_bound: max_i < 0");
  // Truncation point: the series terms log N(v) - 2 alpha v eventually fall
  // like -2 alpha v + O(v^(2/3)); double the range until the last term is
  // far below the peak.
  int trunc = std::max(max_i + 50, 100);
  std::vector<double> term_log;
  double peak;
  for (;;) {
    VolumeCountTable table = count_by_volume(trunc, 5000);
    term_log.assign(static_cast<std::size_t>(trunc) + 1, 0.0);
    peak = -std::numeric_limits<double>::infinity();
    for (int v = 0; v <= trunc; ++v) {
      term_log[static_cast<std::size_t>(v)] = table.at(v).log() - 2.0 * alpha * v;
      peak = std::max(peak, term_log[static_cast<std::size_t>(v)]);
    }
    if (term_log.back() <= peak - 60.0) break;
    if (trunc >= 4000)
      throw NumericalError("volume_tail_bound: truncation tail not negligible",
                           std::exp(term_log.back() - peak));
    trunc = std::min(trunc * 2, 4000);
  }
  // Suffix sums in log space, scaled by the peak.
  std::vector<double> suffix(static_cast<std::size_t>(trunc) + 2, 0.0);
  for (int v = trunc; v >= 0; --v)
    suffix[static_cast<std::size_t>(v)] =
        suffix[static_cast<std::size_t>(v) + 1] +
        std::exp(term_log[static_cast<std::size_t>(v)] - peak);
  std::vector<double> out(static_cast<std::size_t>(max_i) + 1);
  for (int i = 0; i <= max_i; ++i)
    out[static_cast<std::size_t>(i)] =
        suffix[static_cast<std::size_t>(i)] / suffix[0];
  return out;
}

}  // namespace bpp
