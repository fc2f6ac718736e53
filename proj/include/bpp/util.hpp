#ifndef BPP_UTIL_HPP
#define BPP_UTIL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bpp {

inline constexpr const char* kArtifactVersion = "bpp 0.1.0";

// Thrown when an enumeration or event budget is exceeded. Carries the bound
// that was hit so callers can report it.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::uint64_t bound)
      : std::runtime_error(what + " (cap " + std::to_string(bound) + ")"),
        bound_(bound) {}
  std::uint64_t bound() const { return bound_; }

 private:
  std::uint64_t bound_;
};

// Thrown when an eigen solve or similar numeric step fails a residual check.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Ordinary least squares y = a + b*x; returns {intercept, slope}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 points with equal sizes");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results must be
// written to preallocated per-index slots so the outcome is schedule-free.
template <class Fn>
void parallel_for(std::size_t count, Fn fn, unsigned threads = 0) {
  if (threads == 0) {
    threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
  }
  if (threads > 8) threads = 8;
  if (count == 0) return;
  if (threads == 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t per = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * per;
    std::size_t hi = lo + per < count ? lo + per : count;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Prints a double with 17 significant digits (round-trip safe, no locale).
std::string format_double(double v);

}  // namespace bpp

#endif  // BPP_UTIL_HPP
