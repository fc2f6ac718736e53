#ifndef BPP_PATHS_HPP
#define BPP_PATHS_HPP

#include <string>
#include <string_view>
#include <vector>

namespace bpp {

using Height = int;

// One polymer: a nearest-neighbor path of n +/-1 steps from height 0 to
// height h. Steps are stored as a bit sequence (true = up); the height array
// is derived at construction and the value is immutable afterwards.
class Path {
 public:
  Path(int n, int h, std::vector<bool> up_steps);

  // Maximal one-polymer configuration: up to (n+h)/2, then down.
  static Path wedge(int n, int h);
  // Minimal one-polymer configuration: down to (n-h)/2, then up.
  static Path vee(int n, int h);
  // Parses "+-+-" style increment strings; terminal height is implied.
  static Path from_string(std::string_view increments);

  int length() const { return n_; }
  int terminal() const { return h_; }
  bool up(int step) const { return up_[static_cast<std::size_t>(step)]; }
  Height at(int x) const { return heights_[static_cast<std::size_t>(x)]; }
  const std::vector<Height>& heights() const { return heights_; }

  std::string to_string() const;

  bool dominates(const Path& other) const;  // pointwise >=

  friend bool operator==(const Path& a, const Path& b) {
    return a.n_ == b.n_ && a.h_ == b.h_ && a.up_ == b.up_;
  }

 private:
  int n_;
  int h_;
  std::vector<bool> up_;
  std::vector<Height> heights_;
};

// Ceiling and floor: two single-polymer paths with xi >= sigma pointwise.
struct BoundaryPair {
  Path xi;
  Path sigma;

  BoundaryPair(Path ceiling, Path floor);

  int length() const { return xi.length(); }
  int terminal() const { return xi.terminal(); }

  static BoundaryPair extremal(int n, int h) {
    return BoundaryPair(Path::wedge(n, h), Path::vee(n, h));
  }
};

// k ordered polymers with common (n, h). Construction checks structural
// invariants (k >= 1, common dimensions, each path well formed); the ordering
// constraint between consecutive polymers is the job of validate() so that
// invalid orderings can be represented and reported as `false`.
class PolymerConfig {
 public:
  explicit PolymerConfig(std::vector<Path> polymers);

  // All polymers equal to the given path.
  static PolymerConfig constant(const Path& p, int k);
  static PolymerConfig maximal(const BoundaryPair& b, int k) {
    return constant(b.xi, k);
  }
  static PolymerConfig minimal(const BoundaryPair& b, int k) {
    return constant(b.sigma, k);
  }

  int k() const { return static_cast<int>(polys_.size()); }
  int length() const { return n_; }
  int terminal() const { return h_; }
  const Path& polymer(int j) const {  // 1-based as in the k-polymer notation
    return polys_[static_cast<std::size_t>(j - 1)];
  }
  Height at(int j, int x) const { return polymer(j).at(x); }

  bool ordered() const;  // eta^(j) >= eta^(j+1) for all j

  // Concatenated increment chars, polymer 1 first; doubles as canonical
  // sort/hash key ('+' < '-' in ASCII gives the canonical order).
  std::string encode() const;

  friend bool operator==(const PolymerConfig& a, const PolymerConfig& b) {
    return a.polys_ == b.polys_;
  }

 private:
  int n_;
  int h_;
  std::vector<Path> polys_;
};

// True iff all configuration invariants hold and xi >= eta^(1), eta^(k) >=
// sigma. Dimension mismatches throw std::invalid_argument instead of
// returning false.
bool validate(const PolymerConfig& config, const BoundaryPair& bounds);

// Total volume between the ceiling and the polymers: sum over polymers and
// interior sites of (xi_x - eta_x)/2. Throws if the ceiling is violated.
long long excess_volume(const PolymerConfig& config, const Path& xi);

// Pointwise domination a >= b (same dimensions required).
bool dominates(const PolymerConfig& a, const PolymerConfig& b);

}  // namespace bpp

#endif  // BPP_PATHS_HPP
