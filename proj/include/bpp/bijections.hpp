#ifndef BPP_BIJECTIONS_HPP
#define BPP_BIJECTIONS_HPP

#include <vector>

#include "bpp/paths.hpp"

namespace bpp {

// Positions of positive increments ("particles"), one row per polymer.
// Every polymer carries the same number N = (n+h)/2 of particles. Particle
// labels are 1-based; accessors honor the sentinel convention x_v = 0 for
// v < 1 and x_v = N for v > N.
class ParticleConfig {
 public:
  ParticleConfig(int k, int n, int h,
                 std::vector<std::vector<int>> positions);

  int k() const { return k_; }
  int length() const { return n_; }
  int terminal() const { return h_; }
  int particles_per_polymer() const { return N_; }

  int position(int j, int v) const {  // j in [1,k], v 1-based with sentinels
    if (v < 1) return 0;
    if (v > N_) return N_;
    return pos_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(v - 1)];
  }
  const std::vector<int>& row(int j) const {
    return pos_[static_cast<std::size_t>(j - 1)];
  }

  bool interlaced() const;  // x_i^(j) <= x_i^(j+1) for all i, j

 private:
  int k_, n_, h_, N_;
  std::vector<std::vector<int>> pos_;
};

// Heights l_{x,y} on the a x b rectangle, weakly decreasing along both axes,
// bounded by c.
class PlanePartition {
 public:
  PlanePartition(int a, int b, int c, std::vector<std::vector<int>> heights);

  int box_a() const { return a_; }
  int box_b() const { return b_; }
  int box_c() const { return c_; }
  int at(int x, int y) const {
    return rows_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  }
  long long volume() const;

  friend bool operator==(const PlanePartition& p, const PlanePartition& q) {
    return p.a_ == q.a_ && p.b_ == q.b_ && p.c_ == q.c_ && p.rows_ == q.rows_;
  }

 private:
  int a_, b_, c_;
  std::vector<std::vector<int>> rows_;
};

// Monotone union of elementary cubes in [0,M]^3, stored as column heights
// over the (r1, r2) base grid; heights weakly decrease in both directions.
class MonotoneCubeSet {
 public:
  MonotoneCubeSet(int M, std::vector<std::vector<int>> column_heights);

  int side() const { return M_; }
  int column(int r1, int r2) const {
    return col_[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)];
  }
  bool contains(int r1, int r2, int r3) const {
    return r3 < column(r1, r2);
  }
  long long volume() const;

  friend bool operator==(const MonotoneCubeSet& a, const MonotoneCubeSet& b) {
    return a.M_ == b.M_ && a.col_ == b.col_;
  }

 private:
  int M_;
  std::vector<std::vector<int>> col_;
};

ParticleConfig to_particles(const PolymerConfig& config);
PolymerConfig from_particles(const ParticleConfig& particles);

// Layer construction, bottom polymer first; order-reversing: eta >= zeta
// iff l(eta) <= l(zeta). Box is a = (n-h)/2, b = (n+h)/2, c = k.
PlanePartition to_plane_partition(const PolymerConfig& config);
PolymerConfig from_plane_partition(const PlanePartition& pp, int k, int n,
                                   int h);

// Square case h = 0, n = 2M, k = M only. The elementary cube labeled
// (r1,r2,r3) is present iff eta^(M-r3) at M-r1+r2 is below M-r1-r2.
MonotoneCubeSet to_cube_set(const PolymerConfig& config);
PolymerConfig from_cube_set(const MonotoneCubeSet& cubes);

}  // namespace bpp

#endif  // BPP_BIJECTIONS_HPP
