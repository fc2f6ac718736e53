#include "bpp/bijections.hpp"

#include <algorithm>
#include <stdexcept>

namespace bpp {

ParticleConfig::ParticleConfig(int k, int n, int h,
                               std::vector<std::vector<int>> positions)
    : k_(k), n_(n), h_(h), N_((n + h) / 2), pos_(std::move(positions)) {
  if (k < 1 || n < 1) throw std::invalid_argument("particles: bad dimensions");
  if (((n ^ h) & 1) != 0 || h < -n || h > n)
    throw std::invalid_argument("particles: bad (n, h)");
  if (static_cast<int>(pos_.size()) != k)
    throw std::invalid_argument("particles: expected one row per polymer");
  for (const auto& row : pos_) {
    if (static_cast<int>(row.size()) != N_)
      throw std::invalid_argument("particles: each polymer carries N=(n+h)/2");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] < 0 || row[i] >= n)
        throw std::invalid_argument("particles: position out of range");
      if (i > 0 && row[i] <= row[i - 1])
        throw std::invalid_argument("particles: positions must increase");
    }
  }
}

bool ParticleConfig::interlaced() const {
  for (int j = 1; j < k_; ++j)
    for (int v = 1; v <= N_; ++v)
      if (position(j, v) > position(j + 1, v)) return false;
  return true;
}

PlanePartition::PlanePartition(int a, int b, int c,
                               std::vector<std::vector<int>> heights)
    : a_(a), b_(b), c_(c), rows_(std::move(heights)) {
  if (a < 1 || b < 1 || c < 1)
    throw std::invalid_argument("plane partition: box dims must be >= 1");
  if (static_cast<int>(rows_.size()) != a)
    throw std::invalid_argument("plane partition: row count != a");
  for (int x = 0; x < a; ++x) {
    if (static_cast<int>(rows_[static_cast<std::size_t>(x)].size()) != b)
      throw std::invalid_argument("plane partition: column count != b");
    for (int y = 0; y < b; ++y) {
      const int v = at(x, y);
      if (v < 0 || v > c)
        throw std::invalid_argument("plane partition: height out of [0, c]");
      if (x > 0 && at(x - 1, y) < v)
        throw std::invalid_argument("plane partition: must decrease in x");
      if (y > 0 && at(x, y - 1) < v)
        throw std::invalid_argument("plane partition: must decrease in y");
    }
  }
}

long long PlanePartition::volume() const {
  long long v = 0;
  for (int x = 0; x < a_; ++x)
    for (int y = 0; y < b_; ++y) v += at(x, y);
  return v;
}

MonotoneCubeSet::MonotoneCubeSet(int M, std::vector<std::vector<int>> column_heights)
    : M_(M), col_(std::move(column_heights)) {
  if (M < 1) throw std::invalid_argument("cube set: M must be >= 1");
  if (static_cast<int>(col_.size()) != M)
    throw std::invalid_argument("cube set: base grid must be M x M");
  for (int r1 = 0; r1 < M; ++r1) {
    if (static_cast<int>(col_[static_cast<std::size_t>(r1)].size()) != M)
      throw std::invalid_argument("cube set: base grid must be M x M");
    for (int r2 = 0; r2 < M; ++r2) {
      const int c = column(r1, r2);
      if (c < 0 || c > M)
        throw std::invalid_argument("cube set: column height out of [0, M]");
      if (r1 > 0 && column(r1 - 1, r2) < c)
        throw std::invalid_argument("cube set: not monotone in r1");
      if (r2 > 0 && column(r1, r2 - 1) < c)
        throw std::invalid_argument("cube set: not monotone in r2");
    }
  }
}

long long MonotoneCubeSet::volume() const {
  long long v = 0;
  for (const auto& row : col_)
    for (int c : row) v += c;
  return v;
}

ParticleConfig to_particles(const PolymerConfig& config) {
  std::vector<std::vector<int>> pos(static_cast<std::size_t>(config.k()));
  for (int j = 1; j <= config.k(); ++j) {
    auto& row = pos[static_cast<std::size_t>(j - 1)];
    const Path& p = config.polymer(j);
    for (int x = 0; x < p.length(); ++x)
      if (p.up(x)) row.push_back(x);
  }
  return ParticleConfig(config.k(), config.length(), config.terminal(),
                        std::move(pos));
}

PolymerConfig from_particles(const ParticleConfig& particles) {
  std::vector<Path> polys;
  polys.reserve(static_cast<std::size_t>(particles.k()));
  for (int j = 1; j <= particles.k(); ++j) {
    std::vector<bool> up(static_cast<std::size_t>(particles.length()), false);
    for (int x : particles.row(j)) up[static_cast<std::size_t>(x)] = true;
    polys.emplace_back(particles.length(), particles.terminal(), std::move(up));
  }
  return PolymerConfig(std::move(polys));
}

namespace {

// Cell (x, y) of the base rectangle belongs to the layer of a path iff the
// (x+1)-th down step comes before the (b-y)-th up step.
bool layer_cell(const std::vector<int>& downs, const std::vector<int>& ups,
                int x, int y, int b) {
  return downs[static_cast<std::size_t>(x)] <
         ups[static_cast<std::size_t>(b - y - 1)];
}

}  // namespace

PlanePartition to_plane_partition(const PolymerConfig& config) {
  const int n = config.length();
  const int h = config.terminal();
  const int a = (n - h) / 2;
  const int b = (n + h) / 2;
  const int c = config.k();
  if (a < 1 || b < 1)
    throw std::invalid_argument("to_plane_partition: degenerate box");
  std::vector<std::vector<int>> rows(
      static_cast<std::size_t>(a), std::vector<int>(static_cast<std::size_t>(b), 0));
  for (int j = 1; j <= c; ++j) {
    const Path& p = config.polymer(j);
    std::vector<int> ups, downs;
    for (int s = 0; s < n; ++s) (p.up(s) ? ups : downs).push_back(s);
    for (int x = 0; x < a; ++x)
      for (int y = 0; y < b; ++y)
        if (layer_cell(downs, ups, x, y, b))
          ++rows[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
  }
  return PlanePartition(a, b, c, std::move(rows));
}

PolymerConfig from_plane_partition(const PlanePartition& pp, int k, int n, int h) {
  const int a = (n - h) / 2;
  const int b = (n + h) / 2;
  if (pp.box_a() != a || pp.box_b() != b || pp.box_c() != k)
    throw std::invalid_argument("from_plane_partition: box dimension mismatch");
  std::vector<Path> polys;
  polys.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const int level = k - j + 1;  // layer of polymer j: cells with l >= level
    std::vector<bool> up;
    up.reserve(static_cast<std::size_t>(n));
    int placed_ups = 0;
    for (int x = 0; x < a; ++x) {
      int lambda = 0;
      while (lambda < b && pp.at(x, lambda) >= level) ++lambda;
      const int ups_before = b - lambda;
      while (placed_ups < ups_before) {
        up.push_back(true);
        ++placed_ups;
      }
      up.push_back(false);
    }
    while (placed_ups < b) {
      up.push_back(true);
      ++placed_ups;
    }
    polys.emplace_back(n, h, std::move(up));
  }
  return PolymerConfig(std::move(polys));
}

MonotoneCubeSet to_cube_set(const PolymerConfig& config) {
  const int M = config.k();
  if (config.terminal() != 0 || config.length() != 2 * M)
    throw std::invalid_argument("to_cube_set: requires h=0, n=2M, k=M");
  std::vector<std::vector<int>> col(
      static_cast<std::size_t>(M), std::vector<int>(static_cast<std::size_t>(M), 0));
  for (int r1 = 0; r1 < M; ++r1) {
    for (int r2 = 0; r2 < M; ++r2) {
      const int x = M - r1 + r2;
      const int t = M - r1 - r2;
      int height = 0;
      for (int r3 = 0; r3 < M; ++r3) {
        if (config.at(M - r3, x) < t)
          height = r3 + 1;
        else
          break;  // presence is contiguous from r3 = 0 for ordered configs
      }
      col[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)] = height;
    }
  }
  return MonotoneCubeSet(M, std::move(col));
}

PolymerConfig from_cube_set(const MonotoneCubeSet& cubes) {
  const int M = cubes.side();
  const int n = 2 * M;
  std::vector<Path> polys;
  polys.reserve(static_cast<std::size_t>(M));
  for (int j = 1; j <= M; ++j) {
    const int r3 = M - j;
    std::vector<Height> hts(static_cast<std::size_t>(n) + 1, 0);
    for (int x = 1; x < n; ++x) {
      // Thresholds t on the diagonal M-r1+r2 = x, parity of x, from the
      // largest down; eta_x is the largest absent threshold, or the minimal
      // path value when every cube on the diagonal is present.
      const int t_lo = std::max(2 - x, x - 2 * M + 2);
      const int t_hi = std::min(x, 2 * M - x);
      int value = t_lo - 2;  // = vee at x
      for (int t = t_hi; t >= t_lo; t -= 2) {
        const int r1 = M - (x + t) / 2;
        const int r2 = (x - t) / 2;
        if (!cubes.contains(r1, r2, r3)) {
          value = t;
          break;
        }
      }
      hts[static_cast<std::size_t>(x)] = value;
    }
    std::vector<bool> up(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
      const int d = hts[static_cast<std::size_t>(x) + 1] - hts[static_cast<std::size_t>(x)];
      if (d != 1 && d != -1)
        throw std::invalid_argument("from_cube_set: inconsistent cube data");
      up[static_cast<std::size_t>(x)] = d == 1;
    }
    polys.emplace_back(n, 0, std::move(up));
  }
  return PolymerConfig(std::move(polys));
}

}  // namespace bpp
