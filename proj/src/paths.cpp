#include "bpp/paths.hpp"

#include <cstdlib>
#include <stdexcept>

namespace bpp {

namespace {

void check_dims(int n, int h) {
  if (n < 1) throw std::invalid_argument("path length must be >= 1");
  if (std::abs(h) > n) throw std::invalid_argument("|h| must be <= n");
  if (((n ^ h) & 1) != 0)
    throw std::invalid_argument("n and h must have the same parity");
}

}  // namespace

Path::Path(int n, int h, std::vector<bool> up_steps)
    : n_(n), h_(h), up_(std::move(up_steps)) {
  check_dims(n, h);
  if (static_cast<int>(up_.size()) != n)
    throw std::invalid_argument("increment count must equal path length");
  heights_.resize(static_cast<std::size_t>(n) + 1);
  Height cur = 0;
  heights_[0] = 0;
  for (int x = 0; x < n; ++x) {
    cur += up_[static_cast<std::size_t>(x)] ? 1 : -1;
    heights_[static_cast<std::size_t>(x) + 1] = cur;
  }
  if (cur != h)
    throw std::invalid_argument("increments do not reach the terminal height");
}

Path Path::wedge(int n, int h) {
  check_dims(n, h);
  const int peak = (n + h) / 2;
  std::vector<bool> up(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) up[static_cast<std::size_t>(x)] = x < peak;
  return Path(n, h, std::move(up));
}

Path Path::vee(int n, int h) {
  check_dims(n, h);
  const int trough = (n - h) / 2;
  std::vector<bool> up(static_cast<std::size_t>(n));
  for (int x = 0; x < n; ++x) up[static_cast<std::size_t>(x)] = x >= trough;
  return Path(n, h, std::move(up));
}

Path Path::from_string(std::string_view increments) {
  std::vector<bool> up;
  up.reserve(increments.size());
  int h = 0;
  for (char c : increments) {
    if (c == '+') {
      up.push_back(true);
      ++h;
    } else if (c == '-') {
      up.push_back(false);
      --h;
    } else {
      throw std::invalid_argument("increment string may contain only '+'/'-'");
    }
  }
  if (up.empty()) throw std::invalid_argument("empty increment string");
  const int n = static_cast<int>(up.size());
  return Path(n, h, std::move(up));
}

std::string Path::to_string() const {
  std::string s;
  s.reserve(up_.size());
  for (bool b : up_) s.push_back(b ? '+' : '-');
  return s;
}

bool Path::dominates(const Path& other) const {
  if (n_ != other.n_ || h_ != other.h_)
    throw std::invalid_argument("dominates: dimension mismatch");
  for (int x = 0; x <= n_; ++x)
    if (at(x) < other.at(x)) return false;
  return true;
}

BoundaryPair::BoundaryPair(Path ceiling, Path floor)
    : xi(std::move(ceiling)), sigma(std::move(floor)) {
  if (xi.length() != sigma.length() || xi.terminal() != sigma.terminal())
    throw std::invalid_argument("ceiling/floor dimension mismatch");
  if (!xi.dominates(sigma))
    throw std::invalid_argument("ceiling must dominate floor");
}

PolymerConfig::PolymerConfig(std::vector<Path> polymers)
    : polys_(std::move(polymers)) {
  if (polys_.empty())
    throw std::invalid_argument("configuration needs at least one polymer");
  n_ = polys_.front().length();
  h_ = polys_.front().terminal();
  for (const Path& p : polys_)
    if (p.length() != n_ || p.terminal() != h_)
      throw std::invalid_argument("polymers must share (n, h)");
}

PolymerConfig PolymerConfig::constant(const Path& p, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  return PolymerConfig(std::vector<Path>(static_cast<std::size_t>(k), p));
}

bool PolymerConfig::ordered() const {
  for (int j = 1; j < k(); ++j)
    if (!polymer(j).dominates(polymer(j + 1))) return false;
  return true;
}

std::string PolymerConfig::encode() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(k()) * static_cast<std::size_t>(n_));
  for (const Path& p : polys_) s += p.to_string();
  return s;
}

bool validate(const PolymerConfig& config, const BoundaryPair& bounds) {
  if (config.length() != bounds.length() ||
      config.terminal() != bounds.terminal())
    throw std::invalid_argument("validate: config/bounds dimension mismatch");
  if (!config.ordered()) return false;
  if (!bounds.xi.dominates(config.polymer(1))) return false;
  if (!config.polymer(config.k()).dominates(bounds.sigma)) return false;
  return true;
}

long long excess_volume(const PolymerConfig& config, const Path& xi) {
  if (config.length() != xi.length() || config.terminal() != xi.terminal())
    throw std::invalid_argument("excess_volume: dimension mismatch");
  long long twice = 0;
  for (int j = 1; j <= config.k(); ++j) {
    for (int x = 1; x < config.length(); ++x) {
      const int d = xi.at(x) - config.at(j, x);
      if (d < 0) throw std::invalid_argument("excess_volume: ceiling violated");
      twice += d;
    }
  }
  return twice / 2;
}

bool dominates(const PolymerConfig& a, const PolymerConfig& b) {
  if (a.k() != b.k() || a.length() != b.length() ||
      a.terminal() != b.terminal())
    throw std::invalid_argument("dominates: dimension mismatch");
  for (int j = 1; j <= a.k(); ++j)
    if (!a.polymer(j).dominates(b.polymer(j))) return false;
  return true;
}

}  // namespace bpp
