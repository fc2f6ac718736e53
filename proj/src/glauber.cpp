#include "bpp/glauber.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace bpp {

LocalUpdate heat_bath_law(Height left, Height right, Height above,
                          Height below, double alpha) {
  if (left != right) {
    const Height mid = (left + right) / 2;
    return {mid, mid, 1.0};
  }
  const Height m = left;
  const bool high_ok = m + 1 <= above;
  const bool low_ok = m - 1 >= below;
  if (high_ok && low_ok) {
    const double w = std::exp(2.0 * alpha);
    return {static_cast<Height>(m - 1), static_cast<Height>(m + 1),
            w / (1.0 + w)};
  }
  if (high_ok) return {static_cast<Height>(m + 1), static_cast<Height>(m + 1), 1.0};
  if (low_ok) return {static_cast<Height>(m - 1), static_cast<Height>(m - 1), 1.0};
  throw std::logic_error("heat_bath_law: no candidate admissible");
}

LocalUpdate local_update_law(const PolymerConfig& config, int j, int x,
                             const BoundaryPair& bounds, double alpha) {
  if (j < 1 || j > config.k() || x < 1 || x > config.length() - 1)
    throw std::invalid_argument("local_update_law: site out of range");
  const Height above = j == 1 ? bounds.xi.at(x) : config.at(j - 1, x);
  const Height below =
      j == config.k() ? bounds.sigma.at(x) : config.at(j + 1, x);
  return heat_bath_law(config.at(j, x - 1), config.at(j, x + 1), above, below,
                       alpha);
}

DynamicsParams::DynamicsParams(double a, BoundaryPair b, int kk,
                               std::uint64_t s, double hor)
    : alpha(a), bounds(std::move(b)), k(kk), seed(s), horizon(hor) {
  if (alpha <= 0) throw std::invalid_argument("alpha must be positive");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
}

SurfaceState::SurfaceState(const BoundaryPair& bounds, const PolymerConfig& init)
    : bounds_(bounds), k_(init.k()), n_(init.length()) {
  if (!validate(init, bounds))
    throw std::invalid_argument("SurfaceState: initial configuration invalid");
  h_.resize(static_cast<std::size_t>(k_) * (static_cast<std::size_t>(n_) + 1));
  for (int j = 1; j <= k_; ++j)
    for (int x = 0; x <= n_; ++x)
      h_[static_cast<std::size_t>(j - 1) * (static_cast<std::size_t>(n_) + 1) +
         static_cast<std::size_t>(x)] = init.at(j, x);
}

SurfaceState::Applied SurfaceState::apply_threshold(int j, int x, double alpha,
                                                    double u) {
  if (j < 1 || j > k_ || x < 1 || x > n_ - 1)
    throw std::invalid_argument("apply_threshold: site out of range");
  const LocalUpdate law_jx = law(j, x, alpha);
  const Height chosen = u <= law_jx.p_high ? law_jx.high : law_jx.low;
  const Height old = at(j, x);
  // Invariant guard: the new height must respect both vertical neighbors.
  if (chosen > at(j - 1, x) || chosen < at(j + 1, x))
    throw std::logic_error("apply_threshold: constraint violated");
  h_[static_cast<std::size_t>(j - 1) * (static_cast<std::size_t>(n_) + 1) +
     static_cast<std::size_t>(x)] = chosen;
  return {chosen != old, old, chosen};
}

PolymerConfig SurfaceState::snapshot() const {
  std::vector<Path> polys;
  polys.reserve(static_cast<std::size_t>(k_));
  for (int j = 1; j <= k_; ++j) {
    std::vector<bool> up(static_cast<std::size_t>(n_));
    for (int x = 0; x < n_; ++x)
      up[static_cast<std::size_t>(x)] = at(j, x + 1) > at(j, x);
    polys.emplace_back(n_, bounds_.terminal(), std::move(up));
  }
  return PolymerConfig(std::move(polys));
}

Trajectory simulate(const DynamicsParams& params, const PolymerConfig& init,
                    bool keep_log) {
  SurfaceState state(params.bounds, init);
  RngStream rng(params.seed);
  double t = 0.0;
  Trajectory out{init, 0.0, 0, 0, {}};
  out.events = run_event_loop(
      rng, state.k(), state.n(), params.horizon, t,
      [&](double time, int j, int x, double u) {
        const auto applied = state.apply_threshold(j, x, params.alpha, u);
        if (applied.changed) {
          ++out.flips;
          if (keep_log)
            out.log.push_back({time, static_cast<std::uint16_t>(j),
                               static_cast<std::uint16_t>(x),
                               static_cast<std::int16_t>(applied.new_height)});
        }
        return true;
      });
  out.final_state = state.snapshot();
  out.final_time = t;
  return out;
}

void write_event_log(const std::string& path, const std::vector<Event>& log) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open event log for writing: " + path);
  for (const Event& e : log) {
    unsigned char rec[14];
    std::uint64_t bits;
    std::memcpy(&bits, &e.time, 8);
    for (int i = 0; i < 8; ++i) rec[i] = static_cast<unsigned char>(bits >> (8 * i));
    rec[8] = static_cast<unsigned char>(e.polymer & 0xff);
    rec[9] = static_cast<unsigned char>(e.polymer >> 8);
    rec[10] = static_cast<unsigned char>(e.site & 0xff);
    rec[11] = static_cast<unsigned char>(e.site >> 8);
    const std::uint16_t hbits = static_cast<std::uint16_t>(e.new_height);
    rec[12] = static_cast<unsigned char>(hbits & 0xff);
    rec[13] = static_cast<unsigned char>(hbits >> 8);
    if (std::fwrite(rec, 1, sizeof rec, f) != sizeof rec) {
      std::fclose(f);
      throw std::runtime_error("short write on event log: " + path);
    }
  }
  std::fclose(f);
}

std::vector<Event> read_event_log(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open event log: " + path);
  std::vector<Event> out;
  unsigned char rec[14];
  while (std::fread(rec, 1, sizeof rec, f) == sizeof rec) {
    Event e{};
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | rec[i];
    std::memcpy(&e.time, &bits, 8);
    e.polymer = static_cast<std::uint16_t>(rec[8] | (rec[9] << 8));
    e.site = static_cast<std::uint16_t>(rec[10] | (rec[11] << 8));
    e.new_height =
        static_cast<std::int16_t>(static_cast<std::uint16_t>(rec[12] | (rec[13] << 8)));
    out.push_back(e);
  }
  std::fclose(f);
  return out;
}

}  // namespace bpp
