#ifndef BPP_CLI_HPP
#define BPP_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpp/paths.hpp"

namespace bpp {

// Exit codes shared by run() and the binary.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCapExceeded = 3;
inline constexpr int kExitCensored = 4;

struct RunConfig {
  std::string subcommand;
  double alpha = 1.0;
  int k = 1;
  int n = 4;
  int h = 0;
  int M = 0;  // square-case size; envelope/halo/scaling only
  std::string xi = "wedge";
  std::string sigma = "vee";
  std::uint64_t seed = 1;
  int replicas = 100;
  int samples = 1000;
  double horizon = -1.0;  // subcommand default when negative
  std::uint64_t max_states = 1000000;
  std::uint64_t chain_cap = 10000;
  int max_v = 6;
  std::string block_kind = "particle";
  bool drift = false;  // blockgap: emit drift estimates instead of gaps
  int ell = 2;
  int s = 1;
  double gamma = 0.5;
  double rho = 0.7;
  std::vector<double> c_alpha = {0.05, 0.1, 0.2};
  std::vector<int> m_list = {4, 8, 16};
  std::string out = "out.csv";
  std::string format = "csv";
  std::string event_log;  // optional binary event log (hit, replica 0)

  std::string canonical() const;  // full key=value echo, fixed order
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // every violation, not just the first
};

// Grammar: whitespace-separated key=value tokens; the subcommand is the
// `subcommand` key. Unknown keys, malformed values and inconsistent
// combinations are all collected. Env overrides: BPP_MAX_STATES,
// BPP_CHAIN_CAP.
ParseOutcome parse_config(const std::string& text);

// Resolves the ceiling/floor specs ("wedge", "vee" or '+-' strings).
BoundaryPair boundary_from_config(const RunConfig& config);

int run(const RunConfig& config);

}  // namespace bpp

#endif  // BPP_CLI_HPP
