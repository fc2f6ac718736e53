#include <cstdio>
#include <exception>
#include <string>

#include "bpp/cli.hpp"
#include "bpp/util.hpp"

namespace {

void usage() {
  std::puts(
      "usage: bpp <subcommand> [key=value ...]\n"
      "\n"
      "subcommands:\n"
      "  enumerate  list E_{xi,sigma} with volumes and probabilities\n"
      "  count      plane-partition counts N(v) for v = 0..max_v\n"
      "  gap        exact spectral gap of the single-flip chain\n"
      "  mix        exact gap and total-variation mixing time\n"
      "  sample     exact equilibrium samples via coupling from the past\n"
      "  hit        hitting time of the maximal configuration\n"
      "  blockgap   exact gaps of the block dynamics over a parameter scan\n"
      "  envelope   envelope containment experiment (square case)\n"
      "  halo       halo confinement experiment for jagged ceilings\n"
      "  scaling    hitting-time scaling across sizes\n"
      "\n"
      "common keys: alpha k n h M xi sigma seed replicas samples horizon\n"
      "  max_states chain_cap max_v block_kind ell s gamma rho c_alpha m_list\n"
      "  out format event_log   (see README for the full grammar)\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h") {
    usage();
    return argc < 2 ? bpp::kExitConfigError : bpp::kExitOk;
  }
  std::string text = "subcommand=" + std::string(argv[1]);
  for (int i = 2; i < argc; ++i) text += " " + std::string(argv[i]);

  const bpp::ParseOutcome outcome = bpp::parse_config(text);
  if (!outcome.config) {
    std::fprintf(stderr, "configuration errors:\n");
    for (const auto& e : outcome.errors) std::fprintf(stderr, "  - %s\n", e.c_str());
    return bpp::kExitConfigError;
  }
  try {
    const int code = bpp::run(*outcome.config);
    if (code == bpp::kExitCapExceeded)
      std::fprintf(stderr, "aborted: enumeration cap exceeded\n");
    if (code == bpp::kExitCensored)
      std::fprintf(stderr, "note: censored results present in output\n");
    return code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
