#include "bpp/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "bpp/blocks.hpp"
#include "bpp/chain.hpp"
#include "bpp/coupling.hpp"
#include "bpp/counting.hpp"
#include "bpp/enumeration.hpp"
#include "bpp/envelope.hpp"
#include "bpp/glauber.hpp"
#include "bpp/util.hpp"

namespace bpp {

namespace {

const char* const kSubcommands[] = {"enumerate", "count", "gap",      "mix",
                                    "sample",    "hit",   "blockgap", "envelope",
                                    "halo",      "scaling"};

bool known_subcommand(const std::string& s) {
  for (const char* c : kSubcommands)
    if (s == c) return true;
  return false;
}

template <class T>
std::string join_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>)
      out += format_double(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

// Accumulates rows; CSV and JSON render from the same cells.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  Table& cell(const std::string& v) {
    current_.push_back(v);
    return *this;
  }
  Table& cell(double v) { return cell(format_double(v)); }
  Table& cell(int v) { return cell(std::to_string(v)); }
  Table& cell(long long v) { return cell(std::to_string(v)); }
  Table& cell(std::uint64_t v) { return cell(std::to_string(v)); }
  void end_row() {
    rows_.push_back(std::move(current_));
    current_.clear();
  }

  std::string to_csv(const std::string& header_comment) const {
    std::ostringstream out;
    out << "# " << header_comment << "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
      out << (i ? "," : "") << columns_[i];
    out << "\n";
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << row[i];
      out << "\n";
    }
    return out.str();
  }

  std::string to_json(const std::string& header_comment, double seconds) const {
    nlohmann::json doc;
    doc["artifact"] = kArtifactVersion;
    doc["config"] = header_comment;
    doc["columns"] = columns_;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : rows_) {
      nlohmann::json r = nlohmann::json::object();
      for (std::size_t i = 0; i < row.size() && i < columns_.size(); ++i)
        r[columns_[i]] = row[i];
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    doc["timing_seconds"] = seconds;
    return doc.dump(2) + "\n";
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> current_;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

double default_envelope_horizon(int M, double c_alpha) {
  const double lm = std::log(static_cast<double>(M));
  return std::min(static_cast<double>(M) * M,
                  100.0 * c_alpha * M * std::pow(lm, 6));
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "subcommand=" << subcommand
      << " alpha=" << format_double(alpha) << " k=" << k << " n=" << n
      << " h=" << h << " M=" << M << " xi=" << xi << " sigma=" << sigma
      << " seed=" << seed << " replicas=" << replicas << " samples=" << samples
      << " horizon=" << format_double(horizon) << " max_states=" << max_states
      << " chain_cap=" << chain_cap << " max_v=" << max_v
      << " block_kind=" << block_kind << " ell=" << ell << " s=" << s
      << " gamma=" << format_double(gamma) << " rho=" << format_double(rho)
      << " drift=" << (drift ? 1 : 0)
      << " c_alpha=" << join_list(c_alpha) << " m_list=" << join_list(m_list)
      << " format=" << format;
  return out.str();
}

ParseOutcome parse_config(const std::string& text) {
  ParseOutcome outcome;
  RunConfig cfg;
  auto err = [&](const std::string& message) { outcome.errors.push_back(message); };

  std::istringstream stream(text);
  std::string token;
  while (stream >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      err("token without '=': " + token);
      continue;
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "subcommand") cfg.subcommand = value;
      else if (key == "alpha") cfg.alpha = std::stod(value);
      else if (key == "k") cfg.k = std::stoi(value);
      else if (key == "n") cfg.n = std::stoi(value);
      else if (key == "h") cfg.h = std::stoi(value);
      else if (key == "M") cfg.M = std::stoi(value);
      else if (key == "xi") cfg.xi = value;
      else if (key == "sigma") cfg.sigma = value;
      else if (key == "seed") cfg.seed = std::stoull(value);
      else if (key == "replicas") cfg.replicas = std::stoi(value);
      else if (key == "samples") cfg.samples = std::stoi(value);
      else if (key == "horizon") cfg.horizon = std::stod(value);
      else if (key == "max_states") cfg.max_states = std::stoull(value);
      else if (key == "chain_cap") cfg.chain_cap = std::stoull(value);
      else if (key == "max_v") cfg.max_v = std::stoi(value);
      else if (key == "block_kind") cfg.block_kind = value;
      else if (key == "ell") cfg.ell = std::stoi(value);
      else if (key == "s") cfg.s = std::stoi(value);
      else if (key == "gamma") cfg.gamma = std::stod(value);
      else if (key == "rho") cfg.rho = std::stod(value);
      else if (key == "out") cfg.out = value;
      else if (key == "format") cfg.format = value;
      else if (key == "event_log") cfg.event_log = value;
      else if (key == "drift") cfg.drift = std::stoi(value) != 0;
      else if (key == "c_alpha") {
        cfg.c_alpha.clear();
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) cfg.c_alpha.push_back(std::stod(item));
      } else if (key == "m_list") {
        cfg.m_list.clear();
        std::istringstream items(value);
        std::string item;
        while (std::getline(items, item, ',')) cfg.m_list.push_back(std::stoi(item));
      } else {
        err("unknown key: " + key);
      }
    } catch (const std::exception&) {
      err("bad value for " + key + ": " + value);
    }
  }

  if (const char* env = std::getenv("BPP_MAX_STATES")) cfg.max_states = std::strtoull(env, nullptr, 10);
  if (const char* env = std::getenv("BPP_CHAIN_CAP")) cfg.chain_cap = std::strtoull(env, nullptr, 10);

  if (!known_subcommand(cfg.subcommand))
    err("unknown or missing subcommand: '" + cfg.subcommand + "'");
  if (cfg.alpha <= 0) err("alpha must be positive");
  if (cfg.k < 1) err("k must be >= 1");
  if (cfg.n < 1) err("n must be >= 1");
  if (std::abs(cfg.h) > cfg.n) err("|h| must be <= n");
  else if (((cfg.n ^ cfg.h) & 1) != 0) err("n and h must have the same parity");
  if (cfg.replicas < 1) err("replicas must be >= 1");
  if (cfg.samples < 1) err("samples must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json") err("format must be csv or json");
  if (cfg.subcommand == "envelope" || cfg.subcommand == "halo") {
    if (cfg.M < 2) err("M must be >= 2 for this subcommand");
    if (cfg.c_alpha.empty()) err("c_alpha list must not be empty");
    for (double c : cfg.c_alpha)
      if (c <= 0) err("c_alpha entries must be positive");
  }
  if (cfg.subcommand == "scaling") {
    if (cfg.m_list.empty()) err("m_list must not be empty");
    for (int m : cfg.m_list)
      if (m < 1) err("m_list entries must be >= 1");
  }
  if (cfg.subcommand == "blockgap" && cfg.block_kind != "particle" &&
      cfg.block_kind != "polymer" && cfg.block_kind != "crude")
    err("block_kind must be particle, polymer or crude");
  if ((cfg.h & 1) == 0 && std::abs(cfg.h) <= cfg.n) {
    try {
      boundary_from_config(cfg);
    } catch (const std::exception& e) {
      err(std::string("boundary: ") + e.what());
    }
  }

  if (outcome.errors.empty()) outcome.config = std::move(cfg);
  return outcome;
}

BoundaryPair boundary_from_config(const RunConfig& config) {
  auto resolve = [&](const std::string& spec) {
    if (spec == "wedge") return Path::wedge(config.n, config.h);
    if (spec == "vee") return Path::vee(config.n, config.h);
    Path p = Path::from_string(spec);
    if (p.length() != config.n || p.terminal() != config.h)
      throw std::invalid_argument("explicit path does not match (n, h)");
    return p;
  };
  return BoundaryPair(resolve(config.xi), resolve(config.sigma));
}

namespace {

int run_impl(const RunConfig& cfg, Table& table, bool& censored_present) {
  if (cfg.subcommand == "enumerate") {
    const BoundaryPair bounds = boundary_from_config(cfg);
    const ExactMeasure m = exact_measure(bounds, cfg.k, cfg.alpha, cfg.max_states);
    for (std::size_t i = 0; i < m.size(); ++i) {
      table.cell(static_cast<std::uint64_t>(i))
          .cell(m.states[i].encode())
          .cell(m.volumes[i])
          .cell(m.probs[i]);
      table.end_row();
    }
  } else if (cfg.subcommand == "count") {
    const VolumeCountTable t = count_by_volume(cfg.max_v);
    for (int v = 0; v <= t.max_v; ++v) {
      table.cell(v).cell(t.at(v).to_string());
      table.end_row();
    }
  } else if (cfg.subcommand == "gap" || cfg.subcommand == "mix") {
    const BoundaryPair bounds = boundary_from_config(cfg);
    const ExactChain chain = build_exact_chain(bounds, cfg.k, cfg.alpha, cfg.chain_cap);
    const double gap = spectral_gap_exact(chain);
    table.cell(cfg.k).cell(cfg.n).cell(cfg.h).cell(cfg.alpha).cell(gap);
    if (cfg.subcommand == "mix") table.cell(tv_mixing_exact(chain));
    table.end_row();
  } else if (cfg.subcommand == "sample") {
    const BoundaryPair bounds = boundary_from_config(cfg);
    for (int r = 0; r < cfg.samples; ++r) {
      DynamicsParams params(cfg.alpha, bounds, cfg.k,
                            cfg.seed + RngStream::kGolden * (static_cast<std::uint64_t>(r) + 1),
                            0.0);
      const PolymerConfig sample = cftp_sample(params);
      table.cell(r).cell(sample.encode()).cell(excess_volume(sample, bounds.xi));
      table.end_row();
    }
  } else if (cfg.subcommand == "hit") {
    const BoundaryPair bounds = boundary_from_config(cfg);
    const double horizon =
        cfg.horizon >= 0 ? cfg.horizon : 10.0 * cfg.n * cfg.n * cfg.k + 100.0;
    std::vector<HittingResult> hits;
    for (int r = 0; r < cfg.replicas; ++r) {
      DynamicsParams params(cfg.alpha, bounds, cfg.k,
                            cfg.seed + RngStream::kGolden * (static_cast<std::uint64_t>(r) + 1),
                            horizon);
      hits.push_back(
          hitting_time_max(params, PolymerConfig::minimal(bounds, cfg.k)));
    }
    for (int r = 0; r < cfg.replicas; ++r) {
      const HittingResult& hit = hits[static_cast<std::size_t>(r)];
      if (hit.censored) censored_present = true;
      int at_least = 0;  // survival curve: fraction with time >= this one
      for (const auto& other : hits)
        if (other.time >= hit.time) ++at_least;
      table.cell(r).cell(hit.time).cell(hit.censored ? 1 : 0).cell(hit.events)
          .cell(static_cast<double>(at_least) / cfg.replicas);
      table.end_row();
    }
    if (!cfg.event_log.empty()) {
      DynamicsParams params(cfg.alpha, bounds, cfg.k,
                            cfg.seed + RngStream::kGolden, horizon);
      const Trajectory traj =
          simulate(params, PolymerConfig::minimal(bounds, cfg.k), true);
      write_event_log(cfg.event_log, traj.log);
    }
  } else if (cfg.subcommand == "blockgap") {
    const BoundaryPair bounds = boundary_from_config(cfg);
    BlockKind kind = BlockKind::Particle;
    int max_param = cfg.ell;
    if (cfg.block_kind == "polymer") {
      kind = BlockKind::Polymer;
      max_param = cfg.s;
    } else if (cfg.block_kind == "crude") {
      kind = BlockKind::Crude;
    }
    std::vector<int> params;
    for (int p = kind == BlockKind::Crude ? 1 : 0; p <= max_param; ++p)
      params.push_back(p);
    if (cfg.drift) {
      // coupled-update drift of the weighted distance, one row per parameter
      const double decay = kind == BlockKind::Particle ? cfg.gamma : cfg.rho;
      const auto pair = single_flip_pair(bounds, cfg.k, cfg.alpha);
      for (int p : params) {
        const DriftEstimate est = contraction_estimate(
            kind, bounds, cfg.k, cfg.alpha, p, decay, pair.first, pair.second,
            static_cast<std::uint64_t>(cfg.samples), cfg.seed);
        table.cell(cfg.block_kind).cell(cfg.n).cell(cfg.k).cell(cfg.alpha)
            .cell(p).cell(decay).cell(est.drift).cell(est.ci_low)
            .cell(est.ci_high).cell(est.events).cell(est.match_rate);
        table.end_row();
      }
    } else {
      const auto rows = gap_trend_report(kind, {{bounds, cfg.k}}, params,
                                         cfg.alpha, cfg.chain_cap);
      for (const auto& row : rows) {
        table.cell(cfg.block_kind).cell(row.n).cell(row.k).cell(row.alpha)
            .cell(row.param).cell(row.gap).cell(row.first_reaching_one ? 1 : 0);
        table.end_row();
      }
    }
  } else if (cfg.subcommand == "envelope") {
    for (double c : cfg.c_alpha) {
      const double horizon =
          cfg.horizon >= 0 ? cfg.horizon : default_envelope_horizon(cfg.M, c);
      const EnvelopeReport report = check_envelope_containment(
          cfg.M, cfg.alpha, c, cfg.replicas, horizon, cfg.seed);
      for (std::size_t r = 0; r < report.replicas.size(); ++r) {
        table.cell(cfg.M).cell(cfg.alpha).cell(c).cell(static_cast<int>(r))
            .cell(report.replicas[r].first_violation)
            .cell(report.replicas[r].worst_excess);
        table.end_row();
      }
    }
  } else if (cfg.subcommand == "halo") {
    const double horizon =
        cfg.horizon >= 0 ? cfg.horizon : static_cast<double>(cfg.M) * cfg.M;
    for (double c : cfg.c_alpha) {
      for (int ceiling = 0; ceiling < cfg.samples; ++ceiling) {
        const Path xi = random_ceiling(
            cfg.M, cfg.seed + 1000003ull * static_cast<std::uint64_t>(ceiling));
        const HaloReport report = check_halo_confinement(
            xi, cfg.M, cfg.alpha, c, cfg.replicas, horizon,
            cfg.seed + RngStream::kGolden * (static_cast<std::uint64_t>(ceiling) + 1));
        for (std::size_t r = 0; r < report.replicas.size(); ++r) {
          table.cell(cfg.M).cell(cfg.alpha).cell(c).cell(ceiling)
              .cell(static_cast<int>(r))
              .cell(report.replicas[r].confined ? 1 : 0)
              .cell(report.halo_volume)
              .cell(report.volume_bound);
          table.end_row();
        }
      }
    }
  } else if (cfg.subcommand == "scaling") {
    const ScalingResult result = hitting_scaling_experiment(
        cfg.m_list, cfg.alpha, cfg.replicas, cfg.seed);
    for (const auto& row : result.rows) {
      for (std::size_t r = 0; r < row.times.size(); ++r) {
        if (row.censored[r]) censored_present = true;
        table.cell(row.M).cell(cfg.alpha).cell(static_cast<int>(r))
            .cell(row.times[r]).cell(row.censored[r] ? 1 : 0);
        table.end_row();
      }
    }
  }
  return kExitOk;
}

std::vector<std::string> columns_for(const std::string& subcommand, bool drift) {
  if (subcommand == "enumerate") return {"index", "increments", "volume", "probability"};
  if (subcommand == "count") return {"v", "count"};
  if (subcommand == "gap") return {"k", "n", "h", "alpha", "gap"};
  if (subcommand == "mix") return {"k", "n", "h", "alpha", "gap", "t_mix"};
  if (subcommand == "sample") return {"replica", "increments", "volume"};
  if (subcommand == "hit")
    return {"replica", "time", "censored", "events", "survival"};
  if (subcommand == "blockgap") {
    if (drift)
      return {"kind", "n", "k", "alpha", "param", "decay",
              "drift", "ci_low", "ci_high", "events", "match_rate"};
    return {"kind", "n", "k", "alpha", "param", "gap", "first_reaching_one"};
  }
  if (subcommand == "envelope")
    return {"M", "alpha", "c_alpha", "replica", "first_violation", "worst_excess"};
  if (subcommand == "halo")
    return {"M", "alpha", "c_alpha", "ceiling", "replica", "confined",
            "halo_volume", "volume_bound"};
  return {"M", "alpha", "replica", "time", "censored"};
}

}  // namespace

int run(const RunConfig& config) {
  Table table(columns_for(config.subcommand, config.drift));
  bool censored_present = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    run_impl(config, table, censored_present);
  } catch (const CapExceeded&) {
    return kExitCapExceeded;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string header =
      std::string(kArtifactVersion) + " | " + config.canonical();
  write_file(config.out, config.format == "json"
                             ? table.to_json(header, seconds)
                             : table.to_csv(header));
  return censored_present ? kExitCensored : kExitOk;
}

}  // namespace bpp
