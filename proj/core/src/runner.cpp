#include "mabcs/runner.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mabcs/baselines.hpp"
#include "mabcs/rng.hpp"
#include "mabcs/sampler.hpp"

namespace fs = std::filesystem;

namespace mabcs {
namespace {

constexpr std::uint64_t kPolicySeedTag = 0x706f6c69ULL;  // "poli"

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::cof: return "cof";
    case Algorithm::cof_no_exclusive: return "cof_no_exclusive";
    case Algorithm::cof_no_combine: return "cof_no_combine";
    case Algorithm::etc_cs: return "etc_cs";
    case Algorithm::ucb_cs: return "ucb_cs";
    case Algorithm::ts_cs: return "ts_cs";
    case Algorithm::pe_cs_style: return "pe_cs_style";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (Algorithm a : {Algorithm::cof, Algorithm::cof_no_exclusive, Algorithm::cof_no_combine,
                      Algorithm::etc_cs, Algorithm::ucb_cs, Algorithm::ts_cs,
                      Algorithm::pe_cs_style}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

bool is_cof_variant(Algorithm a) {
  return a == Algorithm::cof || a == Algorithm::cof_no_exclusive ||
         a == Algorithm::cof_no_combine;
}

ExperimentConfig parse_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  static const std::vector<std::string> known = {
      "instance_path", "algorithms",  "alphas",           "horizon",    "num_runs",
      "master_seed",   "delta_override", "checkpoint_count", "output_dir",
  };
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key: " + key);
    }
  }
  for (const char* required :
       {"instance_path", "algorithms", "alphas", "horizon", "num_runs", "master_seed",
        "output_dir"}) {
    if (!doc.contains(required)) throw ConfigError(std::string("missing config key: ") + required);
  }

  ExperimentConfig cfg;
  try {
    cfg.instance_path = doc.at("instance_path").get<std::string>();
    for (const auto& name : doc.at("algorithms")) {
      const auto a = algorithm_from_name(name.get<std::string>());
      if (!a) throw ConfigError("unknown algorithm: " + name.get<std::string>());
      cfg.algorithms.push_back(*a);
    }
    cfg.alphas = doc.at("alphas").get<std::vector<double>>();
    cfg.horizon = doc.at("horizon").get<std::uint64_t>();
    cfg.num_runs = doc.at("num_runs").get<std::uint32_t>();
    cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();
    if (doc.contains("delta_override")) cfg.delta_override = doc.at("delta_override").get<double>();
    if (doc.contains("checkpoint_count")) {
      cfg.checkpoint_count = doc.at("checkpoint_count").get<std::size_t>();
    }
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field has wrong type: ") + e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

void validate(const ExperimentConfig& config, std::size_t num_arms) {
  if (config.algorithms.empty()) throw ConfigError("config needs at least one algorithm");
  if (config.alphas.empty()) throw ConfigError("config needs at least one alpha");
  for (double a : config.alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alpha values must lie in (0, 1)");
  }
  if (config.num_runs < 1) throw ConfigError("num_runs must be at least 1");
  if (config.horizon < num_arms) throw ConfigError("horizon must be at least the number of arms");
  if (config.checkpoint_count < 1) throw ConfigError("checkpoint_count must be at least 1");
  if (config.delta_override && !(*config.delta_override > 0.0 && *config.delta_override < 1.0)) {
    throw ConfigError("delta_override must lie in (0, 1)");
  }
  if (config.output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

double default_delta(std::size_t num_arms, std::uint64_t horizon) {
  const double k = static_cast<double>(num_arms);
  const double t = static_cast<double>(horizon);
  return (k * k) / (t * t);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view algorithm, double alpha,
                          std::uint32_t run_index) {
  std::uint64_t h = mix64(master_seed + kGoldenGamma);
  h = mix64(h ^ fnv1a64(algorithm));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(alpha));
  h = mix64(h ^ static_cast<std::uint64_t>(run_index));
  return h;
}

std::unique_ptr<Policy> make_policy(Algorithm algorithm, std::size_t num_arms, double alpha,
                                    std::uint64_t horizon, double delta, std::uint64_t seed) {
  switch (algorithm) {
    case Algorithm::cof:
      return std::make_unique<CofPolicy>(num_arms, alpha, CofConfig{delta, true, true});
    case Algorithm::cof_no_exclusive:
      return std::make_unique<CofPolicy>(num_arms, alpha, CofConfig{delta, true, false});
    case Algorithm::cof_no_combine:
      return std::make_unique<CofPolicy>(num_arms, alpha, CofConfig{delta, false, true});
    case Algorithm::etc_cs:
      return std::make_unique<EtcCsPolicy>(num_arms, alpha, horizon);
    case Algorithm::ucb_cs:
      return std::make_unique<UcbCsPolicy>(num_arms, alpha);
    case Algorithm::ts_cs:
      return std::make_unique<TsCsPolicy>(num_arms, alpha, substream_seed(seed, kPolicySeedTag));
    case Algorithm::pe_cs_style:
      return std::make_unique<PeCsPolicy>(num_arms, alpha, delta);
  }
  throw std::logic_error("unhandled algorithm");
}

std::string run_id_of(Algorithm algorithm, double alpha, std::uint32_t run_index) {
  char idx[16];
  std::snprintf(idx, sizeof(idx), "r%04u", run_index);
  return std::string(algorithm_name(algorithm)) + "_a" + format_double(alpha) + "_" + idx;
}

RunTrace run_single(const BanditInstance& instance, const RunRequest& request,
                    std::span<const std::uint64_t> checkpoint_grid,
                    std::span<const std::uint64_t> snapshot_times) {
  BanditInstance inst = instance;
  inst.alpha = request.alpha;
  const InstanceAnalysis analysis = analyze(inst);
  const std::size_t num_arms = inst.num_arms();

  RewardEnvironment env(inst, request.seed);
  auto policy = make_policy(request.algorithm, num_arms, request.alpha, request.horizon,
                            request.delta, request.seed);
  RegretAccumulator acc(analysis,
                        std::vector<std::uint64_t>(checkpoint_grid.begin(), checkpoint_grid.end()));

  RunTrace trace;
  trace.run_id = run_id_of(request.algorithm, request.alpha, request.run_index);
  trace.algorithm = request.algorithm;
  trace.alpha = request.alpha;
  trace.run_index = request.run_index;
  trace.seed = request.seed;

  std::size_t next_snapshot = 0;
  std::size_t checkpoints_seen = 0;
  for (std::uint64_t t = 0; t < request.horizon; ++t) {
    const std::size_t arm = policy->next_arm(t);
    const int reward = env.sample(arm);
    policy->observe(arm, reward);
    acc.record(arm);

    if (acc.checkpoints().size() > checkpoints_seen) {
      // cross-check the accumulator against the policy's own bookkeeping
      checkpoints_seen = acc.checkpoints().size();
      const auto& cp = acc.checkpoints().back();
      const auto counts = policy->arm_counts();
      const auto [c, q] = regret_from_counts(counts, analysis);
      if (c != cp.cost_regret || q != cp.quality_regret) ++trace.decomposition_mismatches;
    }
    if (next_snapshot < snapshot_times.size() && t + 1 == snapshot_times[next_snapshot]) {
      trace.count_snapshots.emplace_back(
          t + 1, std::vector<std::uint64_t>(acc.counts().begin(), acc.counts().end()));
      ++next_snapshot;
    }
  }

  trace.checkpoints = acc.checkpoints();
  trace.final_counts.assign(acc.counts().begin(), acc.counts().end());
  if (acc.total_samples() != request.horizon) {
    throw std::logic_error("horizon accounting failed for " + trace.run_id);
  }
  if (const auto* cof = dynamic_cast<const CofPolicy*>(policy.get())) {
    trace.events = cof->events();
    trace.dominance_violations = cof->dominance_violations();
    trace.exclusive_violations = cof->exclusive_violations();
  }
  return trace;
}

std::vector<RunTrace> run_many(const BanditInstance& instance,
                               std::span<const RunRequest> requests,
                               std::span<const std::uint64_t> checkpoint_grid,
                               std::span<const std::uint64_t> snapshot_times, unsigned workers) {
  std::vector<RunTrace> traces(requests.size());
  parallel_for(requests.size(), workers, [&](std::size_t i) {
    const RunRequest& rq = requests[i];
    try {
      traces[i] = run_single(instance, rq, checkpoint_grid, snapshot_times);
    } catch (const std::exception& e) {
      throw std::runtime_error("run failed (" + std::string(algorithm_name(rq.algorithm)) +
                               ", alpha=" + format_double(rq.alpha) +
                               ", run=" + std::to_string(rq.run_index) + "): " + e.what());
    }
  });
  return traces;
}

namespace {

struct CurveData {
  std::string run_id;
  std::string algorithm;
  std::string alpha;  // textual form, used as the grouping key
  std::vector<std::uint64_t> ts;
  std::vector<double> cost;
  std::vector<double> quality;
};

std::string curve_csv(const CurveData& c) {
  std::ostringstream out;
  out << "run_id,algorithm,alpha,t,cost_regret,quality_regret\n";
  for (std::size_t i = 0; i < c.ts.size(); ++i) {
    out << c.run_id << ',' << c.algorithm << ',' << c.alpha << ',' << c.ts[i] << ','
        << format_double(c.cost[i]) << ',' << format_double(c.quality[i]) << "\n";
  }
  return out.str();
}

std::string events_csv(const RunTrace& trace) {
  std::ostringstream out;
  out << "run_id,t,arm,kind\n";
  for (const auto& ev : trace.events) {
    out << trace.run_id << ',' << ev.t << ',' << ev.arm + 1 << ','
        << (ev.kind == EventKind::deemed_infeasible ? "deemed_infeasible" : "deemed_feasible")
        << "\n";
  }
  return out.str();
}

CurveData curve_of(const RunTrace& trace) {
  CurveData c;
  c.run_id = trace.run_id;
  c.algorithm = std::string(algorithm_name(trace.algorithm));
  c.alpha = format_double(trace.alpha);
  for (const auto& cp : trace.checkpoints) {
    c.ts.push_back(cp.t);
    c.cost.push_back(cp.cost_regret);
    c.quality.push_back(cp.quality_regret);
  }
  return c;
}

void append_stats(std::ostringstream& out, std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  out << ',' << format_double(mean) << ',' << format_double(percentile_sorted(values, 0.20)) << ','
      << format_double(percentile_sorted(values, 0.50)) << ','
      << format_double(percentile_sorted(values, 0.80));
}

void write_aggregates(const fs::path& dir, std::vector<CurveData> curves) {
  std::stable_sort(curves.begin(), curves.end(), [](const CurveData& a, const CurveData& b) {
    return a.run_id < b.run_id;
  });

  // group by (algorithm, alpha); grids must agree within a group
  std::map<std::pair<std::string, std::string>, std::vector<const CurveData*>> groups;
  for (const auto& c : curves) groups[{c.algorithm, c.alpha}].push_back(&c);

  std::ostringstream agg;
  agg << "algorithm,alpha,t,cost_mean,cost_p20,cost_p50,cost_p80,"
         "quality_mean,quality_p20,quality_p50,quality_p80,"
         "sum_mean,sum_p20,sum_p50,sum_p80\n";
  std::ostringstream term;
  term << "run_id,algorithm,alpha,cost_regret,quality_regret,summed_regret\n";

  for (const auto& [key, members] : groups) {
    const auto& grid = members.front()->ts;
    for (const CurveData* c : members) {
      if (c->ts != grid) {
        throw std::runtime_error("mismatched checkpoint grids in group " + key.first + ", alpha=" +
                                 key.second + " (run " + c->run_id + ")");
      }
    }
    std::vector<double> cost(members.size()), quality(members.size()), sum(members.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t r = 0; r < members.size(); ++r) {
        cost[r] = members[r]->cost[i];
        quality[r] = members[r]->quality[i];
        sum[r] = cost[r] + quality[r];
      }
      agg << key.first << ',' << key.second << ',' << grid[i];
      append_stats(agg, cost);
      append_stats(agg, quality);
      append_stats(agg, sum);
      agg << "\n";
    }
    for (const CurveData* c : members) {
      const double fc = c->cost.back();
      const double fq = c->quality.back();
      term << c->run_id << ',' << c->algorithm << ',' << c->alpha << ',' << format_double(fc)
           << ',' << format_double(fq) << ',' << format_double(fc + fq) << "\n";
    }
  }
  write_file(dir / "aggregate.csv", agg.str());
  write_file(dir / "terminal.csv", term.str());
}

}  // namespace

double percentile_sorted(std::span<const double> sorted_values, double q) {
  if (sorted_values.empty()) throw std::invalid_argument("percentile of empty sample");
  if (sorted_values.size() == 1) return sorted_values[0];
  const double pos = q * static_cast<double>(sorted_values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted_values[lo] * (1.0 - frac) + sorted_values[lo + 1] * frac;
}

void run_sweep(const ExperimentConfig& config, unsigned workers) {
  const ParseResult parsed = parse_instance(read_file(config.instance_path));
  const BanditInstance& base = parsed.instance;
  validate(config, base.num_arms());

  const auto grid = log_checkpoint_grid(config.horizon, config.checkpoint_count);
  const double delta =
      config.delta_override.value_or(default_delta(base.num_arms(), config.horizon));

  std::vector<RunRequest> requests;
  for (Algorithm alg : config.algorithms) {
    for (double alpha : config.alphas) {
      for (std::uint32_t r = 0; r < config.num_runs; ++r) {
        requests.push_back({alg, alpha, r, config.horizon, delta,
                            derive_seed(config.master_seed, algorithm_name(alg), alpha, r)});
      }
    }
  }

  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir / "runs");
  fs::create_directories(out_dir / "events");

  const auto traces = run_many(base, requests, grid, {}, workers);

  std::vector<CurveData> curves;
  curves.reserve(traces.size());
  for (const auto& trace : traces) {
    if (trace.decomposition_mismatches != 0) {
      throw std::runtime_error("regret decomposition mismatch in " + trace.run_id);
    }
    CurveData c = curve_of(trace);
    write_file(out_dir / "runs" / (trace.run_id + ".csv"), curve_csv(c));
    if (is_cof_variant(trace.algorithm)) {
      write_file(out_dir / "events" / (trace.run_id + ".csv"), events_csv(trace));
    }
    curves.push_back(std::move(c));
  }
  write_aggregates(out_dir, std::move(curves));
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void aggregate_directory(const std::string& dir) {
  const fs::path runs_dir = fs::path(dir) / "runs";
  if (!fs::is_directory(runs_dir)) {
    throw std::runtime_error("no runs/ directory under " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  if (files.empty()) throw std::runtime_error("no run CSVs under " + runs_dir.string());
  std::sort(files.begin(), files.end());

  std::vector<CurveData> curves;
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty run file: " + file.string());
    CurveData c;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != 6) throw std::runtime_error("malformed row in " + file.string());
      c.run_id = fields[0];
      c.algorithm = fields[1];
      c.alpha = fields[2];
      c.ts.push_back(std::stoull(fields[3]));
      c.cost.push_back(std::stod(fields[4]));
      c.quality.push_back(std::stod(fields[5]));
    }
    if (c.ts.empty()) throw std::runtime_error("run file has no checkpoints: " + file.string());
    curves.push_back(std::move(c));
  }
  write_aggregates(fs::path(dir), std::move(curves));
}

}  // namespace mabcs
