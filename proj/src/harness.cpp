#include "pbs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pbs/certificate.hpp"
#include "pbs/degree.hpp"
#include "pbs/sdp.hpp"
#include "pbs/subspace.hpp"

namespace pbs {

namespace {

const std::vector<std::string> kKnownAlgorithms = {"degree", "sdp", "subspace", "certify"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& s, Parse parse) {
  std::vector<T> out;
  for (const auto& tok : split_list(s)) out.push_back(parse(tok));
  return out;
}

double wall_ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

long long symmetric_difference(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
  return static_cast<long long>(diff.size());
}

std::string format_double(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (model != "random" && model != "semi_random")
    throw ConfigError("model must be random or semi_random");
  if (n_values.empty() || k_values.empty() || d_values.empty() || p_values.empty())
    throw ConfigError("grid axes n, k, d, p must be nonempty");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (algorithms.empty()) throw ConfigError("algorithms must be nonempty");
  for (const auto& a : algorithms)
    if (std::find(kKnownAlgorithms.begin(), kKnownAlgorithms.end(), a) == kKnownAlgorithms.end())
      throw ConfigError("unknown algorithm: " + a);
  if (adversary_fraction < 0.0 || adversary_fraction > 1.0)
    throw ConfigError("adversary_fraction must be in [0, 1]");
}

void apply_config_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got: " + assignment);
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  try {
    if (key == "model")
      cfg.model = value;
    else if (key == "topology")
      cfg.topology = BipartiteTopology::from_name(value);
    else if (key == "n")
      cfg.n_values = parse_list<std::size_t>(value, [](const std::string& t) { return std::stoull(t); });
    else if (key == "k")
      cfg.k_values = parse_list<std::size_t>(value, [](const std::string& t) { return std::stoull(t); });
    else if (key == "d")
      cfg.d_values = parse_list<std::size_t>(value, [](const std::string& t) { return std::stoull(t); });
    else if (key == "p")
      cfg.p_values = parse_list<double>(value, [](const std::string& t) { return std::stod(t); });
    else if (key == "alpha")
      cfg.alpha = std::stod(value);
    else if (key == "algorithms")
      cfg.algorithms = split_list(value);
    else if (key == "trials")
      cfg.trials = std::stoi(value);
    else if (key == "master_seed")
      cfg.master_seed = std::stoull(value);
    else if (key == "adversary_fraction")
      cfg.adversary_fraction = std::stod(value);
    else if (key == "output")
      cfg.output_path = value;
    else if (key == "timing")
      cfg.timing = value == "on" || value == "true" || value == "1";
    else
      throw ConfigError("unknown config key: " + key);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("bad value for " + key + ": " + e.what());
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    apply_config_override(cfg, line);
  }
  return cfg;
}

namespace {

AlgorithmResult run_degree(const PlantedInstance& inst, const std::vector<Vertex>& truth) {
  AlgorithmResult r;
  r.algorithm = "degree";
  const auto t0 = std::chrono::steady_clock::now();
  const auto rec = recover_by_degree(inst.graph, inst.params.k);
  r.wall_ms = wall_ms_since(t0);
  r.symdiff = symmetric_difference(rec.set, truth);
  r.success = r.symdiff == 0;
  const bool regime_ok = static_cast<double>(inst.params.d) <=
                         2.0 * inst.params.p * static_cast<double>(inst.params.k) / 3.0;
  r.diagnostics = std::string("ambiguous=") + (rec.ambiguous ? "1" : "0") +
                  ";regime_ok=" + (regime_ok ? "1" : "0");
  return r;
}

AlgorithmResult run_sdp(const PlantedInstance& inst, const std::vector<Vertex>& truth) {
  AlgorithmResult r;
  r.algorithm = "sdp";
  const auto t0 = std::chrono::steady_clock::now();
  const auto sol = solve_primal_sdp(inst.graph, inst.params.k);
  const auto ex = extract_planted_set(sol, inst.params.k);
  r.wall_ms = wall_ms_since(t0);
  if (sol.converged && ex.size_ok) {
    r.symdiff = symmetric_difference(ex.set, truth);
    r.success = r.symdiff == 0;
  }
  r.diagnostics = "objective=" + format_double(sol.objective, 9) +
                  ";iterations=" + std::to_string(sol.iterations) +
                  ";converged=" + (sol.converged ? "1" : "0") +
                  ";extraction_size=" + std::to_string(ex.set.size());
  return r;
}

AlgorithmResult run_subspace(const PlantedInstance& inst, const std::vector<Vertex>& truth) {
  AlgorithmResult r;
  r.algorithm = "subspace";
  const auto& mp = inst.params;
  const auto params = SubspaceParams::defaults(mp.n, mp.k, mp.d, mp.p);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto out = recover_subspace(inst.graph, mp.k, mp.p, mp.d, params);
    r.wall_ms = wall_ms_since(t0);
    if (out.status == SubspaceOutcome::Status::recovered) {
      r.symdiff = symmetric_difference(out.set, truth);
      r.success = r.symdiff == 0;
    }
    const char* status = out.status == SubspaceOutcome::Status::recovered      ? "recovered"
                         : out.status == SubspaceOutcome::Status::empty_basis ? "empty_basis"
                                                                              : "no_candidate";
    r.diagnostics = std::string("status=") + status +
                    ";dimension=" + std::to_string(out.subspace_dimension) +
                    ";net_points=" + std::to_string(out.net_points) +
                    ";candidates=" + std::to_string(out.candidates);
  } catch (const NetCapExceeded& e) {
    r.wall_ms = wall_ms_since(t0);
    r.diagnostics = std::string("status=net_cap_exceeded;required=") + std::to_string(e.required);
  }
  return r;
}

AlgorithmResult run_certify(const PlantedInstance& inst) {
  AlgorithmResult r;
  r.algorithm = "certify";
  const auto& mp = inst.params;
  const double tau = ((0.5 - mp.alpha) / (0.5 + mp.alpha)) * static_cast<double>(mp.d);
  const auto t0 = std::chrono::steady_clock::now();
  const auto basis = threshold_basis(inst, tau);
  const double t = default_entry_cap(basis.count(), mp);
  const auto built = build_b_matrix(inst, basis, t);
  if (!built.ok) {
    r.wall_ms = wall_ms_since(t0);
    r.diagnostics = "built=0;infeasible_columns=" + std::to_string(built.failures.size()) +
                    ";t=" + format_double(t);
    return r;
  }
  const auto cert = assemble_certificate(inst, built.b, t);
  const auto rep = verify_certificate(cert, inst, tau);
  r.wall_ms = wall_ms_since(t0);
  r.success = rep.all_ok();
  r.symdiff = r.success ? 0 : -1;
  r.diagnostics = std::string("built=1;all_ok=") + (rep.all_ok() ? "1" : "0") +
                  ";lambda_min=" + format_double(rep.lambda_min) +
                  ";lambda2=" + format_double(rep.lambda_second) +
                  ";b_norm=" + format_double(rep.b_norm) + ";L=" + std::to_string(basis.count()) +
                  ";t=" + format_double(t);
  return r;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& cfg, const CellParams& cell, int trial_index,
                      std::uint64_t seed) {
  TrialResult tr;
  tr.cell = cell;
  tr.trial_index = trial_index;
  tr.seed = seed;

  Rng rng(seed);
  PlantedInstance pre_adversary{Graph(0), {}, {}, {}, 0, {}};
  try {
    const auto params = ModelParams::make(cell.n, cell.k, cell.d, cell.p, cfg.alpha);
    pre_adversary = cfg.model == "semi_random" ? gen_semi_random(params, cfg.topology, rng)
                                               : gen_random_planted(params, cfg.topology, rng);
    pre_adversary.seed = seed;
  } catch (const std::exception& e) {
    tr.generation_failed = true;
    tr.generation_error = e.what();
    return tr;
  }

  PlantedInstance inst = pre_adversary;
  if (cfg.adversary_fraction > 0.0)
    inst = apply_monotone_adversary(pre_adversary,
                                    AdversaryStrategy::random_extra(cfg.adversary_fraction), rng);

  const auto truth = inst.planted_set();
  for (const auto& alg : cfg.algorithms) {
    try {
      if (alg == "degree")
        tr.results.push_back(run_degree(inst, truth));
      else if (alg == "sdp")
        tr.results.push_back(run_sdp(inst, truth));
      else if (alg == "subspace")
        tr.results.push_back(run_subspace(inst, truth));
      else if (alg == "certify")
        tr.results.push_back(run_certify(pre_adversary));
    } catch (const std::exception& e) {
      AlgorithmResult r;
      r.algorithm = alg;
      r.diagnostics = std::string("error=") + e.what();
      tr.results.push_back(std::move(r));
    }
  }
  if (!cfg.timing)
    for (auto& r : tr.results) r.wall_ms = 0.0;
  return tr;
}

SweepReport run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();

  std::vector<CellParams> cells;
  for (std::size_t n : cfg.n_values)
    for (std::size_t k : cfg.k_values)
      for (std::size_t d : cfg.d_values)
        for (double p : cfg.p_values) cells.push_back({n, k, d, p});

  std::ofstream csv(cfg.output_path);
  if (!csv) throw ConfigError("cannot open output file: " + cfg.output_path);
  csv << "# plantedbip-results v1\n";
  csv << "n,k,d,p,gamma,topology,model,trial,seed,algorithm,success,symdiff,wall_ms,"
         "diagnostics\n";

  SweepReport report;
  for (std::size_t cell_idx = 0; cell_idx < cells.size(); ++cell_idx) {
    const auto& cell = cells[cell_idx];
    std::vector<TrialResult> cell_trials(cfg.trials);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t global_index =
          static_cast<std::uint64_t>(cell_idx) * static_cast<std::uint64_t>(cfg.trials) +
          static_cast<std::uint64_t>(t);
      cell_trials[t] = run_trial(cfg, cell, t, derive_seed(cfg.master_seed, global_index));
    }

    const double gamma =
        cell.p > 0 && cell.k > 0 ? static_cast<double>(cell.d) / (cell.p * static_cast<double>(cell.k))
                                 : 0.0;
    for (const auto& tr : cell_trials) {
      auto row_prefix = [&](std::ostream& os) {
        os << cell.n << ',' << cell.k << ',' << cell.d << ',' << format_double(cell.p, 9) << ','
           << format_double(gamma, 9) << ',' << cfg.topology.name() << ',' << cfg.model << ','
           << tr.trial_index << ',' << tr.seed << ',';
      };
      if (tr.generation_failed) {
        row_prefix(csv);
        csv << "generation,0,-1,0.000,\"error=" << tr.generation_error << "\"\n";
        ++report.csv_rows;
        continue;
      }
      for (const auto& ar : tr.results) {
        row_prefix(csv);
        char wall[32];
        std::snprintf(wall, sizeof(wall), "%.3f", ar.wall_ms);
        csv << ar.algorithm << ',' << (ar.success ? 1 : 0) << ',' << ar.symdiff << ',' << wall
            << ",\"" << ar.diagnostics << "\"\n";
        ++report.csv_rows;
      }
    }
    csv.flush();  // partial results survive interruption
    for (auto& tr : cell_trials) report.trials.push_back(std::move(tr));
  }

  // summary: success rate per (cell, algorithm)
  auto cells_json = nlohmann::json::array();
  std::size_t trial_base = 0;
  for (std::size_t cell_idx = 0; cell_idx < cells.size(); ++cell_idx) {
    const auto& cell = cells[cell_idx];
    nlohmann::json cj;
    cj["n"] = cell.n;
    cj["k"] = cell.k;
    cj["d"] = cell.d;
    cj["p"] = cell.p;
    nlohmann::json algs;
    for (const auto& alg : cfg.algorithms) {
      std::size_t runs = 0, successes = 0;
      double wall = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto& tr = report.trials[trial_base + static_cast<std::size_t>(t)];
        for (const auto& ar : tr.results)
          if (ar.algorithm == alg) {
            ++runs;
            successes += ar.success ? 1 : 0;
            wall += ar.wall_ms;
          }
      }
      nlohmann::json aj;
      aj["runs"] = runs;
      aj["successes"] = successes;
      aj["success_rate"] = runs > 0 ? static_cast<double>(successes) / static_cast<double>(runs) : 0.0;
      aj["mean_wall_ms"] = runs > 0 ? wall / static_cast<double>(runs) : 0.0;
      algs[alg] = aj;
    }
    cj["algorithms"] = algs;
    cells_json.push_back(cj);
    trial_base += static_cast<std::size_t>(cfg.trials);
  }
  report.summary["format"] = "plantedbip-summary v1";
  report.summary["master_seed"] = cfg.master_seed;
  report.summary["trials_per_cell"] = cfg.trials;
  report.summary["cells"] = cells_json;

  std::ofstream summary_out(cfg.output_path + ".summary.json");
  if (summary_out) summary_out << report.summary.dump(2) << '\n';
  return report;
}

std::vector<std::vector<Vertex>> brute_force_recover(const Graph& g, std::size_t k,
                                                     std::size_t d) {
  const std::size_t n = g.vertex_count();
  if (k > n) throw std::invalid_argument("brute_force_recover: k exceeds n");
  double combos = 1.0;
  for (std::size_t i = 0; i < k; ++i)
    combos *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (combos > 1e7) throw std::invalid_argument("brute_force_recover: C(n,k) budget exceeded");

  std::vector<std::vector<Vertex>> hits;
  std::vector<Vertex> subset(k);
  for (std::size_t i = 0; i < k; ++i) subset[i] = static_cast<Vertex>(i);
  while (true) {
    if (verify_planted_shape(g, subset, d).ok) hits.push_back(subset);
    // next lexicographic k-combination
    std::size_t i = k;
    while (i-- > 0) {
      if (subset[i] < n - k + i) {
        ++subset[i];
        for (std::size_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
        break;
      }
      if (i == 0) return hits;
    }
  }
}

}  // namespace pbs
