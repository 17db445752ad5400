// Command-line driver: instance generation, recovery, certification,
// parameter sweeps and the brute-force oracle.

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "pbs/certificate.hpp"
#include "pbs/degree.hpp"
#include "pbs/harness.hpp"
#include "pbs/io.hpp"
#include "pbs/sdp.hpp"
#include "pbs/subspace.hpp"

namespace {

using namespace pbs;

void configure_threads() {
#ifdef _OPENMP
  if (const char* env = std::getenv("PLANTEDBIP_THREADS")) {
    const int want = std::atoi(env);
    if (want > 0) omp_set_num_threads(want);
  }
#endif
}

Graph strip_adversary(const PlantedInstance& inst) {
  std::set<Edge> removed(inst.adversary_edges.begin(), inst.adversary_edges.end());
  Graph g(inst.graph.vertex_count());
  for (const auto& e : inst.graph.sorted_edges())
    if (!removed.count(e)) g.add_edge(e.first, e.second);
  return g;
}

long long symdiff(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
  std::vector<Vertex> d;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
  return static_cast<long long>(d.size());
}

void print_set(const std::vector<Vertex>& s) {
  for (std::size_t i = 0; i < s.size(); ++i) std::cout << (i ? " " : "") << s[i];
  std::cout << "\n";
}

int cmd_gen(const std::string& out, std::size_t n, std::size_t k, std::size_t d, double p,
            double alpha, const std::string& topology, const std::string& model,
            std::uint64_t seed, double adversary_fraction) {
  const auto params = ModelParams::make(n, k, d, p, alpha);
  const auto topo = BipartiteTopology::from_name(topology);
  Rng rng(seed);
  PlantedInstance inst = model == "semi_random" ? gen_semi_random(params, topo, rng)
                                                : gen_random_planted(params, topo, rng);
  inst.seed = seed;
  if (adversary_fraction > 0.0)
    inst = apply_monotone_adversary(inst, AdversaryStrategy::random_extra(adversary_fraction), rng);
  io::write_instance({inst, topo, model}, out);
  std::cout << "wrote " << out << ".edges and " << out << ".json (n=" << n << " k=" << k
            << " d=" << d << " p=" << p << " adversary_edges=" << inst.adversary_edges.size()
            << ")\n";
  return 0;
}

int cmd_recover(const std::string& in, const std::string& alg, const std::string& dump_x) {
  const auto archive = io::read_instance(in);
  const auto& inst = archive.instance;
  const auto truth = inst.planted_set();

  if (alg == "degree") {
    const double limit = 2.0 * inst.params.p * static_cast<double>(inst.params.k) / 3.0;
    if (static_cast<double>(inst.params.d) > limit)
      std::cerr << "warning: d=" << inst.params.d << " is above the low-degree regime bound "
                << limit << "; bottom-k degrees carry no guarantee here\n";
    const auto rec = recover_by_degree(inst.graph, inst.params.k);
    std::cout << "recovered:";
    print_set(rec.set);
    std::cout << "ambiguous: " << (rec.ambiguous ? "yes" : "no") << "\n";
    std::cout << "symdiff_vs_truth: " << symdiff(rec.set, truth) << "\n";
    return 0;
  }
  if (alg == "sdp") {
    const auto sol = solve_primal_sdp(inst.graph, inst.params.k);
    const auto ex = extract_planted_set(sol, inst.params.k);
    std::cout << "objective: " << sol.objective << "\nconverged: " << (sol.converged ? "yes" : "no")
              << "\niterations: " << sol.iterations << "\nextraction_size_ok: "
              << (ex.size_ok ? "yes" : "no") << "\nrecovered:";
    print_set(ex.set);
    std::cout << "symdiff_vs_truth: " << symdiff(ex.set, truth) << "\n";
    if (!dump_x.empty()) {
      io::write_matrix_text(sol.x, dump_x);
      nlohmann::json meta;
      meta["objective"] = sol.objective;
      meta["iterations"] = sol.iterations;
      meta["converged"] = sol.converged;
      meta["primal_residual"] = sol.primal_residual;
      meta["dual_residual"] = sol.dual_residual;
      std::ofstream mo(dump_x + ".json");
      mo << meta.dump(2) << '\n';
    }
    return sol.converged ? 0 : 1;
  }
  if (alg == "subspace") {
    const auto& mp = inst.params;
    const auto params = SubspaceParams::defaults(mp.n, mp.k, mp.d, mp.p);
    try {
      const auto out = recover_subspace(inst.graph, mp.k, mp.p, mp.d, params);
      if (out.status == SubspaceOutcome::Status::recovered) {
        std::cout << "recovered:";
        print_set(out.set);
        std::cout << "symdiff_vs_truth: " << symdiff(out.set, truth) << "\n";
      } else {
        std::cout << "failure: "
                  << (out.status == SubspaceOutcome::Status::empty_basis ? "empty_basis"
                                                                         : "no_candidate_verified")
                  << "\n";
      }
      std::cout << "dimension: " << out.subspace_dimension << "\nnet_points: " << out.net_points
                << "\ncandidates: " << out.candidates << "\n";
      return 0;
    } catch (const NetCapExceeded& e) {
      std::cerr << "net cap exceeded: needs at least " << e.required << " points\n";
      return 1;
    }
  }
  std::cerr << "unknown algorithm: " << alg << "\n";
  return 2;
}

int cmd_certify(const std::string& in, const std::string& report_path, double tau_override,
                double t_override) {
  const auto archive = io::read_instance(in);
  PlantedInstance inst = archive.instance;
  if (!inst.adversary_edges.empty()) {
    std::cerr << "note: certificate analyzes the pre-adversary model; stripping "
              << inst.adversary_edges.size() << " adversary edges\n";
    inst.graph = strip_adversary(inst);
    inst.adversary_edges.clear();
  }
  const auto& mp = inst.params;
  const double tau = tau_override > 0.0
                         ? tau_override
                         : ((0.5 - mp.alpha) / (0.5 + mp.alpha)) * static_cast<double>(mp.d);
  const auto basis = threshold_basis(inst, tau);
  const double t = t_override > 0.0 ? t_override : default_entry_cap(basis.count(), mp);
  const auto built = build_b_matrix(inst, basis, t);

  nlohmann::json j;
  j["format"] = "plantedbip-certify v1";
  j["tau"] = tau;
  j["t"] = t;
  j["threshold_rank"] = basis.count();
  j["built"] = built.ok;
  if (!built.ok) {
    auto failures = nlohmann::json::array();
    for (const auto& f : built.failures)
      failures.push_back({{"column", f.j},
                          {"numerical", f.numerical},
                          {"farkas", io::to_json(f.farkas)}});
    j["infeasible_columns"] = failures;
  } else {
    const auto cert = assemble_certificate(inst, built.b, t);
    const auto rep = verify_certificate(cert, inst, tau);
    j["verification"] = io::to_json(rep);
    if (basis.count() > 0) {
      Rng rng(inst.seed + 1);
      const auto emb = spectral_embedding(basis);
      j["empirical"] = io::to_json(empirical_lemma_checks(inst, basis, emb, 200, rng));
    }
  }

  if (report_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(report_path);
    if (!out) {
      std::cerr << "cannot write " << report_path << "\n";
      return 1;
    }
    out << j.dump(2) << '\n';
    std::cout << "wrote " << report_path << "\n";
  }
  if (!built.ok) return 1;
  return j["verification"]["all_ok"].get<bool>() ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg =
      config_path.empty() ? ExperimentConfig{} : parse_config_file(config_path);
  for (const auto& o : overrides) apply_config_override(cfg, o);
  const auto report = run_sweep(cfg);
  std::cout << "wrote " << report.csv_rows << " rows to " << cfg.output_path << " (summary at "
            << cfg.output_path << ".summary.json)\n";
  return 0;
}

int cmd_oracle(const std::string& in) {
  const auto archive = io::read_instance(in);
  const auto& inst = archive.instance;
  const auto hits = brute_force_recover(inst.graph, inst.params.k, inst.params.d);
  std::cout << "candidates: " << hits.size() << "\n";
  for (const auto& h : hits) print_set(h);
  const auto truth = inst.planted_set();
  const bool contains_truth = std::find(hits.begin(), hits.end(), truth) != hits.end();
  std::cout << "contains_planted_set: " << (contains_truth ? "yes" : "no") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads();
  CLI::App app{"Planted bipartite subgraph toolkit: generators, recovery algorithms, "
               "dual certificates"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance archive");
  std::string gen_out = "instance";
  std::size_t gen_n = 120, gen_k = 40, gen_d = 14;
  double gen_p = 0.5, gen_alpha = 1.0 / 6.0, gen_adv = 0.0;
  std::string gen_topology = "random_regular", gen_model = "random";
  std::uint64_t gen_seed = 0;
  gen->add_option("--out", gen_out, "archive base path");
  gen->add_option("--n", gen_n, "total vertices")->required();
  gen->add_option("--k", gen_k, "planted size (even)")->required();
  gen->add_option("--d", gen_d, "planted degree")->required();
  gen->add_option("--p", gen_p, "edge probability")->required();
  gen->add_option("--alpha", gen_alpha, "pseudorandomness slack (0, 1/6]");
  gen->add_option("--topology", gen_topology, "random_regular | complete_balanced | circulant[:o1,o2,...]");
  gen->add_option("--model", gen_model, "random | semi_random");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--adversary-fraction", gen_adv, "monotone adversary edge fraction");

  // recover
  auto* recover = app.add_subcommand("recover", "run a recovery algorithm on an archive");
  std::string rec_in, rec_alg, rec_dump;
  recover->add_option("--in", rec_in, "archive base path")->required();
  recover->add_option("--alg", rec_alg, "degree | sdp | subspace")->required();
  recover->add_option("--dump-x", rec_dump, "write the SDP matrix as row-major text");

  // certify
  auto* certify = app.add_subcommand("certify", "build and verify the dual certificate");
  std::string cert_in, cert_report;
  double cert_tau = 0.0, cert_t = 0.0;
  certify->add_option("--in", cert_in, "archive base path")->required();
  certify->add_option("--report", cert_report, "write the JSON report here (default stdout)");
  certify->add_option("--tau", cert_tau, "threshold override (default (1/2-a)/(1/2+a) d)");
  certify->add_option("--t", cert_t, "entry cap override (default per the L-scaled cap)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config file");
  std::string sweep_config;
  std::vector<std::string> sweep_sets;
  sweep->add_option("--config", sweep_config, "key = value config file");
  sweep->add_option("--set", sweep_sets, "override, e.g. --set trials=5")->take_all();

  // oracle
  auto* oracle = app.add_subcommand("oracle", "brute-force enumeration on a micro archive");
  std::string oracle_in;
  oracle->add_option("--in", oracle_in, "archive base path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_out, gen_n, gen_k, gen_d, gen_p, gen_alpha, gen_topology, gen_model,
                     gen_seed, gen_adv);
    if (recover->parsed()) return cmd_recover(rec_in, rec_alg, rec_dump);
    if (certify->parsed()) return cmd_certify(cert_in, cert_report, cert_tau, cert_t);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_sets);
    if (oracle->parsed()) return cmd_oracle(oracle_in);
  } catch (const pbs::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
