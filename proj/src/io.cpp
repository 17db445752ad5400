#include "pbs/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pbs::io {

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}
}  // namespace

void write_edge_list(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const auto& [u, v] : g.sorted_edges()) out << u << ' ' << v << '\n';
}

Graph read_edge_list(const std::string& path) {
  auto in = open_in(path);
  std::size_t n = 0, m = 0;
  if (!(in >> n >> m)) throw std::runtime_error("bad edge list header: " + path);
  Graph g(n);
  for (std::size_t e = 0; e < m; ++e) {
    Vertex u, v;
    if (!(in >> u >> v)) throw std::runtime_error("truncated edge list: " + path);
    if (u >= v) throw std::runtime_error("edge list not normalized (need u < v): " + path);
    g.add_edge(u, v);
  }
  return g;
}

void write_instance(const InstanceArchive& archive, const std::string& base_path) {
  write_edge_list(archive.instance.graph, base_path + ".edges");

  const auto& inst = archive.instance;
  nlohmann::json j;
  j["format"] = "plantedbip-instance v1";
  j["model"] = archive.model;
  j["topology"] = archive.topology.name();
  j["n"] = inst.params.n;
  j["k"] = inst.params.k;
  j["d"] = inst.params.d;
  j["p"] = inst.params.p;
  j["gamma"] = inst.params.gamma;
  j["alpha"] = inst.params.alpha;
  j["seed"] = inst.seed;
  j["s1"] = inst.s1;
  j["s2"] = inst.s2;
  auto edges = nlohmann::json::array();
  for (const auto& [u, v] : inst.adversary_edges) edges.push_back({u, v});
  j["adversary_edges"] = edges;

  auto out = open_out(base_path + ".json");
  out << j.dump(2) << '\n';
}

InstanceArchive read_instance(const std::string& base_path) {
  Graph g = read_edge_list(base_path + ".edges");
  auto in = open_in(base_path + ".json");
  nlohmann::json j;
  in >> j;

  InstanceArchive archive{PlantedInstance{std::move(g), {}, {}, {}, 0, {}},
                          BipartiteTopology::from_name(j.at("topology").get<std::string>()),
                          j.at("model").get<std::string>()};
  auto& inst = archive.instance;
  inst.params.n = j.at("n").get<std::size_t>();
  inst.params.k = j.at("k").get<std::size_t>();
  inst.params.d = j.at("d").get<std::size_t>();
  inst.params.p = j.at("p").get<double>();
  inst.params.gamma = j.at("gamma").get<double>();
  inst.params.alpha = j.at("alpha").get<double>();
  inst.params.validate();
  inst.seed = j.at("seed").get<std::uint64_t>();
  inst.s1 = j.at("s1").get<std::vector<Vertex>>();
  inst.s2 = j.at("s2").get<std::vector<Vertex>>();
  for (const auto& e : j.at("adversary_edges"))
    inst.adversary_edges.emplace_back(e.at(0).get<Vertex>(), e.at(1).get<Vertex>());
  if (inst.params.n != inst.graph.vertex_count())
    throw std::runtime_error("instance sidecar does not match edge list: " + base_path);
  return archive;
}

void write_matrix_text(const Matrix& m, const std::string& path) {
  auto out = open_out(path);
  out.precision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
    out << '\n';
  }
}

nlohmann::json to_json(const CertReport& rep) {
  nlohmann::json j;
  j["all_ok"] = rep.all_ok();
  j["psd"] = {{"ok", rep.psd_ok}, {"lambda_min", rep.lambda_min}, {"tol", rep.psd_tol}};
  j["rank"] = {{"ok", rep.rank_ok}, {"lambda_second", rep.lambda_second}, {"tol", rep.rank_tol}};
  j["slackness"] = {{"ok", rep.slackness_ok}, {"value", rep.slackness}};
  j["calibration"] = {{"ok", rep.calibration_ok}, {"residual", rep.calibration_residual}};
  j["cap"] = {{"ok", rep.cap_ok}, {"max_entry", rep.max_b_entry}, {"min_entry", rep.min_b_entry}};
  j["norm"] = {{"ok", rep.norm_ok}, {"b_norm", rep.b_norm}, {"bound", rep.b_norm_bound}};
  j["support"] = {{"ok", rep.support_ok}};
  j["y_norm"] = rep.y_norm;
  return j;
}

nlohmann::json to_json(const EmpiricalReport& rep) {
  nlohmann::json j;
  j["pairs_sampled"] = rep.pairs_sampled;
  j["sum_bound"] = rep.sum_bound;
  j["sum_ok_fraction"] = rep.sum_ok_fraction;
  j["isotropy_bound"] = rep.isotropy_bound;
  j["isotropy_ok_fraction"] = rep.isotropy_ok_fraction;
  j["negative_part_bound"] = rep.negative_part_bound;
  j["negative_part_ok_fraction"] = rep.negative_part_ok_fraction;
  j["linf_bound"] = rep.linf_bound;
  j["linf_max"] = rep.linf_max;
  j["linf_ok"] = rep.linf_ok;
  j["mc_samples"] = rep.mc_samples;
  j["mc_max_abs_deviation"] = rep.mc_max_abs_deviation;
  j["mc_max_sigma_units"] = rep.mc_max_sigma_units;
  j["mc_ok"] = rep.mc_ok;
  return j;
}

nlohmann::json to_json(const FarkasCertificate& cert) {
  return {{"y", cert.y}, {"z", cert.z}};
}

}  // namespace pbs::io
