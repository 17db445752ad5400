#pragma once

#include <string>

#include "pbs/certificate.hpp"
#include "pbs/graph.hpp"
#include "pbs/instance.hpp"
#include "pbs/matrix.hpp"

#include <json.hpp>

namespace pbs::io {

/// Text edge list: first line "n m", then m lines "u v" with u < v.
void write_edge_list(const Graph& g, const std::string& path);
Graph read_edge_list(const std::string& path);

/// An instance archive is <base>.edges plus a <base>.json sidecar holding
/// params, seed, topology, sides and adversary edges.
struct InstanceArchive {
  PlantedInstance instance;
  BipartiteTopology topology;
  std::string model;  // "random" | "semi_random"
};

void write_instance(const InstanceArchive& archive, const std::string& base_path);
InstanceArchive read_instance(const std::string& base_path);

/// Row-major text dump, one matrix row per line.
void write_matrix_text(const Matrix& m, const std::string& path);

nlohmann::json to_json(const CertReport& rep);
nlohmann::json to_json(const EmpiricalReport& rep);
nlohmann::json to_json(const FarkasCertificate& cert);

}  // namespace pbs::io
