#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace qwa {

// ferro (all J = +1) is the uniform ferromagnet used by the scaling runs.
enum class CouplingDist { pm1, gaussian, ferro };

enum class GraphFamily { chain, grid, regular, custom };

struct GraphKind {
  GraphFamily family = GraphFamily::custom;
  int width = 0;   // grid only
  int height = 0;  // grid only
  int degree = 0;  // regular only

  static GraphKind chain() { return {GraphFamily::chain}; }
  static GraphKind grid(int w, int h) { return {GraphFamily::grid, w, h, 0}; }
  static GraphKind regular(int d) { return {GraphFamily::regular, 0, 0, d}; }
  static GraphKind custom() { return {GraphFamily::custom}; }

  bool operator==(const GraphKind&) const = default;
};

struct Edge {
  int i = 0;
  int j = 0;
  double coupling = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Spin-glass problem: E(sigma) = -sum_{(i,j)} J_ij sigma_i sigma_j over a
/// coupling graph. Immutable once constructed; edges are kept sorted by (i, j).
class GraphInstance {
 public:
  /// Validates and normalizes the edge list (orients i < j, sorts).
  /// Throws InvalidInputError on duplicate pairs, self loops, out-of-range
  /// indices, or edges inconsistent with the declared family.
  GraphInstance(int n, std::vector<Edge> edges, GraphKind kind = GraphKind::custom(),
                CouplingDist dist = CouplingDist::gaussian, std::uint64_t seed = 0);

  int n() const { return n_; }
  std::span<const Edge> edges() const { return edges_; }
  const GraphKind& kind() const { return kind_; }
  CouplingDist dist() const { return dist_; }
  std::uint64_t seed() const { return seed_; }

  // Sorted neighbor lists, built on construction.
  std::span<const int> neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  bool operator==(const GraphInstance& other) const {
    return n_ == other.n_ && edges_ == other.edges_ && kind_ == other.kind_ &&
           dist_ == other.dist_ && seed_ == other.seed_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  GraphKind kind_;
  CouplingDist dist_;
  std::uint64_t seed_;
  std::vector<std::vector<int>> adjacency_;
};

/// Length-n sequence over {-1, +1}.
class SpinConfiguration {
 public:
  SpinConfiguration() = default;
  explicit SpinConfiguration(std::vector<int> values);

  static SpinConfiguration all_up(int n) { return SpinConfiguration(std::vector<int>(static_cast<std::size_t>(n), 1)); }

  int size() const { return static_cast<int>(values_.size()); }
  int operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  std::span<const int> values() const { return values_; }
  SpinConfiguration flipped() const;

  bool operator==(const SpinConfiguration&) const = default;

 private:
  std::vector<int> values_;
};

struct InstanceSpec {
  GraphKind kind = GraphKind::chain();
  int n = 0;  // chain and regular; grid derives n = w * h
  CouplingDist dist = CouplingDist::gaussian;
  std::uint64_t seed = 0;
};

/// Deterministic in every field of spec. Couplings are drawn in sorted edge
/// order from a xoshiro256** stream seeded with spec.seed.
GraphInstance generate_instance(const InstanceSpec& spec);

/// -sum J_ij sigma_i sigma_j. Throws DimensionError on length mismatch.
double classical_energy(const GraphInstance& inst, const SpinConfiguration& config);

/// Second instance's vertices are shifted by a.n().
GraphInstance disjoint_union(const GraphInstance& a, const GraphInstance& b);

/// Vertex v of inst becomes vertex perm[v] of the result.
GraphInstance relabel(const GraphInstance& inst, std::span<const int> perm);

std::string_view to_string(CouplingDist dist);
std::string_view to_string(GraphFamily family);
CouplingDist parse_coupling_dist(std::string_view name);
GraphFamily parse_graph_family(std::string_view name);

nlohmann::json instance_to_json(const GraphInstance& inst);
GraphInstance instance_from_json(const nlohmann::json& doc);
std::string instance_to_string(const GraphInstance& inst);

}  // namespace qwa
