#include "qwa/instance.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "qwa/errors.hpp"
#include "qwa/rng.hpp"

namespace qwa {
namespace {

std::vector<std::pair<int, int>> lattice_edges(const GraphKind& kind, int n) {
  std::vector<std::pair<int, int>> pairs;
  if (kind.family == GraphFamily::chain) {
    for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  } else if (kind.family == GraphFamily::grid) {
    // Row-major: site (x, y) has index y * width + x.
    for (int y = 0; y < kind.height; ++y) {
      for (int x = 0; x < kind.width; ++x) {
        const int v = y * kind.width + x;
        if (x + 1 < kind.width) pairs.emplace_back(v, v + 1);
        if (y + 1 < kind.height) pairs.emplace_back(v, v + kind.width);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

std::vector<std::pair<int, int>> random_regular_edges(int n, int d, Xoshiro256& rng) {
  constexpr int kMaxAttempts = 10000;
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    stubs.clear();
    for (int v = 0; v < n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);
    for (std::size_t k = stubs.size() - 1; k > 0; --k) {
      std::swap(stubs[k], stubs[rng.below(k + 1)]);
    }
    std::set<std::pair<int, int>> seen;
    bool ok = true;
    for (std::size_t k = 0; k < stubs.size(); k += 2) {
      const int a = std::min(stubs[k], stubs[k + 1]);
      const int b = std::max(stubs[k], stubs[k + 1]);
      if (a == b || !seen.emplace(a, b).second) {
        ok = false;
        break;
      }
    }
    if (ok) return {seen.begin(), seen.end()};
  }
  throw ConstructionError(
      fmt::format("pairing model failed to produce a simple {}-regular graph on {} vertices", d, n));
}

double draw_coupling(CouplingDist dist, Xoshiro256& rng) {
  switch (dist) {
    case CouplingDist::pm1:
      return static_cast<double>(rng.sign());
    case CouplingDist::gaussian:
      return rng.normal();
    case CouplingDist::ferro:
      return 1.0;
  }
  return 0.0;
}

}  // namespace

GraphInstance::GraphInstance(int n, std::vector<Edge> edges, GraphKind kind, CouplingDist dist,
                             std::uint64_t seed)
    : n_(n), edges_(std::move(edges)), kind_(kind), dist_(dist), seed_(seed) {
  if (n_ < 1) throw InvalidSizeError(fmt::format("instance needs at least one spin, got {}", n_));
  for (auto& e : edges_) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n_) {
      throw InvalidInputError(fmt::format("edge ({}, {}) out of range for n = {}", e.i, e.j, n_));
    }
    if (e.i == e.j) throw InvalidInputError(fmt::format("self loop at vertex {}", e.i));
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (std::size_t k = 1; k < edges_.size(); ++k) {
    if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j) {
      throw InvalidInputError(fmt::format("duplicate edge ({}, {})", edges_[k].i, edges_[k].j));
    }
  }

  adjacency_.assign(static_cast<std::size_t>(n_), {});
  for (const auto& e : edges_) {
    adjacency_[static_cast<std::size_t>(e.i)].push_back(e.j);
    adjacency_[static_cast<std::size_t>(e.j)].push_back(e.i);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());

  switch (kind_.family) {
    case GraphFamily::chain:
    case GraphFamily::grid: {
      if (kind_.family == GraphFamily::grid && kind_.width * kind_.height != n_) {
        throw InvalidInputError(
            fmt::format("grid {}x{} does not match n = {}", kind_.width, kind_.height, n_));
      }
      const auto expected = lattice_edges(kind_, n_);
      bool match = expected.size() == edges_.size();
      for (std::size_t k = 0; match && k < expected.size(); ++k) {
        match = expected[k].first == edges_[k].i && expected[k].second == edges_[k].j;
      }
      if (!match) throw InvalidInputError("edge list does not match the declared lattice");
      break;
    }
    case GraphFamily::regular:
      for (int v = 0; v < n_; ++v) {
        if (degree(v) != kind_.degree) {
          throw InvalidInputError(
              fmt::format("vertex {} has degree {}, expected {}", v, degree(v), kind_.degree));
        }
      }
      break;
    case GraphFamily::custom:
      break;
  }
}

SpinConfiguration::SpinConfiguration(std::vector<int> values) : values_(std::move(values)) {
  for (int v : values_) {
    if (v != 1 && v != -1) throw InvalidInputError(fmt::format("spin value {} is not +1 or -1", v));
  }
}

SpinConfiguration SpinConfiguration::flipped() const {
  std::vector<int> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](int v) { return -v; });
  return SpinConfiguration(std::move(out));
}

GraphInstance generate_instance(const InstanceSpec& spec) {
  int n = spec.n;
  if (spec.kind.family == GraphFamily::grid) {
    if (spec.kind.width < 1 || spec.kind.height < 1) {
      throw InvalidSizeError(
          fmt::format("grid dimensions must be positive, got {}x{}", spec.kind.width, spec.kind.height));
    }
    n = spec.kind.width * spec.kind.height;
  }
  if (n < 2) throw InvalidSizeError(fmt::format("instance needs at least two spins, got {}", n));

  Xoshiro256 rng(spec.seed);
  std::vector<std::pair<int, int>> pairs;
  switch (spec.kind.family) {
    case GraphFamily::chain:
    case GraphFamily::grid:
      pairs = lattice_edges(spec.kind, n);
      break;
    case GraphFamily::regular: {
      const int d = spec.kind.degree;
      if (d < 3 || d >= n || (static_cast<long>(n) * d) % 2 != 0) {
        throw ConstructionError(fmt::format("no simple {}-regular graph on {} vertices", d, n));
      }
      pairs = random_regular_edges(n, d, rng);
      break;
    }
    case GraphFamily::custom:
      throw InvalidInputError("custom instances are built from explicit edge lists");
  }

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [i, j] : pairs) edges.push_back({i, j, draw_coupling(spec.dist, rng)});
  return GraphInstance(n, std::move(edges), spec.kind, spec.dist, spec.seed);
}

double classical_energy(const GraphInstance& inst, const SpinConfiguration& config) {
  if (config.size() != inst.n()) {
    throw DimensionError(
        fmt::format("configuration has {} spins, instance has {}", config.size(), inst.n()));
  }
  double energy = 0.0;
  for (const auto& e : inst.edges()) energy -= e.coupling * config[e.i] * config[e.j];
  return energy;
}

GraphInstance disjoint_union(const GraphInstance& a, const GraphInstance& b) {
  std::vector<Edge> edges(a.edges().begin(), a.edges().end());
  for (const auto& e : b.edges()) edges.push_back({e.i + a.n(), e.j + a.n(), e.coupling});
  return GraphInstance(a.n() + b.n(), std::move(edges), GraphKind::custom(), a.dist(), a.seed());
}

GraphInstance relabel(const GraphInstance& inst, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != inst.n()) {
    throw DimensionError(fmt::format("permutation has {} entries, instance has {}", perm.size(), inst.n()));
  }
  std::vector<Edge> edges;
  for (const auto& e : inst.edges()) {
    edges.push_back({perm[static_cast<std::size_t>(e.i)], perm[static_cast<std::size_t>(e.j)], e.coupling});
  }
  return GraphInstance(inst.n(), std::move(edges), GraphKind::custom(), inst.dist(), inst.seed());
}

std::string_view to_string(CouplingDist dist) {
  switch (dist) {
    case CouplingDist::pm1:
      return "pm1";
    case CouplingDist::gaussian:
      return "gaussian";
    case CouplingDist::ferro:
      return "ferro";
  }
  return "";
}

std::string_view to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::chain:
      return "chain";
    case GraphFamily::grid:
      return "grid";
    case GraphFamily::regular:
      return "regular";
    case GraphFamily::custom:
      return "custom";
  }
  return "";
}

CouplingDist parse_coupling_dist(std::string_view name) {
  if (name == "pm1") return CouplingDist::pm1;
  if (name == "gaussian") return CouplingDist::gaussian;
  if (name == "ferro") return CouplingDist::ferro;
  throw InvalidInputError(fmt::format("unknown coupling distribution '{}'", name));
}

GraphFamily parse_graph_family(std::string_view name) {
  if (name == "chain") return GraphFamily::chain;
  if (name == "grid") return GraphFamily::grid;
  if (name == "regular") return GraphFamily::regular;
  if (name == "custom") return GraphFamily::custom;
  throw InvalidInputError(fmt::format("unknown instance kind '{}'", name));
}

nlohmann::json instance_to_json(const GraphInstance& inst) {
  nlohmann::json params = nlohmann::json::object();
  const auto& kind = inst.kind();
  switch (kind.family) {
    case GraphFamily::chain:
      params["n"] = inst.n();
      break;
    case GraphFamily::grid:
      params["w"] = kind.width;
      params["h"] = kind.height;
      break;
    case GraphFamily::regular:
      params["n"] = inst.n();
      params["d"] = kind.degree;
      break;
    case GraphFamily::custom:
      break;
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : inst.edges()) edges.push_back({e.i, e.j, e.coupling});
  return {{"n", inst.n()},
          {"kind", to_string(kind.family)},
          {"params", params},
          {"dist", to_string(inst.dist())},
          {"seed", inst.seed()},
          {"edges", edges}};
}

GraphInstance instance_from_json(const nlohmann::json& doc) {
  try {
    const int n = doc.at("n").get<int>();
    const auto family = parse_graph_family(doc.at("kind").get<std::string>());
    const auto& params = doc.at("params");
    GraphKind kind{family};
    if (family == GraphFamily::grid) {
      kind.width = params.at("w").get<int>();
      kind.height = params.at("h").get<int>();
    } else if (family == GraphFamily::regular) {
      kind.degree = params.at("d").get<int>();
    }
    std::vector<Edge> edges;
    for (const auto& row : doc.at("edges")) {
      if (!row.is_array() || row.size() != 3) throw InvalidInputError("edge rows must be [i, j, J]");
      edges.push_back({row[0].get<int>(), row[1].get<int>(), row[2].get<double>()});
    }
    return GraphInstance(n, std::move(edges), kind, parse_coupling_dist(doc.at("dist").get<std::string>()),
                         doc.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidInputError(fmt::format("malformed instance document: {}", ex.what()));
  }
}

std::string instance_to_string(const GraphInstance& inst) { return instance_to_json(inst).dump(); }

}  // namespace qwa
