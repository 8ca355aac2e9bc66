#include "qwa/ordering.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "qwa/errors.hpp"

namespace qwa {
namespace {

// BFS distances restricted to the component of start; -1 outside.
std::vector<int> bfs_levels(const GraphInstance& inst, int start) {
  std::vector<int> level(static_cast<std::size_t>(inst.n()), -1);
  std::deque<int> queue{start};
  level[static_cast<std::size_t>(start)] = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : inst.neighbors(v)) {
      if (level[static_cast<std::size_t>(w)] < 0) {
        level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return level;
}

// Farthest vertex from start, ties by (degree, index); returns (vertex, eccentricity).
std::pair<int, int> farthest(const GraphInstance& inst, int start) {
  const auto level = bfs_levels(inst, start);
  int best = start;
  int ecc = 0;
  for (int v = 0; v < inst.n(); ++v) {
    const int lv = level[static_cast<std::size_t>(v)];
    if (lv < 0) continue;
    if (lv > ecc || (lv == ecc && inst.degree(v) < inst.degree(best))) {
      best = v;
      ecc = lv;
    }
  }
  return {best, ecc};
}

int pseudo_peripheral(const GraphInstance& inst, int start) {
  int root = start;
  auto [far, ecc] = farthest(inst, root);
  while (true) {
    auto [next_far, next_ecc] = farthest(inst, far);
    if (next_ecc <= ecc) break;
    root = far;
    far = next_far;
    ecc = next_ecc;
  }
  return root;
}

// Cuthill-McKee layering of one component, appended to order.
void layer_component(const GraphInstance& inst, int root, std::vector<char>& placed,
                     std::vector<int>& order) {
  std::deque<int> queue{root};
  placed[static_cast<std::size_t>(root)] = 1;
  std::vector<int> next;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    next.clear();
    for (int w : inst.neighbors(v)) {
      if (!placed[static_cast<std::size_t>(w)]) next.push_back(w);
    }
    std::sort(next.begin(), next.end(), [&](int a, int b) {
      return std::pair(inst.degree(a), a) < std::pair(inst.degree(b), b);
    });
    for (int w : next) {
      placed[static_cast<std::size_t>(w)] = 1;
      queue.push_back(w);
    }
  }
}

// Full ordering; roots[c] picks the start vertex for the c-th component.
std::vector<int> layered_order(const GraphInstance& inst, const std::vector<int>& roots) {
  std::vector<char> placed(static_cast<std::size_t>(inst.n()), 0);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(inst.n()));
  for (int root : roots) layer_component(inst, root, placed, order);
  return order;
}

}  // namespace

SitePath::SitePath(std::vector<int> order) : order_(std::move(order)) {
  position_.assign(order_.size(), -1);
  for (std::size_t k = 0; k < order_.size(); ++k) {
    const int v = order_[k];
    if (v < 0 || v >= static_cast<int>(order_.size()) || position_[static_cast<std::size_t>(v)] >= 0) {
      throw InvalidInputError("site path is not a permutation");
    }
    position_[static_cast<std::size_t>(v)] = static_cast<int>(k);
  }
}

SitePath identity_path(int n) {
  if (n < 1) throw InvalidSizeError(fmt::format("path needs at least one site, got {}", n));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return SitePath(std::move(order));
}

int bandwidth(const GraphInstance& inst, const SitePath& path) {
  if (path.size() != inst.n()) {
    throw DimensionError(fmt::format("path has {} sites, instance has {}", path.size(), inst.n()));
  }
  int width = 0;
  for (const auto& e : inst.edges()) width = std::max(width, std::abs(path.slot_of(e.i) - path.slot_of(e.j)));
  return width;
}

SitePath heuristic_path(const GraphInstance& inst) {
  const int n = inst.n();
  // Components in order of their smallest vertex.
  std::vector<int> component_of(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<int>> components;
  for (int v = 0; v < n; ++v) {
    if (component_of[static_cast<std::size_t>(v)] >= 0) continue;
    const auto level = bfs_levels(inst, v);
    std::vector<int> members;
    for (int w = 0; w < n; ++w) {
      if (level[static_cast<std::size_t>(w)] >= 0) {
        component_of[static_cast<std::size_t>(w)] = static_cast<int>(components.size());
        members.push_back(w);
      }
    }
    components.push_back(std::move(members));
  }

  // Per component, candidate roots: the pseudo-peripheral vertex grown from
  // the smallest-degree member, followed by every other minimum-degree member.
  std::vector<int> roots;
  for (const auto& members : components) {
    const int min_deg_vertex = *std::min_element(members.begin(), members.end(), [&](int a, int b) {
      return std::pair(inst.degree(a), a) < std::pair(inst.degree(b), b);
    });
    roots.push_back(pseudo_peripheral(inst, min_deg_vertex));
  }

  auto best = SitePath(layered_order(inst, roots));
  int best_width = bandwidth(inst, best);

  // Components are independent, so each root can be improved in turn.
  for (std::size_t c = 0; c < components.size(); ++c) {
    const int min_deg = inst.degree(*std::min_element(
        components[c].begin(), components[c].end(),
        [&](int a, int b) { return inst.degree(a) < inst.degree(b); }));
    for (int candidate : components[c]) {
      if (inst.degree(candidate) != min_deg || candidate == roots[c]) continue;
      auto trial_roots = roots;
      trial_roots[c] = candidate;
      SitePath trial(layered_order(inst, trial_roots));
      const int width = bandwidth(inst, trial);
      if (width < best_width) {
        best = std::move(trial);
        best_width = width;
        roots = std::move(trial_roots);
      }
    }
  }

  auto identity = identity_path(n);
  if (bandwidth(inst, identity) < best_width) return identity;
  return best;
}

SitePath parse_path(std::string_view text) {
  std::vector<int> order;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    int value = 0;
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && *(last - 1) == ' ') --last;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
      throw InvalidInputError(fmt::format("bad path entry '{}'", token));
    }
    order.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return SitePath(std::move(order));
}

}  // namespace qwa
