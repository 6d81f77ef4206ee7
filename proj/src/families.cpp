#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "specnoise/chain.hpp"
#include "specnoise/errors.hpp"

namespace specnoise {

namespace {

// Dense storage is n^2 doubles; keep construction well under memory limits.
constexpr int kMaxStates = 8192;

std::string bit_label(int value, int width) {
  std::string s(width, '0');
  for (int b = 0; b < width; ++b)
    if (value >> b & 1) s[b] = '1';
  return s;
}

struct WalkBuilder {
  std::vector<std::string> states;
  std::vector<std::pair<int, int>> edges;

  int add_state(std::string label) {
    states.push_back(std::move(label));
    return static_cast<int>(states.size()) - 1;
  }

  void add_edge(int u, int v) { edges.emplace_back(u, v); }

  Chain build() const {
    const int n = static_cast<int>(states.size());
    if (n > kMaxStates)
      fail("StateSpaceTooLarge",
           "family instance has " + std::to_string(n) + " states");
    std::vector<int> degree(n, 0);
    for (auto [u, v] : edges) {
      ++degree[u];
      ++degree[v];
    }
    Chain chain;
    chain.states = states;
    chain.generator = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : edges) {
      chain.generator(u, v) = 1.0 / degree[u];
      chain.generator(v, u) = 1.0 / degree[v];
    }
    for (int i = 0; i < n; ++i) chain.generator(i, i) = -1.0;
    const double volume = 2.0 * static_cast<double>(edges.size());
    chain.pi = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) chain.pi(i) = degree[i] / volume;
    return chain;
  }
};

void require(bool cond, const std::string& what) {
  if (!cond) fail("InvalidParams", what);
}

Chain make_complete(int n) {
  require(n >= 2, "complete(n) needs n >= 2");
  WalkBuilder g;
  for (int i = 0; i < n; ++i) g.add_state(std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  Chain chain = g.build();
  chain.transitive = true;
  std::vector<int> rotate(n), swap01(n);
  for (int i = 0; i < n; ++i) {
    rotate[i] = (i + 1) % n;
    swap01[i] = i;
  }
  std::swap(swap01[0], swap01[1]);
  chain.automorphisms = {rotate, swap01};
  return chain;
}

// 2n-cycle.
Chain make_cycle(int n) {
  require(n >= 1, "cycle(n) needs n >= 1");
  const int m = 2 * n;
  WalkBuilder g;
  for (int i = 0; i < m; ++i) g.add_state(std::to_string(i));
  if (m == 2) {
    g.add_edge(0, 1);
  } else {
    for (int i = 0; i < m; ++i) g.add_edge(i, (i + 1) % m);
  }
  Chain chain = g.build();
  chain.transitive = true;
  std::vector<int> rotate(m), reflect(m);
  for (int i = 0; i < m; ++i) {
    rotate[i] = (i + 1) % m;
    reflect[i] = m - 1 - i;
  }
  chain.automorphisms = {rotate, reflect};
  return chain;
}

std::vector<std::vector<int>> cube_automorphisms(int n,
                                                 const auto& index_of_mask) {
  std::vector<std::vector<int>> result;
  const int m = 1 << n;
  std::vector<int> flip(m);
  for (int w = 0; w < m; ++w) flip[index_of_mask(w)] = index_of_mask(w ^ 1);
  result.push_back(flip);
  if (n >= 2) {
    std::vector<int> swap01(m);
    for (int w = 0; w < m; ++w) {
      int b0 = w >> 0 & 1, b1 = w >> 1 & 1;
      int v = (w & ~3) | (b0 << 1) | b1;
      swap01[index_of_mask(w)] = index_of_mask(v);
    }
    result.push_back(swap01);
  }
  return result;
}

Chain make_hypercube_walk(int n) {
  require(n >= 1, "hypercube_walk(n) needs n >= 1");
  require(n <= 13, "hypercube_walk(n) capped at n = 13");
  const int m = 1 << n;
  WalkBuilder g;
  for (int w = 0; w < m; ++w) g.add_state(bit_label(w, n));
  for (int w = 0; w < m; ++w)
    for (int b = 0; b < n; ++b)
      if (!(w >> b & 1)) g.add_edge(w, w | (1 << b));
  Chain chain = g.build();
  chain.transitive = true;
  chain.automorphisms = cube_automorphisms(n, [](int w) { return w; });
  return chain;
}

// Coordinates rerandomize independently at rate 1: each bit flip carries
// rate 1/2, so the diagonal is -n/2 and t_rel = 1 for every n.
Chain make_hypercube_rerandomize(int n) {
  require(n >= 1, "hypercube_rerandomize(n) needs n >= 1");
  require(n <= 13, "hypercube_rerandomize(n) capped at n = 13");
  const int m = 1 << n;
  Chain chain;
  for (int w = 0; w < m; ++w) chain.states.push_back(bit_label(w, n));
  chain.generator = Eigen::MatrixXd::Zero(m, m);
  for (int w = 0; w < m; ++w) {
    for (int b = 0; b < n; ++b) chain.generator(w, w ^ (1 << b)) = 0.5;
    chain.generator(w, w) = -0.5 * n;
  }
  chain.pi = Eigen::VectorXd::Constant(m, 1.0 / m);
  chain.transitive = true;
  chain.automorphisms = cube_automorphisms(n, [](int w) { return w; });
  return chain;
}

Chain make_star(int n) {
  require(n >= 1, "star(n) needs n >= 1");
  WalkBuilder g;
  g.add_state("center");
  for (int i = 1; i <= n; ++i) {
    int leaf = g.add_state("leaf" + std::to_string(i));
    g.add_edge(0, leaf);
  }
  Chain chain = g.build();
  if (n >= 2) {
    std::vector<int> swap_leaves(n + 1);
    for (int i = 0; i <= n; ++i) swap_leaves[i] = i;
    std::swap(swap_leaves[1], swap_leaves[2]);
    chain.automorphisms = {swap_leaves};
  }
  return chain;
}

// K_{n^2} and K_n joined by the single edge a0 -- b0.
Chain make_glued_cliques(int n) {
  require(n >= 2, "glued_cliques(n) needs n >= 2");
  const int big = n * n;
  WalkBuilder g;
  for (int i = 0; i < big; ++i) g.add_state("a" + std::to_string(i));
  for (int i = 0; i < n; ++i) g.add_state("b" + std::to_string(i));
  for (int i = 0; i < big; ++i)
    for (int j = i + 1; j < big; ++j) g.add_edge(i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(big + i, big + j);
  g.add_edge(0, big);
  Chain chain = g.build();
  const int total = big + n;
  std::vector<int> swap_a(total);
  for (int i = 0; i < total; ++i) swap_a[i] = i;
  std::swap(swap_a[1], swap_a[2]);
  chain.automorphisms = {swap_a};
  if (n >= 3) {
    std::vector<int> swap_b(total);
    for (int i = 0; i < total; ++i) swap_b[i] = i;
    std::swap(swap_b[big + 1], swap_b[big + 2]);
    chain.automorphisms.push_back(swap_b);
  }
  return chain;
}

// 2n stars with n^2 outer vertices each; centers pairwise adjacent.
Chain make_star_join(int n) {
  require(n >= 1, "star_join(n) needs n >= 1");
  const int stars = 2 * n;
  const int leaves = n * n;
  WalkBuilder g;
  for (int s = 0; s < stars; ++s) g.add_state("c" + std::to_string(s));
  for (int s = 0; s < stars; ++s)
    for (int l = 0; l < leaves; ++l)
      g.add_state("s" + std::to_string(s) + "l" + std::to_string(l));
  for (int s = 0; s < stars; ++s)
    for (int t = s + 1; t < stars; ++t) g.add_edge(s, t);
  auto leaf_index = [&](int s, int l) { return stars + s * leaves + l; };
  for (int s = 0; s < stars; ++s)
    for (int l = 0; l < leaves; ++l) g.add_edge(s, leaf_index(s, l));
  Chain chain = g.build();
  const int total = stars + stars * leaves;
  std::vector<int> swap_stars(total);
  for (int i = 0; i < total; ++i) swap_stars[i] = i;
  std::swap(swap_stars[0], swap_stars[1]);
  for (int l = 0; l < leaves; ++l)
    std::swap(swap_stars[leaf_index(0, l)], swap_stars[leaf_index(1, l)]);
  chain.automorphisms = {swap_stars};
  if (leaves >= 2) {
    std::vector<int> swap_leaves(total);
    for (int i = 0; i < total; ++i) swap_leaves[i] = i;
    std::swap(swap_leaves[leaf_index(0, 0)], swap_leaves[leaf_index(0, 1)]);
    chain.automorphisms.push_back(swap_leaves);
  }
  return chain;
}

// K_{n+1} and the n-cube glued by degree-preserving edge surgery: remove
// clique edge (k0,k1) and cube edge (0...0, 10...0), add the cross edges
// pairing lowest labels: k0 -- h0...0 and k1 -- h10...0. Every vertex ends
// with degree n.
Chain make_regular_glue(int n) {
  require(n >= 2, "regular_glue(n) needs n >= 2");
  require(n <= 13, "regular_glue(n) capped at n = 13");
  const int clique = n + 1;
  const int cube = 1 << n;
  WalkBuilder g;
  for (int i = 0; i < clique; ++i) g.add_state("k" + std::to_string(i));
  for (int w = 0; w < cube; ++w) g.add_state("h" + bit_label(w, n));
  auto hub = [&](int w) { return clique + w; };
  for (int i = 0; i < clique; ++i)
    for (int j = i + 1; j < clique; ++j)
      if (!(i == 0 && j == 1)) g.add_edge(i, j);
  for (int w = 0; w < cube; ++w)
    for (int b = 0; b < n; ++b)
      if (!(w >> b & 1) && !(w == 0 && b == 0))
        g.add_edge(hub(w), hub(w | (1 << b)));
  g.add_edge(0, hub(0));
  g.add_edge(1, hub(1));
  Chain chain = g.build();
  if (n >= 3) {
    const int total = clique + cube;
    std::vector<int> swap_coords(total);
    for (int i = 0; i < total; ++i) swap_coords[i] = i;
    for (int w = 0; w < cube; ++w) {
      int b1 = w >> 1 & 1, b2 = w >> 2 & 1;
      int v = (w & ~6) | (b1 << 2) | (b2 << 1);
      swap_coords[hub(w)] = hub(v);
    }
    std::vector<int> swap_clique(total);
    for (int i = 0; i < total; ++i) swap_clique[i] = i;
    std::swap(swap_clique[2], swap_clique[3]);
    chain.automorphisms = {swap_coords, swap_clique};
  }
  return chain;
}

// Weight-k slice of the n-cube under rate-1 uniform ordered-pair swaps:
// each transposition neighbor carries rate 2/n^2.
Chain make_slice_exclusion(int n, int k) {
  require(n >= 2 && k >= 1 && k <= n - 1,
          "slice_exclusion(n,k) needs n >= 2 and 0 < k < n");
  require(n <= 24, "slice_exclusion(n,k) capped at n = 24");
  std::vector<int> masks;
  std::map<int, int> index;
  for (int w = 0; w < (1 << n); ++w)
    if (__builtin_popcount(static_cast<unsigned>(w)) == k) {
      index[w] = static_cast<int>(masks.size());
      masks.push_back(w);
    }
  const int m = static_cast<int>(masks.size());
  if (m > kMaxStates)
    fail("StateSpaceTooLarge",
         "slice has " + std::to_string(m) + " states");

  Chain chain;
  chain.states.reserve(m);
  for (int w : masks) chain.states.push_back(bit_label(w, n));
  chain.generator = Eigen::MatrixXd::Zero(m, m);
  const double rate = 2.0 / (static_cast<double>(n) * n);
  for (int s = 0; s < m; ++s) {
    int w = masks[s];
    for (int a = 0; a < n; ++a) {
      if (!(w >> a & 1)) continue;
      for (int b = 0; b < n; ++b) {
        if (w >> b & 1) continue;
        int v = (w ^ (1 << a)) | (1 << b);
        chain.generator(s, index.at(v)) = rate;
      }
    }
    chain.generator(s, s) = -rate * k * (n - k);
  }
  chain.pi = Eigen::VectorXd::Constant(m, 1.0 / m);
  chain.transitive = true;
  std::vector<int> swap_coords(m);
  for (int s = 0; s < m; ++s) {
    int w = masks[s];
    int b0 = w >> 0 & 1, b1 = w >> 1 & 1;
    int v = (w & ~3) | (b0 << 1) | b1;
    swap_coords[s] = index.at(v);
  }
  chain.automorphisms = {swap_coords};
  return chain;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::complete: return "complete";
    case Family::cycle: return "cycle";
    case Family::hypercube_walk: return "hypercube_walk";
    case Family::hypercube_rerandomize: return "hypercube_rerandomize";
    case Family::star: return "star";
    case Family::glued_cliques: return "glued_cliques";
    case Family::star_join: return "star_join";
    case Family::regular_glue: return "regular_glue";
    case Family::slice_exclusion: return "slice_exclusion";
  }
  fail("InvalidParams", "unknown family enum value");
}

Family family_from_name(const std::string& name) {
  static const std::map<std::string, Family> names = {
      {"complete", Family::complete},
      {"cycle", Family::cycle},
      {"hypercube_walk", Family::hypercube_walk},
      {"hypercube_rerandomize", Family::hypercube_rerandomize},
      {"star", Family::star},
      {"glued_cliques", Family::glued_cliques},
      {"star_join", Family::star_join},
      {"regular_glue", Family::regular_glue},
      {"slice_exclusion", Family::slice_exclusion},
  };
  auto it = names.find(name);
  if (it == names.end()) fail("UnknownFamily", "unknown family: " + name);
  return it->second;
}

Chain make_family(const FamilySpec& spec) {
  Chain chain;
  switch (spec.family) {
    case Family::complete: chain = make_complete(spec.n); break;
    case Family::cycle: chain = make_cycle(spec.n); break;
    case Family::hypercube_walk: chain = make_hypercube_walk(spec.n); break;
    case Family::hypercube_rerandomize:
      chain = make_hypercube_rerandomize(spec.n);
      break;
    case Family::star: chain = make_star(spec.n); break;
    case Family::glued_cliques: chain = make_glued_cliques(spec.n); break;
    case Family::star_join: chain = make_star_join(spec.n); break;
    case Family::regular_glue: chain = make_regular_glue(spec.n); break;
    case Family::slice_exclusion:
      chain = make_slice_exclusion(spec.n, spec.k);
      break;
  }
  chain.family = spec;
  return chain;
}

}  // namespace specnoise
