#include "fewturn/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "fewturn/error.hpp"

namespace fewturn {

namespace {

/// Uniform in [lo, hi) from the top 53 bits of one draw.
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

std::size_t below(std::mt19937_64& rng, std::size_t bound) {
  return static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(bound)));
}

/// Straight segment a-b with an interior vertex pushed sideways by `offset`.
std::vector<Point> bent(const Point& a, const Point& b, double offset) {
  const Vec2 d = b - a;
  const double len = norm(d);
  const Point mid{(a.x + b.x) / 2 + (-d.y / len) * offset, (a.y + b.y) / 2 + (d.x / len) * offset};
  return {a, mid, b};
}

RoadNetwork finish(std::vector<RawFeature> features, const char* what) {
  LoadResult r = build_network(std::move(features), Projection{});
  if (!r.rejected.empty()) throw Error(Errc::invalid_input, fmt::format("{}: {}", what, r.rejected.front()));
  const NodingReport report = validate_noding(r.network, 0.0);
  if (!report.routable()) throw Error(Errc::invalid_input, fmt::format("{}: generated segments cross", what));
  return std::move(r.network);
}

}  // namespace

RoadNetwork perturbed_grid(const PerturbedGridOptions& o) {
  if (!(o.spacing > 0.0) || !(o.extent >= o.spacing)) {
    throw Error(Errc::invalid_input, fmt::format("grid extent {} and spacing {} are incompatible", o.extent, o.spacing));
  }
  if (o.junction_jitter < 0.0 || o.junction_jitter >= 0.25 || o.bend_jitter < 0.0 || o.bend_jitter >= 0.25) {
    throw Error(Errc::invalid_input, "grid jitter must lie in [0, 0.25)");
  }
  const auto n = static_cast<std::size_t>(std::floor(o.extent / o.spacing + 1e-9)) + 1;
  std::mt19937_64 rng(o.seed);
  const double jj = o.junction_jitter * o.spacing;
  std::vector<Point> at(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) * o.spacing + uniform(rng, -jj, jj);
      const double y = static_cast<double>(j) * o.spacing + uniform(rng, -jj, jj);
      at[j * n + i] = {x, y};
    }
  }
  const double bj = o.bend_jitter * o.spacing;
  std::vector<RawFeature> features;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      features.push_back({bent(at[j * n + i], at[j * n + i + 1], uniform(rng, -bj, bj)),
                          fmt::format("Street {}", j + 1), fmt::format("h{}_{}", i, j)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      features.push_back({bent(at[j * n + i], at[(j + 1) * n + i], uniform(rng, -bj, bj)),
                          fmt::format("Avenue {}", i + 1), fmt::format("v{}_{}", i, j)});
    }
  }
  return finish(std::move(features), "perturbed grid");
}

RoadNetwork random_network(std::uint64_t seed, std::size_t max_segments) {
  if (max_segments < 2) throw Error(Errc::invalid_input, "random networks need room for at least 2 segments");
  std::mt19937_64 rng(seed);
  const std::size_t cols = 3 + below(rng, 2);
  const std::size_t rows = 3 + below(rng, 2);
  constexpr double kSpacing = 10.0;
  std::vector<Point> at(cols * rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      at[r * cols + c] = {static_cast<double>(c) * kSpacing + uniform(rng, -2.0, 2.0),
                          static_cast<double>(r) * kSpacing + uniform(rng, -2.0, 2.0)};
    }
  }

  struct Edge {
    std::size_t a, b;
  };
  std::vector<Edge> lattice;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) lattice.push_back({r * cols + c, r * cols + c + 1});
      if (r + 1 < rows) lattice.push_back({r * cols + c, (r + 1) * cols + c});
    }
  }
  std::shuffle(lattice.begin(), lattice.end(), rng);

  // Random spanning tree, then extra edges.
  std::vector<std::size_t> parent(at.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<Edge> chosen, spare;
  for (const Edge& e : lattice) {
    const auto ra = root(e.a), rb = root(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      chosen.push_back(e);
    } else {
      spare.push_back(e);
    }
  }
  for (const Edge& e : spare) {
    if (chosen.size() < max_segments && uniform(rng, 0.0, 1.0) < 0.6) chosen.push_back(e);
  }
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      if (chosen.size() >= max_segments || uniform(rng, 0.0, 1.0) >= 0.25) continue;
      // At most one diagonal per cell, so diagonals never cross.
      if (uniform(rng, 0.0, 1.0) < 0.5) {
        chosen.push_back({r * cols + c, (r + 1) * cols + c + 1});
      } else {
        chosen.push_back({r * cols + c + 1, (r + 1) * cols + c});
      }
    }
  }

  std::vector<RawFeature> features;
  for (std::size_t k = 0; k < chosen.size(); ++k) {
    const Point& a = at[chosen[k].a];
    const Point& b = at[chosen[k].b];
    RawFeature f;
    f.points = uniform(rng, 0.0, 1.0) < 0.3 ? bent(a, b, uniform(rng, -1.5, 1.5)) : std::vector<Point>{a, b};
    f.source_id = fmt::format("e{}", k);
    features.push_back(std::move(f));
  }
  return finish(std::move(features), "random network");
}

std::string to_edge_list(const RoadNetwork& net) {
  if (net.projection().geographic) {
    throw Error(Errc::invalid_input, "edge lists hold planar coordinates only");
  }
  std::string out;
  for (const Segment& s : net.segments()) {
    out += s.source_id.empty() ? fmt::format("s{}", s.id.value) : s.source_id;
    for (const Point& p : s.geometry.points()) out += fmt::format(" {} {}", p.x, p.y);
    if (s.name) out += " " + *s.name;
    out += "\n";
  }
  return out;
}

}  // namespace fewturn
