#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "fewturn/connectivity.hpp"
#include "fewturn/natural_roads.hpp"
#include "fewturn/network.hpp"
#include "fewturn/routing.hpp"

namespace fewturn {

struct BuildParams {
  double threshold_deg = kDefaultJoinThresholdDeg;
  /// Unset fields fall back to default_split_params() of the network.
  std::optional<double> split_distance;
  std::optional<double> split_ratio;
  std::size_t sequence_cap = kDefaultSequenceCap;
};

/// Everything routing needs, derived from one network with one parameter
/// set. Immutable; safe to share between threads.
class Engine {
 public:
  static Engine build(RoadNetwork net, const BuildParams& params = {});

  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;
  ~Engine();

  const RoadNetwork& network() const;
  const RoadSet& unsplit() const;
  const RoadSet& split() const;
  const RoadGraph& graph_unsplit() const;
  const RoadGraph& graph_split() const;
  const RoadSet& road_set(RoadSetKind kind) const { return kind == RoadSetKind::split ? split() : unsplit(); }
  const RoadGraph& graph(RoadSetKind kind) const { return kind == RoadSetKind::split ? graph_split() : graph_unsplit(); }
  const RoutePlanner& planner() const;

  double threshold_deg() const;
  const SplitParams& split_params() const;
  std::size_t sequence_cap() const;

  /// Digest over the network content and the resolved parameters.
  std::uint64_t hash() const;
  std::string hash_hex() const;

 private:
  struct State;
  explicit Engine(std::unique_ptr<State> state);
  std::unique_ptr<State> state_;

  friend Engine read_snapshot(const std::string& bytes);
};

/// Versioned binary container: magic, version, payload kind, then tagged
/// sections. Networks alone (after ingest) and full engines share the format.
std::string write_network(const RoadNetwork& net);
RoadNetwork read_network(const std::string& bytes);
std::string write_snapshot(const Engine& engine);
Engine read_snapshot(const std::string& bytes);

enum class ContainerKind { network, snapshot };

/// Kind of a container, or nullopt when the bytes are not one.
std::optional<ContainerKind> container_kind(const std::string& bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace fewturn
