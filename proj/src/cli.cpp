#include "fewturn/cli.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "fewturn/benchmark.hpp"
#include "fewturn/engine.hpp"
#include "fewturn/error.hpp"
#include "fewturn/instructions.hpp"
#include "fewturn/service.hpp"
#include "fewturn/stats.hpp"

namespace fewturn {

namespace {

/// Config-file keys a subcommand accepts, each tied to the flag it fills in.
class ConfigKeys {
 public:
  template <typename T>
  void bind(CLI::App* sub, const std::string& key, CLI::Option* opt, T& target) {
    keys_[sub].push_back({key, opt, [&target](const nlohmann::json& v) { target = v.get<T>(); }});
  }

  /// Fills every bound value whose flag was not given on the command line.
  void apply(CLI::App* sub, const nlohmann::json& config) const {
    const auto it = keys_.find(sub);
    if (it == keys_.end()) return;
    for (const auto& k : it->second) {
      if (!config.contains(k.key) || k.option->count() > 0) continue;
      try {
        k.set(config.at(k.key));
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::invalid_input, fmt::format("config key '{}': {}", k.key, e.what()));
      }
    }
  }

  bool known(const std::string& key) const {
    for (const auto& [sub, list] : keys_) {
      for (const auto& k : list) {
        if (k.key == key) return true;
      }
    }
    return false;
  }

 private:
  struct Key {
    std::string key;
    CLI::Option* option;
    std::function<void(const nlohmann::json&)> set;
  };
  std::map<CLI::App*, std::vector<Key>> keys_;
};

CoordinateMode parse_coords(const std::string& s) {
  if (s == "auto") return CoordinateMode::automatic;
  if (s == "planar") return CoordinateMode::planar;
  if (s == "geographic") return CoordinateMode::geographic;
  throw Error(Errc::invalid_input, fmt::format("--coords must be auto, planar or geographic, got '{}'", s));
}

/// A snapshot, a network container, or a raw GeoJSON/edge-list file; the
/// latter two are built with `params`.
Engine load_engine(const std::string& path, const BuildParams& params) {
  const std::string bytes = read_file(path);
  const auto kind = container_kind(bytes);
  if (kind == ContainerKind::snapshot) return read_snapshot(bytes);
  if (kind == ContainerKind::network) return Engine::build(read_network(bytes), params);
  return Engine::build(load_network_file(path).network, params);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fewest-turn route planning over natural roads", "fewturn"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default flag values (flags win)")->check(CLI::ExistingFile);
  ConfigKeys config;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load and validate a network");
  std::string ingest_input, ingest_output, coords = "auto";
  double snap = 0.0, tolerance = -1.0;
  ingest->add_option("input", ingest_input, "GeoJSON or edge-list file")->required()->check(CLI::ExistingFile);
  ingest->add_option("-o,--output", ingest_output, "Network container to write")->required();
  config.bind(ingest, "coords", ingest->add_option("--coords", coords, "auto, planar or geographic"), coords);
  config.bind(ingest, "snap", ingest->add_option("--snap", snap, "Merge end points closer than this"), snap);
  config.bind(ingest, "tolerance",
              ingest->add_option("--tolerance", tolerance,
                                 "Report junction pairs closer than this (default 0.1% of the extent)"),
              tolerance);

  // roads
  auto* roads = app.add_subcommand("roads", "Build natural roads, split roads and their graphs");
  std::string roads_input, roads_output;
  double angle = kDefaultJoinThresholdDeg, split_distance = 0.0, split_ratio = 0.0;
  std::size_t cap = kDefaultSequenceCap;
  roads->add_option("input", roads_input, "Network container or raw network file")->required()->check(CLI::ExistingFile);
  roads->add_option("-o,--output", roads_output, "Snapshot to write")->required();
  auto* angle_opt = roads->add_option("--angle", angle, "Join threshold in degrees");
  auto* sd_opt = roads->add_option("--split-distance", split_distance, "Split offset threshold (map units)");
  auto* sr_opt = roads->add_option("--split-ratio", split_ratio, "Split offset/chord threshold");
  auto* cap_opt = roads->add_option("--cap", cap, "Fewest-turn sequences examined per query");
  config.bind(roads, "angle", angle_opt, angle);
  config.bind(roads, "split_distance", sd_opt, split_distance);
  config.bind(roads, "split_ratio", sr_opt, split_ratio);
  config.bind(roads, "cap", cap_opt, cap);

  // route
  auto* route = app.add_subcommand("route", "Compute one route");
  std::string route_input, from_text, to_text, mode_text = "ft", xml_path, geojson_path, json_path;
  double snap_radius = kDefaultSnapRadius;
  route->add_option("snapshot", route_input, "Snapshot")->required()->check(CLI::ExistingFile);
  route->add_option("--from", from_text, "Origin x,y (lon,lat for geographic data)")->required();
  route->add_option("--to", to_text, "Destination x,y")->required();
  config.bind(route, "mode", route->add_option("--mode", mode_text, "st, sp, ft or fts"), mode_text);
  route->add_option("--xml", xml_path, "Write turn-by-turn XML here");
  route->add_option("--geojson", geojson_path, "Write the route feature here");
  route->add_option("--json", json_path, "Write the full JSON answer (as served over HTTP) here");
  config.bind(route, "snap_radius", route->add_option("--snap-radius", snap_radius, "Off-network limit"), snap_radius);

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark all four modes over junction pairs");
  std::string bench_input, bench_output, detail_output, pairs_text = "all";
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bench->add_option("snapshot", bench_input, "Snapshot")->required()->check(CLI::ExistingFile);
  bench->add_option("-o,--output", bench_output, "Report CSV (default stdout)");
  bench->add_option("--detail", detail_output, "Per-pair CSV");
  config.bind(bench, "pairs", bench->add_option("--pairs", pairs_text, "all or random:N"), pairs_text);
  config.bind(bench, "seed", bench->add_option("--seed", seed, "Sampling seed"), seed);
  config.bind(bench, "threads", bench->add_option("--threads", threads, "Worker threads (0: all cores)"), threads);

  // stats
  auto* stats = app.add_subcommand("stats", "Size of the segment and road representations");
  std::string stats_input, stats_output, stats_name;
  stats->add_option("snapshot", stats_input, "Snapshot")->required()->check(CLI::ExistingFile);
  stats->add_option("-o,--output", stats_output, "CSV (default stdout)");
  stats->add_option("--name", stats_name, "Network label (default: file stem)");

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  std::string serve_input, host = "127.0.0.1";
  int port = 8080;
  double serve_snap = kDefaultSnapRadius;
  serve->add_option("snapshot", serve_input, "Snapshot")->required()->check(CLI::ExistingFile);
  config.bind(serve, "port", serve->add_option("--port", port, "TCP port (0: any free port)"), port);
  config.bind(serve, "host", serve->add_option("--host", host, "Listen address"), host);
  config.bind(serve, "snap_radius", serve->add_option("--snap-radius", serve_snap, "Off-network limit"), serve_snap);

  // export
  auto* exp = app.add_subcommand("export", "Write network, roads or road graphs");
  std::string export_input, export_output, what = "roads";
  exp->add_option("snapshot", export_input, "Snapshot")->required()->check(CLI::ExistingFile);
  exp->add_option("-o,--output", export_output, "Output file (default stdout)");
  exp->add_option("--what", what, "network, roads, roads-split, graph or graph-split")
      ->check(CLI::IsMember({"network", "roads", "roads-split", "graph", "graph-split"}));

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    // CLI11 has its own code per error kind; callers only see 0 or 2.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      nlohmann::json cfg;
      try {
        cfg = nlohmann::json::parse(read_file(config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::invalid_input, fmt::format("config file: {}", e.what()));
      }
      if (!cfg.is_object()) throw Error(Errc::invalid_input, "config file must hold a JSON object");
      for (const auto& [key, value] : cfg.items()) {
        if (!config.known(key)) throw Error(Errc::invalid_input, fmt::format("unknown config key '{}'", key));
      }
      for (auto* sub : app.get_subcommands()) config.apply(sub, cfg);
    }

    BuildParams params;
    if (*ingest) {
      LoadOptions opts;
      opts.coordinates = parse_coords(coords);
      opts.snap_tolerance = snap;
      LoadResult lr = load_network_file(ingest_input, opts);
      for (const auto& r : lr.rejected) err << "warning: rejected " << r << "\n";
      const RoadNetwork& net = lr.network;
      const double tol = tolerance >= 0.0 ? tolerance : 1e-3 * net.bbox_diagonal();
      const NodingReport report = validate_noding(net, tol);
      out << fmt::format("segments={} junctions={} components={} rejected={} crossings={} close_junctions={}\n",
                         net.segment_count(), net.junction_count(), net.component_count(), lr.rejected.size(),
                         report.crossings.size(), report.close_junctions.size());
      out << "crs: " << net.crs_note() << "\n";
      for (const auto& c : report.close_junctions) {
        err << fmt::format("warning: junctions {} and {} are {} apart\n", c.a.value, c.b.value, c.distance);
      }
      if (!report.routable()) {
        for (const auto& c : report.crossings) {
          err << fmt::format("error: segments {} ({}) and {} ({}) meet at ({}, {}) without a junction\n", c.a.value,
                             net.segment(c.a).source_id, c.b.value, net.segment(c.b).source_id, c.at.x, c.at.y);
        }
        err << "error: network is not noded; nothing written\n";
        return 1;
      }
      write_file(ingest_output, write_network(net));
      return 0;
    }
    if (*roads) {
      params.threshold_deg = angle;
      if (sd_opt->count() > 0 || split_distance != 0.0) params.split_distance = split_distance;
      if (sr_opt->count() > 0 || split_ratio != 0.0) params.split_ratio = split_ratio;
      params.sequence_cap = cap;
      const std::string bytes = read_file(roads_input);
      if (container_kind(bytes) == ContainerKind::snapshot) {
        throw Error(Errc::invalid_input, "roads expects a network, not a snapshot");
      }
      RoadNetwork net = container_kind(bytes) ? read_network(bytes) : load_network_file(roads_input).network;
      const Engine engine = Engine::build(std::move(net), params);
      out << fmt::format("roads_i={} roads_ii={} links_i={} links_ii={} split_distance={} split_ratio={} hash={}\n",
                         engine.unsplit().size(), engine.split().size(), engine.graph_unsplit().link_count(),
                         engine.graph_split().link_count(), format_length(engine.split_params().distance),
                         format_length(engine.split_params().ratio), engine.hash_hex());
      write_file(roads_output, write_snapshot(engine));
      return 0;
    }

    const std::string& input = *route ? route_input
                               : *bench ? bench_input
                               : *stats ? stats_input
                               : *serve ? serve_input
                                        : export_input;
    const Engine engine = load_engine(input, params);

    if (*route) {
      const auto mode = parse_mode(mode_text);
      if (!mode) throw Error(Errc::invalid_input, fmt::format("unknown mode '{}'", mode_text));
      const RouteAnswer answer =
          answer_route(engine, parse_coordinate(from_text), parse_coordinate(to_text), *mode, snap_radius);
      const Route& r = answer.route;
      std::string roads_list;
      for (RoadId id : r.road_sequence) roads_list += (roads_list.empty() ? "" : ",") + std::to_string(id.value);
      out << fmt::format("turns={} distance={} turns_topological={} turns_perceptual={} turns_deflection={} mode={} "
                         "roads={}{}\n",
                         mode_turns(r), format_length(r.distance), r.turns_topological, r.turns_perceptual,
                         r.turns_deflection, to_string(r.mode), roads_list, r.truncated ? " truncated" : "");
      if (!xml_path.empty()) {
        emit(xml_path, to_xml(route_instructions(r, engine.planner().road_set(r.mode), engine.network())), out);
      }
      if (!geojson_path.empty()) emit(geojson_path, route_geojson(r, engine.network()).dump(2) + "\n", out);
      if (!json_path.empty()) emit(json_path, route_json(engine, answer).dump() + "\n", out);
      return 0;
    }
    if (*bench) {
      BenchmarkOptions opts;
      opts.sampling = Sampling::parse(pairs_text, seed);
      opts.threads = threads;
      const BenchmarkReport report = run_benchmark(engine.planner(), opts);
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      emit(bench_output, report_csv(report), out);
      if (!detail_output.empty()) emit(detail_output, pairs_csv(report), out);
      return 0;
    }
    if (*stats) {
      const std::string name = stats_name.empty() ? std::filesystem::path(stats_input).stem().string() : stats_name;
      const NetworkStats s = network_stats(engine.network(), engine.unsplit(), engine.split());
      emit(stats_output, stats_csv_header() + stats_csv_row(name, s), out);
      return 0;
    }
    if (*serve) {
      const Service service(engine, serve_snap);
      HttpServer server(service);
      const int bound = server.bind(host, port);
      out << fmt::format("listening on http://{}:{} (snapshot {})", host, bound, engine.hash_hex()) << std::endl;
      server.listen();
      return 0;
    }
    if (what == "network") {
      emit(export_output, network_geojson(engine.network()).dump() + "\n", out);
    } else if (what == "roads" || what == "roads-split") {
      const RoadSet& rs = what == "roads" ? engine.unsplit() : engine.split();
      emit(export_output, roads_geojson(rs, engine.network()).dump() + "\n", out);
    } else {
      emit(export_output, engine.graph(what == "graph" ? RoadSetKind::unsplit : RoadSetKind::split).edge_list(), out);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
    return 1;
  }
}

}  // namespace fewturn
