#pragma once

#include <filesystem>
#include <string>

#include "fewturn/engine.hpp"
#include "fewturn/network.hpp"

namespace fewturn::test {

inline std::filesystem::path data_path(const std::string& name) { return std::filesystem::path(FEWTURN_DATA_DIR) / name; }
inline std::filesystem::path docs_path(const std::string& name) { return std::filesystem::path(FEWTURN_DOCS_DIR) / name; }

inline RoadNetwork load_fixture(const std::string& name, const LoadOptions& options = {}) {
  return load_network_file(data_path(name), options).network;
}

// Split thresholds that cut the hairpin at its apex and the sharp fixture at its kinks.
inline BuildParams bend_params() {
  BuildParams p;
  p.split_distance = 10.0;
  p.split_ratio = 0.5;
  return p;
}

inline BuildParams sharp_params() {
  BuildParams p;
  p.split_distance = 4.0;
  p.split_ratio = 1.0;
  return p;
}

inline Engine fixture_engine(const std::string& name, const BuildParams& params = {}) {
  return Engine::build(load_fixture(name), params);
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace fewturn::test
