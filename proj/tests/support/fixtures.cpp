#include "fixtures.hpp"

#include <atomic>

#include <unistd.h>

namespace fewturn::test {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("fewturn-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace fewturn::test
