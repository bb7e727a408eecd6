#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fewturn/ids.hpp"
#include "fewturn/routing.hpp"

namespace fewturn {

/// Mean over i of (xs[i] - ys[i]) / ys[i].
double mean_of_ratios(std::span<const double> xs, std::span<const double> ys);

/// (mean(xs) - mean(ys)) / mean(ys).
double ratio_of_means(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> xs);

struct Sampling {
  enum class Kind { all_pairs, random } kind = Kind::all_pairs;
  std::size_t count = 0;
  std::uint64_t seed = 0;

  /// "all" or "random:N".
  static Sampling parse(std::string_view text, std::uint64_t seed = 0);
};

/// Ordered pairs of distinct junctions. Random sampling draws without
/// replacement and returns pairs in (from, to) order; a request larger than
/// the pair count is clamped.
std::vector<std::pair<JunctionId, JunctionId>> sample_pairs(std::size_t junction_count, const Sampling& sampling);

struct ModeResult {
  bool ok = false;
  std::string status = "ok";  // error category when !ok
  double distance = 0.0;
  int turns = 0;  // mode_turns() of the route
  int turns_topological = 0;
  int turns_perceptual = 0;
  int turns_deflection = 0;
  bool truncated = false;
};

struct PairResult {
  JunctionId from;
  JunctionId to;
  std::array<ModeResult, 4> modes;  // indexed by Mode

  const ModeResult& result(Mode m) const { return modes[static_cast<std::size_t>(m)]; }
};

struct ComparisonStats {
  Mode first = Mode::ft;
  Mode second = Mode::st;
  std::optional<double> beta;   // ratio of mean distances, primary
  std::optional<double> alpha;  // mean of per-pair distance ratios
  double turns_first = 0.0;     // mean turns
  double turns_second = 0.0;
  double turn_delta_mean = 0.0;
  std::size_t n = 0;
  std::size_t excluded = 0;
};

inline constexpr std::pair<Mode, Mode> kComparisonPairs[] = {
    {Mode::ft, Mode::sp}, {Mode::ft, Mode::st}, {Mode::fts, Mode::sp}, {Mode::fts, Mode::st}, {Mode::sp, Mode::st}};

struct BenchmarkOptions {
  Sampling sampling;
  unsigned threads = 1;  // 0: one per hardware thread
};

struct BenchmarkReport {
  std::size_t requested = 0;
  std::vector<PairResult> pairs;
  std::vector<ComparisonStats> comparisons;
  std::vector<std::string> warnings;
};

/// Routes every sampled pair in all four modes (junction-anchored endpoints)
/// and aggregates the comparison pairs. A pair where any mode fails is
/// excluded from every aggregate. Output does not depend on `threads`.
BenchmarkReport run_benchmark(const RoutePlanner& planner, const BenchmarkOptions& options);

ComparisonStats compare_modes(std::span<const PairResult> pairs, Mode first, Mode second);

/// One row per comparison pair: pair,D_percent_beta,D_percent_alpha,T_mode1,
/// T_mode2,n,excluded. Distance differences are in percent.
std::string report_csv(const BenchmarkReport& report);

/// Per-pair detail rows, for inspection.
std::string pairs_csv(const BenchmarkReport& report);

}  // namespace fewturn
