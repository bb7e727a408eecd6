#include "fewturn/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <random>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>

#include "fewturn/error.hpp"

namespace fewturn {

namespace {

void check_columns(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(Errc::invalid_input, fmt::format("column lengths differ ({} vs {})", xs.size(), ys.size()));
  }
  if (xs.empty()) throw Error(Errc::invalid_input, "empty columns");
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(Errc::invalid_input, "mean of an empty column");
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double mean_of_ratios(std::span<const double> xs, std::span<const double> ys) {
  check_columns(xs, ys);
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] == 0.0) throw Error(Errc::zero_denominator, fmt::format("zero denominator at index {}", i));
    total += (xs[i] - ys[i]) / ys[i];
  }
  return total / static_cast<double>(xs.size());
}

double ratio_of_means(std::span<const double> xs, std::span<const double> ys) {
  check_columns(xs, ys);
  const double my = mean(ys);
  if (my == 0.0) throw Error(Errc::zero_denominator, "mean of the denominator column is zero");
  return (mean(xs) - my) / my;
}

Sampling Sampling::parse(std::string_view text, std::uint64_t seed) {
  Sampling s;
  s.seed = seed;
  if (text == "all") return s;
  constexpr std::string_view prefix = "random:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto digits = text.substr(prefix.size());
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && n > 0) {
      s.kind = Kind::random;
      s.count = n;
      return s;
    }
  }
  throw Error(Errc::invalid_input, fmt::format("pair sampling must be 'all' or 'random:N', got '{}'", text));
}

namespace {

/// Uniform draw in [0, bound) by rejection; independent of the standard
/// library's distribution implementation so samples are portable.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  while (true) {
    const std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

std::pair<JunctionId, JunctionId> pair_at(std::uint64_t k, std::size_t n) {
  const auto from = static_cast<std::uint32_t>(k / (n - 1));
  auto to = static_cast<std::uint32_t>(k % (n - 1));
  if (to >= from) ++to;
  return {JunctionId(from), JunctionId(to)};
}

}  // namespace

std::vector<std::pair<JunctionId, JunctionId>> sample_pairs(std::size_t junction_count, const Sampling& sampling) {
  std::vector<std::pair<JunctionId, JunctionId>> out;
  if (junction_count < 2) return out;
  const std::uint64_t total = static_cast<std::uint64_t>(junction_count) * (junction_count - 1);
  if (sampling.kind == Sampling::Kind::all_pairs || sampling.count >= total) {
    out.reserve(total);
    for (std::uint64_t k = 0; k < total; ++k) out.push_back(pair_at(k, junction_count));
    return out;
  }
  // Floyd's sampling of `count` distinct indices.
  std::mt19937_64 rng(sampling.seed);
  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> picked;
  for (std::uint64_t j = total - sampling.count; j < total; ++j) {
    const std::uint64_t t = draw_below(rng, j + 1);
    const std::uint64_t v = chosen.insert(t).second ? t : j;
    if (v == j) chosen.insert(j);
    picked.push_back(v);
  }
  std::sort(picked.begin(), picked.end());
  out.reserve(picked.size());
  for (std::uint64_t k : picked) out.push_back(pair_at(k, junction_count));
  return out;
}

namespace {

PairResult evaluate(const RoutePlanner& planner, JunctionId from, JunctionId to) {
  PairResult pr;
  pr.from = from;
  pr.to = to;
  for (Mode m : kAllModes) {
    ModeResult& r = pr.modes[static_cast<std::size_t>(m)];
    try {
      const Route route = planner.route_between_junctions(m, from, to);
      r.ok = true;
      r.distance = route.distance;
      r.turns = mode_turns(route);
      r.turns_topological = route.turns_topological;
      r.turns_perceptual = route.turns_perceptual;
      r.turns_deflection = route.turns_deflection;
      r.truncated = route.truncated;
    } catch (const Error& e) {
      r.ok = false;
      r.status = to_string(e.code());
    }
  }
  return pr;
}

bool complete(const PairResult& pr) {
  return std::all_of(pr.modes.begin(), pr.modes.end(), [](const ModeResult& r) { return r.ok; });
}

}  // namespace

ComparisonStats compare_modes(std::span<const PairResult> pairs, Mode first, Mode second) {
  ComparisonStats s;
  s.first = first;
  s.second = second;
  std::vector<double> xs, ys, tx, ty, dt;
  for (const PairResult& pr : pairs) {
    if (!complete(pr)) {
      ++s.excluded;
      continue;
    }
    xs.push_back(pr.result(first).distance);
    ys.push_back(pr.result(second).distance);
    tx.push_back(pr.result(first).turns);
    ty.push_back(pr.result(second).turns);
    dt.push_back(tx.back() - ty.back());
  }
  s.n = xs.size();
  if (s.n == 0) return s;
  s.turns_first = mean(tx);
  s.turns_second = mean(ty);
  s.turn_delta_mean = mean(dt);
  try {
    s.beta = ratio_of_means(xs, ys);
  } catch (const Error& e) {
    if (e.code() != Errc::zero_denominator) throw;
  }
  try {
    s.alpha = mean_of_ratios(xs, ys);
  } catch (const Error& e) {
    if (e.code() != Errc::zero_denominator) throw;
  }
  return s;
}

BenchmarkReport run_benchmark(const RoutePlanner& planner, const BenchmarkOptions& options) {
  const std::size_t junctions = planner.network().junction_count();
  const auto sample = sample_pairs(junctions, options.sampling);

  BenchmarkReport report;
  report.requested = options.sampling.kind == Sampling::Kind::random ? options.sampling.count : sample.size();
  if (report.requested > sample.size()) {
    report.warnings.push_back(
        fmt::format("requested {} pairs but only {} exist; using all of them", report.requested, sample.size()));
  }

  report.pairs.resize(sample.size());
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, sample.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= sample.size()) return;
      try {
        report.pairs[i] = evaluate(planner, sample[i].first, sample[i].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = sample.size();
        return;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& [a, b] : kComparisonPairs) report.comparisons.push_back(compare_modes(report.pairs, a, b));
  return report;
}

namespace {

std::string percent(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v * 100.0) : "NA"; }

}  // namespace

std::string report_csv(const BenchmarkReport& report) {
  std::string out = "pair,D_percent_beta,D_percent_alpha,T_mode1,T_mode2,n,excluded\n";
  for (const auto& c : report.comparisons) {
    out += fmt::format("{}/{},{},{},{:.6f},{:.6f},{},{}\n", to_string(c.first), to_string(c.second), percent(c.beta),
                       percent(c.alpha), c.turns_first, c.turns_second, c.n, c.excluded);
  }
  return out;
}

std::string pairs_csv(const BenchmarkReport& report) {
  std::string out = "from,to";
  for (Mode m : kAllModes) out += fmt::format(",{0}_distance,{0}_turns,{0}_status", to_string(m));
  out += "\n";
  for (const auto& pr : report.pairs) {
    out += fmt::format("{},{}", pr.from.value, pr.to.value);
    for (Mode m : kAllModes) {
      const auto& r = pr.result(m);
      out += r.ok ? fmt::format(",{:.6f},{},ok", r.distance, r.turns) : fmt::format(",,,{}", r.status);
    }
    out += "\n";
  }
  return out;
}

}  // namespace fewturn
