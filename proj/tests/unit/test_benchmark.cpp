#include <gtest/gtest.h>

#include <set>

#include "fewturn/benchmark.hpp"
#include "fewturn/engine.hpp"
#include "fewturn/error.hpp"
#include "fixtures.hpp"

using namespace fewturn;

namespace {

// Reference sample of paired route lengths.
const std::vector<double> kA{132053, 311774, 273472, 89089, 376259, 102491, 415971, 142517, 308530, 312979};
const std::vector<double> kB{102110, 309624, 457325, 370157, 246054, 363935, 197516, 26237, 186460, 378142};

ModeResult ok(double d, int t) {
  ModeResult r;
  r.ok = true;
  r.distance = d;
  r.turns = t;
  return r;
}

}  // namespace

TEST(Statistics, ReferenceSampleMeans) {
  EXPECT_DOUBLE_EQ(mean(kA), 246513.5);
  EXPECT_DOUBLE_EQ(mean(kB), 263756.0);
}

TEST(Statistics, ReferenceSampleRatios) {
  EXPECT_NEAR(mean_of_ratios(kA, kB), 0.497, 0.005);
  EXPECT_NEAR(ratio_of_means(kA, kB), -0.0654, 0.0005);
}

TEST(Statistics, AgreesWithLongDoubleReference) {
  long double per_pair = 0.0L;
  long double sa = 0.0L;
  long double sb = 0.0L;
  for (std::size_t i = 0; i < kA.size(); ++i) {
    per_pair += (static_cast<long double>(kA[i]) - kB[i]) / kB[i];
    sa += kA[i];
    sb += kB[i];
  }
  EXPECT_NEAR(mean_of_ratios(kA, kB), static_cast<double>(per_pair / kA.size()), 1e-13);
  EXPECT_NEAR(ratio_of_means(kA, kB), static_cast<double>((sa - sb) / sb), 1e-13);
}

TEST(Statistics, Errors) {
  const std::vector<double> a{1, 2};
  const std::vector<double> b{1, 0};
  try {
    mean_of_ratios(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::zero_denominator);
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
  }
  EXPECT_THROW(ratio_of_means(a, std::vector<double>{0, 0}), Error);
  EXPECT_THROW(ratio_of_means(a, std::vector<double>{1}), Error);
  EXPECT_THROW(mean(std::vector<double>{}), Error);
}

TEST(Sampling, Parse) {
  EXPECT_EQ(Sampling::parse("all").kind, Sampling::Kind::all_pairs);
  const Sampling s = Sampling::parse("random:25", 9);
  EXPECT_EQ(s.kind, Sampling::Kind::random);
  EXPECT_EQ(s.count, 25u);
  EXPECT_EQ(s.seed, 9u);
  for (const char* bad : {"random:", "random:0", "random:x", "some", "random:5x"}) {
    EXPECT_THROW(Sampling::parse(bad), Error) << bad;
  }
}

TEST(Sampling, AllPairsAreOrderedAndDistinct) {
  const auto pairs = sample_pairs(5, Sampling::parse("all"));
  ASSERT_EQ(pairs.size(), 20u);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const auto& [a, b] : pairs) {
    EXPECT_NE(a, b);
    seen.insert({a.value, b.value});
  }
  EXPECT_EQ(seen.size(), 20u);
  EXPECT_TRUE(std::is_sorted(pairs.begin(), pairs.end()));
  EXPECT_TRUE(sample_pairs(1, Sampling::parse("all")).empty());
}

TEST(Sampling, RandomDrawIsDistinctSortedAndSeeded) {
  const auto a = sample_pairs(169, Sampling::parse("random:1000", 7));
  const auto b = sample_pairs(169, Sampling::parse("random:1000", 7));
  const auto c = sample_pairs(169, Sampling::parse("random:1000", 8));
  ASSERT_EQ(a.size(), 1000u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
  for (const auto& [x, y] : a) {
    EXPECT_NE(x, y);
    EXPECT_LT(x.index(), 169u);
    EXPECT_LT(y.index(), 169u);
  }
}

// Every pair should turn up with roughly equal frequency across seeds.
TEST(Sampling, RandomDrawIsRoughlyUniform) {
  std::vector<int> hits(12, 0);
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    for (const auto& [a, b] : sample_pairs(4, Sampling::parse("random:3", seed))) {
      ++hits[a.index() * 3 + (b.index() > a.index() ? b.index() - 1 : b.index())];
    }
  }
  for (int h : hits) EXPECT_NEAR(h, 750, 120);
}

TEST(Sampling, OversizedRequestIsClamped) {
  EXPECT_EQ(sample_pairs(4, Sampling::parse("random:500")).size(), 12u);
}

TEST(Compare, ExcludesPairsWhereAnyModeFailed) {
  std::vector<PairResult> pairs(3);
  for (auto& p : pairs) {
    for (auto& m : p.modes) m = ok(10.0, 1);
  }
  pairs[0].modes[static_cast<std::size_t>(Mode::ft)] = ok(12.0, 0);
  pairs[2].modes[static_cast<std::size_t>(Mode::sp)].ok = false;
  const ComparisonStats s = compare_modes(pairs, Mode::ft, Mode::st);
  EXPECT_EQ(s.n, 2u);
  EXPECT_EQ(s.excluded, 1u);
  ASSERT_TRUE(s.beta.has_value());
  EXPECT_NEAR(*s.beta, 0.1, 1e-12);
  EXPECT_NEAR(*s.alpha, 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(s.turns_first, 0.5);
  EXPECT_DOUBLE_EQ(s.turns_second, 1.0);
  EXPECT_DOUBLE_EQ(s.turn_delta_mean, -0.5);
}

TEST(Compare, ZeroDistancesLeaveRatiosUndefined) {
  std::vector<PairResult> pairs(1);
  for (auto& m : pairs[0].modes) m = ok(0.0, 0);
  const ComparisonStats s = compare_modes(pairs, Mode::ft, Mode::st);
  EXPECT_EQ(s.n, 1u);
  EXPECT_FALSE(s.beta.has_value());
  EXPECT_FALSE(s.alpha.has_value());
  BenchmarkReport r;
  r.comparisons.push_back(s);
  EXPECT_EQ(report_csv(r), "pair,D_percent_beta,D_percent_alpha,T_mode1,T_mode2,n,excluded\nFT/ST,NA,NA,0.000000,0.000000,1,0\n");
}

TEST(Benchmark, GridReportAndThreadIndependence) {
  const Engine e = test::fixture_engine("grid.txt");
  BenchmarkOptions o;
  o.sampling = Sampling::parse("all");
  const BenchmarkReport one = run_benchmark(e.planner(), o);
  o.threads = 3;
  const BenchmarkReport three = run_benchmark(e.planner(), o);
  EXPECT_EQ(report_csv(one), report_csv(three));
  EXPECT_EQ(pairs_csv(one), pairs_csv(three));
  ASSERT_EQ(one.pairs.size(), 240u);
  ASSERT_EQ(one.comparisons.size(), 5u);
  for (const ComparisonStats& c : one.comparisons) {
    EXPECT_EQ(c.n, 240u);
    EXPECT_EQ(c.excluded, 0u);
    ASSERT_TRUE(c.beta.has_value());
    EXPECT_NEAR(*c.beta, 0.0, 1e-12) << to_string(c.first) << "/" << to_string(c.second);
  }
  const std::string csv = report_csv(one);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "pair,D_percent_beta,D_percent_alpha,T_mode1,T_mode2,n,excluded");
  EXPECT_NE(csv.find("\nFT/SP,"), std::string::npos);
  EXPECT_NE(csv.find("\nSP/ST,"), std::string::npos);
}

TEST(Benchmark, FailedModesAreReportedPerPair) {
  const Engine e = Engine::build(load_edge_list("a 0 0 1 0\nb 5 5 6 5\n").network);
  BenchmarkOptions o;
  o.sampling = Sampling::parse("all");
  const BenchmarkReport r = run_benchmark(e.planner(), o);
  ASSERT_EQ(r.pairs.size(), 12u);
  EXPECT_EQ(r.comparisons[0].n + r.comparisons[0].excluded, 12u);
  EXPECT_EQ(r.comparisons[0].n, 4u);  // the two pairs within each component
  EXPECT_NE(pairs_csv(r).find("unreachable"), std::string::npos);
}

TEST(Benchmark, ClampedRequestWarns) {
  const Engine e = test::fixture_engine("bend.txt");
  BenchmarkOptions o;
  o.sampling = Sampling::parse("random:1000", 1);
  const BenchmarkReport r = run_benchmark(e.planner(), o);
  EXPECT_EQ(r.requested, 1000u);
  EXPECT_EQ(r.warnings.size(), 1u);
}
