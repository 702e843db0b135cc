#include "eqplant/xorsat.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>

#include "eqplant/errors.hpp"
#include "oracles.hpp"

namespace eqplant {
namespace {

using testing::brute_solutions;
using testing::count_violated;
using testing::random_bits;

// Occurrence count per variable, taken straight from the clause lists.
std::vector<unsigned> occurrences(const XorsatSystem& s) {
  std::vector<unsigned> occ(s.n_vars, 0);
  for (const auto& c : s.clauses)
    for (const auto v : c.vars) ++occ[v];
  return occ;
}

TEST(GenerateRegular, SmallestThreeRegularSystem) {
  const auto s = generate_regular(4, 3, 3, 1);
  ASSERT_EQ(s.n_clauses(), 4u);
  EXPECT_EQ(occurrences(s), (std::vector<unsigned>{3, 3, 3, 3}));
  // With n = 4 each clause leaves out exactly one variable, and no two
  // clauses leave out the same one.
  std::set<std::vector<std::uint32_t>> distinct;
  for (const auto& c : s.clauses) {
    EXPECT_EQ(c.vars.size(), 3u);
    distinct.insert(c.vars);
  }
  EXPECT_EQ(distinct.size(), 4u);
}

TEST(GenerateRegular, SameSeedSameSystem) {
  EXPECT_EQ(generate_regular(16, 3, 3, 42), generate_regular(16, 3, 3, 42));
  EXPECT_NE(generate_regular(16, 3, 3, 42).clauses, generate_regular(16, 3, 3, 43).clauses);
}

TEST(GenerateRegular, ShapeErrors) {
  EXPECT_THROW(generate_regular(5, 3, 2, 1), std::invalid_argument);  // 10 not divisible by 3
  EXPECT_THROW(generate_regular(0, 3, 3, 1), std::invalid_argument);
  EXPECT_THROW(generate_regular(2, 3, 3, 1), std::exception);
}

TEST(GenerateRegular, RegularForManyShapesAndSeeds) {
  struct Shape {
    std::size_t n;
    unsigned k;
    unsigned r;
  };
  for (const Shape sh : {Shape{9, 3, 3}, Shape{16, 3, 3}, Shape{12, 4, 2}, Shape{6, 3, 4},
                         Shape{10, 2, 3}, Shape{20, 4, 4}}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto s = generate_regular(sh.n, sh.k, sh.r, seed);
      EXPECT_TRUE(is_regular(s));
      EXPECT_EQ(s.n_clauses(), sh.n * sh.r / sh.k);
      for (const auto occ : occurrences(s)) EXPECT_EQ(occ, sh.r);
      for (const auto& c : s.clauses) {
        EXPECT_EQ(c.vars.size(), sh.k);
        EXPECT_EQ(std::set<std::uint32_t>(c.vars.begin(), c.vars.end()).size(), sh.k);
      }
    }
  }
}

TEST(GenerateRegular, RestartCapIsReachable) {
  // Only about exp(-10) of k = r = 5 draws are repeat-free, so most seeds run
  // out of restarts.
  std::size_t capped = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    try {
      generate_regular(20, 5, 5, seed);
    } catch (const DomainError&) {
      ++capped;
    }
  }
  EXPECT_GT(capped, 0u);
}

TEST(GenerateRegular, RandomRhsIsSometimesInconsistent) {
  // At n = 16 some draws are full rank and some are not.
  std::size_t full_rank = 0;
  constexpr std::size_t kSamples = 1000;
  for (std::uint64_t seed = 0; seed < kSamples; ++seed) {
    const auto s = generate_regular(16, 3, 3, seed);
    const auto a = s.coefficients();
    const auto solved = solve_affine(a, s.rhs());
    const std::size_t nullity = 16 - rank(a);
    EXPECT_EQ(solved.nullity, nullity);
    EXPECT_EQ(analyze(s).nullity, nullity);
    EXPECT_EQ(16 - rank(a.transpose()), nullity);
    if (nullity == 0) ++full_rank;
  }
  EXPECT_GT(full_rank, 0u);
  EXPECT_LT(full_rank, kSamples);
}

TEST(Plant, AllZeroAndAllOne) {
  const auto base = generate_regular(9, 3, 3, 5);
  const auto zero = plant(base, BitVector(9));
  for (const auto& c : zero.clauses) EXPECT_EQ(c.rhs, 0);
  const auto one = plant(base, BitVector::from_string("111111111"));
  for (const auto& c : one.clauses) EXPECT_EQ(c.rhs, 1);  // three ones per clause
  EXPECT_TRUE(is_solution(one, *one.planted));
}

TEST(Plant, PlantedAssignmentSolves) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = plant(generate_regular(12, 3, 3, seed), seed + 1000);
    ASSERT_TRUE(s.planted);
    EXPECT_EQ(count_violated(s, *s.planted), 0u);
    EXPECT_TRUE(analyze(s).satisfiable);
    EXPECT_EQ(cost(s, *s.planted), -static_cast<long>(s.n_clauses()));
  }
}

TEST(GenerateWithNullity, UniqueSolutionAtN32) {
  const auto s = generate_with_nullity(32, 0, 7, 100000);
  const auto a = analyze(s);
  EXPECT_EQ(a.nullity, 0u);
  EXPECT_EQ(a.n_ground_states, 1u);
  EXPECT_EQ(solution_index(a.solutions, *s.planted), 0u);
  EXPECT_TRUE(is_regular(s));
}

TEST(GenerateWithNullity, NullityThreeHasEightSolutions) {
  const auto s = generate_with_nullity(32, 3, 8, 100000);
  const auto a = analyze(s);
  EXPECT_EQ(a.nullity, 3u);
  EXPECT_EQ(a.n_ground_states, 8u);
  const auto all = enumerate_solutions(a.solutions, 8);
  for (const auto& x : all) EXPECT_EQ(count_violated(s, x), 0u);
}

TEST(GenerateWithNullity, ExactCountsAgainstBruteForce) {
  for (std::size_t d = 0; d <= 3; ++d) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const std::size_t n = 9 + 3 * (seed % 2);  // 9 or 12
      const auto s = generate_with_nullity(n, d, seed * 31 + d, 100000);
      EXPECT_EQ(brute_solutions(s).size(), std::size_t{1} << d) << "d=" << d << " seed=" << seed;
    }
  }
}

TEST(GenerateWithNullity, UnreachableNullityGivesUp) {
  EXPECT_THROW(generate_with_nullity(9, 9, 1, 50), DomainError);
}

TEST(GenerateFiltered, KeepsOnlyConsistentDraws) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = generate_filtered(12, std::nullopt, seed, 10000);
    EXPECT_FALSE(brute_solutions(s).empty());
    EXPECT_FALSE(s.planted.has_value());
    const auto t = generate_filtered(12, 1, seed, 10000);
    EXPECT_EQ(brute_solutions(t).size(), 2u);
  }
}

TEST(Cost, SolutionAndAntiSolution) {
  auto s = plant(generate_regular(10, 2, 3, 4), 9);
  const auto x = *s.planted;
  EXPECT_EQ(cost(s, x), -15);
  for (auto& c : s.clauses) c.rhs ^= 1U;
  EXPECT_EQ(cost(s, x), 15);
  EXPECT_EQ(violated_count(s, x), 15u);
}

TEST(Cost, MatchesClauseCount) {
  Rng rng(21);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = generate_regular(8 + 4 * (seed % 3), 3, 3, seed);
    const auto x = random_bits(s.n_vars, rng);
    const auto v = count_violated(s, x);
    EXPECT_EQ(violated_count(s, x), v);
    EXPECT_EQ(cost(s, x), static_cast<long>(v) - static_cast<long>(s.n_clauses() - v));
    EXPECT_EQ(is_solution(s, x), v == 0);
  }
}

TEST(Analyze, ContradictoryPair) {
  XorsatSystem s;
  s.n_vars = 3;
  s.k = 3;
  s.r = 2;
  s.clauses = {{{0, 1, 2}, 0}, {{0, 1, 2}, 1}};
  const auto a = analyze(s);
  EXPECT_FALSE(a.satisfiable);
  EXPECT_FALSE(a.n_ground_states.has_value());
  EXPECT_EQ(a.ground_cost, 0);
  EXPECT_EQ(a.ground_cost_lower_bound, 0);
}

TEST(Analyze, GroundCostAgainstExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto s = generate_regular(10, 3, 3, seed);
    const auto a = analyze(s);
    long best = std::numeric_limits<long>::max();
    for (std::uint64_t bits = 0; bits < 1024; ++bits) {
      BitVector x(10);
      for (std::size_t i = 0; i < 10; ++i) x.set(i, (bits >> i) & 1U);
      best = std::min(best, static_cast<long>(2 * count_violated(s, x)) - 10);
    }
    ASSERT_TRUE(a.ground_cost.has_value());
    EXPECT_EQ(*a.ground_cost, best);
    EXPECT_GE(*a.ground_cost, a.ground_cost_lower_bound);
    EXPECT_EQ(a.satisfiable, best == -10);
    if (a.satisfiable) EXPECT_EQ(*a.n_ground_states, brute_solutions(s).size());
  }
}

TEST(Json, ExactLayout) {
  XorsatSystem s;
  s.n_vars = 4;
  s.seed = 9;
  s.clauses = {{{1, 2, 3}, 1}, {{0, 2, 3}, 0}, {{0, 1, 3}, 0}, {{0, 1, 2}, 1}};
  s = plant(s, BitVector::from_string("0110"));
  EXPECT_EQ(to_json(s),
            "{\"format\":\"xorsat-v1\",\"n\":4,\"k\":3,\"r\":3,\"seed\":9,\"clauses\":["
            "{\"vars\":[1,2,3],\"b\":0},{\"vars\":[0,2,3],\"b\":1},{\"vars\":[0,1,3],\"b\":1},"
            "{\"vars\":[0,1,2],\"b\":0}],\"nullity\":0,\"planted\":[0,1,1,0]}\n");
}

TEST(Json, RoundTripIsExact) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto s = generate_with_nullity(12, seed % 3, seed, 10000);
    const auto text = to_json(s);
    const auto back = system_from_json(text);
    EXPECT_EQ(back.clauses, s.clauses);
    EXPECT_EQ(back.planted, s.planted);
    EXPECT_EQ(back.seed, s.seed);
    EXPECT_EQ(to_json(back), text);
    const auto unplanted = generate_regular(12, 3, 3, seed);
    EXPECT_EQ(to_json(system_from_json(to_json(unplanted))), to_json(unplanted));
  }
}

TEST(Json, ErrorsNameTheField) {
  const auto good = to_json(generate_with_nullity(9, 1, 3, 10000));
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      system_from_json(text);
      ADD_FAILURE() << "no error for " << fragment;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error("{", "instance file");
  expect_error("[]", "not an object");
  auto without = [&](const std::string& key) {
    auto j = good;
    const auto at = j.find("\"" + key + "\"");
    const auto end = j.find(',', at);
    return j.erase(at, end - at + 1);
  };
  expect_error(without("seed"), "seed");
  auto bad_nullity = good;
  bad_nullity.replace(bad_nullity.find("\"nullity\":1"), 11, "\"nullity\":0");
  expect_error(bad_nullity, "nullity");
  auto bad_format = good;
  bad_format.replace(bad_format.find("xorsat-v1"), 9, "xorsat-v2");
  expect_error(bad_format, "format");
}

}  // namespace
}  // namespace eqplant
