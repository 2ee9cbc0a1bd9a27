#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "icn/random.hpp"
#include "icn/vmm.hpp"
#include "support/oracle.hpp"

namespace {

using icn::Bits;
using icn::VmmModel;
using icn::bits_from_string;

std::string all_patterns_bits(std::size_t index, std::size_t k) {
  std::string s(k, '0');
  for (std::size_t i = 0; i < k; ++i) s[i] = static_cast<char>('0' + ((index >> (k - 1 - i)) & 1));
  return s;
}

std::string random_bits(icn::Rng& rng, std::size_t n) {
  std::string s(n, '0');
  for (auto& c : s) c = static_cast<char>('0' + icn::uniform_below(rng, 2));
  return s;
}

TEST(Vmm, EmptyModelIsUniform) {
  VmmModel m(5);
  EXPECT_EQ(m.probability(1, {}), 0.5);
  EXPECT_EQ(m.probability(1, bits_from_string("00")), 0.5);
  EXPECT_EQ(m.total_updates(), 0u);
  EXPECT_EQ(VmmModel(3).total_updates(), 0u);
}

TEST(Vmm, RejectsZeroOrder) {
  try {
    VmmModel m(0);
    FAIL();
  } catch (const icn::Error& e) {
    EXPECT_EQ(e.code(), icn::Errc::invalid_parameter);
  }
}

TEST(Vmm, UpdateRecordsEverySuffixContext) {
  VmmModel m(5);
  m.update(bits_from_string("101"));
  using C = VmmModel::Counts;
  EXPECT_EQ(m.counts({}), (C{1, 2}));
  EXPECT_EQ(m.counts(bits_from_string("1")), (C{1, 0}));
  EXPECT_EQ(m.counts(bits_from_string("0")), (C{0, 1}));
  EXPECT_EQ(m.counts(bits_from_string("10")), (C{0, 1}));
  EXPECT_FALSE(m.counts(bits_from_string("01")).has_value());
  EXPECT_EQ(m.total_updates(), 3u);
}

TEST(Vmm, CountsAreAdditive) {
  VmmModel m(3);
  m.update(bits_from_string("1"));
  m.update(bits_from_string("1"));
  EXPECT_EQ(m.counts({}), (VmmModel::Counts{0, 2}));
  EXPECT_EQ(m.total_updates(), 2u);
}

TEST(Vmm, UpdateErrors) {
  VmmModel m(3);
  EXPECT_THROW(m.update(Bits{}), icn::Error);
  try {
    m.update(Bits{1, 2, 0});
    FAIL();
  } catch (const icn::Error& e) {
    EXPECT_EQ(e.code(), icn::Errc::invalid_symbol);
  }
  EXPECT_EQ(m.total_updates(), 0u);
}

TEST(Vmm, SeenSymbolDominates) {
  VmmModel m(2);
  m.update(bits_from_string("11111"));
  const auto ctx = bits_from_string("11");
  EXPECT_GT(m.probability(1, ctx), m.probability(0, ctx));
}

// 30-bit training sequence, max order 2. Expected values are exact rationals
// from a fraction-arithmetic transcription of the blend recursion.
TEST(Vmm, FrozenProbabilitiesOnThirtyBitSequence) {
  const std::string seq = "110100111010001011110010100110";
  VmmModel m(2);
  m.update(bits_from_string(seq));
  EXPECT_NEAR(m.probability(1, {}), 17.0 / 32.0, 1e-15);
  EXPECT_NEAR(m.probability(1, bits_from_string("0")), 29.0 / 48.0, 1e-15);
  EXPECT_NEAR(m.probability(1, bits_from_string("1")), 43.0 / 96.0, 1e-15);
  EXPECT_NEAR(m.probability(1, bits_from_string("00")), 125.0 / 168.0, 1e-15);
  EXPECT_NEAR(m.probability(1, bits_from_string("01")), 187.0 / 480.0, 1e-15);
  EXPECT_NEAR(m.probability(1, bits_from_string("10")), 25.0 / 48.0, 1e-15);
  EXPECT_NEAR(m.probability(1, bits_from_string("11")), 187.0 / 432.0, 1e-15);

  icn::test::PpmOracle oracle(2);
  oracle.train(seq);
  for (const char* ctx : {"", "0", "1", "00", "01", "10", "11", "0110", "111"}) {
    for (int s : {0, 1}) {
      EXPECT_NEAR(m.probability(static_cast<std::uint8_t>(s), bits_from_string(ctx)),
                  oracle.probability(s, ctx), 1e-12)
          << "ctx " << ctx;
    }
  }
}

TEST(Vmm, LongContextsAreTruncated) {
  VmmModel m(2);
  m.update(bits_from_string("0110100111"));
  EXPECT_EQ(m.probability(1, bits_from_string("0001")), m.probability(1, bits_from_string("01")));
}

TEST(Vmm, SequenceProbabilityOfEmptyModel) {
  VmmModel m(5);
  EXPECT_DOUBLE_EQ(m.sequence_probability(bits_from_string("101")), 0.125);
  EXPECT_THROW(m.sequence_probability(Bits{}), icn::Error);
}

TEST(Vmm, SequenceProbabilityMatchesFrozenAndOracle) {
  VmmModel m(5);
  icn::test::PpmOracle oracle(5);
  for (const char* t : {"10010", "10010", "10010", "11100", "01101"}) {
    m.update(bits_from_string(t));
    oracle.train(t);
  }
  EXPECT_NEAR(m.sequence_probability(bits_from_string("10010")), 60804401365.0 / 270849968532.0, 1e-15);
  EXPECT_NEAR(m.sequence_probability(bits_from_string("11100")), 0.031739673394527115, 1e-15);
  EXPECT_NEAR(m.sequence_probability(bits_from_string("01101")), 0.04425366191326878, 1e-15);
  EXPECT_NEAR(m.sequence_probability(bits_from_string("11111")), 0.0012243631191367896, 1e-16);
  EXPECT_NEAR(m.sequence_probability(bits_from_string("00000")), 0.00035621658331027776, 1e-17);

  double total = 0.0;
  for (std::size_t i = 0; i < 32; ++i) {
    const auto p = all_patterns_bits(i, 5);
    const double got = m.sequence_probability(bits_from_string(p));
    EXPECT_NEAR(got, oracle.sequence_probability(p), 1e-12) << p;
    total += got;
  }
  EXPECT_NEAR(total, 1.0, 1e-9);
  EXPECT_EQ(icn::to_string(m.best_pattern(5)), "10010");
}

TEST(Vmm, BestPatternTieBreaksLexicographically) {
  VmmModel m(5);
  EXPECT_EQ(icn::to_string(m.best_pattern(2)), "00");
  EXPECT_EQ(icn::to_string(m.best_pattern(5)), "00000");
}

TEST(Vmm, BestPatternFindsRepeatedTuple) {
  VmmModel m(5);
  for (int i = 0; i < 100; ++i) m.update(bits_from_string("10010"));
  EXPECT_EQ(icn::to_string(m.best_pattern(5)), "10010");
}

TEST(Vmm, BestPatternRejectsOutOfRangeLength) {
  VmmModel m(5);
  EXPECT_THROW(m.best_pattern(6), icn::Error);
  EXPECT_THROW(m.best_pattern(0), icn::Error);
}

TEST(Vmm, BestPatternIsExhaustiveArgmax) {
  icn::Rng rng(11);
  for (int round = 0; round < 30; ++round) {
    VmmModel m(4);
    for (int u = 0; u < 6; ++u) m.update(bits_from_string(random_bits(rng, 4)));
    std::string best;
    double best_p = -1;
    for (std::size_t i = 0; i < 16; ++i) {
      const auto p = all_patterns_bits(i, 4);
      const double v = m.sequence_probability(bits_from_string(p));
      if (v > best_p) {
        best_p = v;
        best = p;
      }
    }
    EXPECT_EQ(icn::to_string(m.best_pattern(4)), best);
  }
}

TEST(VmmProperty, NormalizationHoldsForReachableStates) {
  icn::Rng rng(5);
  for (int round = 0; round < 100; ++round) {
    VmmModel m(1 + icn::uniform_below(rng, 6));
    for (int u = 0; u < 1 + static_cast<int>(icn::uniform_below(rng, 8)); ++u) {
      m.update(bits_from_string(random_bits(rng, 1 + icn::uniform_below(rng, 30))));
    }
    for (int q = 0; q < 20; ++q) {
      const auto ctx = bits_from_string(random_bits(rng, icn::uniform_below(rng, 8)));
      const auto d = m.distribution(ctx);
      EXPECT_NEAR(d[0] + d[1], 1.0, 1e-12);
    }
  }
}

TEST(VmmProperty, AgreesWithOracleOnRandomSequences) {
  icn::Rng rng(99);
  for (int round = 0; round < 60; ++round) {
    const std::size_t order = 1 + icn::uniform_below(rng, 3);
    VmmModel m(order);
    icn::test::PpmOracle oracle(order);
    const auto seq = random_bits(rng, 1 + icn::uniform_below(rng, 200));
    m.update(bits_from_string(seq));
    oracle.train(seq);
    for (const auto& [ctx, counts] : oracle.table()) {
      EXPECT_EQ(m.counts(bits_from_string(ctx)), (VmmModel::Counts{static_cast<std::uint64_t>(counts[0]),
                                                                   static_cast<std::uint64_t>(counts[1])}));
      for (int s : {0, 1}) {
        EXPECT_NEAR(m.probability(static_cast<std::uint8_t>(s), bits_from_string(ctx)),
                    oracle.probability(s, ctx), 1e-12);
      }
    }
  }
}

// Rank = number of patterns scoring strictly higher. Extra evidence for a
// tuple never pushes it down the ranking.
TEST(VmmProperty, MonotoneEvidence) {
  icn::Rng rng(3);
  for (int round = 0; round < 20; ++round) {
    VmmModel m(5);
    for (int u = 0; u < 10; ++u) m.update(bits_from_string(random_bits(rng, 5)));
    const auto target = bits_from_string(random_bits(rng, 5));
    auto rank = [&] {
      const double p = m.sequence_probability(target);
      int r = 0;
      for (std::size_t i = 0; i < 32; ++i) r += m.sequence_probability(bits_from_string(all_patterns_bits(i, 5))) > p;
      return r;
    };
    int previous = rank();
    for (int extra = 0; extra < 5; ++extra) {
      m.update(target);
      const int now = rank();
      EXPECT_LE(now, previous);
      previous = now;
    }
  }
}

TEST(VmmProperty, UpdateTouchesBoundedCounters) {
  icn::Rng rng(8);
  for (int round = 0; round < 20; ++round) {
    const std::size_t order = 1 + icn::uniform_below(rng, 5);
    const std::size_t n = 1 + icn::uniform_below(rng, 50);
    VmmModel m(order);
    m.update(bits_from_string(random_bits(rng, n)));
    std::istringstream dump(m.dump());
    std::string header;
    std::getline(dump, header);
    std::uint64_t sum = 0;
    std::string ctx;
    std::uint64_t c0, c1;
    while (dump >> ctx >> c0 >> c1) sum += c0 + c1;
    std::uint64_t expected = 0;
    for (std::size_t j = 0; j < n; ++j) expected += std::min(order, j) + 1;
    EXPECT_EQ(sum, expected);
    EXPECT_LE(m.context_count(), n * (order + 1));
  }
}

TEST(Vmm, DumpIsSortedAndRoundTrips) {
  VmmModel m(2);
  m.update(bits_from_string("101"));
  EXPECT_EQ(m.dump(), "vmm 2 2 3 4\n- 1 2\n0 0 1\n1 1 0\n10 0 1\n");

  icn::Rng rng(17);
  VmmModel big(4);
  for (int u = 0; u < 20; ++u) big.update(bits_from_string(random_bits(rng, 13)));
  std::istringstream in(big.dump());
  const auto back = VmmModel::load(in);
  EXPECT_TRUE(back == big);
  EXPECT_EQ(back.dump(), big.dump());
  EXPECT_EQ(back.best_pattern(4), big.best_pattern(4));
}

TEST(Vmm, LoadRejectsMalformedDump) {
  std::istringstream bad_header("vmm 3 2 0 0\n");
  EXPECT_THROW(VmmModel::load(bad_header), icn::Error);
  std::istringstream bad_symbol("vmm 2 2 1 1\n2 0 1\n");
  EXPECT_THROW(VmmModel::load(bad_symbol), icn::Error);
  std::istringstream truncated("vmm 2 2 1 2\n- 0 1\n");
  EXPECT_THROW(VmmModel::load(truncated), icn::Error);
}

TEST(Vmm, TernaryAlphabetIsNormalized) {
  icn::BasicVmm<3> m(3);
  m.update(Bits{2, 0, 2, 1, 2, 2});
  const auto d = m.distribution(Bits{2});
  EXPECT_NEAR(d[0] + d[1] + d[2], 1.0, 1e-12);
  EXPECT_EQ(m.best_pattern(1), (Bits{2}));
}

}  // namespace
