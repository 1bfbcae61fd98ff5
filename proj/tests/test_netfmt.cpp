#include <gtest/gtest.h>

#include <filesystem>

#include "othello/arch.hpp"
#include "othello/netfmt.hpp"

namespace othello {
namespace {

NTupleNetwork random_network(RandomStream& rng) {
  const int m = 1 + static_cast<int>(rng.below(6));
  const int n = 2 + static_cast<int>(rng.below(4));
  NTupleNetwork net = rand_snake(m, n, rng);
  std::vector<double> w(net.weight_count());
  for (double& x : w) {
    switch (rng.below(4)) {
      case 0: x = rng.normal(0.0, 1.0); break;
      case 1: x = std::round(rng.uniform(-500, 500) * 100) / 100; break;
      case 2: x = rng.uniform(-1, 1) * 1e-300; break;
      default: x = 0.0;
    }
  }
  net.set_flat_weights(w);
  return net;
}

TEST(Champion, PublishedFacts) {
  const NTupleNetwork net = load_network(asset_path("all2-champion.ntn"));
  ASSERT_EQ(net.tuples().size(), 32U);
  EXPECT_EQ(net.weight_count(), 288U);
  const NTuple& first = net.tuples().front();
  EXPECT_EQ(first.size(), 2U);
  EXPECT_EQ(first.expansions().size(), 8U);
  EXPECT_EQ(first.expansions().front(), (LocationSequence{6, 7}));
  EXPECT_EQ(first.lut()[0], 57.64);
  const NTuple& last = net.tuples().back();
  EXPECT_EQ(last.expansions(), (std::vector<LocationSequence>{{28, 35}, {27, 36}}));
  EXPECT_TRUE(net.same_architecture(net));
}

TEST(Champion, OrbitsMatchReferenceArchitecture) {
  // The file lists some expansions in ascending order rather than as images
  // of the main tuple, so compare location sets only.
  auto orbit_sets = [](const NTupleNetwork& net) {
    std::set<std::set<std::vector<int>>> out;
    for (const auto& t : net.tuples()) {
      std::set<std::vector<int>> orbit;
      for (auto e : t.expansions()) {
        std::sort(e.begin(), e.end());
        orbit.insert(e);
      }
      out.insert(orbit);
    }
    return out;
  };
  EXPECT_EQ(orbit_sets(load_network(asset_path("all2-champion.ntn"))), orbit_sets(all_straight(2)));
}

TEST(Parse, EmptyNetwork) {
  const NTupleNetwork net = parse_network("{ 0 }");
  EXPECT_TRUE(net.tuples().empty());
  EXPECT_EQ(serialize_network(net), "{ 0\n}\n");
}

TEST(Parse, AcceptsFreeLayoutAndSignedNumbers) {
  const NTupleNetwork net = parse_network("{1{2 1{0 +1}{-1 2.5 1e2 0 0 0 0 0 -0.125}}}");
  ASSERT_EQ(net.tuples().size(), 1U);
  EXPECT_EQ(net.tuples()[0].lut()[2], 100.0);
  EXPECT_EQ(net.tuples()[0].lut()[8], -0.125);
}

TEST(Parse, WeightCountMismatchIsSchemaError) {
  try {
    parse_network("{ 1 { 2 1 { 0 1 } { 1 2 3 4 5 6 7 8 } } }");
    FAIL() << "accepted 8 weights for a 2-tuple";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.block(), 0);
    EXPECT_NE(std::string(e.what()).find("expected 9 weights"), std::string::npos);
  }
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  try {
    parse_network("{ 1\n  { 2 1 { 0 1 }\n    { 0 0 0 x 0 0 0 0 0 } } }");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 13);
  }
}

TEST(Parse, MalformedCorpusGivesDiagnostics) {
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(OTHELLO_CORPUS_DIR)) {
    ++files;
    const std::string text = detail::read_file(entry.path().string());
    try {
      parse_network(text);
      ADD_FAILURE() << entry.path() << " parsed";
    } catch (const FormatError& e) {
      EXPECT_GT(std::string(e.what()).size(), 0U) << entry.path();
    }
  }
  EXPECT_GE(files, 20U);
}

TEST(Parse, TruncationsNeverCrash) {
  const std::string text = detail::read_file(asset_path("all2-champion.ntn"));
  for (std::size_t len = 0; len < text.size(); len += 7) {
    try {
      parse_network(text.substr(0, len));
    } catch (const FormatError&) {
    }
  }
  RandomStream rng(5);
  for (int i = 0; i < 500; ++i) {
    std::string mutated = text;
    const std::size_t at = rng.below(static_cast<std::uint32_t>(mutated.size()));
    mutated[at] = "{} 0123456789.-ex\n"[rng.below(18)];
    try {
      parse_network(mutated);
    } catch (const FormatError&) {
    }
  }
}

TEST(RoundTrip, Champion) {
  const NTupleNetwork net = load_network(asset_path("all2-champion.ntn"));
  const std::string canonical = serialize_network(net);
  EXPECT_EQ(parse_network(canonical), net);
  EXPECT_EQ(serialize_network(parse_network(canonical)), canonical);
}

TEST(RoundTrip, RandomNetworks) {
  RandomStream rng(2024);
  for (int i = 0; i < 100; ++i) {
    const NTupleNetwork net = random_network(rng);
    const std::string text = serialize_network(net);
    const NTupleNetwork back = parse_network(text);
    ASSERT_EQ(back, net) << text;
    ASSERT_EQ(serialize_network(back), text);
  }
}

TEST(RoundTrip, SaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "othello_netfmt_roundtrip.ntn";
  const NTupleNetwork net = all_straight(3);
  save_network(net, path.string());
  EXPECT_EQ(load_network(path.string()), net);
  std::filesystem::remove(path);
  EXPECT_THROW(load_network(path.string()), std::runtime_error);
}

TEST(FormatDouble, ShortestAndMarkedReal) {
  EXPECT_EQ(detail::format_double(0.0), "0.0");
  EXPECT_EQ(detail::format_double(-3.0), "-3.0");
  EXPECT_EQ(detail::format_double(57.64), "57.64");
  EXPECT_EQ(detail::format_double(0.1), "0.1");
  EXPECT_EQ(std::stod(detail::format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Wpc, GridRoundTripAndAsset) {
  const WpcWeights swh = load_wpc(asset_path("swh.wpc"));
  EXPECT_EQ(swh, swh_weights());
  EXPECT_EQ(parse_wpc(serialize_wpc(swh)), swh);
  EXPECT_THROW(parse_wpc("1 2 3"), SchemaError);
  EXPECT_THROW(parse_wpc("{"), SyntaxError);
  std::string too_many;
  for (int i = 0; i < 65; ++i) too_many += "1 ";
  EXPECT_THROW(parse_wpc(too_many), SchemaError);
}

}  // namespace
}  // namespace othello
