#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "coarsekit/constructions.hpp"
#include "coarsekit/io.hpp"
#include "oracles.hpp"

namespace ck = coarsekit;
namespace io = coarsekit::io;
namespace fs = std::filesystem;
using ck::ErrorKind;
using io::Json;

namespace {

template <class F>
void expect_error(ErrorKind kind, F&& fn) {
  try {
    fn();
    FAIL() << "expected " << ck::to_string(kind);
  } catch (const ck::Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

Json edge_list(const ck::Graph& g) {
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return edges;
}

Json mixed_space() {
  return Json{{"components",
               {{{"name", "c5"}, {"n", 5}, {"edges", edge_list(oracle::cycle(5).graph())}},
                {{"name", "tri"}, {"dist", {{0, 1, 2}, {1, 0, 1}, {2, 1, 0}}}}}},
              {"base_gap", 2},
              {"basepoints", {1, 0}}};
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("coarsekit_io_" + std::to_string(std::random_device{}()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path_ / name) << text; }

 private:
  fs::path path_;
};

}  // namespace

TEST(SpaceIo, ParsesEdgesAndMatrices) {
  const auto doc = io::parse_space(mixed_space());
  EXPECT_EQ(doc.space->component_count(), 2u);
  EXPECT_EQ(doc.names, (std::vector<std::string>{"c5", "tri"}));
  ASSERT_TRUE(doc.graphs[0]);
  EXPECT_FALSE(doc.graphs[1]);
  EXPECT_EQ(doc.space->component(0).rows(), oracle::cycle(5).metric().rows());
  EXPECT_EQ(doc.space->base_gap(), 2);
  EXPECT_EQ(doc.space->basepoints(), (std::vector<std::size_t>{1, 0}));
}

TEST(SpaceIo, RoundTrip) {
  const auto doc = io::parse_space(mixed_space());
  const auto again = io::parse_space(io::space_to_json(doc));
  EXPECT_EQ(*again.space, *doc.space);
  EXPECT_EQ(again.names, doc.names);
  EXPECT_EQ(io::space_to_json(again), io::space_to_json(doc));

  const auto stacked = ck::stack_union(doc.space, 2);
  auto sdoc = io::document_for(stacked.stacked);
  sdoc.levels = 2;
  const auto back = io::parse_space(io::space_to_json(sdoc));
  EXPECT_EQ(*back.space, *stacked.stacked);
  EXPECT_EQ(back.levels, std::optional<std::size_t>(2));
}

TEST(SpaceIo, RandomRoundTrips) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ck::FiniteSpace> parts;
    for (std::size_t c = 0; c < 1 + trial % 4; ++c) {
      const std::size_t n = 1 + rng() % 7;
      parts.push_back(oracle::graph(n, oracle::random_connected_edges(n, 0.4, rng)).metric());
    }
    const auto space = ck::share(ck::assemble_union(parts, 1 + trial % 3));
    EXPECT_EQ(*io::parse_space(io::space_to_json(io::document_for(space))).space, *space);
  }
}

TEST(SpaceIo, SchemaErrors) {
  expect_error(ErrorKind::InvalidInput, [] { io::parse_space(Json::array()); });
  expect_error(ErrorKind::InvalidInput, [] { io::parse_space(Json{{"components", Json::array()}}); });
  expect_error(ErrorKind::InvalidInput, [] { io::parse_space(Json{{"components", {{{"n", 3}, {"edges", "x"}}}}}); });
  expect_error(ErrorKind::InvalidInput, [] { io::parse_space(Json{{"components", {{{"name", "x"}}}}}); });
  // Not a metric: triangle inequality fails.
  const Json bad{{"components", {{{"dist", {{0, 1, 5}, {1, 0, 1}, {5, 1, 0}}}}}}};
  EXPECT_THROW(io::parse_space(bad), ck::Error);
  EXPECT_NO_THROW(io::parse_space(bad, false));
  // Disconnected edge list.
  EXPECT_THROW(io::parse_space(Json{{"components", {{{"n", 3}, {"edges", {{0, 1}}}}}}}), ck::Error);
}

TEST(MapIo, RoundTripAndSharedSpace) {
  const auto space = mixed_space();
  Json image = Json::array();
  for (int p = 0; p < 5; ++p) image.push_back({0, (p + 1) % 5});
  for (int p = 0; p < 3; ++p) image.push_back({1, 2 - p});
  const Json doc{{"domain", space}, {"codomain", space}, {"image", image}};
  const auto parsed = io::parse_map(doc, ".");
  EXPECT_EQ(parsed.map.domain_ptr(), parsed.map.codomain_ptr());
  EXPECT_EQ(parsed.map(5), 7u);

  const auto again = io::parse_map(io::map_to_json(parsed), ".");
  EXPECT_EQ(again.map.image(), parsed.map.image());
  EXPECT_EQ(*again.map.domain_ptr(), *parsed.map.domain_ptr());
}

TEST(MapIo, Errors) {
  const auto space = mixed_space();
  expect_error(ErrorKind::InvalidInput, [&] { io::parse_map(Json{{"domain", space}, {"codomain", space}, {"image", Json::array()}}, "."); });
  Json image = Json::array();
  for (int p = 0; p < 8; ++p) image.push_back({0, 0});
  image[3] = {1, 9};
  expect_error(ErrorKind::OutOfRange, [&] { io::parse_map(Json{{"domain", space}, {"codomain", space}, {"image", image}}, "."); });
  image[3] = {0, 0, 0};
  expect_error(ErrorKind::InvalidInput, [&] { io::parse_map(Json{{"domain", space}, {"codomain", space}, {"image", image}}, "."); });
}

TEST(ChainIo, RoundTrip) {
  const Json doc{{"ambient", mixed_space()}, {"coefficients", {{{0, 1}, 3}, {{1, 2}, -3}, {{0, 1}, 1}}}};
  const auto parsed = io::parse_chain(doc, ".");
  EXPECT_EQ(parsed.chain[(ck::PointRef{0, 1})], 4);
  EXPECT_EQ(parsed.chain[(ck::PointRef{1, 2})], -3);
  const auto again = io::parse_chain(io::chain_to_json(parsed), ".");
  EXPECT_EQ(again.chain, parsed.chain);
  expect_error(ErrorKind::InvalidInput, [] { io::parse_chain(Json{{"ambient", mixed_space()}, {"coefficients", {{1, 2, 3}}}}, "."); });
}

TEST(FileRefs, ResolvedRelativeToTheDocument) {
  TempDir dir;
  dir.write("space.json", mixed_space().dump());
  Json image = Json::array();
  for (int p = 0; p < 8; ++p) image.push_back({0, 0});
  const Json doc{{"domain", "space.json"}, {"codomain", "space.json"}, {"image", image}};
  const auto parsed = io::parse_map(doc, dir.path());
  EXPECT_EQ(parsed.map.domain().size(), 8u);
  EXPECT_EQ(parsed.map.domain_ptr(), parsed.map.codomain_ptr());
  expect_error(ErrorKind::InvalidInput, [&] { io::resolve_space(Json("missing.json"), dir.path()); });
  dir.write("broken.json", "{ not json");
  expect_error(ErrorKind::InvalidInput, [&] { io::read_json_file(dir.path() / "broken.json"); });
}

TEST(Helpers, RationalsAndHashes) {
  EXPECT_EQ(io::rational_to_json(ck::Rational(6, 5)), Json("6/5"));
  EXPECT_EQ(io::rational_to_json(ck::Rational(2)), Json("2/1"));
  EXPECT_EQ(io::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(io::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
