#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "oracles.hpp"
#include "vkge/checkpoint.hpp"
#include "vkge/error.hpp"

namespace vkge {
namespace {

using testing::Engine;

std::string serialize(const Checkpoint& c) {
  std::ostringstream out;
  write_checkpoint(out, c);
  return out.str();
}

Checkpoint deserialize(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_checkpoint(in);
}

TEST(Checkpoint, RoundTripIsExact) {
  Engine gen(1);
  for (const auto sc : {Scorer::kDistMult, Scorer::kComplEx}) {
    for (const auto g : {Grouping::kLIM, Grouping::kLFM}) {
      const auto model = testing::random_model(gen, {sc, g, 5}, 7, 3, 1.0, -8.0, 2.0);
      const auto c = Checkpoint::capture(model, 42, 17);
      const auto back = deserialize(serialize(c));
      EXPECT_EQ(back, c);
      EXPECT_EQ(back.seed, 42u);
      EXPECT_EQ(back.step, 17u);
      EXPECT_EQ(back.spec(), model.spec());
      EXPECT_EQ(back.model, model.quantized());
    }
  }
}

TEST(Checkpoint, RoundTripWithOptimiserState) {
  Engine gen(2);
  const auto model = testing::random_model(gen, {Scorer::kComplEx, Grouping::kLIM, 3}, 4, 2, 1.0, -3.0, 0.0);
  auto state = TrainState::for_model(model);
  state.step = 9;
  for (auto& m : state.moments) {
    for (auto& x : m.first) x = std::normal_distribution<double>()(gen);
    for (auto& x : m.second) x = std::exp(std::normal_distribution<double>()(gen));
  }
  const auto c = Checkpoint::capture(model, 3, 9, &state);
  ASSERT_TRUE(c.state.has_value());
  EXPECT_EQ(deserialize(serialize(c)), c);
}

TEST(Checkpoint, QuantizeIsIdempotent) {
  Engine gen(3);
  const auto model = testing::random_model(gen, {Scorer::kDistMult, Grouping::kLFM, 4}, 5, 2, 1.0, -3.0, 0.0);
  EXPECT_EQ(model.quantized().quantized(), model.quantized());
  const auto c = Checkpoint::capture(model, 0, 0);
  EXPECT_EQ(Checkpoint::capture(c.model, 0, 0), c);
}

TEST(Checkpoint, ByteLength) {
  const std::size_t d = 6;
  const VariationalModel model({Scorer::kDistMult, Grouping::kLFM, d}, 990, 10);
  const auto bytes = serialize(Checkpoint::capture(model, 1, 2));
  EXPECT_EQ(bytes.size(), kCheckpointHeaderBytes + 2 * 1000 * d * 4);
  EXPECT_EQ(bytes.substr(0, 4), "VKGE");
}

TEST(Checkpoint, BadMagic) {
  const VariationalModel model({Scorer::kDistMult, Grouping::kLIM, 2}, 3, 1);
  auto bytes = serialize(Checkpoint::capture(model, 1, 2));
  bytes[0] = 'X';
  try {
    deserialize(bytes);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
  }
}

TEST(Checkpoint, UnsupportedVersion) {
  const VariationalModel model({Scorer::kDistMult, Grouping::kLIM, 2}, 3, 1);
  auto bytes = serialize(Checkpoint::capture(model, 1, 2));
  bytes[4] = 7;
  bytes[5] = 0;
  try {
    deserialize(bytes);
    FAIL();
  } catch (const CheckpointError& e) {
    EXPECT_NE(std::string(e.what()).find("version 7"), std::string::npos);
  }
}

TEST(Checkpoint, Truncated) {
  const VariationalModel model({Scorer::kComplEx, Grouping::kLIM, 2}, 3, 1);
  const auto bytes = serialize(Checkpoint::capture(model, 1, 2));
  for (std::size_t n : {std::size_t{0}, std::size_t{3}, std::size_t{39}, bytes.size() - 1}) {
    EXPECT_THROW(deserialize(bytes.substr(0, n)), CheckpointError) << n;
  }
}

TEST(Checkpoint, FileRoundTripAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "vkge_checkpoint_test";
  std::filesystem::create_directories(dir);
  Engine gen(4);
  const auto model = testing::random_model(gen, {Scorer::kComplEx, Grouping::kLFM, 2}, 4, 2, 1.0, -3.0, 0.0);
  const auto c = Checkpoint::capture(model, 5, 6);
  save_checkpoint(c, dir / "m.vkge");
  EXPECT_EQ(load_checkpoint(dir / "m.vkge"), c);
  EXPECT_THROW(load_checkpoint(dir / "absent.vkge"), CheckpointError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace vkge
