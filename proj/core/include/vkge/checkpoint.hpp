#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>

#include "vkge/model_spec.hpp"
#include "vkge/optimizer.hpp"
#include "vkge/variational.hpp"

namespace vkge {

// Binary layout, all little-endian:
//   0  magic "VKGE"          4  version u16      6  scorer u8     7  grouping u8
//   8  rank u32              12 num_entities u32 16 num_relations u32
//   20 seed u64              28 step u64         36 flags u8 (bit 0: optimiser state)
//   37 reserved (3 zero bytes)
// followed, per table, by the means then the log-variances as row-major f32.
// With bit 0 set: optimiser step u64, then first and second moments per
// parameter block as f32.
inline constexpr std::array<char, 4> kCheckpointMagic{'V', 'K', 'G', 'E'};
inline constexpr std::uint16_t kCheckpointVersion = 1;
inline constexpr std::size_t kCheckpointHeaderBytes = 40;

struct Checkpoint {
  std::uint64_t seed = 0;
  std::uint64_t step = 0;
  // Every value is float-representable, so write/read round-trips exactly.
  VariationalModel model;
  std::optional<TrainState> state;

  // Rounds the model (and optimiser moments) to f32 storage precision.
  static Checkpoint capture(const VariationalModel& model, std::uint64_t seed, std::uint64_t step,
                            const TrainState* state = nullptr);

  const ModelSpec& spec() const { return model.spec(); }
  std::size_t num_entities() const { return model.num_entities(); }
  std::size_t num_relations() const { return model.num_relations(); }

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
// Throws CheckpointError on bad magic, an unsupported version or truncation.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace vkge
