#include "vkge/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <string>
#include <vector>

#include "vkge/error.hpp"

namespace vkge {
namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::ostream& out) : out_(out) {}

  void bytes(const char* p, std::size_t n) { out_.write(p, static_cast<std::streamsize>(n)); }

  template <typename T>
  void uint(T v) {
    char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    bytes(buf, sizeof(T));
  }

  void floats(std::span<const double> values) {
    std::vector<char> buf(values.size() * 4);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
      for (std::size_t b = 0; b < 4; ++b) buf[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
    bytes(buf.data(), buf.size());
  }

 private:
  std::ostream& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  void bytes(char* p, std::size_t n) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw CheckpointError("truncated checkpoint");
  }

  template <typename T>
  T uint() {
    unsigned char buf[sizeof(T)];
    bytes(reinterpret_cast<char*>(buf), sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(buf[i]) << (8 * i));
    return v;
  }

  void floats(std::span<double> out) {
    std::vector<unsigned char> buf(out.size() * 4);
    bytes(reinterpret_cast<char*>(buf.data()), buf.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::uint32_t bits = 0;
      for (std::size_t b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(buf[4 * i + b]) << (8 * b);
      out[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
  }

 private:
  std::istream& in_;
};

void round_to_float(std::vector<double>& v) {
  for (auto& x : v) x = static_cast<double>(static_cast<float>(x));
}

}  // namespace

Checkpoint Checkpoint::capture(const VariationalModel& model, std::uint64_t seed, std::uint64_t step,
                               const TrainState* state) {
  Checkpoint c;
  c.seed = seed;
  c.step = step;
  c.model = model.quantized();
  if (state) {
    TrainState s = *state;
    for (auto& m : s.moments) {
      round_to_float(m.first);
      round_to_float(m.second);
    }
    c.state = std::move(s);
  }
  return c;
}

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  const auto& spec = ckpt.spec();
  ByteWriter w(out);
  w.bytes(kCheckpointMagic.data(), kCheckpointMagic.size());
  w.uint<std::uint16_t>(kCheckpointVersion);
  w.uint<std::uint8_t>(static_cast<std::uint8_t>(spec.scorer));
  w.uint<std::uint8_t>(static_cast<std::uint8_t>(spec.grouping));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(spec.rank));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(ckpt.num_entities()));
  w.uint<std::uint32_t>(static_cast<std::uint32_t>(ckpt.num_relations()));
  w.uint<std::uint64_t>(ckpt.seed);
  w.uint<std::uint64_t>(ckpt.step);
  w.uint<std::uint8_t>(ckpt.state ? 1 : 0);
  const char reserved[3] = {0, 0, 0};
  w.bytes(reserved, 3);

  for (const auto& t : ckpt.model.tables()) {
    w.floats(t.means());
    w.floats(t.log_variances());
  }
  if (ckpt.state) {
    if (ckpt.state->moments.size() != 2 * ckpt.model.tables().size()) {
      throw CheckpointError("optimiser state does not match the model tables");
    }
    w.uint<std::uint64_t>(ckpt.state->step);
    for (const auto& m : ckpt.state->moments) {
      w.floats(m.first);
      w.floats(m.second);
    }
  }
  if (!out) throw CheckpointError("failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  ByteReader r(in);
  std::array<char, 4> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kCheckpointMagic) throw CheckpointError("bad magic: not a vkge checkpoint");
  const auto version = r.uint<std::uint16_t>();
  if (version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version) + " (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  }
  const auto scorer = r.uint<std::uint8_t>();
  const auto grouping = r.uint<std::uint8_t>();
  if (scorer > 1 || grouping > 1) throw CheckpointError("corrupt header: unknown scorer or grouping");
  ModelSpec spec;
  spec.scorer = static_cast<Scorer>(scorer);
  spec.grouping = static_cast<Grouping>(grouping);
  spec.rank = r.uint<std::uint32_t>();
  if (spec.rank == 0) throw CheckpointError("corrupt header: zero rank");
  const auto ne = r.uint<std::uint32_t>();
  const auto nr = r.uint<std::uint32_t>();

  Checkpoint c;
  c.seed = r.uint<std::uint64_t>();
  c.step = r.uint<std::uint64_t>();
  const auto flags = r.uint<std::uint8_t>();
  char reserved[3];
  r.bytes(reserved, 3);

  c.model = VariationalModel(spec, ne, nr);
  for (auto& t : c.model.tables()) {
    r.floats(t.means());
    r.floats(t.log_variances());
  }
  if (flags & 1) {
    TrainState s = TrainState::for_model(c.model);
    s.step = r.uint<std::uint64_t>();
    for (auto& m : s.moments) {
      r.floats(m.first);
      r.floats(m.second);
    }
    c.state = std::move(s);
  }
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot open " + path.string() + " for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace vkge
