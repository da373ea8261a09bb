#include "auginf/numerics/checkpoint.hpp"

#include "auginf/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace auginf::nn {
namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_bytes(std::vector<std::uint8_t>& out, const std::string& s) {
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}

  template <typename T>
  T le() {
    need(sizeof(T));
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(b_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return v;
  }
  std::string bytes() {
    const auto len = le<std::uint32_t>();
    need(len);
    std::string s(reinterpret_cast<const char*>(b_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) throw DataError("checkpoint: truncated at byte " + std::to_string(pos_));
  }
  bool done() const { return pos_ == b_.size(); }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  const std::vector<std::uint8_t>& b_;
  std::size_t pos_ = 0;
};

}  // namespace

const Tensor2& Checkpoint::get(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return t;
  }
  throw DataError("checkpoint: missing tensor '" + name + "'");
}

bool Checkpoint::contains(const std::string& name) const {
  for (const auto& entry : tensors) {
    if (entry.first == name) return true;
  }
  return false;
}

void Checkpoint::restore(Parameter& p) const {
  const Tensor2& t = get(p.name);
  if (t.rows() != p.value.rows() || t.cols() != p.value.cols()) {
    throw DimensionError("checkpoint '" + p.name + "': shape " + t.shape_str() + " vs " + p.value.shape_str());
  }
  p.value = t;
  p.zero_grad();
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
  std::vector<std::uint8_t> out(std::begin(Checkpoint::kMagic), std::end(Checkpoint::kMagic));
  put_le<std::uint32_t>(out, Checkpoint::kVersion);
  put_bytes(out, ckpt.meta.dump());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& [name, t] : ckpt.tensors) {
    put_bytes(out, name);
    put_le<std::uint64_t>(out, t.rows());
    put_le<std::uint64_t>(out, t.cols());
    for (double v : t.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  return out;
}

Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  r.need(sizeof(Checkpoint::kMagic));
  if (std::memcmp(bytes.data(), Checkpoint::kMagic, sizeof(Checkpoint::kMagic)) != 0) {
    throw DataError("checkpoint: bad magic");
  }
  r.skip(sizeof(Checkpoint::kMagic));
  const auto version = r.le<std::uint32_t>();
  if (version != Checkpoint::kVersion) {
    throw DataError("checkpoint: unsupported version " + std::to_string(version));
  }
  Checkpoint ckpt;
  try {
    ckpt.meta = nlohmann::json::parse(r.bytes());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: bad metadata: ") + e.what());
  }
  const auto count = r.le<std::uint32_t>();
  for (std::uint32_t k = 0; k < count; ++k) {
    std::string name = r.bytes();
    const auto rows = r.le<std::uint64_t>();
    const auto cols = r.le<std::uint64_t>();
    r.need(rows * cols * 8);
    Tensor2 t(rows, cols);
    for (double& v : t.data()) v = std::bit_cast<double>(r.le<std::uint64_t>());
    ckpt.tensors.emplace_back(std::move(name), std::move(t));
  }
  if (!r.done()) throw DataError("checkpoint: trailing bytes at " + std::to_string(r.pos()));
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(ckpt);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write checkpoint " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("missing checkpoint " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return decode_checkpoint(bytes);
}

}  // namespace auginf::nn
