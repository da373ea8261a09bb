#pragma once

#include "auginf/numerics/tape.hpp"
#include "auginf/numerics/tensor.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace auginf::nn {

/// Versioned container of named fp64 matrices plus a JSON metadata block.
/// Byte layout is described in docs/checkpoint_format.md.
struct Checkpoint {
  static constexpr char kMagic[8] = {'A', 'U', 'G', 'I', 'N', 'F', 'C', 'K'};
  static constexpr std::uint32_t kVersion = 1;

  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::pair<std::string, Tensor2>> tensors;

  void add(const Parameter& p) { tensors.emplace_back(p.name, p.value); }
  const Tensor2& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  /// Copies the stored matrix named `p.name` into `p.value`; shapes must agree.
  void restore(Parameter& p) const;
};

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace auginf::nn
