#pragma once

#include "auginf/graph/graph.hpp"

#include <filesystem>
#include <string>

namespace auginf::graph {

struct LoadOptions {
  /// Mirror directed "arcs" into undirected edges instead of rejecting an
  /// asymmetric record. Each mirrored arc is logged as a warning.
  bool symmetrize = false;
};

/// `samples.jsonl` -> `samples.splits.json`
std::filesystem::path splits_path(const std::filesystem::path& data_path);

/// `samples.jsonl` -> `samples.graph.json`
std::filesystem::path base_graph_path(const std::filesystem::path& data_path);

/// Canonical one-line JSON for a sample; fields in fixed order.
std::string encode_sample(const EgoSample& s);
/// Parses one record. Throws ParseError (with `line`) on malformed input and
/// ValidationError naming the sample when an invariant fails.
EgoSample decode_sample(const std::string& text, std::size_t line, const LoadOptions& opts = {});

/// Writes the samples file and, alongside it, the splits file and the base
/// graph when present.
void save_dataset(const Dataset& d, const std::filesystem::path& path);
/// Reads the samples file; the splits and base graph files are optional.
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts = {});

}  // namespace auginf::graph
