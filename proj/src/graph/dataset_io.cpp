#include "auginf/graph/dataset_io.hpp"

#include "auginf/error.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace auginf::graph {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::size_t> index_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<std::size_t>>();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw DataError("cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << text;
}

}  // namespace

std::filesystem::path splits_path(const std::filesystem::path& data_path) {
  auto p = data_path;
  p.replace_extension(".splits.json");
  return p;
}

std::filesystem::path base_graph_path(const std::filesystem::path& data_path) {
  auto p = data_path;
  p.replace_extension(".graph.json");
  return p;
}

std::string encode_sample(const EgoSample& s) {
  ordered_json j;
  j["id"] = s.id;
  j["n"] = s.size();
  auto edges = ordered_json::array();
  for (const auto& [a, b] : s.graph.edges()) edges.push_back({a, b});
  j["edges"] = std::move(edges);
  j["ego"] = s.ego;
  j["state"] = s.state;
  j["label"] = s.label;
  if (!s.graph.node_ids.empty()) j["node_ids"] = s.graph.node_ids;
  return j.dump();
}

EgoSample decode_sample(const std::string& text, std::size_t line, const LoadOptions& opts) {
  EgoSample s;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line, std::string("invalid JSON: ") + e.what());
  }
  std::vector<std::pair<long long, long long>> edges, arcs;
  std::vector<int> state;
  int label = 0;
  long long ego = 0;
  std::size_t n = 0;
  try {
    s.id = j.at("id").get<std::string>();
    n = j.at("n").get<std::size_t>();
    ego = j.at("ego").get<long long>();
    state = j.at("state").get<std::vector<int>>();
    label = j.at("label").get<int>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError(line, "edge must be a pair");
      edges.emplace_back(e[0].get<long long>(), e[1].get<long long>());
    }
    if (j.contains("arcs")) {
      for (const auto& e : j.at("arcs")) {
        if (!e.is_array() || e.size() != 2) throw ParseError(line, "arc must be a pair");
        arcs.emplace_back(e[0].get<long long>(), e[1].get<long long>());
      }
    }
    if (j.contains("node_ids")) s.graph.node_ids = j.at("node_ids").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(line, std::string("bad field: ") + e.what());
  }

  const auto node_ids = std::move(s.graph.node_ids);
  s.graph = UndirectedGraph(n);
  s.graph.node_ids = node_ids;
  const auto in_range = [n](long long v) { return v >= 0 && static_cast<std::size_t>(v) < n; };
  for (const auto& [a, b] : edges) {
    if (!in_range(a) || !in_range(b)) throw ValidationError(s.id, "edge endpoint out of range");
    if (a > b) throw ValidationError(s.id, "edge [" + std::to_string(a) + "," + std::to_string(b) + "] not in i<j form");
    if (a == b) {
      s.graph.set(a, a, 1);
    } else {
      s.graph.add_edge(a, b);
    }
  }
  for (const auto& [a, b] : arcs) {
    if (!in_range(a) || !in_range(b)) throw ValidationError(s.id, "arc endpoint out of range");
    s.graph.set(a, b, 1);
  }
  if (opts.symmetrize) {
    for (const auto& [a, b] : arcs) {
      if (a != b && !s.graph.has_edge(b, a)) {
        spdlog::warn("sample '{}': symmetrizing directed arc {}->{}", s.id, a, b);
        s.graph.add_edge(a, b);
      }
    }
  }
  if (!in_range(ego)) throw ValidationError(s.id, "ego out of range");
  s.ego = static_cast<std::size_t>(ego);
  s.state.reserve(state.size());
  for (int v : state) {
    if (v != 0 && v != 1) throw ValidationError(s.id, "state value not in {0,1}");
    s.state.push_back(static_cast<std::uint8_t>(v));
  }
  if (label != 0 && label != 1) throw ValidationError(s.id, "label not in {0,1}");
  s.label = static_cast<std::uint8_t>(label);

  const auto violations = validate_sample(s);
  if (!violations.empty()) throw ValidationError(s.id, violations.front());
  return s;
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::string text;
  for (const auto& s : d.samples) {
    text += encode_sample(s);
    text += '\n';
  }
  write_file(path, text);

  ordered_json sp;
  sp["train"] = d.splits.train;
  sp["valid"] = d.splits.valid;
  sp["test"] = d.splits.test;
  sp["meta"] = {{"source", d.meta.source}, {"seed", d.meta.seed}};
  write_file(splits_path(path), sp.dump() + "\n");

  if (d.base) {
    ordered_json g;
    g["n"] = d.base->size();
    g["edges"] = nlohmann::json::array();
    for (const auto& [i, j] : d.base->edges()) g["edges"].push_back({i, j});
    write_file(base_graph_path(path), g.dump() + "\n");
  }
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& opts) {
  Dataset d;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    d.samples.push_back(decode_sample(line, lineno, opts));
  }

  const auto sp = splits_path(path);
  if (std::filesystem::exists(sp)) {
    try {
      const auto j = nlohmann::json::parse(read_file(sp));
      d.splits.train = index_list(j, "train");
      d.splits.valid = index_list(j, "valid");
      d.splits.test = index_list(j, "test");
      if (j.contains("meta")) {
        d.meta.source = j["meta"].value("source", "");
        d.meta.seed = j["meta"].value("seed", std::uint64_t{0});
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(1, sp.filename().string() + ": " + e.what());
    }
  }
  const auto gp = base_graph_path(path);
  if (std::filesystem::exists(gp)) {
    try {
      const auto j = nlohmann::json::parse(read_file(gp));
      const auto n = j.at("n").get<std::size_t>();
      UndirectedGraph g(n);
      for (const auto& e : j.at("edges")) {
        const auto i = e.at(0).get<std::size_t>(), k = e.at(1).get<std::size_t>();
        if (i >= n || k >= n || i == k) throw DataError(gp.filename().string() + ": bad edge");
        g.add_edge(i, k);
      }
      d.base = std::move(g);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(1, gp.filename().string() + ": " + e.what());
    }
  }
  const auto violations = validate_dataset(d);
  if (!violations.empty()) throw DataError("dataset " + path.string() + ": " + violations.front());
  return d;
}

}  // namespace auginf::graph
