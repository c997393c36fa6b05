// Copyright 2026 The soficlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "soficlab/almost_action.hpp"
#include "soficlab/errors.hpp"
#include "soficlab/family.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/group.hpp"

namespace soficlab::io {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kFormatVersion = 1;

// Locale-independent shortest-ish rendering for CSV cells.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw invalid_input("cannot write " + path.string());
  out << text;
}

inline json group_to_json(const GroupModel& g) {
  json j;
  j["kind"] = g.kind_name();
  j["generators"] = g.generators().names();
  j["params"] = std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kinds::FreeAbelian> || std::is_same_v<K, kinds::FreeGroup>) {
          return {{"rank", k.rank}};
        } else if constexpr (std::is_same_v<K, kinds::CyclicPower>) {
          return {{"modulus", k.modulus}, {"rank", k.rank}};
        } else if constexpr (std::is_same_v<K, kinds::Symmetric>) {
          return {{"degree", k.degree}};
        } else {
          json factors = json::array();
          for (const auto& f : k.factors) factors.push_back(group_to_json(f));
          return {{"factors", factors}};
        }
      },
      g.kind());
  return j;
}

inline GroupModel group_from_json(const json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    const auto& p = j.at("params");
    auto names = j.contains("generators") ? j.at("generators").get<std::vector<std::string>>() : std::vector<std::string>{};
    if (kind == "free_abelian") return GroupModel::free_abelian(p.at("rank").get<int>(), names);
    if (kind == "free_group") return GroupModel::free_group(p.at("rank").get<int>(), names);
    if (kind == "cyclic_power") {
      return GroupModel::cyclic_power(p.at("modulus").get<std::int64_t>(), p.at("rank").get<int>(), names);
    }
    if (kind == "symmetric") return GroupModel::symmetric(p.at("degree").get<int>(), names);
    if (kind == "direct_product") {
      std::vector<GroupModel> factors;
      for (const auto& f : p.at("factors")) factors.push_back(group_from_json(f));
      return GroupModel::direct_product(std::move(factors), names);
    }
    throw invalid_input("unknown group kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw invalid_input(std::string("malformed group spec: ") + e.what());
  }
}

// Stage files: "vertices N" then either one "perm <name> i_0 ... i_{N-1}"
// line per generator, or "labels name[:inv] ...", "edges M" and M lines
// "u v name".
inline std::string stage_to_text(const Stage& s, std::size_t index) {
  std::ostringstream os;
  os << "# soficlab stage " << index << "\n";
  os << "vertices " << s.size() << "\n";
  if (s.action) {
    const auto& names = s.action->model().generators().names();
    for (std::size_t k = 0; k < names.size(); ++k) {
      os << "perm " << names[k];
      for (Vertex v : s.action->generators()[k].image()) os << ' ' << v;
      os << "\n";
    }
    return os.str();
  }
  const auto& labels = s.graph.labels();
  os << "labels";
  for (const auto& l : labels) os << ' ' << l.name << (l.involution ? ":inv" : "");
  os << "\nedges " << s.graph.edge_count() << "\n";
  for (const auto& e : s.graph.edges()) os << e.u << ' ' << e.v << ' ' << labels[e.label].name << "\n";
  return os.str();
}

namespace detail {

inline std::size_t parse_index(const std::string& tok, const std::string& where) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 18) {
    throw invalid_input(where + ": expected a nonnegative integer, got '" + tok + "'");
  }
  return std::stoull(tok);
}

}  // namespace detail

// `model` is required for permutation stages and ignored otherwise.
inline Stage stage_from_text(const std::string& text, const std::optional<GroupModel>& model,
                             const std::string& where = "stage") {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  if (rows.empty() || rows[0].size() != 2 || rows[0][0] != "vertices") throw invalid_input(where + ": missing 'vertices N' header");
  const std::size_t n = detail::parse_index(rows[0][1], where);

  if (rows.size() > 1 && rows[1][0] == "perm") {
    if (!model) throw invalid_input(where + ": permutation stage without a group model");
    const auto& names = model->generators().names();
    if (rows.size() - 1 != names.size()) throw invalid_input(where + ": expected one perm line per generator");
    std::vector<Permutation> gens;
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto& row = rows[k + 1];
      if (row[0] != "perm" || row.size() < 2 || row[1] != names[k]) {
        throw invalid_input(where + ": expected 'perm " + names[k] + "'");
      }
      if (row.size() != n + 2) throw invalid_input(where + ": permutation " + names[k] + " has the wrong length");
      std::vector<Vertex> img(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = detail::parse_index(row[i + 2], where);
        if (v >= n) throw invalid_input(where + ": permutation entry out of range");
        img[i] = static_cast<Vertex>(v);
      }
      gens.emplace_back(std::move(img));
    }
    return Stage::from_action(AlmostAction(*model, std::move(gens)));
  }

  if (rows.size() < 3 || rows[1][0] != "labels" || rows[2].size() != 2 || rows[2][0] != "edges") {
    throw invalid_input(where + ": expected 'labels' and 'edges M' lines");
  }
  std::vector<EdgeLabel> labels;
  for (std::size_t i = 1; i < rows[1].size(); ++i) {
    std::string name = rows[1][i];
    bool inv = false;
    if (name.size() > 4 && name.ends_with(":inv")) {
      inv = true;
      name.resize(name.size() - 4);
    }
    labels.push_back({name, inv});
  }
  const std::size_t m = detail::parse_index(rows[2][1], where);
  if (rows.size() != m + 3) throw invalid_input(where + ": edge count does not match header");
  std::vector<LabeledEdge> edges;
  edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = rows[i + 3];
    if (row.size() != 3) throw invalid_input(where + ": edge lines are 'u v label'");
    const auto u = detail::parse_index(row[0], where);
    const auto v = detail::parse_index(row[1], where);
    Label label = 0;
    while (label < labels.size() && labels[label].name != row[2]) ++label;
    if (label == labels.size()) throw invalid_input(where + ": undeclared label '" + row[2] + "'");
    if (u >= n || v >= n) throw invalid_input(where + ": edge endpoint out of range");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), label});
  }
  return Stage::from_graph(LabeledGraph(n, std::move(labels), std::move(edges)));
}

inline std::string stage_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "stage_%03zu.txt", index);
  return buf;
}

// Writes manifest.json and one stage file per stage into `dir`.
inline fs::path write_family(const ApproximationFamily& family, const json& construction_params, std::uint64_t seed,
                             const fs::path& dir) {
  fs::create_directories(dir);
  json m;
  m["format_version"] = kFormatVersion;
  m["group"] = family.model ? group_to_json(*family.model) : json(nullptr);
  m["construction"] = {{"kind", family.construction}, {"params", construction_params}, {"seed", seed}};
  m["stages"] = json::array();
  for (std::size_t i = 0; i < family.stages.size(); ++i) {
    const auto& s = family.stages[i];
    const auto file = stage_file_name(i);
    write_text(dir / file, stage_to_text(s, i));
    json meta = json::object();
    for (const auto& [k, v] : s.metadata) {
      // Whole numbers are written as JSON integers.
      if (std::trunc(v) == v && std::abs(v) < 9e15) {
        meta[k] = static_cast<std::int64_t>(v);
      } else {
        meta[k] = v;
      }
    }
    m["stages"].push_back({{"index", i}, {"size", s.size()}, {"file", file}, {"seed", s.seed}, {"meta", meta}});
  }
  const auto path = dir / "manifest.json";
  write_text(path, m.dump(2) + "\n");
  return path;
}

struct LoadedFamily {
  ApproximationFamily family;
  json construction;
};

inline LoadedFamily read_family(const fs::path& manifest_path) {
  json m;
  try {
    m = json::parse(read_text(manifest_path));
  } catch (const json::exception& e) {
    throw invalid_input(manifest_path.string() + ": " + e.what());
  }
  try {
    if (m.at("format_version").get<int>() != kFormatVersion) throw invalid_input("unsupported manifest format_version");
    LoadedFamily out;
    if (!m.at("group").is_null()) out.family.model = group_from_json(m.at("group"));
    out.construction = m.at("construction");
    out.family.construction = out.construction.at("kind").get<std::string>();
    const auto base = manifest_path.parent_path();
    for (const auto& entry : m.at("stages")) {
      const auto file = entry.at("file").get<std::string>();
      if (fs::path(file).is_absolute() || file.find("..") != std::string::npos) {
        throw invalid_input("stage file must be a plain relative path: " + file);
      }
      Stage s = stage_from_text(read_text(base / file), out.family.model, file);
      if (s.size() != entry.at("size").get<std::size_t>()) throw invalid_input(file + ": size differs from manifest");
      s.seed = entry.at("seed").get<std::uint64_t>();
      for (const auto& [k, v] : entry.at("meta").items()) s.metadata[k] = v.get<double>();
      out.family.stages.push_back(std::move(s));
    }
    for (std::size_t i = 1; i < out.family.stages.size(); ++i) {
      if (out.family.stages[i].size() <= out.family.stages[i - 1].size()) {
        throw invalid_input("stage sizes must be strictly increasing");
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw invalid_input(manifest_path.string() + ": " + e.what());
  }
}

// Witness file: whitespace-separated target indices, one per source vertex.
inline std::vector<Vertex> read_witness(const fs::path& path, std::size_t expected) {
  std::istringstream in(read_text(path));
  std::vector<Vertex> f;
  for (std::string tok; in >> tok;) {
    try {
      f.push_back(static_cast<Vertex>(detail::parse_index(tok, path.string())));
    } catch (const invalid_input&) {
      throw invalid_input("corrupt witness file " + path.string());
    }
  }
  if (f.size() != expected) throw invalid_input("corrupt witness file " + path.string() + ": wrong length");
  return f;
}

inline std::string witness_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "witness_%03zu.txt", index);
  return buf;
}

inline void write_witness(const fs::path& path, std::span<const Vertex> f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.size(); ++i) os << f[i] << (i + 1 == f.size() ? "\n" : " ");
  write_text(path, os.str());
}

}  // namespace soficlab::io
