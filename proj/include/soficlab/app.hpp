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

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "soficlab/amenability.hpp"
#include "soficlab/coarse.hpp"
#include "soficlab/generators.hpp"
#include "soficlab/io.hpp"
#include "soficlab/local_stats.hpp"
#include "soficlab/rational.hpp"
#include "soficlab/spectral.hpp"

// Subcommand bodies shared by the CLI and the tests.
namespace soficlab::app {

namespace fs = std::filesystem;
using io::json;

struct GenerateConfig {
  std::string construction = "quotient";  // quotient | folner | random | mixed
  std::string group = "free_abelian";     // quotient: free_abelian | cyclic_power
  int rank = 1;
  std::int64_t modulus = 0;  // cyclic_power only
  std::vector<std::size_t> sizes;
  std::size_t a = 1, b = 2;  // mixed
  std::size_t girth = 8;     // mixed
  std::size_t attempts = 8;  // mixed
  std::uint64_t seed = 0;
  std::size_t cap_vertices = kDefaultVertexCap;
  fs::path out_dir = "out";
};

inline ApproximationFamily build_family(const GenerateConfig& c, json* params_out = nullptr) {
  if (c.sizes.empty()) throw invalid_input("generate: --sizes is required");
  json params{{"sizes", c.sizes}};
  ApproximationFamily family;
  if (c.construction == "quotient") {
    GroupModel model = c.group == "cyclic_power" ? GroupModel::cyclic_power(c.modulus, c.rank)
                       : c.group == "free_abelian" ? GroupModel::free_abelian(c.rank)
                                                   : throw invalid_input("quotient: unsupported group '" + c.group + "'");
    family = quotient_approximation(model, c.sizes, c.cap_vertices);
    params["group"] = c.group;
    params["rank"] = c.rank;
    if (c.group == "cyclic_power") params["modulus"] = c.modulus;
  } else if (c.construction == "folner") {
    family = folner_approximation(GroupModel::free_abelian(c.rank), c.sizes, c.cap_vertices);
    params["rank"] = c.rank;
  } else if (c.construction == "random") {
    for (auto n : c.sizes) {
      if (n > c.cap_vertices) throw resource_error("stage size exceeds --cap-vertices", c.cap_vertices);
    }
    family = random_family(c.rank, c.sizes, c.seed);
    params["rank"] = c.rank;
  } else if (c.construction == "mixed") {
    for (auto n : c.sizes) {
      if (n > c.cap_vertices / std::max<std::size_t>(c.b, 1)) {
        throw resource_error("stage size exceeds --cap-vertices", c.cap_vertices);
      }
    }
    family = mixed_family(c.a, c.b, c.sizes, c.girth, c.seed, c.attempts);
    params["a"] = c.a;
    params["b"] = c.b;
    params["girth_target"] = c.girth;
    params["max_attempts"] = c.attempts;
  } else {
    throw invalid_input("unknown construction '" + c.construction + "'");
  }
  if (params_out) *params_out = params;
  return family;
}

// Returns the manifest path; warnings go to `log`.
inline fs::path run_generate(const GenerateConfig& c, std::ostream& log) {
  json params;
  const auto family = build_family(c, &params);
  for (std::size_t i = 0; i < family.stages.size(); ++i) {
    const auto& meta = family.stages[i].metadata;
    auto got = meta.find("girth_achieved");
    auto want = meta.find("girth_target");
    if (got != meta.end() && want != meta.end() && got->second < want->second) {
      log << "warning: stage " << i << " girth target " << want->second << " not reached (achieved "
          << got->second << ")\n";
    }
  }
  return io::write_family(family, params, c.seed, c.out_dir);
}

inline const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks{
      "good_set",      "finite_core",   "bs_defect",             "ball_distribution",      "spectral_gap",
      "folner_search", "hyperfinite_partition", "amenable_mass_estimate", "expander_certificate"};
  return tasks;
}

struct AnalyzeConfig {
  std::vector<std::string> tasks;
  int radius = 2;          // r for balls and F = B_r(e)
  int entourage = 1;       // R for Laplacians and boundaries
  Rational eps = Rational::make(1, 2);
  std::size_t part_size = 16;
  double gap_bound = 0.1;
  std::uint64_t seed = 0;
  std::size_t cap_vertices = kDefaultVertexCap;
  fs::path out_dir = "analysis";
};

namespace detail {

inline const AlmostAction& need_action(const Stage& s, const std::string& task) {
  if (!s.action) throw invalid_input(task + " needs a family of almost actions");
  return *s.action;
}

inline const GroupModel& need_model(const ApproximationFamily& f, const std::string& task) {
  if (!f.model) throw invalid_input(task + " needs a family with a group model");
  return *f.model;
}

inline std::string analyze_task(const std::string& task, const ApproximationFamily& family, const AnalyzeConfig& c) {
  using io::fmt;
  std::ostringstream os;
  const auto& stages = family.stages;
  if (task == "good_set" || task == "finite_core") {
    const auto F = ball_elements(need_model(family, task), c.radius, kDefaultFiniteSetCap);
    os << (task == "good_set" ? "stage,size,F,good,defect\n" : "stage,size,F,defect,core,bound\n");
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& act = need_action(stages[i], task);
      const auto rep = good_set(act, F);
      if (task == "good_set") {
        os << i << ',' << act.size() << ',' << F.size() << ',' << rep.good.size() << ',' << fmt(rep.defect) << "\n";
      } else {
        const auto core = finite_core(act, F);
        const double bound = static_cast<double>(act.size()) -
                             static_cast<double>(F.size()) * static_cast<double>(act.size() - rep.good.size());
        os << i << ',' << act.size() << ',' << F.size() << ',' << fmt(rep.defect) << ',' << core.size() << ','
           << fmt(bound) << "\n";
      }
    }
  } else if (task == "bs_defect") {
    const auto& model = need_model(family, task);
    os << "stage,size,radius,mismatched,defect\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto d = bs_defect_counts(stages[i].graph, c.radius, model);
      os << i << ',' << stages[i].size() << ',' << c.radius << ',' << d.mismatched << ',' << fmt(d.fraction()) << "\n";
    }
  } else if (task == "ball_distribution") {
    os << "stage,radius,code_hash,count,frequency\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto dist = ball_distribution(stages[i].graph, c.radius);
      std::vector<std::pair<std::string, std::size_t>> rows;
      for (const auto& [code, count] : dist.counts) rows.emplace_back(code_hash(code), count);
      std::sort(rows.begin(), rows.end());
      for (const auto& [h, count] : rows) {
        os << i << ',' << c.radius << ',' << h << ',' << count << ','
           << fmt(static_cast<double>(count) / static_cast<double>(dist.total)) << "\n";
      }
    }
  } else if (task == "spectral_gap") {
    os << "stage,n,R,lambda2,cheeger,d_max\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto& g = stages[i].graph;
      const auto L = laplacian(g, c.entourage);
      double lambda2 = 0.0, h = 0.0;
      if (g.vertex_count() >= 2 && is_connected(g)) {
        const auto ch = cheeger_sweep(L, g);
        lambda2 = ch.lambda2;
        h = ch.ratio;
      }
      os << i << ',' << g.vertex_count() << ',' << c.entourage << ',' << fmt(lambda2) << ',' << fmt(h) << ','
         << L.max_degree << "\n";
    }
  } else if (task == "folner_search") {
    os << "stage,R,eps,witness_size,boundary,ratio\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
      FolnerOptions opt;
      opt.seed = stage_seed(c.seed, i);
      const auto w = folner_search(stages[i].graph, c.entourage, c.eps, opt);
      os << i << ',' << c.entourage << ',' << c.eps.str() << ',';
      if (w) {
        os << w->size() << ',' << w->boundary << ',' << fmt(w->ratio()) << "\n";
      } else {
        os << "0,,not_found\n";
      }
    }
  } else if (task == "hyperfinite_partition") {
    os << "stage,K,parts,cut_edges,cut_fraction\n";
    for (std::size_t i = 0; i < stages.size(); ++i) {
      const auto p = hyperfinite_partition(stages[i].graph, c.part_size);
      const auto n = stages[i].size();
      os << i << ',' << c.part_size << ',' << p.parts.size() << ',' << p.cut_edges << ','
         << fmt(n ? static_cast<double>(p.cut_edges) / static_cast<double>(n) : 0.0) << "\n";
    }
  } else if (task == "amenable_mass_estimate") {
    os << "stage,r,amenable,total,mass\n";
    const auto est = amenable_mass_estimate(family, c.radius);
    for (std::size_t i = 0; i < est.stages.size(); ++i) {
      const auto& s = est.stages[i];
      os << i << ',' << c.radius << ',' << s.amenable << ',' << s.total << ',' << fmt(s.fraction()) << "\n";
    }
  } else if (task == "expander_certificate") {
    const auto rep = expander_certificate(family, c.gap_bound, c.entourage);
    os << "stage,n,R,lambda2,bound,pass\n";
    for (std::size_t i = 0; i < rep.stages.size(); ++i) {
      const auto& s = rep.stages[i];
      os << i << ',' << s.size << ',' << c.entourage << ',' << fmt(s.lambda2) << ',' << fmt(c.gap_bound) << ','
         << (s.pass ? 1 : 0) << "\n";
    }
  } else {
    throw invalid_input("unknown task '" + task + "'");
  }
  return os.str();
}

}  // namespace detail

// One CSV per task in c.out_dir; returns the written paths.
inline std::vector<fs::path> run_analyze(const fs::path& manifest, const AnalyzeConfig& c) {
  for (const auto& t : c.tasks) {
    if (std::find(known_tasks().begin(), known_tasks().end(), t) == known_tasks().end()) {
      throw invalid_input("unknown task '" + t + "'");
    }
  }
  if (c.tasks.empty()) throw invalid_input("analyze: no tasks given");
  if (c.radius < 0 || c.entourage < 1) throw invalid_input("analyze: need radius >= 0 and entourage >= 1");
  if (!c.eps.positive()) throw invalid_input("analyze: eps must be > 0");
  const auto loaded = io::read_family(manifest);
  for (const auto& s : loaded.family.stages) {
    if (s.size() > c.cap_vertices) throw resource_error("stage exceeds --cap-vertices", c.cap_vertices);
  }
  std::vector<fs::path> written;
  for (const auto& t : c.tasks) {
    const auto path = c.out_dir / (t + ".csv");
    io::write_text(path, detail::analyze_task(t, loaded.family, c));
    written.push_back(path);
    if (t == "expander_certificate") {
      io::write_text(c.out_dir / "expander_certificate.txt",
                     expander_certificate(loaded.family, c.gap_bound, c.entourage).text());
    }
  }
  return written;
}

struct CompareConfig {
  std::optional<fs::path> witness_dir;
  int radius = 3;
  std::uint64_t seed = 0;
  fs::path out_dir = "compare";
};

inline Verdict run_compare(const fs::path& manifest_x, const fs::path& manifest_y, const CompareConfig& c) {
  const auto fx = io::read_family(manifest_x).family;
  const auto fy = io::read_family(manifest_y).family;
  std::optional<std::vector<std::vector<Vertex>>> witnesses;
  if (c.witness_dir) {
    if (fx.stages.size() != fy.stages.size()) throw invalid_input("compare: stage counts differ");
    witnesses.emplace();
    for (std::size_t i = 0; i < fx.stages.size(); ++i) {
      witnesses->push_back(io::read_witness(*c.witness_dir / io::witness_file_name(i), fx.stages[i].size()));
    }
  }
  CompareOptions opt;
  opt.profile_radius = c.radius;
  opt.qi.seed = c.seed;
  const auto v = compare_families(fx, fy, witnesses, opt);
  io::write_text(c.out_dir / "verdict.txt", v.text());

  using io::fmt;
  std::ostringstream os;
  if (witnesses) {
    os << "stage,L,A,codensity,pairs,sampled\n";
    for (std::size_t i = 0; i < v.constants.size(); ++i) {
      const auto& q = v.constants[i];
      os << i << ',' << fmt(q.L) << ',' << fmt(q.A) << ',' << q.codensity << ',' << q.pairs << ','
         << (q.sampled ? 1 : 0) << "\n";
    }
  } else {
    os << "stage,growth_rate_x,growth_rate_y,lambda2_x,lambda2_y,girth_x,girth_y,diameter_x,diameter_y\n";
    auto girth_str = [](std::size_t g) { return g == kInfiniteGirth ? std::string("inf") : std::to_string(g); };
    for (std::size_t i = 0; i < v.profiles.size(); ++i) {
      const auto& [px, py] = v.profiles[i];
      os << i << ',' << fmt(growth_rate(px)) << ',' << fmt(growth_rate(py)) << ',' << fmt(px.lambda2) << ','
         << fmt(py.lambda2) << ',' << girth_str(px.girth) << ',' << girth_str(py.girth) << ',' << px.diameter << ','
         << py.diameter << "\n";
    }
  }
  io::write_text(c.out_dir / "compare.csv", os.str());
  return v;
}

// Concatenates every CSV under `dir` (sorted by name) behind a metadata
// header; returns the text and writes it to `dir`/report.txt.
inline std::string run_report(const fs::path& dir, const std::optional<fs::path>& manifest = std::nullopt) {
  if (!fs::is_directory(dir)) throw invalid_input("report: not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::ostringstream os;
  os << "# soficlab report\n";
  if (manifest) {
    const auto loaded = io::read_family(*manifest);
    os << "# construction: " << loaded.construction.at("kind").get<std::string>()
       << "\n# seed: " << loaded.construction.at("seed").dump() << "\n# stages: " << loaded.family.stages.size()
       << "\n";
    if (loaded.family.model) os << "# group: " << loaded.family.model->kind_name() << "\n";
  }
  for (const auto& f : files) {
    os << "\n# file: " << f.filename().string() << "\n" << io::read_text(f);
  }
  const auto text = os.str();
  io::write_text(dir / "report.txt", text);
  return text;
}

}  // namespace soficlab::app
