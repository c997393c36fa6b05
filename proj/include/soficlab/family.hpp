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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "soficlab/almost_action.hpp"
#include "soficlab/graph.hpp"
#include "soficlab/group.hpp"

namespace soficlab {

// One finite stage X_i: either an almost action (and its labelled graph) or
// a bare labelled graph for graph-only families.
struct Stage {
  std::uint64_t seed = 0;
  std::optional<AlmostAction> action;
  LabeledGraph graph;
  std::map<std::string, double> metadata;

  static Stage from_action(AlmostAction a, std::uint64_t seed = 0) {
    Stage s;
    s.seed = seed;
    s.graph = build_labeled_graph(a);
    s.action = std::move(a);
    return s;
  }

  static Stage from_graph(LabeledGraph g, std::uint64_t seed = 0) {
    Stage s;
    s.seed = seed;
    s.graph = std::move(g);
    return s;
  }

  std::size_t size() const { return graph.vertex_count(); }
};

struct ApproximationFamily {
  std::optional<GroupModel> model;  // absent for graph-only families
  std::string construction;
  std::vector<Stage> stages;
};

inline ApproximationFamily graph_family(std::vector<LabeledGraph> graphs, std::string construction = "graphs") {
  ApproximationFamily f;
  f.construction = std::move(construction);
  for (auto& g : graphs) f.stages.push_back(Stage::from_graph(std::move(g)));
  return f;
}

}  // namespace soficlab
