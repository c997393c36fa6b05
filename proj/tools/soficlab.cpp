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

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soficlab/app.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text)) {
    if (item.find_first_not_of("0123456789") != std::string::npos || item.size() > 18) {
      throw soficlab::invalid_input("--sizes expects comma-separated integers, got '" + item + "'");
    }
    out.push_back(std::stoull(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace soficlab;
  CLI::App cli{"soficlab: finite sofic approximations and their coarse geometry"};
  cli.require_subcommand(1);

  app::GenerateConfig gen;
  std::string sizes;
  std::string out_dir = "out";
  auto* generate = cli.add_subcommand("generate", "build a family and write manifest + stage files");
  generate->add_option("--construction", gen.construction, "quotient | folner | random | mixed")->required();
  generate->add_option("--group", gen.group, "quotient group: free_abelian | cyclic_power");
  generate->add_option("--rank", gen.rank, "group rank (generator count)");
  generate->add_option("--modulus", gen.modulus, "cyclic_power modulus");
  generate->add_option("--sizes", sizes, "comma-separated stage parameters")->required();
  generate->add_option("--a", gen.a, "mixed: cycle components per stage");
  generate->add_option("--b", gen.b, "mixed: total components per stage");
  generate->add_option("--girth", gen.girth, "mixed: girth target for cubic parts");
  generate->add_option("--attempts", gen.attempts, "mixed: sampling attempts per cubic part");
  generate->add_option("--seed", gen.seed, "master seed");
  generate->add_option("--cap-vertices", gen.cap_vertices, "refuse stages larger than this");
  generate->add_option("--out-dir", out_dir, "output directory");

  app::AnalyzeConfig ana;
  std::string manifest, tasks, eps = "1/2", ana_out = "analysis";
  auto* analyze = cli.add_subcommand("analyze", "run measurement tasks on a family; one CSV per task");
  analyze->add_option("manifest", manifest, "manifest.json")->required();
  analyze->add_option("--tasks", tasks, "comma-separated task names")->required();
  analyze->add_option("--radius", ana.radius, "ball radius r (also F = B_r(e))");
  analyze->add_option("--entourage", ana.entourage, "entourage radius R for Laplacians and boundaries");
  analyze->add_option("--eps", eps, "Folner threshold, exact decimal or fraction");
  analyze->add_option("--part-size", ana.part_size, "hyperfinite part size cap K");
  analyze->add_option("--gap-bound", ana.gap_bound, "expander certificate bound c");
  analyze->add_option("--seed", ana.seed, "seed for sampled search");
  analyze->add_option("--cap-vertices", ana.cap_vertices, "refuse stages larger than this");
  analyze->add_option("--out-dir", ana_out, "output directory");

  app::CompareConfig cmp;
  std::string mx, my, witness_dir, cmp_out = "compare";
  auto* compare = cli.add_subcommand("compare", "verify QI witnesses or compare invariant profiles");
  compare->add_option("manifest_x", mx, "first manifest")->required();
  compare->add_option("manifest_y", my, "second manifest")->required();
  compare->add_option("--witness-dir", witness_dir, "directory of witness_NNN.txt files");
  compare->add_option("--radius", cmp.radius, "profile ball radius");
  compare->add_option("--seed", cmp.seed, "seed for pair sampling");
  compare->add_option("--out-dir", cmp_out, "output directory");

  std::string report_dir, report_manifest;
  auto* report = cli.add_subcommand("report", "concatenate CSVs with a metadata header");
  report->add_option("--out-dir", report_dir, "directory holding the CSVs")->required();
  report->add_option("--manifest", report_manifest, "manifest for the header");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    cli.exit(e);
    return 2;
  }

  try {
    if (*generate) {
      gen.sizes = parse_sizes(sizes);
      gen.out_dir = out_dir;
      std::cout << app::run_generate(gen, std::cerr).string() << "\n";
    } else if (*analyze) {
      ana.tasks = split_list(tasks);
      ana.eps = Rational::parse(eps);
      ana.out_dir = ana_out;
      for (const auto& p : app::run_analyze(manifest, ana)) std::cout << p.string() << "\n";
    } else if (*compare) {
      if (!witness_dir.empty()) cmp.witness_dir = witness_dir;
      cmp.out_dir = cmp_out;
      std::cout << app::run_compare(mx, my, cmp).headline() << "\n";
    } else if (*report) {
      std::optional<std::filesystem::path> m;
      if (!report_manifest.empty()) m = report_manifest;
      std::cout << app::run_report(report_dir, m);
    }
  } catch (const invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "resource cap: " << e.what() << " (cap " << e.cap() << ")\n";
    return 3;
  } catch (const convergence_error& e) {
    std::cerr << "no convergence: " << e.what() << " (best bound " << e.best_bound() << ")\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
