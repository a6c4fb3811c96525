// Copyright 2026 The hcboot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hcboot: Monte Carlo bootstrap percolation experiments on Q_n and Q_{k,n}.
//
//   hcboot --n 16 --threshold power:0.8 --pc --trials 20000 --seed 7
//   hcboot --preset theorem3 --format json --output t3.json
//   hcboot --config t3.json                 # re-run a recorded experiment
//   hcboot factorize --n 6 --k 3            # 1-factorization as text
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.
// HCBOOT_THREADS overrides the OpenMP worker count.

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "hcboot/experiment.hpp"
#include "hcboot/partition.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

void apply_thread_override() {
  const char* env = std::getenv("HCBOOT_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long threads = std::strtol(env, &end, 10);
  if (*end != '\0' || threads < 1) {
    throw hcboot::ConfigError("HCBOOT_THREADS must be a positive integer");
  }
  omp_set_num_threads(static_cast<int>(threads));
}

int run_factorize(const std::vector<std::string>& args) {
  CLI::App app{"Print a 1-factorization of the complete k-uniform hypergraph"};
  int n = 0;
  int k = 0;
  std::string output;
  app.add_option("--n", n, "Ground-set size")->required();
  app.add_option("--k", k, "Subset size (must divide n)")->required();
  app.add_option("--output", output, "Output path (default stdout)");
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw hcboot::ConfigError(e.what());
  }
  hcboot::Factorization f;
  try {
    f = hcboot::baranyai(n, k);
  } catch (const std::invalid_argument& e) {
    throw hcboot::ConfigError(e.what());
  }
  const auto check = hcboot::verify_factorization(f);
  if (!check.ok) throw std::runtime_error("factorization failed verification: " + check.violation);
  const std::string text = hcboot::format_factorization(f);
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write '" + output + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    apply_thread_override();
    if (!args.empty() && args[0] == "factorize") {
      return run_factorize({args.begin() + 1, args.end()});
    }
    const hcboot::ExperimentConfig config = hcboot::parse_config(args);
    const hcboot::RunRecord record = hcboot::run_experiment(config);
    hcboot::emit_results(record, config.format, config.output, std::cout);
    for (const auto& run : record.runs) {
      for (const auto& [name, value] : run.references) {
        std::cerr << "n=" << run.params.n << " " << name << " = "
                  << hcboot::format_double(value) << "\n";
      }
    }
    return 0;
  } catch (const hcboot::HelpRequested& e) {
    std::cout << e.what();
    return 0;
  } catch (const hcboot::ConfigError& e) {
    std::cerr << "hcboot: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "hcboot: error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
