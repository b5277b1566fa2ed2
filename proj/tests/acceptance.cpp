// Copyright 2026 The ratiolab Authors.
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


// Runs the twelve acceptance criteria and prints one line per criterion.
// Exit status is 0 iff every criterion passes.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "ratiolab/lab.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ratiolab acceptance suite"};
  ratiolab::AcceptanceOptions opt;
  app.add_option("--reps", opt.reps, "replicates per n")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "master seed");
  app.add_option("--workers", opt.workers, "worker threads for the first pass")->check(CLI::PositiveNumber);
  app.add_option("--only", opt.only, "criteria to run (default: all)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  opt.on_result = [](const ratiolab::CriterionResult& c) {
    std::cout << ratiolab::format_criterion(c) << std::endl;
  };
  auto res = ratiolab::run_acceptance(opt);
  int failed = 0;
  for (const auto& c : res) failed += !c.pass;
  std::cout << res.size() - static_cast<size_t>(failed) << "/" << res.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
