// Copyright 2026 The ICUL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver for the unlearning experiments.
//
//   icul ingest|train-shadows|unlearn|audit|report|run
//        --config run.toml [--run-dir runs] [--seed N] [--backend toy|remote]
//   icul synth --out data.jsonl [--seed N] [--examples N]
//   icul stub-server --responses canned.jsonl [--port N]
//
// Failures exit with status 1 and print "error: <category>: <message>" on
// stderr, where <category> is one of the error kinds in icul/status.h.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "icul/config.h"
#include "icul/corpus.h"
#include "icul/pipeline.h"
#include "icul/status.h"
#include "icul/storage.h"
#include "icul/stub_server.h"
#include "icul/synthetic.h"

namespace {

struct RunOptions {
  std::string config;
  std::string run_dir = "runs";
  std::optional<uint64_t> seed;
  std::optional<std::string> backend;
  std::vector<std::string> methods;
};

void AddRunOptions(CLI::App* cmd, RunOptions& opts, bool with_methods) {
  cmd->add_option("--config", opts.config, "experiment TOML file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--run-dir", opts.run_dir, "root of run directories")
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "override [run] seed");
  cmd->add_option("--backend", opts.backend, "override [backend] kind")
      ->check(CLI::IsMember({"toy", "remote"}));
  if (with_methods) {
    cmd->add_option("--method", opts.methods,
                    "method to process, e.g. icul(6) or ga-5e-05; "
                    "repeatable, default all configured");
  }
}

icul::Pipeline MakePipeline(const RunOptions& opts) {
  icul::RunConfig config = icul::LoadRunConfig(opts.config);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.backend) config.backend = icul::ParseBackendKind(*opts.backend);
  return icul::Pipeline(std::move(config), opts.run_dir, std::cerr);
}

int ServeStub(const std::string& responses_path, int port) {
  std::vector<std::string> bodies;
  std::istringstream lines(icul::ReadFile(responses_path));
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) bodies.push_back(line);
  }
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  // Block before the server thread starts so it inherits the mask.
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  icul::StubServer server(std::move(bodies));
  const int bound = server.Start(port);
  std::cout << "listening on http://127.0.0.1:" << bound << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  server.Stop();
  for (const icul::StubRequest& req : server.requests()) {
    std::cout << req.body << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"In-context unlearning experiments"};
  app.require_subcommand(1);

  RunOptions opts;
  struct Verb {
    const char* name;
    const char* help;
    bool with_methods;
  };
  const Verb verbs[] = {
      {"ingest", "load the dataset and fix the train/test split", false},
      {"train-shadows", "select forget sets and train the shadow models",
       false},
      {"unlearn", "apply unlearning methods to every IN shadow model", true},
      {"audit", "score unlearned models with LiRA-Forget", true},
      {"report", "write summary CSV, ROC curves and plots", false},
      {"run", "all stages in order", false},
  };
  std::vector<std::pair<std::string, CLI::App*>> run_cmds;
  for (const Verb& v : verbs) {
    CLI::App* cmd = app.add_subcommand(v.name, v.help);
    AddRunOptions(cmd, opts, v.with_methods);
    run_cmds.emplace_back(v.name, cmd);
  }

  std::string synth_out;
  icul::SyntheticOptions synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "write the synthetic review corpus");
  synth_cmd->add_option("--out", synth_out, "output JSONL path")->required();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--examples", synth.num_examples)
      ->capture_default_str();

  std::string responses;
  int port = 8080;
  CLI::App* stub_cmd = app.add_subcommand(
      "stub-server", "serve canned completion payloads until interrupted");
  stub_cmd->add_option("--responses", responses,
                       "JSONL file, one response body per line")
      ->required()
      ->check(CLI::ExistingFile);
  stub_cmd->add_option("--port", port)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      const auto examples = icul::GenerateSyntheticReviews(synth);
      icul::AtomicWrite(synth_out, icul::FormatJsonlRecords(examples));
      std::cerr << "synth: " << examples.size() << " records\n";
      return 0;
    }
    if (stub_cmd->parsed()) return ServeStub(responses, port);

    for (const auto& [name, cmd] : run_cmds) {
      if (!cmd->parsed()) continue;
      icul::Pipeline pipeline = MakePipeline(opts);
      const std::vector<icul::MethodSpec> methods =
          pipeline.SelectMethods(opts.methods);
      if (name == "ingest") pipeline.Ingest();
      if (name == "train-shadows") pipeline.TrainShadows();
      if (name == "unlearn") pipeline.Unlearn(methods);
      if (name == "audit") pipeline.Audit(methods);
      if (name == "report") pipeline.Report();
      if (name == "run") pipeline.RunAll();
      std::cout << pipeline.run_dir().string() << "\n";
    }
  } catch (const icul::Error& e) {
    std::cerr << "error: " << e.Category() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
