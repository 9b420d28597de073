// Copyright 2026 The openecho Authors
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

// Command-line driver: echo experiments, spectra and identity suites.
//
//   openecho le-run   --config configs/fig2_weak.json [--seed N] [--out DIR]
//   openecho spectrum --config configs/spectrum_strong.json
//   openecho check    --suite reductions|otoc-renyi|protocol|duality
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical or check failure.
// OPENECHO_NUM_THREADS sets the OpenMP thread count.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "openecho/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void apply_thread_env() {
  if (const char* env = std::getenv("OPENECHO_NUM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) openecho::kernels::set_threads(n);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring OPENECHO_NUM_THREADS='" << env << "'\n";
    }
  }
}

openecho::ExperimentConfig resolve(const std::string& path, const std::optional<std::uint64_t>& seed,
                                   const std::optional<std::string>& out) {
  auto c = openecho::load_config(path);
  if (seed) c.seed = *seed;
  if (out) c.output_dir = *out;
  openecho::validate(c);
  return c;
}

int run_config(const openecho::ExperimentConfig& c) {
  const auto a = openecho::run_experiment(c);
  for (const auto& f : a.files) std::cout << f.string() << '\n';
  if (!a.pass) {
    std::cerr << "error: " << openecho::to_string(c.experiment) << " did not meet its tolerances\n";
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"openecho: generalized Loschmidt echo and open-system OTOC toolkit"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out, "override the output directory");

  std::string config_path;
  auto* le = app.add_subcommand("le-run", "run an experiment from a JSON config");
  le->add_option("--config", config_path, "experiment config (JSON)")->required();
  le->add_option("--seed", seed, "override the config seed");
  le->add_option("--out", out, "override the output directory");

  std::string spectrum_path;
  auto* sp = app.add_subcommand("spectrum", "Lindblad spectrum report from a JSON config");
  sp->add_option("--config", spectrum_path, "spectrum config (JSON)")->required();
  sp->add_option("--seed", seed, "override the config seed");
  sp->add_option("--out", out, "override the output directory");

  std::string suite;
  auto* ck = app.add_subcommand("check", "run an identity suite");
  ck->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember({"reductions", "otoc-renyi", "protocol", "duality"}));
  ck->add_option("--seed", seed, "override the suite seed");
  ck->add_option("--out", out, "write the suite report as JSON to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  apply_thread_env();
  try {
    if (*le) return run_config(resolve(config_path, seed, out));
    if (*sp) {
      auto c = resolve(spectrum_path, seed, out);
      if (c.experiment != openecho::ExperimentKind::kSpectrum)
        throw openecho::ConfigError("spectrum subcommand needs a config with experiment = spectrum");
      return run_config(c);
    }
    if (*ck) {
      const auto r = openecho::run_check(suite, seed.value_or(1));
      if (out) {
        std::filesystem::create_directories(*out);
        openecho::write_json(std::filesystem::path(*out) / ("check_" + suite + ".json"), r);
      }
      std::cout << suite << ": " << (r.pass ? "PASS" : "FAIL") << " max_deviation=" << r.max_deviation
                << " tolerance=" << r.tolerance << " cases=" << r.n_cases << '\n';
      return r.pass ? kExitOk : kExitNumerical;
    }
  } catch (const openecho::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const openecho::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
