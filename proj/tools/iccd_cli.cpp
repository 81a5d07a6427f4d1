// Copyright 2026 The iccd Authors
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

// iccd command-line front end. Every subcommand reads one configuration
// file; see README.md for the format.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iccd/iccd.h"

namespace {

struct Args {
  std::string config;
  std::string output;
  int workers = 0;
  std::vector<std::string> sets;
  bool print_summary = false;
};

int report(iccd_status s, const char* what) {
  std::fprintf(stderr, "iccd: %s: %s: %s\n", what, iccd_status_name(s), iccd_last_error());
  return iccd_exit_code(s);
}

// "section.key=value" or "key=value" for the top level.
iccd_status apply_set(iccd_config* cfg, const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) return ICCD_VALIDATION_ERROR;
  std::string lhs = s.substr(0, eq), section;
  if (const auto dot = lhs.find('.'); dot != std::string::npos) {
    section = lhs.substr(0, dot);
    lhs = lhs.substr(dot + 1);
  }
  return iccd_config_set(cfg, section.c_str(), lhs.c_str(), s.substr(eq + 1).c_str());
}

// command empty: keep the configured command.
int execute(const Args& a, const std::string& command, bool check_only) {
  iccd_config* cfg = nullptr;
  if (iccd_status s = iccd_config_load(a.config.c_str(), &cfg); s != ICCD_OK) return report(s, a.config.c_str());
  struct Guard {
    iccd_config* c;
    ~Guard() { iccd_config_destroy(c); }
  } guard{cfg};

  if (!command.empty()) {
    if (iccd_status s = iccd_config_set(cfg, "", "command", command.c_str()); s != ICCD_OK)
      return report(s, "command");
  }
  for (const auto& s : a.sets) {
    if (iccd_status st = apply_set(cfg, s); st != ICCD_OK) {
      if (st == ICCD_VALIDATION_ERROR && iccd_last_error()[0] == '\0')
        std::fprintf(stderr, "iccd: --set %s: expected [section.]key=value\n", s.c_str());
      else
        report(st, ("--set " + s).c_str());
      return iccd_exit_code(st);
    }
  }
  if (a.workers > 0) {
    if (iccd_status s = iccd_config_set(cfg, "options", "workers", std::to_string(a.workers).c_str()); s != ICCD_OK)
      return report(s, "--workers");
  }

  if (check_only) {
    char* text = nullptr;
    if (iccd_status s = iccd_config_emit(cfg, &text); s != ICCD_OK) return report(s, "check");
    std::fputs(text, stdout);
    iccd_string_free(text);
    return 0;
  }

  int exit_code = 0;
  char* summary = nullptr;
  const iccd_status s = iccd_run(cfg, a.output.empty() ? nullptr : a.output.c_str(), &exit_code, &summary);
  if (summary && a.print_summary) std::fputs(summary, stdout);
  iccd_string_free(summary);
  if (s != ICCD_OK) {
    report(s, iccd_config_command(cfg));
    return exit_code;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant closed curve doubling toolkit"};
  app.set_version_flag("--version", std::string(iccd_version()));
  app.require_subcommand(1);

  Args args;
  std::string chosen;
  bool check_only = false;

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", args.config, "configuration file")->required()->check(CLI::ExistingFile);
    if (name != "check") {
      sub->add_option("-o,--output", args.output, "output directory (overrides the config)");
      sub->add_option("-j,--workers", args.workers, "worker threads for scan2d")->check(CLI::PositiveNumber);
      sub->add_flag("--print-summary", args.print_summary, "write summary.json to stdout as well");
    }
    sub->add_option("--set", args.sets, "override one entry, [section.]key=value")->take_all();
    sub->callback([&, name] {
      if (name == "check") check_only = true;
      else if (name != "run") chosen = name;
    });
  };
  add("cycle", "periodic attractor and its multipliers");
  add("icc-resonant", "resonant curve from node, saddle and unstable manifolds");
  add("icc-quasi", "quasiperiodic curve from a long orbit");
  add("ribbon", "doubling eigen-direction field along the curve");
  add("classify", "cylinder or Moebius verdict and the predicted doubling");
  add("scan2d", "periodicity chart over a parameter rectangle");
  add("bifdiag", "bifurcation diagram along a parameter path");
  add("verify-doubling", "compare a prediction with the post-bifurcation attractor");
  add("run", "run the command named in the configuration");
  add("check", "validate the configuration and print it in canonical form");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return execute(args, chosen, check_only);
}
