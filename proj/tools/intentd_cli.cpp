// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

// intentd command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "intentd/intentd.h"

namespace {

// Non-zero status carried out of a command to main.
struct Failure {
  intentd_status status;
};

void check(intentd_status s) {
  if (s != INTENTD_OK) throw Failure{s};
}

// Calls `f(buf, cap, needed)` twice when the first buffer is too small.
std::string read_string(const std::function<intentd_status(char*, size_t, size_t*)>& f) {
  std::string buf(256, '\0');
  size_t needed = 0;
  intentd_status s = f(buf.data(), buf.size(), &needed);
  if (s == INTENTD_BUFFER_TOO_SMALL) {
    buf.assign(needed, '\0');
    s = f(buf.data(), buf.size(), &needed);
  }
  check(s);
  buf.resize(needed - 1);
  return buf;
}

class Config {
 public:
  Config() { check(intentd_config_create(&cfg_)); }
  ~Config() { intentd_config_destroy(cfg_); }
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
  intentd_config* get() const { return cfg_; }

 private:
  intentd_config* cfg_ = nullptr;
};

// Flag values collected by CLI11, applied to the config after the file.
struct SettingFlags {
  std::string config_file;
  std::string snapshot;
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::string> raw_sets;

  void apply(const Config& cfg) const {
    if (!snapshot.empty()) check(intentd_config_load_snapshot(cfg.get(), snapshot.c_str()));
    if (!config_file.empty()) check(intentd_config_load_file(cfg.get(), config_file.c_str()));
    for (const auto& [k, v] : values) check(intentd_config_set(cfg.get(), k.c_str(), v.c_str()));
    for (const auto& kv : raw_sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got \"" << kv << "\"\n";
        throw Failure{INTENTD_VALIDATION_ERROR};
      }
      check(intentd_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
  }
};

// Registers an option that writes `key` when given.
void bind(CLI::App* app, SettingFlags& flags, const std::string& name, const std::string& key,
          const std::string& help) {
  app->add_option_function<std::string>(
      name, [&flags, key](const std::string& v) { flags.values.emplace_back(key, v); }, help);
}

void bind_switch(CLI::App* app, SettingFlags& flags, const std::string& name, const std::string& key,
                 const std::string& value, const std::string& help) {
  app->add_flag_callback(
      name, [&flags, key, value] { flags.values.emplace_back(key, value); }, help);
}

void add_common(CLI::App* app, SettingFlags& flags) {
  app->add_option("--config", flags.config_file, "INI configuration file")->check(CLI::ExistingFile);
  app->add_option("--from-snapshot", flags.snapshot, "config.json of an earlier run")->check(CLI::ExistingFile);
  app->add_option("--set", flags.raw_sets, "Override any setting (section.key=value)");
  bind(app, flags, "--dataset", "dataset.path", "Dataset file or directory");
  bind(app, flags, "--format", "dataset.format", "clinc, banking or generic");
  bind(app, flags, "--dataset-id", "dataset.id", "Dataset identifier used in cache keys");
  bind(app, flags, "--kir", "split.kir", "Known intent ratio in (0, 1]");
  bind(app, flags, "--pool-fraction", "split.pool_fraction", "Share of each known intent's train data in the pool");
  bind(app, flags, "--seed", "split.seed", "Master seed");
  bind(app, flags, "--x", "prompt.x", "Examples per known intent in the prompt generator");
  bind(app, flags, "--cache-dir", "prompt.cache_dir", "Prompt cache directory");
  bind(app, flags, "--backend", "llm.backend",
       "remote, gold-oracle, paraphrase-oracle, drift-mock or replay");
  bind(app, flags, "--model", "llm.model", "Model identifier");
  bind(app, flags, "--base-url", "llm.base_url", "Chat completion endpoint base URL");
  bind(app, flags, "--temperature", "llm.temperature", "Sampling temperature");
  bind(app, flags, "--cassette", "llm.cassette", "Cassette file for the replay backend");
  bind(app, flags, "--cassette-mode", "llm.cassette_mode", "record or replay");
  bind(app, flags, "--record-backend", "llm.record_backend", "Backend recorded in record mode");
  bind(app, flags, "--paraphrase-map", "llm.paraphrase_map", "JSON object renaming gold labels");
  bind(app, flags, "--embedder", "embedding.provider", "trigram or remote");
}

int fail_with(intentd_status s) {
  std::cerr << "error: " << intentd_status_name(s) << ": " << intentd_last_error() << "\n";
  return intentd_status_exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-set intent discovery with in-context learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(intentd_version()));

  SettingFlags gen_flags;
  bool fallback = false;
  auto* gen = app.add_subcommand("gen-prompt", "Generate the task prompt for a split (cached)");
  add_common(gen, gen_flags);
  gen->add_flag("--fallback", fallback, "Store the fixed human-written prompt instead");

  SettingFlags run_flags;
  std::string resume;
  auto* run = app.add_subcommand("run", "Run intent discovery over the test split");
  add_common(run, run_flags);
  bind(run, run_flags, "--shots", "sampler.shots", "Few-shot examples per prompt (0 disables)");
  bind(run, run_flags, "--skif", "sampler.skif", "Known intents shown per prompt");
  bind(run, run_flags, "--batch-size", "engine.batch_size", "Utterances per prompt");
  bind(run, run_flags, "--output,-o", "engine.output_dir", "Run directory");
  bind_switch(run, run_flags, "--no-icp", "prompt.icp", "false", "Use the fixed prompt instead of generating one");
  bind_switch(run, run_flags, "--no-sfs", "sampler.sfs", "false", "Draw few-shot examples at random");
  bind_switch(run, run_flags, "--no-kif", "engine.kif", "false", "Do not feed discovered intents back");
  run->add_option("--resume", resume, "Continue the partial run in this directory")->check(CLI::ExistingDirectory);

  std::string eval_dir;
  std::int64_t k_override = 0;
  bool with_fbd = false;
  double eps = 0.5;
  auto* eval = app.add_subcommand("eval", "Evaluate a run directory");
  eval->add_option("run_dir", eval_dir, "Run directory")->required();
  eval->add_option("--k", k_override, "Number of clusters (skips the DBSCAN estimate)")
      ->check(CLI::PositiveNumber);
  eval->add_option("--eps", eps, "DBSCAN radius in cosine distance");
  eval->add_flag("--fbd", with_fbd, "Also compute FBD between discovered and unknown intents");

  std::vector<std::string> reports;
  std::string table_format = "text";
  auto* report = app.add_subcommand("report", "Tabulate evaluation reports");
  report->add_option("reports", reports, "report.json files or run directories")->required();
  report->add_option("--format", table_format, "text or csv")->check(CLI::IsMember({"text", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      Config cfg;
      gen_flags.apply(cfg);
      int hit = 0;
      const std::string path = read_string([&](char* b, size_t c, size_t* n) {
        return intentd_gen_prompt(cfg.get(), fallback ? 1 : 0, b, c, n, &hit);
      });
      std::cout << (hit ? "cache hit: " : "generated: ") << path << "\n";
    } else if (*run) {
      Config cfg;
      run_flags.apply(cfg);
      const std::string dir = read_string([&](char* b, size_t c, size_t* n) {
        return intentd_run(cfg.get(), resume.empty() ? nullptr : resume.c_str(), b, c, n);
      });
      std::cout << "run complete: " << dir << "\n";
    } else if (*eval) {
      intentd_eval_options o = intentd_eval_options_default();
      o.k_override = k_override;
      o.eps = eps;
      o.compute_fbd = with_fbd ? 1 : 0;
      intentd_report* rep = nullptr;
      check(intentd_eval(eval_dir.c_str(), &o, &rep));
      for (const char* m : {"nmi", "ari", "acc", "ndi", "ndi_deviation", "k_requested", "k_used", "fbd"}) {
        double v = 0.0;
        if (intentd_report_get(rep, m, &v) == INTENTD_OK) std::printf("%-14s %.6g\n", m, v);
      }
      intentd_report_destroy(rep);
      std::cout << "report: " << (std::filesystem::path(eval_dir) / "report.json").string() << "\n";
    } else if (*report) {
      std::vector<std::string> paths;
      for (const auto& r : reports) {
        paths.push_back(std::filesystem::is_directory(r) ? (std::filesystem::path(r) / "report.json").string() : r);
      }
      std::vector<const char*> cpaths;
      for (const auto& p : paths) cpaths.push_back(p.c_str());
      std::cout << read_string([&](char* b, size_t c, size_t* n) {
        return intentd_tabulate(cpaths.data(), cpaths.size(), table_format.c_str(), b, c, n);
      });
    }
  } catch (const Failure& f) {
    return fail_with(f.status);
  }
  return 0;
}
