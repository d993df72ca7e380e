// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/settings.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "intentd/error.hpp"
#include "intentd/http.hpp"
#include "intentd/oracles.hpp"
#include "intentd/prompt_cache.hpp"

namespace intentd {

namespace fs = std::filesystem;

namespace {

constexpr const char* kDefaultBaseUrl = "https://api.openai.com/v1";

// Keys that locate a run rather than define it; excluded from snapshots.
bool is_location_key(const std::string& key) { return key == "engine.output_dir"; }

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

class Reader {
 public:
  explicit Reader(const Settings& s) : s_(s) {}

  const std::string& str(const std::string& key) const { return s_.get(key); }

  bool flag(const std::string& key) const {
    const std::string& v = str(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    fail(ErrorCode::kValidationError, key + ": expected a boolean, got \"" + v + "\"");
  }

  double real(const std::string& key) const {
    const std::string& v = str(key);
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    fail(ErrorCode::kValidationError, key + ": expected a number, got \"" + v + "\"");
  }

  std::uint64_t count(const std::string& key) const {
    const std::string& v = str(key);
    std::uint64_t out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc() || end != v.data() + v.size()) {
      fail(ErrorCode::kValidationError, key + ": expected a non-negative integer, got \"" + v + "\"");
    }
    return out;
  }

 private:
  const Settings& s_;
};

}  // namespace

const std::vector<std::pair<std::string, std::string>>& Settings::defaults() {
  static const std::vector<std::pair<std::string, std::string>> kDefaults = {
      {"dataset.path", ""},
      {"dataset.format", "clinc"},
      {"dataset.id", ""},
      {"split.kir", "0.75"},
      {"split.pool_fraction", "0.1"},
      {"split.seed", "0"},
      {"sampler.shots", "10"},
      {"sampler.skif", ""},
      {"sampler.sfs", "true"},
      {"sampler.dedup", "true"},
      {"sampler.skif_repr", "label_text"},
      {"prompt.icp", "true"},
      {"prompt.x", "2"},
      {"prompt.budget", "8192"},
      {"prompt.cache_dir", ".intentd-cache"},
      {"prompt.max_parse_retries", "1"},
      {"llm.backend", "remote"},
      {"llm.model", "gpt-4"},
      {"llm.base_url", ""},
      {"llm.token_env", "INTENTD_API_KEY"},
      {"llm.temperature", "0.7"},
      {"llm.max_output_tokens", "1024"},
      {"llm.retries", "5"},
      {"llm.timeout_ms", "120000"},
      {"llm.exchange_log", ""},
      {"llm.cassette", ""},
      {"llm.cassette_mode", "replay"},
      {"llm.record_backend", "gold-oracle"},
      {"llm.paraphrase_map", ""},
      {"embedding.provider", "trigram"},
      {"embedding.dim", "512"},
      {"embedding.model", ""},
      {"embedding.base_url", ""},
      {"engine.batch_size", "16"},
      {"engine.kif", "true"},
      {"engine.output_dir", "intentd-run"},
  };
  return kDefaults;
}

Settings::Settings() {
  for (const auto& [k, v] : defaults()) values_[k] = v;
}

void Settings::assign(const std::string& key, const std::string& value, bool explicit_value) {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorCode::kValidationError, "unrecognised setting \"" + key + "\"");
  if (explicit_value) {
    explicit_.insert(key);
  } else if (explicit_.contains(key)) {
    return;
  }
  it->second = value;
}

void Settings::set(const std::string& key, const std::string& value) { assign(key, value, true); }

const std::string& Settings::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) fail(ErrorCode::kNotFound, "unrecognised setting \"" + key + "\"");
  return it->second;
}

void Settings::load_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read config file " + path.string());
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      fail(ErrorCode::kValidationError, path.string() + ": key \"" + section + "\" is outside a section");
    }
    for (const auto& [key, value] : body) assign(section + "." + key, value.data(), false);
  }
}

RunConfig Settings::run_config() const {
  const Reader r(*this);
  RunConfig c;
  c.dataset_id = r.str("dataset.id");
  if (c.dataset_id.empty()) {
    const fs::path p = r.str("dataset.path");
    c.dataset_id = r.str("dataset.format") + (p.empty() ? "" : ":" + p.stem().string());
  }
  c.kir = r.real("split.kir");
  c.pool_fraction = r.real("split.pool_fraction");
  c.seed = r.count("split.seed");
  c.n_shots = r.count("sampler.shots");
  if (!r.str("sampler.skif").empty()) c.n_skif = r.count("sampler.skif");
  c.sfs_enabled = r.flag("sampler.sfs");
  c.dedup_by_text = r.flag("sampler.dedup");
  const std::string& repr = r.str("sampler.skif_repr");
  if (repr == "label_text") {
    c.skif_representation = SkifRepresentation::kLabelText;
  } else if (repr == "pool_centroid") {
    c.skif_representation = SkifRepresentation::kPoolCentroid;
  } else {
    fail(ErrorCode::kValidationError, "sampler.skif_repr: expected label_text or pool_centroid");
  }
  c.icpg_enabled = r.flag("prompt.icp");
  c.x_per_intent = r.count("prompt.x");
  c.budget.max_tokens = r.count("prompt.budget");
  c.cache_dir = r.str("prompt.cache_dir");
  c.max_parse_retries = r.count("prompt.max_parse_retries");
  c.model_id = r.str("llm.model");
  c.temperature = r.real("llm.temperature");
  c.max_output_tokens = static_cast<int>(r.count("llm.max_output_tokens"));
  c.batch_size = r.count("engine.batch_size");
  c.kif_enabled = r.flag("engine.kif");
  c.output_dir = r.str("engine.output_dir");
  for (const auto& [k, v] : values_) {
    if (!is_location_key(k)) c.settings[k] = v;
  }
  // Backend-level values are checked here so bad input fails before any work.
  r.count("llm.retries");
  r.count("llm.timeout_ms");
  r.count("embedding.dim");
  parse_dataset_format(r.str("dataset.format"));
  c.validate();
  return c;
}

Settings Settings::from_snapshot(const RunConfig& snapshot) {
  Settings s;
  for (const auto& [k, v] : snapshot.settings) s.assign(k, v, false);
  s.assign("engine.output_dir", snapshot.output_dir.string(), false);
  return s;
}

Settings Settings::from_snapshot_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read snapshot " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return from_snapshot(config_from_json(j));
}

// ---------------------------------------------------------------------------

KirSplit load_split(const Settings& settings) {
  const Reader r(settings);
  const RunConfig c = settings.run_config();
  if (r.str("dataset.path").empty()) fail(ErrorCode::kValidationError, "dataset.path is not set");
  const DatasetSplit data = load_dataset(r.str("dataset.path"), parse_dataset_format(r.str("dataset.format")));
  return build_kir_split(data, c.kir, c.pool_fraction, c.seed);
}

namespace {

RetryPolicy retry_policy(const Reader& r) {
  RetryPolicy p;
  p.max_attempts = static_cast<int>(r.count("llm.retries"));
  if (p.max_attempts < 1) fail(ErrorCode::kValidationError, "llm.retries must be >= 1");
  return p;
}

std::shared_ptr<LlmBackend> make_named_backend(const Reader& r, const std::string& name, const KirSplit& split) {
  if (name == "gold-oracle") return std::make_shared<GoldOracleBackend>(make_answer_key(split.test));
  if (name == "drift-mock") return std::make_shared<DriftMockBackend>(make_answer_key(split.test));
  if (name == "paraphrase-oracle") {
    if (r.str("llm.paraphrase_map").empty()) fail(ErrorCode::kValidationError, "llm.paraphrase_map is not set");
    return std::make_shared<ParaphraseOracleBackend>(make_answer_key(split.test),
                                                     load_paraphrase_map(r.str("llm.paraphrase_map")));
  }
  if (name == "remote") {
    HttpEndpoint ep;
    ep.base_url = r.str("llm.base_url").empty() ? env_or("INTENTD_BASE_URL", kDefaultBaseUrl) : r.str("llm.base_url");
    ep.bearer_token = env_or(r.str("llm.token_env").c_str(), "");
    ep.timeout = std::chrono::milliseconds(r.count("llm.timeout_ms"));
    std::shared_ptr<ExchangeLog> log;
    if (!r.str("llm.exchange_log").empty()) log = std::make_shared<ExchangeLog>(fs::path(r.str("llm.exchange_log")));
    return std::make_shared<RemoteChatBackend>(ep, retry_policy(r), nullptr, log);
  }
  fail(ErrorCode::kValidationError, "unknown backend \"" + name + "\"");
}

}  // namespace

std::shared_ptr<LlmBackend> make_backend(const Settings& settings, const KirSplit& split) {
  const Reader r(settings);
  const std::string& name = r.str("llm.backend");
  if (name != "replay") return make_named_backend(r, name, split);

  if (r.str("llm.cassette").empty()) fail(ErrorCode::kValidationError, "llm.cassette is not set");
  const std::string& mode = r.str("llm.cassette_mode");
  if (mode == "replay") return std::make_shared<ReplayBackend>(r.str("llm.cassette"), CassetteMode::kReplay);
  if (mode != "record") fail(ErrorCode::kValidationError, "llm.cassette_mode: expected record or replay");
  const std::string& inner = r.str("llm.record_backend");
  if (inner == "replay") fail(ErrorCode::kValidationError, "llm.record_backend cannot be replay");
  return std::make_shared<ReplayBackend>(r.str("llm.cassette"), CassetteMode::kRecord,
                                         make_named_backend(r, inner, split));
}

std::shared_ptr<EmbeddingProvider> make_embedder(const Settings& settings) {
  const Reader r(settings);
  const std::string& name = r.str("embedding.provider");
  if (name == "trigram") {
    const auto dim = r.count("embedding.dim");
    if (dim == 0) fail(ErrorCode::kValidationError, "embedding.dim must be >= 1");
    return std::make_shared<TrigramEmbedder>(dim);
  }
  if (name == "remote") {
    if (r.str("embedding.model").empty()) fail(ErrorCode::kValidationError, "embedding.model is not set");
    HttpEndpoint ep;
    ep.base_url = r.str("embedding.base_url").empty() ? env_or("INTENTD_EMBED_BASE_URL", kDefaultBaseUrl)
                                                      : r.str("embedding.base_url");
    ep.bearer_token = env_or(r.str("llm.token_env").c_str(), "");
    ep.timeout = std::chrono::milliseconds(r.count("llm.timeout_ms"));
    return std::make_shared<CachingEmbedder>(
        std::make_shared<RemoteEmbedder>(ep, r.str("embedding.model"), retry_policy(r)));
  }
  fail(ErrorCode::kValidationError, "unknown embedding provider \"" + name + "\"");
}

// ---------------------------------------------------------------------------

GenPromptOutcome gen_prompt(const Settings& settings, bool use_fallback) {
  const RunConfig config = settings.run_config();
  const KirSplit split = load_split(settings);
  if (use_fallback) {
    PromptCache cache(config.cache_dir);
    const PromptKey key{config.dataset_id, split.known_intents.size(), config.x_per_intent, "fallback"};
    const auto lookup = cache.get_or_produce(key.digest(), [] { return std::string(fallback_task_prompt()); });
    return {cache.path_for(key.digest()), lookup.hit};
  }
  const auto backend = make_backend(settings, split);
  const GenerationResult g = prepare_task_prompt(config, split, *backend);
  return {g.path, g.cache_hit};
}

RunOutcome run_command(const Settings& settings, const std::optional<fs::path>& resume_dir) {
  RunOutcome out;
  std::optional<RunResult> previous;
  Settings effective = settings;
  if (resume_dir) {
    previous = load_run(*resume_dir);
    if (previous->complete) fail(ErrorCode::kValidationError, "run in " + resume_dir->string() + " is already complete");
    effective = Settings::from_snapshot(previous->config_snapshot);
    effective.set("engine.output_dir", resume_dir->string());
    out.dir = *resume_dir;
  }
  const RunConfig config = effective.run_config();
  if (!resume_dir) {
    out.dir = config.output_dir;
    if (fs::exists(out.dir / kManifestFile)) {
      fail(ErrorCode::kValidationError,
           out.dir.string() + " already holds a run; resume it or choose another output directory");
    }
  }
  const KirSplit split = load_split(effective);
  const auto backend = make_backend(effective, split);
  const auto embedder = make_embedder(effective);

  RunHooks hooks;
  hooks.persist_dir = out.dir;
  if (previous) hooks.resume_from = &*previous;
  try {
    out.result = run_discovery(config, split, *backend, *embedder, hooks);
  } catch (const BatchError& e) {
    fail(ErrorCode::kPartialRun, std::string(e.what()) + " [" + std::string(error_code_name(e.code())) +
                                     "]; partial run persisted in " + out.dir.string());
  }
  return out;
}

ClusterEvalReport eval_command(const fs::path& run_dir, const EvalOptions& options) {
  std::string missing;
  for (const char* name : {kManifestFile, kPredictionsFile, kIntentsFile, kConfigFile, kBatchLogFile, kSplitFile}) {
    if (!fs::exists(run_dir / name)) missing += "\n  missing " + (run_dir / name).string();
  }
  if (!missing.empty()) fail(ErrorCode::kIoError, "incomplete run directory:" + missing);
  const RunResult result = load_run(run_dir);
  const auto embedder = make_embedder(Settings::from_snapshot(result.config_snapshot));
  ClusterEvalReport report = evaluate_run(result, *embedder, options);
  write_report(report, run_dir);
  return report;
}

}  // namespace intentd
