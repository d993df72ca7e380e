// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "intentd/digest.hpp"
#include "intentd/engine.hpp"
#include "intentd/error.hpp"

namespace intentd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view skif_repr_name(SkifRepresentation r) {
  return r == SkifRepresentation::kPoolCentroid ? "pool_centroid" : "label_text";
}

SkifRepresentation parse_skif_repr(const std::string& s) {
  if (s == "label_text") return SkifRepresentation::kLabelText;
  if (s == "pool_centroid") return SkifRepresentation::kPoolCentroid;
  fail(ErrorCode::kParseError, "unknown skif representation: " + s);
}

json labels_json(std::span<const IntentLabel> labels) {
  json a = json::array();
  for (const auto& l : labels) a.push_back(l.value());
  return a;
}

std::vector<IntentLabel> labels_from(const json& a) {
  std::vector<IntentLabel> out;
  for (const auto& v : a) out.push_back(IntentLabel::normalize(v.get<std::string>()));
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << content;
    if (!out) fail(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const fs::path& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, origin.string() + ": " + e.what());
  }
}

std::vector<json> parse_jsonl(const fs::path& path) {
  std::istringstream in(read_all(path));
  std::vector<json> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_json(line, path));
  }
  return rows;
}

json prediction_json(const PredictionRecord& p) {
  return {{"utterance_id", p.utterance_id},
          {"text", p.text},
          {"gold_intent", p.gold_intent ? json(p.gold_intent->value()) : json(nullptr)},
          {"raw_line", p.raw_line},
          {"intent", p.intent.value()},
          {"batch_index", p.batch_index},
          {"newly_discovered", p.newly_discovered}};
}

PredictionRecord prediction_from(const json& j) {
  std::optional<IntentLabel> gold;
  if (!j.at("gold_intent").is_null()) gold = IntentLabel::normalize(j.at("gold_intent").get<std::string>());
  return PredictionRecord{j.at("utterance_id").get<std::string>(),
                          j.at("text").get<std::string>(),
                          gold,
                          j.at("raw_line").get<std::string>(),
                          IntentLabel::normalize(j.at("intent").get<std::string>()),
                          j.at("batch_index").get<std::size_t>(),
                          j.at("newly_discovered").get<bool>()};
}

}  // namespace

json config_to_json(const RunConfig& c) {
  return {{"dataset_id", c.dataset_id},
          {"kir", c.kir},
          {"pool_fraction", c.pool_fraction},
          {"n_shots", c.n_shots},
          {"n_skif", c.n_skif ? json(*c.n_skif) : json(nullptr)},
          {"batch_size", c.batch_size},
          {"temperature", c.temperature},
          {"max_output_tokens", c.max_output_tokens},
          {"seed", c.seed},
          {"icpg_enabled", c.icpg_enabled},
          {"sfs_enabled", c.sfs_enabled},
          {"kif_enabled", c.kif_enabled},
          {"dedup_by_text", c.dedup_by_text},
          {"skif_representation", skif_repr_name(c.skif_representation)},
          {"x_per_intent", c.x_per_intent},
          {"max_parse_retries", c.max_parse_retries},
          {"model_id", c.model_id},
          {"token_budget", c.budget.max_tokens},
          {"output_dir", c.output_dir.string()},
          {"cache_dir", c.cache_dir.string()},
          {"settings", c.settings}};
}

RunConfig config_from_json(const json& j) {
  try {
    RunConfig c;
    c.dataset_id = j.at("dataset_id").get<std::string>();
    c.kir = j.at("kir").get<double>();
    c.pool_fraction = j.at("pool_fraction").get<double>();
    c.n_shots = j.at("n_shots").get<std::size_t>();
    if (!j.at("n_skif").is_null()) c.n_skif = j.at("n_skif").get<std::size_t>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.temperature = j.at("temperature").get<double>();
    c.max_output_tokens = j.at("max_output_tokens").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.icpg_enabled = j.at("icpg_enabled").get<bool>();
    c.sfs_enabled = j.at("sfs_enabled").get<bool>();
    c.kif_enabled = j.at("kif_enabled").get<bool>();
    c.dedup_by_text = j.at("dedup_by_text").get<bool>();
    c.skif_representation = parse_skif_repr(j.at("skif_representation").get<std::string>());
    c.x_per_intent = j.at("x_per_intent").get<std::size_t>();
    c.max_parse_retries = j.at("max_parse_retries").get<std::size_t>();
    c.model_id = j.at("model_id").get<std::string>();
    c.budget.max_tokens = j.at("token_budget").get<std::size_t>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.cache_dir = j.at("cache_dir").get<std::string>();
    c.settings = j.value("settings", std::map<std::string, std::string>{});
    return c;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, std::string("config snapshot: ") + e.what());
  }
}

Manifest persist_run(const RunResult& r, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::pair<std::string, std::string>> files;

  std::string preds;
  for (const auto& p : r.predictions) preds += prediction_json(p).dump() + "\n";
  files.emplace_back(kPredictionsFile, std::move(preds));

  std::string intents;
  for (const auto& e : r.final_db.entries()) {
    json row = {{"label", e.label.value()},
                {"provenance", e.provenance == Provenance::kSeed ? "seed" : "discovered"},
                {"discovered_at_batch",
                 e.discovered_at_batch ? json(*e.discovered_at_batch) : json(nullptr)}};
    intents += row.dump() + "\n";
  }
  files.emplace_back(kIntentsFile, std::move(intents));

  files.emplace_back(kConfigFile, config_to_json(r.config_snapshot).dump(2) + "\n");

  std::string batches;
  for (const auto& b : r.per_batch_log) {
    json row = {{"batch_index", b.batch_index},
                {"prompt_digest", b.prompt_digest},
                {"attempts", b.attempts},
                {"new_intents", labels_json(b.new_intents)}};
    batches += row.dump() + "\n";
  }
  files.emplace_back(kBatchLogFile, std::move(batches));

  json split = {{"known_intents", labels_json(r.known_intents)},
                {"unknown_intents", labels_json(r.unknown_intents)},
                {"total_batches", r.total_batches}};
  files.emplace_back(kSplitFile, split.dump(2) + "\n");

  Manifest m;
  m.complete = r.complete;
  m.completed_batches = r.completed_batches();
  m.total_batches = r.total_batches;
  json jfiles = json::array();
  for (const auto& [name, content] : files) {
    write_atomic(dir / name, content);
    ManifestEntry e{name, sha256_hex(content), content.size()};
    jfiles.push_back({{"name", e.name}, {"sha256", e.sha256}, {"bytes", e.bytes}});
    m.files.push_back(std::move(e));
  }
  json jm = {{"status", m.complete ? "complete" : "partial"},
             {"completed_batches", m.completed_batches},
             {"total_batches", m.total_batches},
             {"files", jfiles}};
  write_atomic(dir / kManifestFile, jm.dump(2) + "\n");
  return m;
}

Manifest load_manifest(const fs::path& dir) {
  const fs::path path = dir / kManifestFile;
  const json j = parse_json(read_all(path), path);
  try {
    Manifest m;
    const auto status = j.at("status").get<std::string>();
    if (status != "complete" && status != "partial") fail(ErrorCode::kParseError, "bad manifest status: " + status);
    m.complete = status == "complete";
    m.completed_batches = j.at("completed_batches").get<std::size_t>();
    m.total_batches = j.at("total_batches").get<std::size_t>();
    for (const auto& f : j.at("files")) {
      m.files.push_back({f.at("name").get<std::string>(), f.at("sha256").get<std::string>(),
                         f.at("bytes").get<std::uintmax_t>()});
    }
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
}

RunResult load_run(const fs::path& dir) {
  const Manifest m = load_manifest(dir);
  for (const auto& f : m.files) {
    if (sha256_file(dir / f.name) != f.sha256) {
      fail(ErrorCode::kIoError, "digest mismatch for " + (dir / f.name).string());
    }
  }
  try {
    RunResult r;
    r.complete = m.complete;
    r.total_batches = m.total_batches;
    for (const auto& row : parse_jsonl(dir / kPredictionsFile)) r.predictions.push_back(prediction_from(row));
    for (const auto& row : parse_jsonl(dir / kIntentsFile)) {
      const auto label = IntentLabel::normalize(row.at("label").get<std::string>());
      if (row.at("provenance").get<std::string>() == "seed") {
        r.final_db.add_seed(label);
      } else {
        r.final_db.add_discovered(label, row.at("discovered_at_batch").get<std::size_t>());
      }
    }
    const fs::path cfg = dir / kConfigFile;
    r.config_snapshot = config_from_json(parse_json(read_all(cfg), cfg));
    for (const auto& row : parse_jsonl(dir / kBatchLogFile)) {
      r.per_batch_log.push_back({row.at("batch_index").get<std::size_t>(), row.at("prompt_digest").get<std::string>(),
                                 row.at("attempts").get<std::size_t>(), labels_from(row.at("new_intents"))});
    }
    const fs::path sp = dir / kSplitFile;
    const json split = parse_json(read_all(sp), sp);
    r.known_intents = labels_from(split.at("known_intents"));
    r.unknown_intents = labels_from(split.at("unknown_intents"));
    if (r.completed_batches() != m.completed_batches) {
      fail(ErrorCode::kParseError, "batch log disagrees with the manifest in " + dir.string());
    }
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, dir.string() + ": " + e.what());
  }
}

}  // namespace intentd
