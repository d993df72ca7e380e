// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "intentd/error.hpp"

namespace intentd {

namespace fs = std::filesystem;
using nlohmann::json;

ClusterEvalReport evaluate_run(const RunResult& result, std::span<const IntentLabel> gold,
                               EmbeddingProvider& provider, const EvalOptions& options) {
  const auto& preds = result.predictions;
  if (preds.empty()) fail(ErrorCode::kEmptyInput, "run has no predictions");
  if (gold.size() != preds.size()) {
    fail(ErrorCode::kLengthMismatch, "expected one gold label per prediction");
  }

  // Distinct predicted labels in first-seen order, with frequencies.
  std::unordered_map<std::string, std::size_t> point_of;
  std::vector<std::string> texts;
  std::vector<double> weights;
  std::vector<std::size_t> point_index(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    auto [it, fresh] = point_of.try_emplace(preds[i].intent.value(), texts.size());
    if (fresh) {
      texts.push_back(preds[i].intent.as_text());
      weights.push_back(0.0);
    }
    weights[it->second] += 1.0;
    point_index[i] = it->second;
  }
  const std::vector<EmbeddingVector> points = embed_texts(provider, texts);

  ClusterEvalReport r;
  r.n_items = preds.size();
  r.distinct_predicted = texts.size();
  r.k_requested = options.k_override ? *options.k_override
                                     : estimate_k_dbscan_weighted(points, weights, options.eps, options.min_pts);
  if (r.k_requested == 0) fail(ErrorCode::kInvalidK, "k must be >= 1");
  r.k_used = std::min(r.k_requested, texts.size());

  KMeansOptions km;
  km.k = r.k_used;
  km.seed = options.kmeans_seed.value_or(result.config_snapshot.seed);
  km.restarts = options.kmeans_restarts;
  km.max_iters = options.kmeans_max_iters;
  const KMeansResult clusters = kmeans_weighted(points, weights, km);

  std::unordered_map<std::string, std::int64_t> class_of;
  std::vector<std::int64_t> gold_ids(preds.size());
  std::vector<std::int64_t> cluster_ids(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    auto [it, fresh] = class_of.try_emplace(gold[i].value(), static_cast<std::int64_t>(class_of.size()));
    if (fresh) r.class_names.push_back(gold[i].value());
    gold_ids[i] = it->second;
    cluster_ids[i] = static_cast<std::int64_t>(clusters.assignments[point_index[i]]);
  }
  r.table = ContingencyTable::build(gold_ids, cluster_ids);
  r.nmi = nmi(r.table);
  r.ari = ari(r.table);
  r.acc = clustering_accuracy(r.table);

  r.gold_intent_count = result.known_intents.size() + result.unknown_intents.size();
  if (r.gold_intent_count == 0) r.gold_intent_count = class_of.size();
  const NdiResult n = ndi(result.final_db.size(), r.gold_intent_count);
  r.ndi = n.count;
  r.ndi_deviation = n.deviation;

  if (options.compute_fbd) {
    std::vector<std::string> discovered;
    for (const auto& l : result.final_db.discovered_labels()) discovered.push_back(l.as_text());
    std::vector<std::string> unknown;
    for (const auto& l : result.unknown_intents) unknown.push_back(l.as_text());
    r.fbd = fbd(discovered, unknown, provider, options.fbd_shrinkage);
  }
  return r;
}

ClusterEvalReport evaluate_run(const RunResult& result, EmbeddingProvider& provider, const EvalOptions& options) {
  std::vector<IntentLabel> gold;
  gold.reserve(result.predictions.size());
  for (const auto& p : result.predictions) {
    if (!p.gold_intent) fail(ErrorCode::kValidationError, "prediction " + p.utterance_id + " has no gold intent");
    gold.push_back(*p.gold_intent);
  }
  return evaluate_run(result, gold, provider, options);
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path.string());
  out << content;
  if (!out) fail(ErrorCode::kIoError, "short write to " + path.string());
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

fs::path write_report(const ClusterEvalReport& r, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());

  json j = {{"nmi", r.nmi},
            {"ari", r.ari},
            {"acc", r.acc},
            {"ndi", r.ndi},
            {"ndi_deviation", r.ndi_deviation},
            {"gold_intents", r.gold_intent_count},
            {"k_requested", r.k_requested},
            {"k_used", r.k_used},
            {"n_items", r.n_items},
            {"distinct_predicted", r.distinct_predicted}};
  if (r.fbd) j["fbd"] = *r.fbd;
  const fs::path report = dir / kReportFile;
  write_file(report, j.dump(2) + "\n");

  std::string csv = "gold_intent";
  for (auto c : r.table.cluster_ids) csv += ",cluster_" + std::to_string(c);
  csv += "\n";
  for (std::size_t i = 0; i < r.table.class_ids.size(); ++i) {
    csv += csv_escape(r.class_names.at(static_cast<std::size_t>(r.table.class_ids[i])));
    for (auto v : r.table.counts[i]) csv += "," + std::to_string(v);
    csv += "\n";
  }
  write_file(dir / kContingencyFile, csv);
  return report;
}

std::map<std::string, double> load_report(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read report " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::kParseError, path.string() + ": report must be an object");
  std::map<std::string, double> out;
  for (const auto& [k, v] : j.items()) {
    if (v.is_number()) out[k] = v.get<double>();
  }
  return out;
}

std::string tabulate_reports(std::span<const fs::path> report_paths, TableFormat format) {
  static constexpr std::pair<const char*, const char*> kColumns[] = {
      {"nmi", "NMI"}, {"ari", "ARI"}, {"acc", "ACC"}, {"ndi", "NDI"}, {"fbd", "FBD"}};

  std::vector<std::vector<std::string>> rows;
  for (const auto& p : report_paths) {
    const auto metrics = load_report(p);
    std::string name = p.has_parent_path() && p.filename() == kReportFile ? p.parent_path().filename().string()
                                                                          : p.string();
    if (name.empty()) name = p.string();
    std::vector<std::string> row{name};
    for (const auto& [key, title] : kColumns) {
      const auto it = metrics.find(key);
      if (it == metrics.end()) {
        row.emplace_back(format == TableFormat::kCsv ? "" : "-");
      } else if (std::string_view(key) == "ndi") {
        row.push_back(fmt("%.0f", it->second));
      } else {
        row.push_back(fmt(format == TableFormat::kCsv ? "%.17g" : "%.4f", it->second));
      }
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::string> header{"run"};
  for (const auto& [key, title] : kColumns) header.emplace_back(format == TableFormat::kCsv ? key : title);

  std::ostringstream out;
  if (format == TableFormat::kCsv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_escape(cells[i]);
      out << "\n";
    };
    line(header);
    for (const auto& row : rows) line(row);
    return out.str();
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == 0) {
        out << cells[c] << std::string(width[c] - cells[c].size(), ' ');
      } else {
        out << "  " << std::string(width[c] - cells[c].size(), ' ') << cells[c];
      }
    }
    out << "\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
  return out.str();
}

}  // namespace intentd
