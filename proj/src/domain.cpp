// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "intentd/error.hpp"
#include "intentd/rng.hpp"

namespace intentd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bytes >= 0x80 are kept so UTF-8 labels (multilingual datasets) survive.
bool is_label_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void parse_fail(const fs::path& path, const std::string& where, const std::string& what) {
  fail(ErrorCode::kParseError, path.string() + ": " + where + ": " + what);
}

LabeledExample make_example(const fs::path& path, const std::string& where, std::string_view text,
                            std::string_view label) {
  if (trim(text).empty()) parse_fail(path, where, "empty utterance text");
  try {
    return LabeledExample{std::string(trim(text)), IntentLabel::normalize(label)};
  } catch (const Error& e) {
    parse_fail(path, where, e.what());
  }
}

// -- CLINC: {"train": [[text, label], ...], "val": [...], "test": [...]} ----

std::vector<LabeledExample> clinc_array(const fs::path& path, const json& doc, const char* key) {
  std::vector<LabeledExample> out;
  auto it = doc.find(key);
  if (it == doc.end()) return out;
  if (!it->is_array()) parse_fail(path, key, "expected an array");
  out.reserve(it->size());
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& rec = (*it)[i];
    const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
    if (!rec.is_array() || rec.size() != 2 || !rec[0].is_string() || !rec[1].is_string()) {
      parse_fail(path, where, "expected [utterance, intent]");
    }
    out.push_back(make_example(path, where, rec[0].get<std::string>(), rec[1].get<std::string>()));
  }
  return out;
}

DatasetSplit load_clinc_file(const fs::path& path) {
  const std::string text = read_file(path);
  if (trim(text).empty()) parse_fail(path, "offset 0", "empty document");
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(path, "byte " + std::to_string(e.byte), e.what());
  }
  if (!doc.is_object()) parse_fail(path, "root", "expected an object with train/val/test arrays");
  if (!doc.contains("train") && !doc.contains("val") && !doc.contains("test")) {
    parse_fail(path, "root", "no train/val/test arrays");
  }
  DatasetSplit split;
  split.train = clinc_array(path, doc, "train");
  split.validation = clinc_array(path, doc, "val");
  split.test = clinc_array(path, doc, "test");
  return split;
}

// -- BANKING: csv with header "text,category" ------------------------------

std::vector<LabeledExample> load_banking_file(const fs::path& path) {
  const std::string text = read_file(path);
  if (trim(text).empty()) parse_fail(path, "line 1", "empty file");
  std::vector<std::vector<std::string>> rows;
  try {
    rows = read_csv(text);
  } catch (const Error& e) {
    parse_fail(path, "csv", e.what());
  }
  if (rows.empty()) parse_fail(path, "line 1", "missing header");
  const auto& header = rows.front();
  if (header.size() != 2 || trim(header[0]) != "text" || trim(header[1]) != "category") {
    parse_fail(path, "record 1", "expected header \"text,category\"");
  }
  std::vector<LabeledExample> out;
  out.reserve(rows.size() - 1);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "record " + std::to_string(i + 1);
    if (row.size() == 1 && trim(row[0]).empty()) continue;  // blank line
    if (row.size() != 2) parse_fail(path, where, "expected 2 fields, got " + std::to_string(row.size()));
    out.push_back(make_example(path, where, row[0], row[1]));
  }
  return out;
}

// -- Generic: JSONL {"text": ..., "intent": ..., optional "split": ...} -----

struct GenericRecord {
  LabeledExample example;
  std::string split;
};

std::vector<GenericRecord> load_generic_file(const fs::path& path) {
  const std::string text = read_file(path);
  if (trim(text).empty()) parse_fail(path, "line 1", "empty file");
  std::vector<GenericRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      parse_fail(path, where, e.what());
    }
    if (!rec.is_object() || !rec.contains("text") || !rec.contains("intent") ||
        !rec["text"].is_string() || !rec["intent"].is_string()) {
      parse_fail(path, where, "expected an object with string fields \"text\" and \"intent\"");
    }
    std::string split = "train";
    if (auto it = rec.find("split"); it != rec.end()) {
      if (!it->is_string()) parse_fail(path, where, "\"split\" must be a string");
      split = it->get<std::string>();
      if (split == "dev" || split == "validation") split = "val";
      if (split != "train" && split != "val" && split != "test") {
        parse_fail(path, where, "unknown split \"" + split + "\"");
      }
    }
    out.push_back({make_example(path, where, rec["text"].get<std::string>(),
                                rec["intent"].get<std::string>()),
                   split});
  }
  if (out.empty()) parse_fail(path, "line 1", "no records");
  return out;
}

std::vector<LabeledExample> load_split_file(const fs::path& path, DatasetFormat format) {
  switch (format) {
    case DatasetFormat::kBanking:
      return load_banking_file(path);
    case DatasetFormat::kGeneric: {
      std::vector<LabeledExample> out;
      for (auto& r : load_generic_file(path)) out.push_back(std::move(r.example));
      return out;
    }
    case DatasetFormat::kClinc:
      break;
  }
  fail(ErrorCode::kUnknownFormat, "per-split files are not supported for clinc");
}

std::optional<fs::path> find_split_file(const fs::path& dir, const std::vector<std::string>& stems,
                                        const std::vector<std::string>& exts) {
  for (const auto& stem : stems) {
    for (const auto& ext : exts) {
      fs::path p = dir / (stem + ext);
      if (fs::is_regular_file(p)) return p;
    }
  }
  return std::nullopt;
}

void fill_inventory(DatasetSplit& split) {
  std::set<IntentLabel> labels;
  for (const auto* part : {&split.train, &split.validation, &split.test}) {
    for (const auto& ex : *part) labels.insert(ex.intent);
  }
  split.intent_inventory.assign(labels.begin(), labels.end());
}

}  // namespace

IntentLabel IntentLabel::normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_sep = false;
  for (unsigned char c : raw) {
    if (is_label_char(c)) {
      if (pending_sep && !out.empty()) out.push_back('_');
      pending_sep = false;
      out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else {
      pending_sep = true;
    }
  }
  if (out.empty()) fail(ErrorCode::kEmptyLabel, "label has no alphanumeric content: \"" + std::string(raw) + "\"");
  return IntentLabel(std::move(out));
}

std::string IntentLabel::as_text() const {
  std::string s = value_;
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

DatasetFormat parse_dataset_format(std::string_view tag) {
  if (tag == "clinc") return DatasetFormat::kClinc;
  if (tag == "banking") return DatasetFormat::kBanking;
  if (tag == "generic") return DatasetFormat::kGeneric;
  fail(ErrorCode::kUnknownFormat, "unknown dataset format \"" + std::string(tag) + "\"");
}

std::string_view dataset_format_name(DatasetFormat format) {
  switch (format) {
    case DatasetFormat::kClinc: return "clinc";
    case DatasetFormat::kBanking: return "banking";
    case DatasetFormat::kGeneric: return "generic";
  }
  return "?";
}

DatasetSplit load_dataset(const fs::path& path, DatasetFormat format) {
  if (!fs::exists(path)) fail(ErrorCode::kIoError, "dataset not found: " + path.string());
  DatasetSplit split;
  if (fs::is_directory(path)) {
    if (format == DatasetFormat::kClinc) {
      auto file = find_split_file(path, {"data_full", "data"}, {".json"});
      if (!file) fail(ErrorCode::kIoError, "no data_full.json in " + path.string());
      split = load_clinc_file(*file);
    } else {
      const std::vector<std::string> exts = format == DatasetFormat::kBanking
                                                ? std::vector<std::string>{".csv"}
                                                : std::vector<std::string>{".jsonl", ".json"};
      auto train = find_split_file(path, {"train"}, exts);
      auto val = find_split_file(path, {"val", "dev", "valid"}, exts);
      auto test = find_split_file(path, {"test"}, exts);
      if (!train && !test) fail(ErrorCode::kIoError, "no train/test files in " + path.string());
      if (train) split.train = load_split_file(*train, format);
      if (val) split.validation = load_split_file(*val, format);
      if (test) split.test = load_split_file(*test, format);
    }
  } else {
    switch (format) {
      case DatasetFormat::kClinc:
        split = load_clinc_file(path);
        break;
      case DatasetFormat::kBanking:
        split.train = load_banking_file(path);
        break;
      case DatasetFormat::kGeneric:
        for (auto& r : load_generic_file(path)) {
          auto& dst = r.split == "test" ? split.test : r.split == "val" ? split.validation : split.train;
          dst.push_back(std::move(r.example));
        }
        break;
    }
  }
  fill_inventory(split);
  if (split.intent_inventory.empty()) parse_fail(path, "dataset", "no labeled records");
  return split;
}

std::vector<std::vector<std::string>> read_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t record = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          fail(ErrorCode::kParseError, "record " + std::to_string(record) + ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        break;
      case '\n':
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
        field.clear();
        row.clear();
        field_started = false;
        ++record;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) fail(ErrorCode::kParseError, "record " + std::to_string(record) + ": unterminated quote");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::size_t known_intent_count(double kir, std::size_t inventory_size) {
  return static_cast<std::size_t>(std::floor(kir * static_cast<double>(inventory_size) + 1e-9));
}

std::size_t pool_count(double fraction, std::size_t count) {
  if (count == 0) return 0;
  const double raw = std::ceil(fraction * static_cast<double>(count) - 1e-9);
  return std::min(count, static_cast<std::size_t>(std::max(raw, 1.0)));
}

KirSplit build_kir_split(const DatasetSplit& data, double kir, double pool_fraction, std::uint64_t seed) {
  if (!(kir > 0.0 && kir <= 1.0)) fail(ErrorCode::kInvalidRatio, "kir must be in (0, 1], got " + std::to_string(kir));
  if (!(pool_fraction > 0.0 && pool_fraction <= 1.0)) {
    fail(ErrorCode::kInvalidRatio, "pool fraction must be in (0, 1], got " + std::to_string(pool_fraction));
  }
  const auto& inventory = data.intent_inventory;
  const std::size_t n_known = known_intent_count(kir, inventory.size());

  Rng rng(derive_seed(seed, 0));
  std::vector<std::size_t> order(inventory.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<bool> is_known(inventory.size(), false);
  for (std::size_t i = 0; i < n_known; ++i) is_known[order[i]] = true;

  KirSplit split;
  split.kir = kir;
  split.seed = seed;
  std::map<IntentLabel, std::vector<std::size_t>> train_by_intent;
  for (std::size_t i = 0; i < inventory.size(); ++i) {
    (is_known[i] ? split.known_intents : split.unknown_intents).push_back(inventory[i]);
    if (is_known[i]) train_by_intent[inventory[i]];
  }
  for (std::size_t i = 0; i < data.train.size(); ++i) {
    auto it = train_by_intent.find(data.train[i].intent);
    if (it != train_by_intent.end()) it->second.push_back(i);
  }

  Rng pool_rng(derive_seed(seed, 1));
  for (const auto& label : split.known_intents) {
    auto& idx = train_by_intent[label];
    const std::size_t take = pool_count(pool_fraction, idx.size());
    // Partial Fisher-Yates: first `take` slots become a uniform sample.
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(pool_rng.uniform_index(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    std::vector<std::size_t> chosen(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t i : chosen) split.few_shot_pool_source.push_back(data.train[i]);
  }
  split.test = data.test;
  return split;
}

std::vector<Utterance> to_utterances(const std::vector<LabeledExample>& examples) {
  std::vector<Utterance> out;
  out.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out.push_back(Utterance{std::to_string(i), examples[i].text, examples[i].intent});
  }
  return out;
}

}  // namespace intentd
