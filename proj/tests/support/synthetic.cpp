// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace intentd::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

std::string pseudo_word(std::mt19937_64& rng) {
  static const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
                                  "br", "dr", "gl", "kr", "pl", "st", "tr", "sk", "sn", "fl", "gr"};
  static const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou", "ea", "io", "y"};
  static const char* kCodas[] = {"", "n", "r", "x", "m", "l", "sk", "nt", "rd", "q"};
  std::string w;
  const int syllables = 2 + static_cast<int>(rng() % 2);
  for (int s = 0; s < syllables; ++s) {
    w += kOnsets[rng() % std::size(kOnsets)];
    w += kVowels[rng() % std::size(kVowels)];
  }
  w += kCodas[rng() % std::size(kCodas)];
  return w;
}

std::string as_text(const std::string& label) {
  std::string t = label;
  for (char& c : t) {
    if (c == '_') c = ' ';
  }
  return t;
}

}  // namespace

std::vector<std::string> separated_labels(std::size_t n, std::uint64_t seed, const std::vector<std::string>& avoid,
                                          double max_cos) {
  std::mt19937_64 rng(seed);
  std::vector<EmbeddingVector> taken;
  for (const auto& a : avoid) taken.push_back(hashed_trigram_embed(as_text(a), 512));
  std::vector<std::string> out;
  for (int attempts = 0; out.size() < n; ++attempts) {
    if (attempts > 200000) throw std::runtime_error("separated_labels: cannot place enough labels");
    const std::string label = pseudo_word(rng) + "_" + pseudo_word(rng);
    const EmbeddingVector v = hashed_trigram_embed(as_text(label), 512);
    bool ok = true;
    for (const auto& t : taken) {
      if (cosine_similarity(v, t) >= max_cos) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    taken.push_back(v);
    out.push_back(label);
  }
  return out;
}

DatasetSplit make_corpus(const CorpusShape& shape) {
  static const char* kTemplates[] = {
      "please {a} my {b}",          "how do i {a} the {b}",      "i want to {a} a {b} today",
      "can you {a} the {b} for me", "well, {a} that \"{b}\"",     "is it possible to {a} {b}",
      "help me {a} our {b} again",  "{a} {b} as soon as you can", "what happens if i {a} the {b}",
      "tell me how to {a} {b}",
  };
  const auto labels = separated_labels(shape.intents, shape.seed);
  DatasetSplit data;
  std::size_t serial = 0;
  auto make = [&](const std::string& label, std::size_t j, const char* tag) {
    const auto sep = label.find('_');
    std::string text = kTemplates[j % std::size(kTemplates)];
    text.replace(text.find("{a}"), 3, label.substr(0, sep));
    text.replace(text.find("{b}"), 3, label.substr(sep + 1));
    text += std::string(" ") + tag + " " + std::to_string(++serial);
    return LabeledExample{text, IntentLabel::normalize(label)};
  };
  for (const auto& label : labels) {
    for (std::size_t j = 0; j < shape.train_per_intent; ++j) data.train.push_back(make(label, j, "ref"));
    for (std::size_t j = 0; j < shape.val_per_intent; ++j) data.validation.push_back(make(label, j, "case"));
    for (std::size_t j = 0; j < shape.test_per_intent; ++j) data.test.push_back(make(label, j, "ticket"));
  }
  for (const auto& l : labels) data.intent_inventory.push_back(IntentLabel::normalize(l));
  std::sort(data.intent_inventory.begin(), data.intent_inventory.end());
  return data;
}

DatasetSplit clinc_replica() { return make_corpus({150, 120, 15, 15, 7}); }

DatasetSplit banking_replica() { return make_corpus({77, 40, 0, 40, 11}); }

namespace {

nlohmann::json clinc_rows(const std::vector<LabeledExample>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : xs) a.push_back({x.text, x.intent.value()});
  return a;
}

void write_text(const fs::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << content;
}

}  // namespace

void write_clinc_json(const DatasetSplit& data, const fs::path& file) {
  const nlohmann::json doc = {
      {"train", clinc_rows(data.train)}, {"val", clinc_rows(data.validation)}, {"test", clinc_rows(data.test)}};
  write_text(file, doc.dump());
}

void write_banking_dir(const DatasetSplit& data, const fs::path& dir) {
  fs::create_directories(dir);
  auto write = [&](const std::vector<LabeledExample>& xs, const char* name) {
    std::string csv = "text,category\n";
    for (const auto& x : xs) csv += csv_escape(x.text) + "," + csv_escape(x.intent.value()) + "\n";
    write_text(dir / name, csv);
  };
  write(data.train, "train.csv");
  if (!data.validation.empty()) write(data.validation, "val.csv");
  write(data.test, "test.csv");
}

void write_generic_jsonl(const DatasetSplit& data, const fs::path& file) {
  std::string out;
  auto add = [&](const std::vector<LabeledExample>& xs, const char* split) {
    for (const auto& x : xs) {
      out += nlohmann::json{{"text", x.text}, {"intent", x.intent.value()}, {"split", split}}.dump() + "\n";
    }
  };
  add(data.train, "train");
  add(data.validation, "val");
  add(data.test, "test");
  write_text(file, out);
}

std::map<IntentLabel, IntentLabel> rename_labels(const std::vector<IntentLabel>& labels,
                                                 const std::vector<IntentLabel>& avoid, std::uint64_t seed) {
  std::vector<std::string> taken;
  for (const auto& l : labels) taken.push_back(l.value());
  for (const auto& l : avoid) taken.push_back(l.value());
  const auto fresh = separated_labels(labels.size(), seed, taken);
  std::map<IntentLabel, IntentLabel> out;
  for (std::size_t i = 0; i < labels.size(); ++i) out.emplace(labels[i], IntentLabel::normalize(fresh[i]));
  return out;
}

void write_paraphrase_map(const std::map<IntentLabel, IntentLabel>& map, const fs::path& file) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [from, to] : map) doc[from.value()] = to.value();
  write_text(file, doc.dump(2));
}

Blobs make_blobs(std::size_t k, std::size_t per_blob, std::size_t dim, double spread, std::uint64_t seed) {
  if (k > dim) throw std::invalid_argument("make_blobs: need k <= dim for orthogonal centres");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Blobs b;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t p = 0; p < per_blob; ++p) {
      // Centre e_c plus noise orthogonal to it, scaled so that the cosine to
      // the centre stays above 1 - spread / 2.
      std::vector<double> noise(dim, 0.0);
      double nn = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        if (i == c) continue;
        noise[i] = gauss(rng);
        nn += noise[i] * noise[i];
      }
      nn = std::sqrt(nn);
      const double cos_target = 1.0 - spread / 2.0;
      const double t = std::tan(std::acos(cos_target)) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      std::vector<double> v(dim, 0.0);
      v[c] = 1.0;
      for (std::size_t i = 0; i < dim; ++i) v[i] += t * noise[i] / nn;
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      for (double& x : v) x /= norm;
      b.points.emplace_back(std::move(v), true);
      b.labels.push_back(static_cast<std::int64_t>(c));
    }
  }
  return b;
}

}  // namespace intentd::testing
