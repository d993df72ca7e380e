// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace intentd {

/// Canonical intent name: lowercase alphanumerics joined by single underscores.
/// Only constructible through normalization, so every instance satisfies the
/// invariant.
class IntentLabel {
 public:
  /// Throws EmptyLabel when no alphanumeric content remains.
  static IntentLabel normalize(std::string_view raw);

  const std::string& value() const noexcept { return value_; }
  /// Underscores replaced by spaces; the form fed to embedders.
  std::string as_text() const;

  friend bool operator==(const IntentLabel&, const IntentLabel&) = default;
  friend auto operator<=>(const IntentLabel&, const IntentLabel&) = default;

 private:
  explicit IntentLabel(std::string v) : value_(std::move(v)) {}
  std::string value_;
};

inline IntentLabel normalize_label(std::string_view raw) { return IntentLabel::normalize(raw); }

struct Utterance {
  std::string id;
  std::string text;
  std::optional<IntentLabel> gold_intent;
};

struct LabeledExample {
  std::string text;
  IntentLabel intent;
};

struct DatasetSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
  std::vector<IntentLabel> intent_inventory;  // sorted, distinct
};

enum class DatasetFormat { kClinc, kBanking, kGeneric };

/// Accepts "clinc", "banking", "generic". Throws UnknownFormat.
DatasetFormat parse_dataset_format(std::string_view tag);
std::string_view dataset_format_name(DatasetFormat format);

/// Loads a dataset. A directory path is read as per-split files (train, val or
/// dev, test); a file path is read as a single document. Throws ParseError
/// (with record position), UnknownFormat, IoError.
DatasetSplit load_dataset(const std::filesystem::path& path, DatasetFormat format);

/// RFC-4180 reader: comma separated, double-quote quoting, "" escapes, quoted
/// fields may span lines. Returns one row per record.
std::vector<std::vector<std::string>> read_csv(std::string_view text);
/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(std::string_view field);

struct KirSplit {
  std::vector<IntentLabel> known_intents;
  std::vector<IntentLabel> unknown_intents;
  std::vector<LabeledExample> few_shot_pool_source;
  std::vector<LabeledExample> test;
  double kir = 1.0;
  std::uint64_t seed = 0;
};

/// Seeded Known-Intent-Ratio split. Throws InvalidRatio.
KirSplit build_kir_split(const DatasetSplit& data, double kir, double pool_fraction,
                         std::uint64_t seed);

/// floor(kir * inventory_size), robust to binary rounding.
std::size_t known_intent_count(double kir, std::size_t inventory_size);
/// ceil(fraction * count), robust to binary rounding.
std::size_t pool_count(double fraction, std::size_t count);

/// Test examples as utterances with ids "0", "1", ...
std::vector<Utterance> to_utterances(const std::vector<LabeledExample>& examples);

/// Trims ASCII whitespace.
std::string_view trim(std::string_view s);

}  // namespace intentd

template <>
struct std::hash<intentd::IntentLabel> {
  std::size_t operator()(const intentd::IntentLabel& label) const noexcept {
    return std::hash<std::string>{}(label.value());
  }
};
