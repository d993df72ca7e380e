// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/prompting.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <sstream>

#include "intentd/error.hpp"
#include "intentd/rng.hpp"

namespace intentd {
namespace {

constexpr std::string_view kIntentHeader = "### Known intents";
constexpr std::string_view kExamplesHeader = "### Examples";
constexpr std::string_view kInstructionsHeader = "### Instructions";
constexpr std::string_view kTestHeader = "### Test utterances";

constexpr std::string_view kFallbackTask =
    "You are an intent classifier for a dialogue system. Every user utterance expresses one intent: a short "
    "snake_case name for what the user wants to achieve. Assign each test utterance an intent from the known "
    "list when one fits. When none fits, create a new, specific intent name and reuse it for similar "
    "utterances later on.";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool is_unknown_token(std::string_view s) {
  try {
    return IntentLabel::normalize(s).value() == "unknown";
  } catch (const Error&) {
    return false;
  }
}

std::string_view section_after(std::string_view prompt, std::string_view header) {
  const std::string needle = std::string(header) + "\n";
  auto pos = prompt.rfind(needle);
  if (pos == std::string_view::npos || (pos != 0 && prompt[pos - 1] != '\n')) return {};
  std::string_view rest = prompt.substr(pos + needle.size());
  auto next = rest.find("\n### ");
  return next == std::string_view::npos ? rest : rest.substr(0, next);
}

// Strips prose and markup around the intent part of an answer line.
std::string_view clean_intent(std::string_view s) {
  s = trim(s);
  for (std::string_view cut : {" (", " - ", " \xE2\x80\x93 ", " \xE2\x80\x94 ", " because ", "  ", "\t", ";", ",", " #"}) {
    auto p = s.find(cut);
    if (p != std::string_view::npos) s = s.substr(0, p);
  }
  s = trim(s);
  auto strip = [](std::string_view v) {
    constexpr std::string_view marks = "*`\"'[]<>";
    while (!v.empty() && marks.find(v.front()) != std::string_view::npos) v.remove_prefix(1);
    while (!v.empty() && (marks.find(v.back()) != std::string_view::npos || v.back() == '.')) v.remove_suffix(1);
    return trim(v);
  };
  s = strip(s);
  if (s.size() > 7) {
    std::string head(s.substr(0, 7));
    std::transform(head.begin(), head.end(), head.begin(), [](unsigned char c) { return std::tolower(c); });
    if (head == "intent:") s = strip(s.substr(7));
  }
  return s;
}

}  // namespace

std::size_t estimate_tokens(std::string_view text) {
  std::size_t code_points = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++code_points;
  }
  return (code_points + 3) / 4;
}

std::string_view fallback_task_prompt() { return kFallbackTask; }

std::string build_icpg_prompt(std::span<const IntentLabel> known_intents, std::span<const LabeledExample> pool,
                              std::size_t x, std::uint64_t seed) {
  if (x == 0) fail(ErrorCode::kInvalidArgument, "examples per intent must be >= 1");
  if (known_intents.empty()) fail(ErrorCode::kEmptyInput, "prompt generation needs at least one known intent");
  std::map<IntentLabel, std::vector<std::size_t>> by_intent;
  for (std::size_t i = 0; i < pool.size(); ++i) by_intent[pool[i].intent].push_back(i);

  Rng rng(derive_seed(seed, 2));
  std::ostringstream examples;
  std::size_t shown = 0;
  for (const auto& label : known_intents) {
    auto it = by_intent.find(label);
    if (it == by_intent.end() || it->second.empty()) {
      fail(ErrorCode::kMissingExamples, "known intent \"" + label.value() + "\" has no pool examples");
    }
    auto idx = it->second;
    const std::size_t take = std::min(x, idx.size());
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(idx.size() - i));
      std::swap(idx[i], idx[j]);
      examples << render_inline(pool[idx[i]].text) << " => " << label.value() << '\n';
      ++shown;
    }
  }

  std::ostringstream out;
  out << "You are an expert prompt engineer. Write a prompt that another language model will follow to "
         "discover user intents in dialogue utterances.\n\n"
         "That model will receive your prompt followed by a list of known intents, a few labeled example "
         "utterances and a numbered batch of test utterances. For each test utterance it must reuse a known "
         "intent when one applies, or create a new intent name when none does.\n\n"
         "Requirements for the prompt you write:\n"
         "- Be concise: a short task description followed by a few guidelines.\n"
         "- Describe the domain, context and language of the data, using the examples below.\n"
         "- Intent names are short, lowercase snake_case phrases such as check_balance.\n"
         "- State explicitly that the 'unknown' intent must never be assigned; every utterance gets a "
         "specific intent.\n"
         "- Only the test utterances are labeled, never the examples.\n"
         "- The answer has one line per test utterance in the form \"index: intent\".\n"
         "- Reply with the prompt text only.\n\n"
      << "Labeled examples (" << known_intents.size() << " known intents, " << shown << " examples):\n"
      << examples.str();
  return out.str();
}

bool assigns_unknown_label(std::string_view text) {
  for (std::string_view line : split_lines(text)) {
    std::string_view body = trim(line);
    while (!body.empty() && (body.front() == '-' || body.front() == '*' || body.front() == '#')) {
      body = trim(body.substr(1));
    }
    if (is_unknown_token(body)) return true;
    for (std::string_view sep : {":", "->", "=>"}) {
      auto p = body.rfind(sep);
      if (p != std::string_view::npos && is_unknown_token(body.substr(p + sep.size()))) return true;
    }
  }
  return false;
}

std::string render_inline(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool space = false;
  for (char c : trim(text)) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      space = true;
    } else {
      if (space && !out.empty()) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::string PromptBundle::render() const {
  std::string out = task_block;
  for (const std::string* block : {&intent_block, &few_shot_block, &instruction_block, &test_block}) {
    if (block->empty()) continue;
    out += "\n\n";
    out += *block;
  }
  out += "\n";
  return out;
}

PromptBundle build_inference_prompt(std::string_view task_prompt, std::span<const LabeledExample> few_shots,
                                    std::span<const IntentLabel> intents, std::span<const Utterance> batch,
                                    TokenBudget budget) {
  if (batch.empty()) fail(ErrorCode::kEmptyInput, "inference prompt needs a non-empty batch");
  if (intents.empty()) fail(ErrorCode::kEmptyInput, "inference prompt needs a non-empty intent list");

  PromptBundle b;
  b.task_block = std::string(trim(task_prompt));
  if (b.task_block.empty()) b.task_block = std::string(kFallbackTask);

  std::ostringstream intents_out;
  intents_out << kIntentHeader << '\n'
              << "Reuse one of these intents whenever it fits; otherwise create a new concise snake_case intent.\n";
  for (const auto& label : intents) {
    if (label.value() == "unknown") fail(ErrorCode::kForbiddenLabel, "\"unknown\" cannot be offered as an intent");
    intents_out << "- " << label.value() << '\n';
  }
  b.intent_block = intents_out.str();
  b.intent_block.pop_back();

  if (!few_shots.empty()) {
    std::ostringstream fs;
    fs << kExamplesHeader << '\n';
    for (const auto& ex : few_shots) {
      if (ex.intent.value() == "unknown") fail(ErrorCode::kForbiddenLabel, "few-shot example labeled \"unknown\"");
      fs << "Utterance: " << render_inline(ex.text) << "\nIntent: " << ex.intent.value() << '\n';
    }
    b.few_shot_block = fs.str();
    b.few_shot_block.pop_back();
  }

  std::ostringstream ins;
  ins << kInstructionsHeader << '\n'
      << "Predict an intent only for the " << batch.size()
      << " numbered test utterances below; do not label the examples above.\n"
      << "Answer with exactly one line per test utterance in the format \"index: intent\", for example "
         "\"0: check_balance\".\n"
      << "Never answer with a placeholder or catch-all label; every utterance gets a specific intent.";
  b.instruction_block = ins.str();

  std::ostringstream test;
  test << kTestHeader;
  for (std::size_t i = 0; i < batch.size(); ++i) test << '\n' << i << ": " << render_inline(batch[i].text);
  b.test_block = test.str();

  // Cumulative estimate in render order; the first section to cross the budget is reported.
  std::size_t running = 0;
  const std::pair<const char*, const std::string*> sections[] = {{"task", &b.task_block},
                                                                 {"intents", &b.intent_block},
                                                                 {"few-shot examples", &b.few_shot_block},
                                                                 {"instructions", &b.instruction_block},
                                                                 {"test utterances", &b.test_block}};
  for (const auto& [name, block] : sections) {
    if (block->empty()) continue;
    running += estimate_tokens(*block);
    if (running > budget.max_tokens) {
      fail(ErrorCode::kBudgetExceeded, std::string("prompt exceeds token budget of ") +
                                           std::to_string(budget.max_tokens) + " in section \"" + name + "\"");
    }
  }
  b.token_estimate = estimate_tokens(b.render());
  if (b.token_estimate > budget.max_tokens) {
    fail(ErrorCode::kBudgetExceeded, "prompt exceeds token budget of " + std::to_string(budget.max_tokens) +
                                         " in section \"test utterances\"");
  }
  return b;
}

std::string format_reminder(std::size_t batch_size) {
  return "\n\nReminder: your previous answer could not be parsed. Reply with exactly " + std::to_string(batch_size) +
         " lines, one per test utterance, each in the form \"index: intent\" with indices 0 to " +
         std::to_string(batch_size - 1) + " and nothing else.\n";
}

std::optional<std::vector<std::string>> extract_test_utterances(std::string_view prompt) {
  const std::string needle = "\n" + std::string(kTestHeader) + "\n";
  auto pos = prompt.rfind(needle);
  if (pos == std::string_view::npos) return std::nullopt;
  std::vector<std::string> out;
  for (std::string_view line : split_lines(prompt.substr(pos + needle.size()))) {
    if (trim(line).empty()) continue;
    auto colon = line.find(": ");
    if (colon == std::string_view::npos) break;
    const std::string_view index = line.substr(0, colon);
    if (index.empty() || !std::all_of(index.begin(), index.end(), [](char c) { return c >= '0' && c <= '9'; })) break;
    if (std::stoul(std::string(index)) != out.size()) break;
    out.emplace_back(line.substr(colon + 2));
  }
  return out;
}

std::vector<std::string> extract_listed_intents(std::string_view prompt) {
  std::vector<std::string> out;
  for (std::string_view line : split_lines(section_after(prompt, kIntentHeader))) {
    if (line.size() > 2 && line.substr(0, 2) == "- ") out.emplace_back(line.substr(2));
  }
  return out;
}

std::vector<PredictionRecord> parse_response(std::string_view text, std::span<const Utterance> batch,
                                             std::size_t batch_index) {
  if (batch.empty()) fail(ErrorCode::kEmptyInput, "parse_response needs a non-empty batch");
  static const std::regex kLine(R"((\d+)\s*:\s*(.*\S))");
  std::vector<std::optional<PredictionRecord>> slots(batch.size());
  std::size_t lineno = 0;
  for (std::string_view line : split_lines(text)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_search(line.begin(), line.end(), m, kLine)) {
      fail(ErrorCode::kUnparseable, "response line " + std::to_string(lineno) + " has no \"index: intent\" pattern: " +
                                        std::string(line));
    }
    const std::string index_str = m[1].str();
    const std::string_view intent_raw = clean_intent(std::string_view(&*m[2].first, static_cast<std::size_t>(m[2].length())));
    if (index_str.size() > 9 || std::stoul(index_str) >= batch.size()) {
      fail(ErrorCode::kCountMismatch, "response index " + index_str + " outside batch of " + std::to_string(batch.size()));
    }
    const std::size_t index = std::stoul(index_str);
    if (slots[index]) fail(ErrorCode::kCountMismatch, "response index " + index_str + " appears twice");
    std::optional<IntentLabel> label;
    try {
      label = IntentLabel::normalize(intent_raw);
    } catch (const Error&) {
      fail(ErrorCode::kUnparseable, "response line " + std::to_string(lineno) + " has an empty intent");
    }
    if (label->value() == "unknown") {
      fail(ErrorCode::kForbiddenLabel, "model assigned \"unknown\" to test utterance " + index_str);
    }
    const Utterance& u = batch[index];
    slots[index] = PredictionRecord{u.id, u.text, u.gold_intent, std::string(line), *label, batch_index, false};
  }
  std::vector<PredictionRecord> out;
  out.reserve(batch.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      out.push_back(std::move(*slots[i]));
    } else {
      missing.push_back(i);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (auto i : missing) list += (list.empty() ? "" : ",") + std::to_string(i);
    fail(ErrorCode::kCountMismatch, "response is missing indices " + list + " of a batch of " + std::to_string(batch.size()));
  }
  return out;
}

}  // namespace intentd
