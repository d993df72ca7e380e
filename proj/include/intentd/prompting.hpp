// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "intentd/domain.hpp"
#include "intentd/sampler.hpp"

namespace intentd {

/// ceil(code points / 4). A backend-agnostic approximation, not a tokenizer.
std::size_t estimate_tokens(std::string_view text);

struct TokenBudget {
  std::size_t max_tokens = 8192;
  friend bool operator==(const TokenBudget&, const TokenBudget&) = default;
};

struct GeneratedPrompt {
  std::string text;
  std::string source_model;
  std::size_t n_known = 0;
  std::size_t x_per_intent = 0;
  std::string cache_key;
};

/// Human-written task description used when prompt generation is disabled.
std::string_view fallback_task_prompt();

/// Meta-prompt asking a model to write the intent-discovery task prompt.
/// Embeds min(x, available) seeded-random pool examples per known intent.
/// Throws InvalidArgument (x == 0), MissingExamples.
std::string build_icpg_prompt(std::span<const IntentLabel> known_intents, std::span<const LabeledExample> pool,
                              std::size_t x, std::uint64_t seed);

/// True when some line of `text` assigns "unknown" as an intent (a bare list
/// item, or the value after a ':', '->' or '=>' separator).
bool assigns_unknown_label(std::string_view text);

struct PromptBundle {
  std::string task_block;
  std::string intent_block;
  std::string few_shot_block;  // empty in the 0-shot setting
  std::string instruction_block;
  std::string test_block;
  std::size_t token_estimate = 0;

  /// Sections joined in order: task, intents, examples, instructions, tests.
  std::string render() const;
};

/// Collapses whitespace runs (including newlines) to one space and trims.
std::string render_inline(std::string_view text);

/// Throws EmptyInput (empty batch or intents), ForbiddenLabel (intent list
/// contains "unknown"), BudgetExceeded naming the section that overflows.
PromptBundle build_inference_prompt(std::string_view task_prompt, std::span<const LabeledExample> few_shots,
                                    std::span<const IntentLabel> intents, std::span<const Utterance> batch,
                                    TokenBudget budget = {});

/// Appended to the prompt when a response could not be parsed.
std::string format_reminder(std::size_t batch_size);

/// Numbered test utterances of an inference prompt, or nullopt when the prompt
/// has no test block.
std::optional<std::vector<std::string>> extract_test_utterances(std::string_view prompt);
/// The intent names listed in an inference prompt's intent block.
std::vector<std::string> extract_listed_intents(std::string_view prompt);

struct PredictionRecord {
  std::string utterance_id;
  std::string text;
  std::optional<IntentLabel> gold_intent;
  std::string raw_line;
  IntentLabel intent;
  std::size_t batch_index = 0;
  bool newly_discovered = false;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

/// Parses "<index>: <intent>" lines. Prose around the pattern on a line is
/// tolerated; blank lines are skipped. Throws Unparseable, CountMismatch,
/// ForbiddenLabel.
std::vector<PredictionRecord> parse_response(std::string_view text, std::span<const Utterance> batch,
                                             std::size_t batch_index = 0);

}  // namespace intentd
