// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/oracles.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "intentd/error.hpp"
#include "intentd/prompting.hpp"

namespace intentd {

using nlohmann::json;

AnswerKey make_answer_key(std::span<const LabeledExample> examples) {
  AnswerKey key;
  for (const auto& ex : examples) key.emplace(render_inline(ex.text), ex.intent);
  return key;
}

std::string_view oracle_task_prompt() {
  return "Classify each user utterance into a concise snake_case intent. Reuse listed intents when they fit and "
         "create a specific new intent otherwise.";
}

CompletionResponse GoldOracleBackend::do_complete(const CompletionRequest& request) {
  CompletionResponse out;
  const auto tests = extract_test_utterances(request.user_text);
  if (!tests) {
    out.text = std::string(oracle_task_prompt());
    return out;
  }
  std::ostringstream reply;
  for (std::size_t i = 0; i < tests->size(); ++i) {
    auto it = key_.find((*tests)[i]);
    if (it == key_.end()) fail(ErrorCode::kMissingAnswer, "answer key has no entry for \"" + (*tests)[i] + "\"");
    reply << i << ": " << emit(it->second).value() << '\n';
  }
  out.text = reply.str();
  return out;
}

ParaphraseOracleBackend::ParaphraseOracleBackend(AnswerKey key, std::map<IntentLabel, IntentLabel> paraphrase)
    : GoldOracleBackend(std::move(key)), paraphrase_(std::move(paraphrase)) {
  std::set<IntentLabel> targets;
  for (const auto& [from, to] : paraphrase_) {
    if (!targets.insert(to).second) {
      fail(ErrorCode::kInvalidArgument, "paraphrase map is not injective: \"" + to.value() + "\" used twice");
    }
  }
}

const IntentLabel& ParaphraseOracleBackend::emit(const IntentLabel& gold) const {
  auto it = paraphrase_.find(gold);
  return it == paraphrase_.end() ? gold : it->second;
}

std::map<IntentLabel, IntentLabel> load_paraphrase_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open paraphrase map " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::kParseError, path.string() + ": expected an object of label -> label");
  std::map<IntentLabel, IntentLabel> out;
  for (const auto& [from, to] : doc.items()) {
    if (!to.is_string()) fail(ErrorCode::kParseError, path.string() + ": value for \"" + from + "\" is not a string");
    out.emplace(IntentLabel::normalize(from), IntentLabel::normalize(to.get<std::string>()));
  }
  return out;
}

CompletionResponse DriftMockBackend::do_complete(const CompletionRequest& request) {
  CompletionResponse out;
  const auto tests = extract_test_utterances(request.user_text);
  if (!tests) {
    out.text = std::string(oracle_task_prompt());
    return out;
  }
  const auto listed_vec = extract_listed_intents(request.user_text);
  const std::set<std::string> listed(listed_vec.begin(), listed_vec.end());
  std::lock_guard lock(mu_);
  std::map<IntentLabel, std::string> this_reply;
  std::ostringstream reply;
  for (std::size_t i = 0; i < tests->size(); ++i) {
    auto it = key_.find((*tests)[i]);
    if (it == key_.end()) fail(ErrorCode::kMissingAnswer, "answer key has no entry for \"" + (*tests)[i] + "\"");
    const IntentLabel& gold = it->second;
    std::string name;
    if (auto r = this_reply.find(gold); r != this_reply.end()) {
      name = r->second;
    } else if (listed.contains(gold.value())) {
      name = gold.value();
    } else {
      auto& used = emitted_[gold];
      for (const auto& v : used) {
        if (listed.contains(v)) {
          name = v;
          break;
        }
      }
      if (name.empty()) {
        name = used.empty() ? gold.value() : gold.value() + "_v" + std::to_string(used.size());
        used.push_back(name);
      }
    }
    this_reply[gold] = name;
    reply << i << ": " << name << '\n';
  }
  out.text = reply.str();
  return out;
}

ReplayBackend::ReplayBackend(std::filesystem::path cassette, CassetteMode mode, std::shared_ptr<LlmBackend> inner)
    : path_(std::move(cassette)), mode_(mode), inner_(std::move(inner)) {
  if (mode_ == CassetteMode::kRecord) {
    if (!inner_) fail(ErrorCode::kInvalidArgument, "record mode needs a backend to forward to");
    return;
  }
  std::ifstream in(path_);
  if (!in) fail(ErrorCode::kIoError, "cannot open cassette " + path_.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const json rec = json::parse(line);
      stored_[rec.at("digest").get<std::string>()].push_back(rec.at("response").get<std::string>());
      ++count_;
    } catch (const json::exception& e) {
      fail(ErrorCode::kParseError, path_.string() + ": line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string ReplayBackend::name() const {
  return std::string(mode_ == CassetteMode::kRecord ? "record:" : "replay:") + path_.filename().string();
}

std::size_t ReplayBackend::entries() const {
  std::lock_guard lock(mu_);
  return count_;
}

CompletionResponse ReplayBackend::do_complete(const CompletionRequest& request) {
  const std::string digest = request_digest(request);
  if (mode_ == CassetteMode::kReplay) {
    std::lock_guard lock(mu_);
    auto it = stored_.find(digest);
    if (it == stored_.end()) fail(ErrorCode::kCassetteMiss, "cassette has no response for request " + digest);
    // Identical requests replay in recorded order; the last one repeats.
    std::size_t& next = served_[digest];
    CompletionResponse out;
    out.text = it->second[std::min(next, it->second.size() - 1)];
    ++next;
    return out;
  }
  CompletionResponse out = complete(*inner_, request);
  const json rec = {{"digest", digest}, {"model", request.model_id}, {"response", out.text}};
  std::lock_guard lock(mu_);
  std::ofstream file(path_, std::ios::app);
  if (!file) fail(ErrorCode::kIoError, "cannot append to cassette " + path_.string());
  file << rec.dump() << '\n';
  ++count_;
  return out;
}

}  // namespace intentd
