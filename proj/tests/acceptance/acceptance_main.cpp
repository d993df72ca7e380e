// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "intentd/engine.hpp"
#include "intentd/error.hpp"
#include "intentd/evaluation.hpp"
#include "intentd/metrics.hpp"
#include "intentd/oracles.hpp"
#include "intentd/rng.hpp"
#include "support/brute_force.hpp"
#include "support/synthetic.hpp"

namespace intentd {
namespace {

namespace fs = std::filesystem;
using Labels = std::vector<std::int64_t>;
using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Labels random_labels(Rng& rng, std::size_t n, std::size_t k) {
  Labels out(n);
  for (auto& x : out) x = static_cast<std::int64_t>(rng.uniform_index(k));
  return out;
}

bool contains_word(const std::string& hay, const std::string& needle) {
  auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) {
    const bool left = p == 0 || !ident(hay[p - 1]);
    const bool right = p + needle.size() >= hay.size() || !ident(hay[p + needle.size()]);
    if (left && right) return true;
  }
  return false;
}

// Shared CLINC-shaped corpus, written to and read back from a CLINC JSON file.
struct ClincData {
  testing::TempDir dir{"intentd-acceptance"};
  DatasetSplit data;
  KirSplit split;
};

ClincData& clinc() {
  static ClincData* d = [] {
    auto* c = new ClincData;
    testing::write_clinc_json(testing::clinc_replica(), c->dir / "clinc.json");
    c->data = load_dataset(c->dir / "clinc.json", DatasetFormat::kClinc);
    c->split = build_kir_split(c->data, 0.75, 0.1, 0);
    return c;
  }();
  return *d;
}

RunConfig clinc_config(const fs::path& cache) {
  RunConfig c;
  c.dataset_id = "clinc:replica";
  c.kir = 0.75;
  c.n_shots = 10;
  c.batch_size = 16;
  c.cache_dir = cache;
  return c;
}

// -- criteria ----------------------------------------------------------------

Verdict metric_oracles() {
  const auto t0 = Clock::now();
  Rng rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(12);
    const Labels gold = random_labels(rng, n, 1 + rng.uniform_index(5));
    const Labels pred = random_labels(rng, n, 1 + rng.uniform_index(5));
    worst = std::max({worst, std::abs(nmi(gold, pred) - testing::brute_nmi(gold, pred)),
                      std::abs(ari(gold, pred) - testing::brute_ari(gold, pred)),
                      std::abs(clustering_accuracy(gold, pred) - testing::brute_acc(gold, pred))});
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 5.0, "max |diff| " + fmt("%.3g", worst) + ", " + fmt("%.3f", secs) + " s"};
}

Verdict hungarian_exact() {
  const auto t0 = Clock::now();
  Rng rng(2);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + rng.uniform_index(7), cols = 1 + rng.uniform_index(7);
    std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
    // Dyadic costs (multiples of 1/16) add exactly in any order.
    for (auto& row : cost)
      for (auto& c : row) c = (static_cast<double>(rng.uniform_index(3201)) - 1600.0) / 16.0;
    if (hungarian(cost).total_cost != testing::brute_assignment_cost(cost)) ++mismatches;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < 10.0,
          std::to_string(mismatches) + " mismatches in 200, " + fmt("%.3f", secs) + " s"};
}

Verdict ari_example() {
  const double v = ari(Labels{0, 0, 1, 1}, Labels{0, 0, 1, 2});
  return {std::abs(v - 4.0 / 7.0) <= 1e-12, "ARI " + fmt("%.15f", v)};
}

Verdict gold_oracle_identity() {
  const auto t0 = Clock::now();
  auto& d = clinc();
  testing::TempDir tmp;
  GoldOracleBackend llm(make_answer_key(d.split.test));
  TrigramEmbedder emb;
  const RunResult r = run_discovery(clinc_config(tmp / "cache"), d.split, llm, emb);
  const ClusterEvalReport e = evaluate_run(r, emb);
  const double secs = seconds_since(t0);
  const bool ok = std::abs(e.nmi - 1.0) <= 1e-9 && std::abs(e.ari - 1.0) <= 1e-9 && std::abs(e.acc - 1.0) <= 1e-9 &&
                  r.final_db.size() == d.data.intent_inventory.size() && e.ndi_deviation == 0 && secs < 60.0;
  return {ok, "n=" + std::to_string(r.predictions.size()) + " NMI " + fmt("%.6f", e.nmi) + " ARI " +
                  fmt("%.6f", e.ari) + " ACC " + fmt("%.6f", e.acc) + " K " + std::to_string(e.k_used) + " db " +
                  std::to_string(r.final_db.size()) + "/" + std::to_string(d.data.intent_inventory.size()) + ", " +
                  fmt("%.1f", secs) + " s"};
}

Verdict relabeling_invariance() {
  auto& d = clinc();
  testing::TempDir tmp;
  const auto renamed = testing::rename_labels(d.split.unknown_intents, d.data.intent_inventory, 5);
  ParaphraseOracleBackend llm(make_answer_key(d.split.test), renamed);
  TrigramEmbedder emb;
  const RunResult r = run_discovery(clinc_config(tmp / "cache"), d.split, llm, emb);
  const ClusterEvalReport e = evaluate_run(r, emb);
  const auto discovered_list = r.final_db.discovered_labels();
  const std::set<IntentLabel> discovered(discovered_list.begin(), discovered_list.end());
  std::set<IntentLabel> expected;
  for (const auto& [from, to] : renamed) expected.insert(to);
  const bool ok = std::abs(e.acc - 1.0) <= 1e-9 && discovered == expected;
  return {ok, "ACC " + fmt("%.6f", e.acc) + ", discovered " + std::to_string(discovered.size()) + " / renamed " +
                  std::to_string(expected.size()) + (discovered == expected ? " (equal sets)" : " (sets differ)")};
}

Verdict kif_ablation() {
  const auto data = testing::banking_replica();
  const auto split = build_kir_split(data, 0.75, 0.1, 0);
  testing::TempDir tmp;
  TrigramEmbedder emb;
  RunConfig on = clinc_config(tmp / "cache");
  on.dataset_id = "banking:replica";
  on.icpg_enabled = false;
  RunConfig off = on;
  off.kif_enabled = false;
  DriftMockBackend llm_on(make_answer_key(split.test)), llm_off(make_answer_key(split.test));
  const auto r_on = run_discovery(on, split, llm_on, emb);
  const auto r_off = run_discovery(off, split, llm_off, emb);
  const std::size_t ndi_on = ndi(r_on.final_db.size(), data.intent_inventory.size()).count;
  const std::size_t ndi_off = ndi(r_off.final_db.size(), data.intent_inventory.size()).count;
  return {ndi_off > ndi_on, "NDI no-kif " + std::to_string(ndi_off) + " vs kif " + std::to_string(ndi_on) +
                                " (gold " + std::to_string(data.intent_inventory.size()) + ")"};
}

Verdict n_plus_m() {
  const auto data = testing::make_corpus({20, 20, 0, 6, 31});
  testing::TempDir tmp;
  TrigramEmbedder emb;
  Rng rng(7);
  int violations = 0;
  const int runs = 25;
  for (int trial = 0; trial < runs; ++trial) {
    RunConfig c;
    c.cache_dir = tmp / "cache";
    c.seed = rng.next();
    c.kir = 0.25 * static_cast<double>(1 + rng.uniform_index(4));
    c.batch_size = 1 + rng.uniform_index(24);
    c.n_shots = rng.uniform_index(6);
    c.kif_enabled = rng.uniform_index(2) == 0;
    c.sfs_enabled = rng.uniform_index(2) == 0;
    c.icpg_enabled = rng.uniform_index(2) == 0;
    if (rng.uniform_index(2) == 0) c.n_skif = 1 + rng.uniform_index(8);
    const auto split = build_kir_split(data, c.kir, 0.1, c.seed);
    const auto key = make_answer_key(split.test);
    std::unique_ptr<LlmBackend> llm;
    if (rng.uniform_index(2) == 0) {
      llm = std::make_unique<DriftMockBackend>(key);
    } else {
      llm = std::make_unique<ParaphraseOracleBackend>(
          key, testing::rename_labels(split.unknown_intents, data.intent_inventory, c.seed));
    }
    const auto r = run_discovery(c, split, *llm, emb);
    std::set<IntentLabel> seed(split.known_intents.begin(), split.known_intents.end()), discovered;
    for (const auto& p : r.predictions) {
      if (!seed.contains(p.intent)) discovered.insert(p.intent);
    }
    if (r.final_db.size() != seed.size() + discovered.size()) ++violations;
  }
  return {violations == 0, std::to_string(runs) + " random mock runs, " + std::to_string(violations) + " violations"};
}

Verdict k_estimation() {
  const auto t0 = Clock::now();
  std::string wrong;
  for (std::size_t k = 3; k <= 20; ++k) {
    const auto blobs = testing::make_blobs(k, 10, 32, 0.1, 100 + k);
    for (std::size_t i = 0; i < blobs.points.size(); ++i) {
      for (std::size_t j = i + 1; j < blobs.points.size(); ++j) {
        const double dist = 1.0 - cosine_similarity(blobs.points[i], blobs.points[j]);
        const bool same = blobs.labels[i] == blobs.labels[j];
        if (same ? dist >= 0.5 : dist <= 0.5) return {false, "blob generator violated the separation precondition"};
      }
    }
    const std::size_t got = estimate_k_dbscan(blobs.points, 0.5);
    if (got != k) wrong += " k=" + std::to_string(k) + "->" + std::to_string(got);
  }
  const double secs = seconds_since(t0);
  return {wrong.empty() && secs < 5.0,
          (wrong.empty() ? std::string("3..20 blobs recovered") : "wrong:" + wrong) + ", " + fmt("%.3f", secs) + " s"};
}

Verdict kmeans_correct() {
  auto vec = [](double x) { return EmbeddingVector(std::vector<double>{x}); };
  const std::vector<EmbeddingVector> line = {vec(0), vec(0.1), vec(10), vec(10.1)};
  const auto r = kmeans(line, {.k = 2, .seed = 0});
  // Exhaustive minimum over all 2-partitions.
  double best = INFINITY;
  for (unsigned mask = 1; mask < 15; ++mask) {
    double s[2] = {0, 0}, q[2] = {0, 0};
    int n[2] = {0, 0};
    for (int i = 0; i < 4; ++i) {
      const int g = (mask >> i) & 1;
      s[g] += line[i][0];
      q[g] += line[i][0] * line[i][0];
      ++n[g];
    }
    best = std::min(best, q[0] - s[0] * s[0] / n[0] + q[1] - s[1] * s[1] / n[1]);
  }
  const bool line_ok = std::abs(r.inertia - best) <= 1e-12 && r.assignments[0] == r.assignments[1] &&
                       r.assignments[2] == r.assignments[3] && r.assignments[0] != r.assignments[2];

  bool blobs_ok = true, monotone = true;
  for (std::size_t k = 3; k <= 8; ++k) {
    const auto blobs = testing::make_blobs(k, 15, 16, 0.1, 200 + k);
    const auto km = kmeans(blobs.points, {.k = k, .seed = k});
    const Labels got(km.assignments.begin(), km.assignments.end());
    blobs_ok = blobs_ok && std::abs(ari(blobs.labels, got) - 1.0) <= 1e-12;
    for (std::size_t i = 1; i < km.inertia_history.size(); ++i) {
      monotone = monotone && km.inertia_history[i] <= km.inertia_history[i - 1] + 1e-12;
    }
  }
  return {line_ok && blobs_ok && monotone, std::string("1-D inertia ") + fmt("%.4f", r.inertia) + " (min " +
                                               fmt("%.4f", best) + "), blobs ARI=1 " + (blobs_ok ? "yes" : "no") +
                                               ", monotone " + (monotone ? "yes" : "no")};
}

Verdict fbd_checks() {
  Rng rng(10);
  std::vector<EmbeddingVector> a, b;
  for (int i = 0; i < 12; ++i) {
    std::vector<double> x(6), y(6);
    for (auto& v : x) v = rng.uniform_real();
    for (auto& v : y) v = rng.uniform_real() * 2 - 0.5;
    a.emplace_back(x);
    b.emplace_back(y);
  }
  const double self = frechet_distance(a, a);
  const double asym = std::abs(frechet_distance(a, b) - frechet_distance(b, a));
  auto vec = [](double x) { return EmbeddingVector(std::vector<double>{x}); };
  const std::vector<EmbeddingVector> g1 = {vec(-1), vec(1)}, g2 = {vec(0), vec(2)};
  const double closed = frechet_distance(g1, g2);
  bool ok = std::abs(self) <= 1e-9 && asym <= 1e-9 && std::abs(closed - 1.0) <= 1e-6;
  std::string detail = "identical " + fmt("%.2g", self) + ", asymmetry " + fmt("%.2g", asym) + ", 1-D case " +
                       fmt("%.9f", closed);

  // Live sentence-encoder check, only when an embedding endpoint is configured.
  const char* base = std::getenv("INTENTD_EMBED_BASE_URL");
  const char* model = std::getenv("INTENTD_EMBED_MODEL");
  if (base != nullptr && model != nullptr && *base != '\0' && *model != '\0') {
    const char* token = std::getenv("INTENTD_API_KEY");
    RemoteEmbedder remote({base, token != nullptr ? token : ""}, model);
    const std::vector<std::string> s1 = {"a", "b", "c"}, s2 = {"d", "e", "f"};
    const double live = fbd(s1, s2, remote);
    ok = ok && std::abs(live - 0.96) <= 0.05;
    detail += ", live FBD " + fmt("%.3f", live);
  } else {
    detail += ", live encoder check skipped (INTENTD_EMBED_BASE_URL/INTENTD_EMBED_MODEL unset)";
  }
  return {ok, detail};
}

Verdict replay_determinism() {
  auto& d = clinc();
  testing::TempDir tmp;
  const RunConfig c = clinc_config(tmp / "cache");
  TrigramEmbedder emb;
  GoldOracleBackend generator(make_answer_key(d.split.test));

  auto recorder = std::make_shared<ReplayBackend>(tmp / "tape.jsonl", CassetteMode::kRecord,
                                                  std::make_shared<DriftMockBackend>(make_answer_key(d.split.test)));
  CountingBackend counted(recorder);
  RunHooks rec_hooks;
  rec_hooks.persist_dir = tmp / "recorded";
  rec_hooks.generator = &generator;
  run_discovery(c, d.split, counted, emb, rec_hooks);

  ReplayBackend player(tmp / "tape.jsonl", CassetteMode::kReplay);
  RunHooks play_hooks;
  play_hooks.persist_dir = tmp / "replayed";
  play_hooks.generator = &generator;
  run_discovery(c, d.split, player, emb, play_hooks);

  const bool identical = slurp(tmp / "recorded" / kPredictionsFile) == slurp(tmp / "replayed" / kPredictionsFile);
  const std::size_t expected = (d.split.test.size() + 15) / 16;
  const bool ok = identical && counted.calls() == expected && expected == 141 && player.entries() == 141;
  return {ok, std::to_string(counted.calls()) + " completions for " + std::to_string(d.split.test.size()) +
                  " utterances, cassette " + std::to_string(player.entries()) + " entries, predictions " +
                  (identical ? "byte-identical" : "differ")};
}

Verdict prompt_contract() {
  const auto data = testing::make_corpus({40, 10, 0, 10, 13});
  Rng rng(12);
  int failures = 0;
  const std::vector<std::string> tasks = {std::string(fallback_task_prompt()), std::string(oracle_task_prompt())};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(24);
    std::vector<Utterance> batch;
    std::vector<IntentLabel> truth;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& ex = data.test[rng.uniform_index(data.test.size())];
      batch.push_back({std::to_string(i), ex.text, std::nullopt});
      truth.push_back(data.intent_inventory[rng.uniform_index(data.intent_inventory.size())]);
    }
    std::vector<IntentLabel> intents;
    for (const auto& l : data.intent_inventory) {
      if (rng.uniform_index(2) == 0) intents.push_back(l);
    }
    if (intents.empty()) intents.push_back(data.intent_inventory[0]);
    std::vector<LabeledExample> shots;
    for (std::size_t i = rng.uniform_index(6); i > 0; --i) shots.push_back(data.train[rng.uniform_index(data.train.size())]);

    const std::string prompt =
        build_inference_prompt(tasks[trial % 2], shots, intents, batch).render();
    const auto test_at = prompt.rfind("### Test utterances\n");
    const bool last = test_at != std::string::npos && prompt.find("### ", test_at + 4) == std::string::npos;
    const auto listed = extract_test_utterances(prompt);
    const bool test_block_ok = listed && listed->size() == n;
    const bool no_unknown = !contains_word(prompt, "unknown");

    // Synthetic response in shuffled line order with light formatting noise.
    std::vector<std::string> lines;
    for (std::size_t i = 0; i < n; ++i) {
      std::string label = truth[i].value();
      if (rng.uniform_index(3) == 0) std::transform(label.begin(), label.end(), label.begin(), ::toupper);
      lines.push_back(std::to_string(i) + (rng.uniform_index(2) ? ": " : " : ") + label);
    }
    for (std::size_t i = lines.size(); i > 1; --i) std::swap(lines[i - 1], lines[rng.uniform_index(i)]);
    std::string response;
    for (const auto& l : lines) response += l + "\n";
    const auto parsed = parse_response(response, batch, 0);
    bool recovered = parsed.size() == n;
    for (std::size_t i = 0; recovered && i < n; ++i) recovered = parsed[i].intent == truth[i];
    if (!(last && test_block_ok && no_unknown && recovered)) ++failures;
  }
  return {failures == 0, "500 random batches, " + std::to_string(failures) + " failures"};
}

}  // namespace
}  // namespace intentd

int main() {
  using intentd::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"metric oracle equivalence", intentd::metric_oracles},
      {"hungarian exactness", intentd::hungarian_exact},
      {"ari worked example", intentd::ari_example},
      {"end-to-end gold-oracle identity", intentd::gold_oracle_identity},
      {"relabeling invariance", intentd::relabeling_invariance},
      {"kif ablation direction", intentd::kif_ablation},
      {"n+m bookkeeping", intentd::n_plus_m},
      {"k estimation", intentd::k_estimation},
      {"k-means correctness", intentd::kmeans_correct},
      {"fbd", intentd::fbd_checks},
      {"determinism and replay", intentd::replay_determinism},
      {"prompt contract", intentd::prompt_contract},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
