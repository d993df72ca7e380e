// Copyright 2026 The intentd Authors
// SPDX-License-Identifier: Apache-2.0

#include "intentd/intentd.h"

#include <cstring>
#include <exception>
#include <map>
#include <new>
#include <string>
#include <vector>

#include "intentd/embeddings.hpp"
#include "intentd/error.hpp"
#include "intentd/evaluation.hpp"
#include "intentd/metrics.hpp"
#include "intentd/prompting.hpp"
#include "intentd/settings.hpp"

struct intentd_config {
  intentd::Settings settings;
};

struct intentd_report {
  std::map<std::string, double> metrics;
};

namespace {

thread_local std::string g_last_error;

intentd_status to_status(intentd::ErrorCode code) { return static_cast<intentd_status>(code); }

// Runs `body`, translating exceptions into status codes and the thread-local
// message.
template <typename F>
intentd_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const intentd::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return INTENTD_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return INTENTD_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) intentd::fail(intentd::ErrorCode::kInvalidArgument, what);
}

intentd_status copy_out(const std::string& value, char* buf, size_t cap, size_t* needed) {
  if (needed != nullptr) *needed = value.size() + 1;
  if (buf == nullptr || cap < value.size() + 1) {
    g_last_error = "buffer too small: " + std::to_string(value.size() + 1) + " bytes needed";
    return INTENTD_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return INTENTD_OK;
}

template <typename Metric>
intentd_status partition_metric(const int64_t* gold, const int64_t* clusters, size_t n, double* out, Metric metric) {
  return guarded([&] {
    require(gold != nullptr && clusters != nullptr && out != nullptr, "null argument");
    *out = metric(std::span<const std::int64_t>(gold, n), std::span<const std::int64_t>(clusters, n));
    return INTENTD_OK;
  });
}

}  // namespace

extern "C" {

const char* intentd_version(void) { return "0.1.0"; }

const char* intentd_status_name(intentd_status status) {
  return intentd::error_code_name(static_cast<intentd::ErrorCode>(status)).data();
}

int intentd_status_exit_code(intentd_status status) {
  return intentd::exit_code_for(static_cast<intentd::ErrorCode>(status));
}

const char* intentd_last_error(void) { return g_last_error.c_str(); }

intentd_status intentd_config_create(intentd_config** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new intentd_config{};
    return INTENTD_OK;
  });
}

void intentd_config_destroy(intentd_config* cfg) { delete cfg; }

intentd_status intentd_config_load_file(intentd_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg != nullptr && path != nullptr, "null argument");
    cfg->settings.load_file(path);
    return INTENTD_OK;
  });
}

intentd_status intentd_config_load_snapshot(intentd_config* cfg, const char* path) {
  return guarded([&] {
    require(cfg != nullptr && path != nullptr, "null argument");
    cfg->settings = intentd::Settings::from_snapshot_file(path);
    return INTENTD_OK;
  });
}

intentd_status intentd_config_set(intentd_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg != nullptr && key != nullptr && value != nullptr, "null argument");
    cfg->settings.set(key, value);
    return INTENTD_OK;
  });
}

intentd_status intentd_config_get(const intentd_config* cfg, const char* key, char* buf, size_t cap,
                                  size_t* needed) {
  return guarded([&] {
    require(cfg != nullptr && key != nullptr, "null argument");
    return copy_out(cfg->settings.get(key), buf, cap, needed);
  });
}

intentd_status intentd_config_validate(const intentd_config* cfg) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    cfg->settings.run_config();
    return INTENTD_OK;
  });
}

intentd_status intentd_gen_prompt(const intentd_config* cfg, int use_fallback, char* path_buf, size_t cap,
                                  size_t* needed, int* cache_hit) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    const auto outcome = intentd::gen_prompt(cfg->settings, use_fallback != 0);
    if (cache_hit != nullptr) *cache_hit = outcome.cache_hit ? 1 : 0;
    return copy_out(outcome.path.string(), path_buf, cap, needed);
  });
}

intentd_status intentd_run(const intentd_config* cfg, const char* resume_dir, char* dir_buf, size_t cap,
                           size_t* needed) {
  return guarded([&] {
    require(cfg != nullptr, "null argument");
    std::optional<std::filesystem::path> resume;
    if (resume_dir != nullptr) resume = resume_dir;
    const auto outcome = intentd::run_command(cfg->settings, resume);
    return copy_out(outcome.dir.string(), dir_buf, cap, needed);
  });
}

intentd_eval_options intentd_eval_options_default(void) { return {0, 0.5, 0, 1e-6}; }

intentd_status intentd_eval(const char* run_dir, const intentd_eval_options* options, intentd_report** out) {
  return guarded([&] {
    require(run_dir != nullptr && out != nullptr, "null argument");
    const intentd_eval_options o = options != nullptr ? *options : intentd_eval_options_default();
    intentd::EvalOptions eo;
    if (o.k_override > 0) eo.k_override = static_cast<std::size_t>(o.k_override);
    eo.eps = o.eps;
    eo.compute_fbd = o.compute_fbd != 0;
    eo.fbd_shrinkage = o.fbd_shrinkage;
    intentd::eval_command(run_dir, eo);
    auto report = std::make_unique<intentd_report>();
    report->metrics = intentd::load_report(std::filesystem::path(run_dir) / intentd::kReportFile);
    *out = report.release();
    return INTENTD_OK;
  });
}

intentd_status intentd_report_load(const char* path, intentd_report** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto report = std::make_unique<intentd_report>();
    report->metrics = intentd::load_report(path);
    *out = report.release();
    return INTENTD_OK;
  });
}

void intentd_report_destroy(intentd_report* report) { delete report; }

intentd_status intentd_report_get(const intentd_report* report, const char* metric, double* value) {
  return guarded([&] {
    require(report != nullptr && metric != nullptr && value != nullptr, "null argument");
    const auto it = report->metrics.find(metric);
    if (it == report->metrics.end()) intentd::fail(intentd::ErrorCode::kNotFound, std::string("no metric ") + metric);
    *value = it->second;
    return INTENTD_OK;
  });
}

intentd_status intentd_tabulate(const char* const* report_paths, size_t n, const char* format, char* buf, size_t cap,
                                size_t* needed) {
  return guarded([&] {
    require(report_paths != nullptr && format != nullptr, "null argument");
    intentd::TableFormat f;
    if (std::strcmp(format, "text") == 0) {
      f = intentd::TableFormat::kText;
    } else if (std::strcmp(format, "csv") == 0) {
      f = intentd::TableFormat::kCsv;
    } else {
      intentd::fail(intentd::ErrorCode::kInvalidArgument, std::string("unknown table format ") + format);
    }
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < n; ++i) {
      require(report_paths[i] != nullptr, "null report path");
      paths.emplace_back(report_paths[i]);
    }
    return copy_out(intentd::tabulate_reports(paths, f), buf, cap, needed);
  });
}

intentd_status intentd_normalize_label(const char* raw, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(raw != nullptr, "null argument");
    return copy_out(intentd::normalize_label(raw).value(), buf, cap, needed);
  });
}

intentd_status intentd_nmi(const int64_t* gold, const int64_t* clusters, size_t n, double* out) {
  return partition_metric(gold, clusters, n, out, [](auto g, auto c) { return intentd::nmi(g, c); });
}

intentd_status intentd_ari(const int64_t* gold, const int64_t* clusters, size_t n, double* out) {
  return partition_metric(gold, clusters, n, out, [](auto g, auto c) { return intentd::ari(g, c); });
}

intentd_status intentd_acc(const int64_t* gold, const int64_t* clusters, size_t n, double* out) {
  return partition_metric(gold, clusters, n, out,
                          [](auto g, auto c) { return intentd::clustering_accuracy(g, c); });
}

intentd_status intentd_hungarian(const double* cost, size_t rows, size_t cols, int64_t* assignment,
                                 double* total_cost) {
  return guarded([&] {
    require(cost != nullptr || rows * cols == 0, "null cost matrix");
    std::vector<std::vector<double>> m(rows, std::vector<double>(cols));
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < cols; ++c) m[r][c] = cost[r * cols + c];
    }
    const intentd::Assignment a = intentd::hungarian(m);
    if (assignment != nullptr) {
      for (size_t r = 0; r < rows; ++r) assignment[r] = -1;
      for (const auto& [r, c] : a.pairs) assignment[r] = static_cast<int64_t>(c);
    }
    if (total_cost != nullptr) *total_cost = a.total_cost;
    return INTENTD_OK;
  });
}

intentd_status intentd_estimate_tokens(const char* text, size_t* out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = intentd::estimate_tokens(text);
    return INTENTD_OK;
  });
}

intentd_status intentd_trigram_embed(const char* text, size_t dim, double* out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    const intentd::EmbeddingVector v = intentd::hashed_trigram_embed(text, dim);
    std::copy(v.values().begin(), v.values().end(), out);
    return INTENTD_OK;
  });
}

}  // extern "C"
