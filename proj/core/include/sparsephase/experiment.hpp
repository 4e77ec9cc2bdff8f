#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sparsephase {

enum class ExperimentKind {
  ComplementMc,        // complement property of Gaussian ensembles
  KComplementMc,       // 2k-complement property of Gaussian ensembles
  SparseUniquenessMc,  // l0 recovery of planted k-sparse signals
  FmmRoundtripMc,      // full Fourier-magnitude pipeline round trip
  AmbiguityDemo,       // ambiguity pairs from complement violations
};

/// What the batch predicate requires of the trial outcomes. Auto resolves to
/// All or None when theory pins the outcome for the configured (M, k, N) and
/// to ReportOnly otherwise.
enum class ExpectMode { Auto, All, None, ReportOnly };

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ComplementMc;
  std::string name;  // block label in reports; defaults to the kind name
  int m = 4;
  int k = 1;
  std::optional<int> n;  // measurement count; empty = per-kind auto choice
  int trials = 100;
  std::uint64_t seed = 0;
  int workers = 1;
  ExpectMode expect = ExpectMode::Auto;
  std::string out;  // per-experiment trial CSV path; empty = aggregate only
  // Optional overrides of module defaults.
  std::optional<double> linear_tol;
  std::optional<std::uint64_t> support_cap;
  std::optional<int> max_n;
  std::optional<std::uint64_t> max_k_choose;
};

struct TrialRecord {
  int trial = 0;
  std::uint64_t derived_seed = 0;
  bool success = false;
  int sparsity_found = -1;  // -1 when the kind has no sparsity notion
  double residual = 0.0;
  std::string detail;      // kind-specific key=value pairs, ';'-separated
  double elapsed_ms = 0.0;  // timing column, excluded from determinism
};

struct ExperimentSummary {
  ExperimentConfig config;
  int resolved_n = 0;            // the N actually used
  ExpectMode resolved_expect = ExpectMode::ReportOnly;
  std::vector<TrialRecord> records;
  int successes = 0;
  bool predicate_ok = false;
};

const char* kind_name(ExperimentKind kind);
std::optional<ExperimentKind> kind_from_name(const std::string& name);
const char* expect_name(ExpectMode mode);

/// Runs cfg.trials independent seeded trials. Deterministic given cfg.seed
/// for every worker count: trial t draws from seeds derived from
/// (cfg.seed, t) only, and records land at index t. Per-trial cap or
/// infeasibility errors mark the trial failed (detail carries the message)
/// rather than aborting the run. Throws std::invalid_argument on bad config.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Versioned header for trial CSV output (comment line + column names).
std::string trials_csv_header();
/// One '# config: ...' comment line plus one CSV row per trial.
std::string trials_csv_rows(const ExperimentSummary& summary);

/// Parses an INI-like experiment list: '[experiment]' opens a block,
/// 'key = value' lines fill it, '#' or ';' start comments. Keys: kind, name,
/// m, k, n (integer or 'auto'), trials, seed, expect, out, workers,
/// linear_tol, support_cap, max_n, max_k_choose. Throws ParseError with a
/// 1-based line number on malformed input; an empty file parses to an empty
/// list.
std::vector<ExperimentConfig> parse_config_file(const std::string& path);
std::vector<ExperimentConfig> parse_config_text(const std::string& text);

}  // namespace sparsephase
