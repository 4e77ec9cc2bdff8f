// Command-line front end: seeded single-instance runs of the checkers and
// recovery pipelines, plus the Monte-Carlo experiment harness.
//
// Exit codes: 0 = predicate passed, 1 = predicate failed (property violated,
// recovery missed, or an experiment batch failed its expectation),
// 2 = usage/config error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sparsephase/complement.hpp"
#include "sparsephase/ensemble.hpp"
#include "sparsephase/errors.hpp"
#include "sparsephase/experiment.hpp"
#include "sparsephase/fmm.hpp"
#include "sparsephase/io.hpp"
#include "sparsephase/lifted.hpp"
#include "sparsephase/rng.hpp"
#include "sparsephase/signal.hpp"

namespace sp = sparsephase;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  std::string format = "text";
};

std::string join_signal(const sp::RealSignal& x) {
  std::string s;
  for (int i = 0; i < x.size(); ++i) {
    if (i > 0) s += ';';
    s += sp::format_double(x[i]);
  }
  return s;
}

std::string signal_text(const sp::RealSignal& x) {
  std::string s;
  for (int i = 0; i < x.size(); ++i) {
    if (i > 0) s += ',';
    s += sp::format_double(x[i]);
  }
  return s;
}

/// n distinct indices from {0..range-1}, ascending; partial Fisher-Yates.
std::vector<int> random_index_subset(int range, int n, sp::CounterRng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(range));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < n; ++i) {
    const int j = i + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(range - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(n));
  std::sort(pool.begin(), pool.end());
  return pool;
}

void emit(const GlobalOpts& g, const std::string& text, const std::string& csv) {
  sp::write_output(g.out, g.format == "csv" ? csv : text);
}

int run_check(const GlobalOpts& g, int m, int n, std::optional<int> k, int max_n,
              std::uint64_t max_k_choose) {
  const sp::MeasurementEnsemble phi = sp::MeasurementEnsemble::gaussian(m, n, g.seed);
  sp::ComplementOptions opts;
  opts.max_n = max_n;
  opts.max_k_choose = max_k_choose;
  opts.workers = g.workers;
  const sp::ComplementResult res =
      k ? sp::has_k_complement_property(phi, *k, opts) : sp::has_complement_property(phi, opts);

  std::string text = "ensemble: " + phi.describe() + "\n";
  text += "property: " + (k ? std::to_string(*k) + "-complement" : std::string("complement")) +
          "\n";
  text += sp::to_text(res);

  std::string csv = "# sparsephase-check-v1\nproperty,m,n,k,holds\n";
  csv += (k ? "k_complement" : "complement");
  csv += ',' + std::to_string(m) + ',' + std::to_string(n) + ',' +
         (k ? std::to_string(*k) : std::string()) + ',' + (res.holds ? "1" : "0") + '\n';

  emit(g, text, csv);
  return res.holds ? 0 : 1;
}

int run_recover(const GlobalOpts& g, int m, std::optional<int> n_opt, int k,
                std::optional<int> kmax_opt, const std::vector<double>& signal) {
  const int n = n_opt.value_or(std::min(4 * k - 1, 2 * m - 1));
  const int kmax = kmax_opt.value_or(k);
  const sp::MeasurementEnsemble phi =
      sp::MeasurementEnsemble::gaussian(m, n, sp::derive_seed(g.seed, 0));
  sp::RealSignal x0;
  if (!signal.empty()) {
    if (static_cast<int>(signal.size()) != m) {
      throw std::invalid_argument("--signal length must equal --m");
    }
    x0 = sp::RealSignal(signal);
  } else {
    sp::CounterRng rng(sp::derive_seed(g.seed, 1));
    x0 = sp::random_sparse_signal(m, k, rng);
  }
  const sp::IntensityMeasurements y = sp::intensity_measure(phi, x0);
  sp::RecoveryOptions opts;
  opts.workers = g.workers;
  const sp::RecoveryReport rep = sp::l0_recover(phi, y, kmax, opts);
  const bool matched = rep.solution && sp::equivalent_under_invariances(*rep.solution, x0);
  const bool success = matched && rep.alternates.empty();

  std::string text = "ensemble: " + phi.describe() + "\n";
  text += "planted: " + signal_text(x0) + "\n";
  text += sp::to_text(rep);
  text += std::string("matches_planted: ") + (matched ? "true" : "false") + "\n";

  std::string csv =
      "# sparsephase-recover-v1\nm,n,k_max,sparsity_found,residual,alternates,matched\n";
  csv += std::to_string(m) + ',' + std::to_string(n) + ',' + std::to_string(kmax) + ',' +
         std::to_string(rep.sparsity_found) + ',' + sp::format_double(rep.residual) + ',' +
         std::to_string(rep.alternates.size()) + ',' + (matched ? "1" : "0") + '\n';

  emit(g, text, csv);
  return success ? 0 : 1;
}

int run_fmm(const GlobalOpts& g, std::optional<int> m_opt, std::optional<int> k_opt,
            std::optional<int> n_opt, std::vector<int> freqs, bool random_freqs,
            bool exploit_symmetry, const std::vector<double>& signal) {
  sp::RealSignal x0;
  int m = 0;
  int k = 0;
  if (!signal.empty()) {
    x0 = sp::RealSignal(signal);
    m = x0.size();
    if (m_opt && *m_opt != m) throw std::invalid_argument("--signal length must equal --m");
    k = k_opt.value_or(x0.sparsity());
  } else {
    if (!m_opt || !k_opt) {
      throw std::invalid_argument("fmm needs --m and --k (or an explicit --signal)");
    }
    m = *m_opt;
    k = *k_opt;
    sp::CounterRng rng(sp::derive_seed(g.seed, 1));
    x0 = sp::random_collision_free_integer_signal(m, k, rng);
  }
  if (freqs.empty()) {
    const int n = n_opt.value_or(sp::next_valid_N(k));
    if (n < 1 || n > 2 * m) {
      throw std::invalid_argument("need 1 <= n <= 2m distinct frequencies");
    }
    if (random_freqs) {
      sp::CounterRng rng(sp::derive_seed(g.seed, 2));
      freqs = random_index_subset(2 * m, n, rng);
    } else {
      freqs.resize(static_cast<std::size_t>(n));
      std::iota(freqs.begin(), freqs.end(), 0);
    }
  }

  const sp::MeasurementEnsemble phi = sp::MeasurementEnsemble::fourier(m, freqs);
  const sp::IntensityMeasurements y = sp::intensity_measure(phi, x0);
  sp::FmmOptions opts;
  opts.autocorr.workers = g.workers;
  opts.autocorr.exploit_symmetry = exploit_symmetry;
  opts.signal.workers = g.workers;
  const sp::FmmRecoveryReport rep = sp::fmm_recover(y, freqs, m, k, opts);
  const bool success =
      sp::equivalent_under_invariances(rep.solution, x0, sp::InvarianceGroup::Full);

  std::string text = "ensemble: " + phi.describe() + "\n";
  text += "planted: " + signal_text(x0) + "\n";
  text += sp::to_text(rep);
  text += std::string("matches_planted: ") + (success ? "true" : "false") + "\n";

  std::string csv =
      "# sparsephase-fmm-v1\n"
      "m,k,n,verdict,arrangement_sparsity,arrangement_unique,signal_multiple,residual,matched\n";
  csv += std::to_string(m) + ',' + std::to_string(k) + ',' + std::to_string(phi.count()) + ',';
  switch (rep.conditions.verdict) {
    case sp::FmmVerdict::Unique:
      csv += "unique";
      break;
    case sp::FmmVerdict::UniqueAlmostSurely:
      csv += "unique_almost_surely";
      break;
    default:
      csv += "not_guaranteed";
      break;
  }
  csv += ',' + std::to_string(rep.autocorr.sparsity_found) + ',' +
         (rep.autocorr.unique ? "1" : "0") + ',' + (rep.signal_multiple ? "1" : "0") + ',' +
         sp::format_double(rep.residual) + ',' + (success ? "1" : "0") + '\n';

  emit(g, text, csv);
  return success ? 0 : 1;
}

int run_ambiguity(const GlobalOpts& g, int m, std::optional<int> n_opt, std::optional<int> k,
                  int max_n, std::uint64_t max_k_choose) {
  const int n = n_opt.value_or(2 * m - 2);
  const sp::MeasurementEnsemble phi = sp::MeasurementEnsemble::gaussian(m, n, g.seed);
  sp::ComplementOptions opts;
  opts.max_n = max_n;
  opts.max_k_choose = max_k_choose;
  opts.workers = g.workers;
  const sp::ComplementResult res =
      k ? sp::has_k_complement_property(phi, *k, opts) : sp::has_complement_property(phi, opts);

  if (res.holds) {
    const std::string text = "ensemble: " + phi.describe() +
                             "\nholds: true\nno violation: nothing to construct\n";
    const std::string csv = "# sparsephase-ambiguity-v1\nm,n,k,found,discrepancy,distinct\n" +
                            std::to_string(m) + ',' + std::to_string(n) + ',' +
                            (k ? std::to_string(*k) : std::string()) + ",0,,\n";
    emit(g, text, csv);
    return 1;
  }

  const auto [x1, x2] = sp::ambiguity_from_violation(phi, *res.certificate);
  const sp::IntensityMeasurements y1 = sp::intensity_measure(phi, x1);
  const sp::IntensityMeasurements y2 = sp::intensity_measure(phi, x2);
  double disc = 0.0;
  for (std::size_t i = 0; i < y1.values.size(); ++i) {
    disc = std::max(disc, std::fabs(y1.values[i] - y2.values[i]));
  }
  const bool distinct = !sp::equivalent_under_invariances(x1, x2);
  const bool success = disc <= 1e-10 && distinct;

  std::string text = "ensemble: " + phi.describe() + "\n";
  text += sp::to_text(*res.certificate);
  text += "x1: " + signal_text(x1) + "\n";
  text += "x2: " + signal_text(x2) + "\n";
  text += "measurement_discrepancy: " + sp::format_double(disc) + "\n";
  text += std::string("distinct_beyond_sign: ") + (distinct ? "true" : "false") + "\n";

  std::string csv = "# sparsephase-ambiguity-v1\nm,n,k,found,discrepancy,distinct\n";
  csv += std::to_string(m) + ',' + std::to_string(n) + ',' +
         (k ? std::to_string(*k) : std::string()) + ",1," + sp::format_double(disc) + ',' +
         (distinct ? "1" : "0") + '\n';

  emit(g, text, csv);
  return success ? 0 : 1;
}

int run_experiments(const GlobalOpts& g, std::vector<sp::ExperimentConfig> configs) {
  std::string csv = sp::trials_csv_header();
  std::string summary;
  bool all_ok = true;
  for (sp::ExperimentConfig& cfg : configs) {
    cfg.workers = g.workers;
    const sp::ExperimentSummary s = sp::run_experiment(cfg);
    const std::string rows = sp::trials_csv_rows(s);
    csv += rows;
    if (!s.config.out.empty()) {
      sp::write_output(s.config.out, sp::trials_csv_header() + rows);
    }
    summary += s.config.name + ": " + std::to_string(s.successes) + "/" +
               std::to_string(s.config.trials) + " expect=" + sp::expect_name(s.resolved_expect) +
               " predicate=" + (s.predicate_ok ? "pass" : "fail") +
               " (m=" + std::to_string(s.config.m) + " k=" + std::to_string(s.config.k) +
               " n=" + std::to_string(s.resolved_n) + ")\n";
    all_ok = all_ok && s.predicate_ok;
  }
  if (configs.empty()) summary = "no experiments configured\n";

  if (!g.out.empty()) {
    sp::write_output(g.out, csv);
    std::cout << summary;
  } else if (g.format == "csv") {
    std::cout << csv;
  } else {
    std::cout << summary;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse phase retrieval uniqueness toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "base RNG seed")->capture_default_str();
  app.add_option("--workers", g.workers, "worker thread count")->capture_default_str();
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "text"}))
      ->capture_default_str();

  int exit_code = 0;

  // check-complement / check-k-complement
  struct CheckArgs {
    int m = 0;
    int n = 0;
    int k = 0;
    int max_n = 24;
    std::uint64_t max_k_choose = 1u << 20;
  } chk, kchk;
  CLI::App* cc = app.add_subcommand("check-complement",
                                    "complement property of a seeded Gaussian ensemble");
  cc->add_option("--m", chk.m, "signal dimension")->required();
  cc->add_option("--n", chk.n, "measurement count")->required();
  cc->add_option("--max-n", chk.max_n, "subset enumeration cap")->capture_default_str();
  cc->add_option("--max-k-choose", chk.max_k_choose, "coordinate subset cap")
      ->capture_default_str();
  cc->callback([&]() { exit_code = run_check(g, chk.m, chk.n, std::nullopt, chk.max_n,
                                             chk.max_k_choose); });

  CLI::App* kc = app.add_subcommand("check-k-complement",
                                    "k-complement property of a seeded Gaussian ensemble");
  kc->add_option("--m", kchk.m, "signal dimension")->required();
  kc->add_option("--n", kchk.n, "measurement count")->required();
  kc->add_option("--k", kchk.k, "restriction size")->required();
  kc->add_option("--max-n", kchk.max_n, "subset enumeration cap")->capture_default_str();
  kc->add_option("--max-k-choose", kchk.max_k_choose, "coordinate subset cap")
      ->capture_default_str();
  kc->callback([&]() { exit_code = run_check(g, kchk.m, kchk.n, kchk.k, kchk.max_n,
                                             kchk.max_k_choose); });

  // recover
  struct RecoverArgs {
    int m = 0;
    int k = 0;
    std::optional<int> n;
    std::optional<int> kmax;
    std::vector<double> signal;
  } rc;
  CLI::App* rec = app.add_subcommand("recover",
                                     "exact l0 recovery of a planted sparse signal from "
                                     "Gaussian intensity measurements");
  rec->add_option("--m", rc.m, "signal dimension")->required();
  rec->add_option("--k", rc.k, "planted sparsity")->required();
  rec->add_option("--n", rc.n, "measurement count (default min(4k-1, 2m-1))");
  rec->add_option("--kmax", rc.kmax, "enumeration cap (default k)");
  rec->add_option("--signal", rc.signal, "explicit planted signal, comma separated")
      ->delimiter(',');
  rec->callback([&]() { exit_code = run_recover(g, rc.m, rc.n, rc.k, rc.kmax, rc.signal); });

  // fmm
  struct FmmArgs {
    std::optional<int> m;
    std::optional<int> k;
    std::optional<int> n;
    std::vector<int> freqs;
    bool random_freqs = false;
    bool exploit_symmetry = false;
    std::vector<double> signal;
  } fm;
  CLI::App* fmm = app.add_subcommand("fmm",
                                     "Fourier-magnitude round trip: measure a collision-free "
                                     "sparse signal and recover it up to sign/mirror/shift");
  fmm->add_option("--m", fm.m, "signal dimension");
  fmm->add_option("--k", fm.k, "planted sparsity");
  fmm->add_option("--n", fm.n, "frequency count (default: smallest valid prime)");
  fmm->add_option("--freqs", fm.freqs, "explicit frequency indices in {0..2m-1}")
      ->delimiter(',');
  fmm->add_flag("--random-freqs", fm.random_freqs, "draw n frequencies at random (seeded)");
  fmm->add_flag("--exploit-symmetry", fm.exploit_symmetry,
                "solve for half-lags in the autocorrelation stage");
  fmm->add_option("--signal", fm.signal, "explicit planted signal, comma separated")
      ->delimiter(',');
  fmm->callback([&]() {
    exit_code = run_fmm(g, fm.m, fm.k, fm.n, fm.freqs, fm.random_freqs, fm.exploit_symmetry,
                        fm.signal);
  });

  // ambiguity
  struct AmbiguityArgs {
    int m = 0;
    std::optional<int> n;
    std::optional<int> k;
    int max_n = 24;
    std::uint64_t max_k_choose = 1u << 20;
  } am;
  CLI::App* amb = app.add_subcommand("ambiguity",
                                     "construct two non-equivalent signals with identical "
                                     "measurements from a complement-property violation");
  amb->add_option("--m", am.m, "signal dimension")->required();
  amb->add_option("--n", am.n, "measurement count (default 2m-2)");
  amb->add_option("--k", am.k, "use the k-complement property instead");
  amb->add_option("--max-n", am.max_n, "subset enumeration cap")->capture_default_str();
  amb->add_option("--max-k-choose", am.max_k_choose, "coordinate subset cap")
      ->capture_default_str();
  amb->callback([&]() { exit_code = run_ambiguity(g, am.m, am.n, am.k, am.max_n,
                                                  am.max_k_choose); });

  // experiment
  struct ExperimentArgs {
    std::string config;
    std::string kind;
    int m = 4;
    int k = 1;
    std::string n = "auto";
    int trials = 100;
    std::string expect = "auto";
  } ex;
  CLI::App* exp = app.add_subcommand("experiment", "seeded Monte-Carlo experiment batches");
  CLI::Option* cfg_opt = exp->add_option("--config", ex.config, "experiment list file");
  CLI::Option* kind_opt =
      exp->add_option("--kind", ex.kind, "experiment kind (inline single experiment)");
  exp->add_option("--m", ex.m, "signal dimension")->capture_default_str();
  exp->add_option("--k", ex.k, "sparsity")->capture_default_str();
  exp->add_option("--n", ex.n, "measurement count or 'auto'")->capture_default_str();
  exp->add_option("--trials", ex.trials, "trial count")->capture_default_str();
  exp->add_option("--expect", ex.expect, "auto | all | none | report_only")
      ->check(CLI::IsMember({"auto", "all", "none", "report_only"}))
      ->capture_default_str();
  cfg_opt->excludes(kind_opt);
  exp->callback([&]() {
    std::vector<sp::ExperimentConfig> configs;
    if (!ex.config.empty()) {
      configs = sp::parse_config_file(ex.config);
    } else {
      if (ex.kind.empty()) {
        throw std::invalid_argument("experiment needs --config or --kind");
      }
      sp::ExperimentConfig cfg;
      const auto kind = sp::kind_from_name(ex.kind);
      if (!kind) throw std::invalid_argument("unknown experiment kind '" + ex.kind + "'");
      cfg.kind = *kind;
      cfg.m = ex.m;
      cfg.k = ex.k;
      if (ex.n != "auto") cfg.n = std::stoi(ex.n);
      cfg.trials = ex.trials;
      cfg.seed = g.seed;
      if (ex.expect == "all") {
        cfg.expect = sp::ExpectMode::All;
      } else if (ex.expect == "none") {
        cfg.expect = sp::ExpectMode::None;
      } else if (ex.expect == "report_only") {
        cfg.expect = sp::ExpectMode::ReportOnly;
      }
      configs.push_back(cfg);
    }
    exit_code = run_experiments(g, std::move(configs));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sp::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const sp::CapExceededError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 2;
  } catch (const sp::NoSolutionError& e) {
    std::cerr << "no solution: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
