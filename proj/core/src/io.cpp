#include "sparsephase/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace sparsephase {

std::string format_double(double v) {
  char buf[64];
  // Prefer the shortest representation that parses back exactly.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ' ';
    out += std::to_string(values[i]);
  }
  return out;
}

std::string complex_vector_line(const Eigen::VectorXcd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v(i).real());
    out += ',';
    out += format_double(v(i).imag());
  }
  return out;
}

std::string signal_line(const RealSignal& x) { return join_doubles(x.values()); }

const char* verdict_name(FmmVerdict v) {
  switch (v) {
    case FmmVerdict::Unique:
      return "unique";
    case FmmVerdict::UniqueAlmostSurely:
      return "unique_almost_surely";
    default:
      return "not_guaranteed";
  }
}

const char* k6_name(K6Case c) {
  switch (c) {
    case K6Case::NotK6:
      return "not_k6";
    case K6Case::K6DistinctValues:
      return "k6_distinct_values";
    default:
      return "k6_all_equal";
  }
}

}  // namespace

std::string to_csv(const RealSignal& x) {
  std::string out = "# sparsephase-signal-v1\n# m=" + std::to_string(x.size()) + "\n";
  out += signal_line(x);
  out += '\n';
  return out;
}

std::string to_csv(const MeasurementEnsemble& phi) {
  std::string out = "# sparsephase-ensemble-v1\n# " + phi.describe() + "\n";
  if (phi.field() == Field::Real) {
    const Eigen::MatrixXd& rows = phi.real_rows();
    for (int n = 0; n < phi.count(); ++n) {
      for (int j = 0; j < phi.vector_length(); ++j) {
        if (j > 0) out += ',';
        out += format_double(rows(n, j));
      }
      out += '\n';
    }
  } else {
    const Eigen::MatrixXcd& rows = phi.complex_rows();
    for (int n = 0; n < phi.count(); ++n) {
      out += complex_vector_line(rows.row(n).transpose());
      out += '\n';
    }
  }
  return out;
}

std::string to_csv(const IntensityMeasurements& y) {
  std::string out = "# sparsephase-measurements-v1\n# link=" + y.link +
                    " n=" + std::to_string(y.count()) + "\n";
  out += join_doubles(y.values);
  out += '\n';
  return out;
}

std::string to_text(const ViolationCertificate& cert) {
  std::string out = "violation certificate\n";
  out += "S: " + join_ints(cert.subset) + "\n";
  out += "K: " + join_ints(cert.coordinates) + "\n";
  out += "u: " + complex_vector_line(cert.u) + "\n";
  out += "v: " + complex_vector_line(cert.v) + "\n";
  return out;
}

std::string to_text(const ComplementResult& result) {
  std::string out = std::string("holds: ") + (result.holds ? "true" : "false") + "\n";
  if (result.certificate) out += to_text(*result.certificate);
  return out;
}

std::string to_text(const RecoveryReport& report) {
  std::string out;
  out += "sparsity_found: " + std::to_string(report.sparsity_found) + "\n";
  out += "solution: " + (report.solution ? signal_line(*report.solution) : std::string("none")) +
         "\n";
  out += "alternates: " + std::to_string(report.alternates.size()) + "\n";
  for (const RealSignal& alt : report.alternates) {
    out += "alternate: " + signal_line(alt) + "\n";
  }
  out += "residual: " + format_double(report.residual) + "\n";
  out += std::string("underdetermined: ") + (report.underdetermined ? "true" : "false") + "\n";
  if (report.skipped_sign_searches > 0) {
    out += "skipped_sign_searches: " + std::to_string(report.skipped_sign_searches) + "\n";
  }
  if (report.certificate_checked) {
    out += std::string("complement_certificate: ") +
           (*report.certificate_checked ? "holds" : "fails") + "\n";
  }
  return out;
}

std::string to_text(const UniquenessReport& report) {
  std::string out = "verdict: ";
  switch (report.verdict) {
    case UniquenessVerdict::GuaranteedUnique:
      out += "guaranteed_unique";
      break;
    case UniquenessVerdict::EmpiricallyUnique:
      out += "empirically_unique";
      break;
    default:
      out += "ambiguous";
      break;
  }
  out += "\nk_checked: " + std::to_string(report.k_checked) + "\n";
  if (report.witness) out += "witness: " + signal_line(*report.witness) + "\n";
  if (report.recovery) out += to_text(*report.recovery);
  return out;
}

std::string to_text(const FmmConditionReport& report) {
  std::string out;
  out += "k: " + std::to_string(report.k) + "\n";
  out += "n: " + std::to_string(report.n) + "\n";
  out += std::string("n_is_prime: ") + (report.n_is_prime ? "true" : "false") + "\n";
  out += std::string("bound_ok: ") + (report.bound_ok ? "true" : "false") + "\n";
  out += std::string("collision_free: ") + (report.collision_free ? "true" : "false") + "\n";
  out += std::string("k6_case: ") + k6_name(report.k6_case) + "\n";
  out += std::string("verdict: ") + verdict_name(report.verdict) + "\n";
  for (const std::string& reason : report.reasons) out += "reason: " + reason + "\n";
  return out;
}

std::string to_text(const AutocorrRecovery& stage) {
  std::string out;
  out += "arrangement: " + join_doubles(stage.q.q) + "\n";
  out += "arrangement_sparsity: " + std::to_string(stage.sparsity_found) + "\n";
  out += std::string("arrangement_unique: ") + (stage.unique ? "true" : "false") + "\n";
  out += "arrangement_alternates: " + std::to_string(stage.alternates.size()) + "\n";
  out += std::string("uniqueness_hypothesis_ok: ") +
         (stage.uniqueness_hypothesis_ok ? "true" : "false") + "\n";
  out += std::string("arrangement_symmetric: ") + (stage.symmetric ? "true" : "false") + "\n";
  return out;
}

std::string to_text(const FmmRecoveryReport& report) {
  std::string out;
  out += "solution: " + signal_line(report.solution) + "\n";
  out += "alternates: " + std::to_string(report.alternates.size()) + "\n";
  for (const RealSignal& alt : report.alternates) {
    out += "alternate: " + signal_line(alt) + "\n";
  }
  out += "residual: " + format_double(report.residual) + "\n";
  out += to_text(report.autocorr);
  out += std::string("signal_multiple: ") + (report.signal_multiple ? "true" : "false") + "\n";
  out += to_text(report.conditions);
  for (const std::string& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << content;
}

}  // namespace sparsephase
