#pragma once

#include <string>

#include "sparsephase/complement.hpp"
#include "sparsephase/ensemble.hpp"
#include "sparsephase/fmm.hpp"
#include "sparsephase/lifted.hpp"
#include "sparsephase/signal.hpp"

namespace sparsephase {

/// Shortest decimal that round-trips the double (printf %.17g tightened).
std::string format_double(double v);

// CSV serializers. Every format opens with a '#'-prefixed version line and
// '#'-prefixed metadata; complex entries are written as re,im pairs.
std::string to_csv(const RealSignal& x);
std::string to_csv(const MeasurementEnsemble& phi);
std::string to_csv(const IntensityMeasurements& y);

// Structured text records for reports; one "key: value" line per field.
std::string to_text(const ViolationCertificate& cert);
std::string to_text(const ComplementResult& result);
std::string to_text(const RecoveryReport& report);
std::string to_text(const UniquenessReport& report);
std::string to_text(const FmmConditionReport& report);
std::string to_text(const AutocorrRecovery& stage);
std::string to_text(const FmmRecoveryReport& report);

/// Writes content to path, or to stdout when path is empty.
void write_output(const std::string& path, const std::string& content);

}  // namespace sparsephase
