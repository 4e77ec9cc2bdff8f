#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sparsephase/ensemble.hpp"
#include "sparsephase/signal.hpp"

namespace sparsephase {

/// Witness that a subset split defeats the (k-)complement property: u is a
/// unit-norm vector with <phi_{n,K}, u> = 0 for every n in subset, v likewise
/// for the complement. Both restricted row sets therefore fail to span.
struct ViolationCertificate {
  std::vector<int> subset;       // S, ascending
  std::vector<int> coordinates;  // K, ascending
  Eigen::VectorXcd u;            // real ensembles carry real entries
  Eigen::VectorXcd v;
};

struct ComplementOptions {
  /// Subset enumeration is 2^(N-1) splits; refuse ensembles beyond this N.
  int max_n = 24;
  /// Cap on the number C(M, k) of coordinate subsets for the k-variant.
  std::uint64_t max_k_choose = 1u << 20;
  /// A row set spans iff its k-th singular value exceeds this multiple of the
  /// largest singular value of the full restricted matrix.
  double rank_threshold = 1e-8;
  int workers = 1;
};

/// holds == false comes with a certificate; verdicts are deterministic, the
/// certificate identity under multi-worker early exit is not.
struct ComplementResult {
  bool holds;
  std::optional<ViolationCertificate> certificate;
};

/// For every subset S of rows, S or its complement must span the signal
/// space (all of it; fourier ensembles span over the first M coordinates,
/// the ones a zero-padded signal can occupy).
ComplementResult has_complement_property(const MeasurementEnsemble& phi,
                                         const ComplementOptions& opts = {});

/// Same requirement on every restriction to k signal coordinates; reduces to
/// has_complement_property at k = signal length.
ComplementResult has_k_complement_property(const MeasurementEnsemble& phi, int k,
                                           const ComplementOptions& opts = {});

/// Constructive converse for real ensembles: embeds u, v on K and forms
/// x1 = (u+v)/2, x2 = (u-v)/2. The intensity gap factors per measurement as
/// <phi_n,x1>^2 - <phi_n,x2>^2 = <phi_n,u><phi_n,v>, and one factor vanishes
/// for every n (u kills S, v kills the complement), so the two signals share
/// all intensity measurements yet differ beyond sign whenever u and v are
/// linearly independent; parallel u, v are rejected.
std::pair<RealSignal, RealSignal> ambiguity_from_violation(const MeasurementEnsemble& phi,
                                                           const ViolationCertificate& cert);

}  // namespace sparsephase
