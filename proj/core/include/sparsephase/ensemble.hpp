#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsephase/signal.hpp"

namespace sparsephase {

enum class EnsembleKind { Gaussian, Fourier, Explicit };
enum class Field { Real, Complex };

/// Ordered collection of N measurement vectors of common length L, stored as
/// rows of a dense matrix. Fourier ensembles measure zero-padded signals of
/// length M = L/2; every other kind measures signals of length L.
class MeasurementEnsemble {
 public:
  /// N i.i.d. standard-normal real vectors of length m. Entry (n, j) depends
  /// only on (seed, n, j), so the ensemble is identical regardless of
  /// generation order or worker count.
  static MeasurementEnsemble gaussian(int m, int n, std::uint64_t seed);
  /// Rows phi_n of the zero-padded DFT: entry j of the row for frequency k_n
  /// is exp(-i 2 pi j k_n / 2m), j = 0..2m-1. Frequencies must be distinct
  /// and lie in {0..2m-1}.
  static MeasurementEnsemble fourier(int m, const std::vector<int>& freqs);
  static MeasurementEnsemble explicit_real(Eigen::MatrixXd rows);
  static MeasurementEnsemble explicit_complex(Eigen::MatrixXcd rows);

  EnsembleKind kind() const { return kind_; }
  Field field() const { return field_; }
  int count() const;          // N
  int vector_length() const;  // L
  /// Length of the signals this ensemble measures: L, or L/2 for fourier.
  int signal_length() const;

  const Eigen::MatrixXd& real_rows() const;
  const Eigen::MatrixXcd& complex_rows() const;

  /// Fourier only: the frequency indices, in row order.
  const std::vector<int>& frequencies() const { return freqs_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

  /// Short identifier linking measurements back to their ensemble.
  std::string describe() const;

 private:
  MeasurementEnsemble() = default;

  EnsembleKind kind_ = EnsembleKind::Explicit;
  Field field_ = Field::Real;
  Eigen::MatrixXd real_;
  Eigen::MatrixXcd complex_;
  std::vector<int> freqs_;
  std::optional<std::uint64_t> seed_;
  int fourier_m_ = 0;
};

/// y(n) = |<phi_n, x>|^2, nonnegative by construction.
struct IntensityMeasurements {
  std::vector<double> values;
  std::string link;  // describe() of the generating ensemble

  int count() const { return static_cast<int>(values.size()); }
  double l2_norm() const;
};

/// Intensity map with <a, b> = sum_j conj(a_j) b_j. Fourier ensembles
/// zero-pad x from length M to length 2M before measuring.
IntensityMeasurements intensity_measure(const MeasurementEnsemble& phi, const RealSignal& x);

}  // namespace sparsephase
