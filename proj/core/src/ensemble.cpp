#include "sparsephase/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sparsephase/rng.hpp"

namespace sparsephase {

MeasurementEnsemble MeasurementEnsemble::gaussian(int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gaussian ensemble: need m >= 1, n >= 1");
  MeasurementEnsemble out;
  out.kind_ = EnsembleKind::Gaussian;
  out.field_ = Field::Real;
  out.seed_ = seed;
  out.real_.resize(n, m);
  for (int row = 0; row < n; ++row) {
    CounterRng rng(seed, static_cast<std::uint64_t>(row));
    for (int col = 0; col < m; ++col) {
      out.real_(row, col) = rng.gaussian_at(static_cast<std::uint64_t>(col));
    }
  }
  return out;
}

MeasurementEnsemble MeasurementEnsemble::fourier(int m, const std::vector<int>& freqs) {
  if (m < 1) throw std::invalid_argument("fourier ensemble: need m >= 1");
  if (freqs.empty()) throw std::invalid_argument("fourier ensemble: need at least one frequency");
  std::set<int> seen;
  for (int k : freqs) {
    if (k < 0 || k >= 2 * m) throw std::invalid_argument("fourier ensemble: frequency out of range");
    if (!seen.insert(k).second) throw std::invalid_argument("fourier ensemble: duplicate frequency");
  }
  MeasurementEnsemble out;
  out.kind_ = EnsembleKind::Fourier;
  out.field_ = Field::Complex;
  out.freqs_ = freqs;
  out.fourier_m_ = m;
  const int l = 2 * m;
  out.complex_.resize(static_cast<Eigen::Index>(freqs.size()), l);
  for (std::size_t row = 0; row < freqs.size(); ++row) {
    for (int j = 0; j < l; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>(freqs[row]) / static_cast<double>(l);
      out.complex_(static_cast<Eigen::Index>(row), j) =
          std::complex<double>(std::cos(angle), std::sin(angle));
    }
  }
  return out;
}

MeasurementEnsemble MeasurementEnsemble::explicit_real(Eigen::MatrixXd rows) {
  if (rows.rows() < 1 || rows.cols() < 1) {
    throw std::invalid_argument("explicit ensemble: need at least one vector");
  }
  MeasurementEnsemble out;
  out.kind_ = EnsembleKind::Explicit;
  out.field_ = Field::Real;
  out.real_ = std::move(rows);
  return out;
}

MeasurementEnsemble MeasurementEnsemble::explicit_complex(Eigen::MatrixXcd rows) {
  if (rows.rows() < 1 || rows.cols() < 1) {
    throw std::invalid_argument("explicit ensemble: need at least one vector");
  }
  MeasurementEnsemble out;
  out.kind_ = EnsembleKind::Explicit;
  out.field_ = Field::Complex;
  out.complex_ = std::move(rows);
  return out;
}

int MeasurementEnsemble::count() const {
  return static_cast<int>(field_ == Field::Real ? real_.rows() : complex_.rows());
}

int MeasurementEnsemble::vector_length() const {
  return static_cast<int>(field_ == Field::Real ? real_.cols() : complex_.cols());
}

int MeasurementEnsemble::signal_length() const {
  return kind_ == EnsembleKind::Fourier ? fourier_m_ : vector_length();
}

const Eigen::MatrixXd& MeasurementEnsemble::real_rows() const {
  if (field_ != Field::Real) throw std::logic_error("ensemble is complex");
  return real_;
}

const Eigen::MatrixXcd& MeasurementEnsemble::complex_rows() const {
  if (field_ != Field::Complex) throw std::logic_error("ensemble is real");
  return complex_;
}

std::string MeasurementEnsemble::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case EnsembleKind::Gaussian:
      os << "gaussian(m=" << vector_length() << ",n=" << count() << ",seed=" << *seed_ << ")";
      break;
    case EnsembleKind::Fourier: {
      os << "fourier(m=" << fourier_m_ << ",freqs=";
      for (std::size_t i = 0; i < freqs_.size(); ++i) {
        if (i) os << ' ';
        os << freqs_[i];
      }
      os << ")";
      break;
    }
    case EnsembleKind::Explicit:
      os << "explicit(" << (field_ == Field::Real ? "real" : "complex")
         << ",n=" << count() << ",l=" << vector_length() << ")";
      break;
  }
  return os.str();
}

double IntensityMeasurements::l2_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

IntensityMeasurements intensity_measure(const MeasurementEnsemble& phi, const RealSignal& x) {
  if (x.size() != phi.signal_length()) {
    throw std::invalid_argument("intensity_measure: signal length does not match ensemble");
  }
  const int n = phi.count();
  IntensityMeasurements y;
  y.values.resize(static_cast<std::size_t>(n));
  y.link = phi.describe();
  if (phi.field() == Field::Real) {
    const Eigen::MatrixXd& rows = phi.real_rows();
    for (int i = 0; i < n; ++i) {
      double ip = 0.0;
      for (int j = 0; j < phi.vector_length(); ++j) ip += rows(i, j) * x[j];
      y.values[static_cast<std::size_t>(i)] = ip * ip;
    }
  } else {
    // <phi, x> = sum conj(phi_j) x_j; x is zero-padded for fourier kinds, so
    // only the first signal_length() columns contribute.
    const Eigen::MatrixXcd& rows = phi.complex_rows();
    for (int i = 0; i < n; ++i) {
      std::complex<double> ip(0.0, 0.0);
      for (int j = 0; j < x.size(); ++j) ip += std::conj(rows(i, j)) * x[j];
      y.values[static_cast<std::size_t>(i)] = std::norm(ip);
    }
  }
  return y;
}

}  // namespace sparsephase
