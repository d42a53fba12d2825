#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "unileak/errors.hpp"

namespace unileak {

template <typename Scalar>
using CMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = CMatrixT<double>;
using RVector = RVectorT<double>;

inline constexpr Complex kI{0.0, 1.0};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw StructuralError(std::string(what) + ": matrix is " + std::to_string(a.rows()) +
                          "x" + std::to_string(a.cols()) + ", expected square");
  }
}

template <typename DerivedA, typename DerivedB>
void require_same_dim(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                      const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw StructuralError(std::string(what) + ": dimension mismatch " +
                          std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
  }
}

template <typename DerivedA, typename DerivedB>
auto matmul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  require_same_dim(a, b, "matmul");
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = a * b;
  return out;
}

template <typename Derived>
auto adjoint(const Eigen::MatrixBase<Derived>& a) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out = a.adjoint();
  return out;
}

template <typename Derived>
typename Derived::Scalar trace(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "trace");
  return a.trace();
}

// Tr(a*b) without forming the product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar trace_of_product(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  return a.transpose().cwiseProduct(b).sum();
}

// Largest entry of |a - a^dagger|.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "hermiticity_defect");
  if (a.size() == 0) return 0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

// ||w^dagger w - I||_F
template <typename Derived>
typename Derived::RealScalar unitarity_residual(const Eigen::MatrixBase<Derived>& w) {
  require_square(w, "unitarity_residual");
  using M = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return (w.adjoint() * w - M::Identity(w.rows(), w.cols())).norm();
}

inline constexpr double kHermitianTolerance = 1e-10;

/// exp(-i h dt) for Hermitian h, via the eigendecomposition h = V diag(l) V^dagger.
/// The result is unitary to rounding because V is, whatever the size of h*dt.
template <typename Scalar>
CMatrixT<Scalar> expm_skew(const CMatrixT<Scalar>& h, Scalar dt,
                           Scalar tolerance = Scalar(kHermitianTolerance)) {
  require_square(h, "expm_skew");
  if (!h.allFinite()) throw ContractError("expm_skew: generator has non-finite entries");
  const Scalar defect = hermiticity_defect(h);
  if (defect > tolerance) {
    throw ContractError("expm_skew: generator is not Hermitian (max |h - h^dagger| = " +
                        std::to_string(defect) + ")");
  }
  const Eigen::Index n = h.rows();
  if (n == 0) return h;
  Eigen::SelfAdjointEigenSolver<CMatrixT<Scalar>> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("expm_skew: eigendecomposition failed");
  const auto& v = es.eigenvectors();
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::polar(Scalar(1), -es.eigenvalues()(k) * dt);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

/// Magnitude spectrum of a uniformly sampled complex signal.
struct AmplitudeSpectrum {
  std::vector<double> freqs;  // angular frequency, ascending
  std::vector<double> amps;
};

/// |DFT| with X_k = sum_n x_n exp(-2 pi i k n / N) on the angular axis
/// w_k = 2 pi k / (N dt); two-sided, reordered so that freqs ascend.
/// A tone exp(i w0 t) therefore peaks at +w0.
AmplitudeSpectrum fft_amplitude(std::span<const Complex> samples, double dt);

/// Same transform for a real signal, keeping only w >= 0.
AmplitudeSpectrum fft_amplitude_real(std::span<const double> samples, double dt);

/// Bin spacing 2 pi / (N dt).
inline double frequency_resolution(std::size_t n, double dt) {
  return 2.0 * M_PI / (static_cast<double>(n) * dt);
}

}  // namespace unileak
