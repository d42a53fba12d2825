#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "unileak/numkernel.hpp"

namespace unileak {

/// U_r = P_r U P_r
template <typename DerivedU, typename DerivedP>
auto register_block(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedP>& p_r) {
  require_same_dim(u, p_r, "register_block");
  Eigen::Matrix<typename DerivedU::Scalar, Eigen::Dynamic, Eigen::Dynamic> out = p_r * u * p_r;
  return out;
}

/// eta = Tr(O_r^dagger U_r)
template <typename DerivedU, typename DerivedO, typename DerivedP>
typename DerivedU::Scalar overlap(const Eigen::MatrixBase<DerivedU>& u,
                                  const Eigen::MatrixBase<DerivedO>& o_r,
                                  const Eigen::MatrixBase<DerivedP>& p_r) {
  require_same_dim(u, o_r, "overlap");
  return trace_of_product(o_r.adjoint(), register_block(u, p_r));
}

/// J = |Tr(O_r^dagger U_r)|^2
template <typename DerivedU, typename DerivedO, typename DerivedP>
typename DerivedU::RealScalar objective(const Eigen::MatrixBase<DerivedU>& u,
                                        const Eigen::MatrixBase<DerivedO>& o_r,
                                        const Eigen::MatrixBase<DerivedP>& p_r) {
  return std::norm(overlap(u, o_r, p_r));
}

/// C = Tr(U_r^dagger U_r), the population kept inside the register block.
template <typename DerivedU, typename DerivedP>
typename DerivedU::RealScalar constraint(const Eigen::MatrixBase<DerivedU>& u,
                                         const Eigen::MatrixBase<DerivedP>& p_r) {
  return register_block(u, p_r).squaredNorm();
}

inline double fidelity(double j, int n_r) {
  return j / (static_cast<double>(n_r) * static_cast<double>(n_r));
}

/// log10(1 - F); empty when F >= 1.
inline std::optional<double> log10_infidelity(double f) {
  if (!(f < 1.0)) return std::nullopt;
  return std::log10(1.0 - f);
}

struct StateRecord {
  double t = 0.0;
  double j = 0.0;
  double c = 0.0;
  double unit_residual = 0.0;
};

struct Snapshot {
  double t = 0.0;
  CMatrix u;
};

/// Per-step record of a run. Row k is the decision instant t_k = k dt: the
/// state U(t_k) and the field held constant on [t_k, t_k + dt). The state
/// after the last step lives in `final_state` / `final_u`.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Complex> fields;
  std::vector<double> j_vals;
  std::vector<double> c_vals;
  std::vector<double> unit_residuals;
  StateRecord final_state;
  CMatrix final_u;
  std::vector<Snapshot> snapshots;

  std::size_t size() const { return times.size(); }

  void append(double t, Complex e, double j, double c, double unit_residual) {
    times.push_back(t);
    fields.push_back(e);
    j_vals.push_back(j);
    c_vals.push_back(c);
    unit_residuals.push_back(unit_residual);
  }

  void reserve(std::size_t n) {
    times.reserve(n);
    fields.reserve(n);
    j_vals.reserve(n);
    c_vals.reserve(n);
    unit_residuals.reserve(n);
  }

  /// Throws StructuralError when columns disagree in length or the grid is
  /// not uniform and increasing.
  void validate() const;

  /// J, C and residual over rows followed by the final state.
  std::vector<double> j_series() const;
  std::vector<double> c_series() const;
  double max_constraint_drift() const;
  double max_unit_residual() const;
};

}  // namespace unileak
