#pragma once

#include <iosfwd>
#include <vector>

#include "spectral/matrix_core.hpp"

namespace spectral {

enum class Preset { standard, simple };

const char* preset_name(Preset p);
Preset preset_from_name(const std::string& name);

/// Guaranteed bound on lambda_max/lambda_min of the selected sum:
/// (d+1+2*sqrt(d))/(d+1-2*sqrt(d)) for the standard preset,
/// (6d+1)/(d-1) for the simple one.
double condition_bound(double d, Preset preset);

/// Parameters of the two moving barriers. u starts at u0 and advances by
/// delta_u per step, l starts at l0 and advances by delta_l; eps_u and eps_l
/// cap the two potentials throughout.
struct BarrierParams {
  double d;
  double delta_u;
  double delta_l;
  double eps_u;
  double eps_l;
  double u0;
  double l0;

  /// delta_l = 1, eps_l = 1/sqrt(d), l0 = -r*sqrt(d),
  /// delta_u = (sqrt(d)+1)/(sqrt(d)-1), eps_u = (sqrt(d)-1)/(d+sqrt(d)),
  /// u0 = r/eps_u.
  static BarrierParams standard(double d, int dimension);

  /// eps_u = eps_l = 1, u0 = r, l0 = -r, delta_u = 2, delta_l = 1/3.
  static BarrierParams simple(double d, int dimension);

  static BarrierParams for_preset(Preset preset, double d, int dimension);

  /// Enforces 0 <= 1/delta_u + eps_u <= 1/delta_l - eps_l, l0 < 0 < u0,
  /// positive deltas and epsilons, and d > 1 + 1e-6.
  void validate() const;
};

/// Isotropic family of m column vectors in R^r: sum of v_i v_i^T must equal
/// the identity within 1e-8 entrywise.
class VectorFamily {
 public:
  /// Validates isotropy; columns of `vectors` are the family members.
  explicit VectorFamily(Eigen::MatrixXd vectors);

  int dimension() const { return static_cast<int>(vectors_.rows()); }
  int count() const { return static_cast<int>(vectors_.cols()); }
  const Eigen::MatrixXd& columns() const { return vectors_; }
  Eigen::VectorXd vector(int i) const { return vectors_.col(i); }

 private:
  Eigen::MatrixXd vectors_;
};

/// One completed selection step: after `step` updates the barriers sit at
/// u0 + step*delta_u and l0 + step*delta_l, `index` was chosen with weight
/// increment t, and the potentials/extreme eigenvalues are those of the
/// updated matrix. lambda_min/lambda_max are NaN unless eigenvalue recording
/// was requested (they need a full eigendecomposition per step).
struct TraceRecord {
  int step;
  int index;
  double t;
  double phi_upper;
  double phi_lower;
  double lambda_min;
  double lambda_max;
};

using SelectionTrace = std::vector<TraceRecord>;

/// One record per line: step index t phi_upper phi_lower lambda_min
/// lambda_max, reals with 12 significant digits.
void write_trace(std::ostream& out, const SelectionTrace& trace);

/// Selection cannot continue: no vector satisfies the step inequalities.
/// Exists only as a numerical failure mode; carries the trace so far.
struct InfeasibleError : Error {
  InfeasibleError(const std::string& msg, SelectionTrace trace)
      : Error(msg), partial_trace(std::move(trace)) {}
  SelectionTrace partial_trace;
};

/// Upper barrier potential Phi^u(A) = Tr(uI - A)^{-1} = sum 1/(u - lambda_i),
/// computed from the eigenvalues. Requires lambda_max(A) < u.
double upper_potential(const SymmetricMatrix& a, double u);
double upper_potential(const Eigen::VectorXd& eigenvalues, double u);

/// Lower barrier potential Phi_l(A) = Tr(A - lI)^{-1} = sum 1/(lambda_i - l).
/// Requires lambda_min(A) > l.
double lower_potential(const SymmetricMatrix& a, double l);
double lower_potential(const Eigen::VectorXd& eigenvalues, double l);

/// Evolving state of the selection loop: the accumulated matrix A, the step
/// counter, the accumulated weights, and cached inverses
/// ((u+delta_u)I - A)^{-1} and (A - (l+delta_l)I)^{-1} at the shifted barrier
/// positions. The caches advance by Sherman-Morrison after each accepted
/// update, with a direct recomputation every `refresh_interval` steps to
/// bound drift.
class BarrierState {
 public:
  BarrierState(const BarrierParams& params, int dimension, int family_count,
               int refresh_interval = 25);

  const BarrierParams& params() const { return params_; }
  int dimension() const { return r_; }
  int step() const { return q_; }
  double upper_barrier() const { return params_.u0 + q_ * params_.delta_u; }
  double lower_barrier() const { return params_.l0 + q_ * params_.delta_l; }
  const Eigen::MatrixXd& matrix() const { return a_; }
  const Eigen::VectorXd& weights() const { return s_; }

  /// Potentials at the current barrier positions, maintained from the cached
  /// inverse traces (no eigendecomposition involved).
  double phi_upper() const { return phi_u_; }
  double phi_lower() const { return phi_l_; }

  /// ((u + delta_u) I - A)^{-1} and (A - (l + delta_l) I)^{-1}.
  const Eigen::MatrixXd& shifted_upper_inverse() const { return minv_u_; }
  const Eigen::MatrixXd& shifted_lower_inverse() const { return minv_l_; }

  /// Applies A += t v v^T with v = family column `index`, shifts both
  /// barriers, and advances the cached inverses.
  void apply(const VectorFamily& family, int index, double t);

  /// Maximum entrywise deviation of the cached inverses from fresh ones.
  double cache_drift() const;

 private:
  void refresh_direct();

  BarrierParams params_;
  int r_;
  int q_ = 0;
  int refresh_interval_;
  Eigen::MatrixXd a_;
  Eigen::VectorXd s_;
  Eigen::MatrixXd minv_u_;
  Eigen::MatrixXd minv_l_;
  double phi_u_ = 0.0;
  double phi_l_ = 0.0;
};

/// U_A(v): any t with 1/t >= U_A(v) keeps the upper potential from
/// increasing when the upper barrier shifts by delta_u, and keeps
/// lambda_max below the shifted barrier.
double upper_shift_bound(const BarrierState& state, const Eigen::VectorXd& v);

/// L_A(v): any t with 0 < 1/t <= L_A(v) keeps the lower potential from
/// increasing when the lower barrier shifts by delta_l. May be non-positive,
/// in which case v is unusable this step.
double lower_shift_bound(const BarrierState& state, const Eigen::VectorXd& v);

struct StepChoice {
  int index;
  double t;
  double sum_upper;  // sum over the family of U_A(v_i)
  double sum_lower;  // sum over the family of L_A(v_i)
};

/// Picks the index maximizing L_A(v_i) - U_A(v_i) among candidates with
/// L_A >= U_A > 0 (ties to the smallest index) and sets t = 2/(U_A + L_A),
/// the midpoint of the admissible interval for 1/t. Throws InfeasibleError
/// when no candidate exists.
StepChoice choose_step(const BarrierState& state, const VectorFamily& family);

struct SelectionOptions {
  bool record_eigenvalues = false;  // fill lambda_min/lambda_max per step
  bool validate_steps = false;      // re-check barrier conditions via eigh each step
  int refresh_interval = 25;        // direct cache recomputation cadence
  int drift_check_interval = 0;     // when > 0, compare caches against fresh inverses
  double drift_tolerance = 1e-6;
};

struct SelectionResult {
  Eigen::VectorXd weights;  // m entries, >= 0, scaled so lambda_min = 1
  SelectionTrace trace;
  double kappa;  // measured lambda_max/lambda_min of the selected sum
};

/// Runs ceil(d * r) selection steps from A = 0 and rescales the accumulated
/// weights by 1/lambda_min so the selected sum dominates the identity. The
/// support size never exceeds the step count.
SelectionResult sparsify_vectors(const VectorFamily& family, const BarrierParams& params,
                                 const SelectionOptions& options = {});
SelectionResult sparsify_vectors(const VectorFamily& family, double d, Preset preset,
                                 const SelectionOptions& options = {});

}  // namespace spectral
