#include "spectral/barrier_select.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace spectral {

namespace {

constexpr double kIsotropyTol = 1e-8;
constexpr double kPotentialGapTol = 1e-15;
constexpr double kMinD = 1.0 + 1e-6;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// Inverse of the exactly symmetric matrix `m` through a Cholesky solve;
// `m` must be positive definite, which every barrier-shifted matrix is
// while the invariants hold.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << what << " is not positive definite; an eigenvalue crossed a barrier";
    throw DegeneracyError(msg.str());
  }
  return symmetrized(llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols())));
}

// (Z^{-1} + shift I)^{-1} = Z (I + shift Z)^{-1} for symmetric positive
// definite Z; handles the barrier advance, which is not a rank-one change.
Eigen::MatrixXd resolvent_shift(const Eigen::MatrixXd& z, double shift, const char* what) {
  const Eigen::Index n = z.rows();
  Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(n, n) + shift * z;
  Eigen::LLT<Eigen::MatrixXd> llt(symmetrized(shifted));
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << what << ": shifted resolvent lost positive definiteness";
    throw DegeneracyError(msg.str());
  }
  return symmetrized(llt.solve(z));
}

void append_formatted(std::string& out, double value) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  out += buf;
}

}  // namespace

const char* preset_name(Preset p) {
  return p == Preset::standard ? "standard" : "simple";
}

Preset preset_from_name(const std::string& name) {
  if (name == "standard") return Preset::standard;
  if (name == "simple") return Preset::simple;
  throw std::invalid_argument("unknown preset: " + name);
}

double condition_bound(double d, Preset preset) {
  if (preset == Preset::standard) {
    const double sd = std::sqrt(d);
    return (d + 1.0 + 2.0 * sd) / (d + 1.0 - 2.0 * sd);
  }
  return (6.0 * d + 1.0) / (d - 1.0);
}

BarrierParams BarrierParams::standard(double d, int dimension) {
  const double sd = std::sqrt(d);
  BarrierParams p;
  p.d = d;
  p.delta_l = 1.0;
  p.eps_l = 1.0 / sd;
  p.l0 = -dimension / p.eps_l;
  p.delta_u = (sd + 1.0) / (sd - 1.0);
  p.eps_u = (sd - 1.0) / (d + sd);
  p.u0 = dimension / p.eps_u;
  p.validate();
  return p;
}

BarrierParams BarrierParams::simple(double d, int dimension) {
  BarrierParams p;
  p.d = d;
  p.delta_u = 2.0;
  p.delta_l = 1.0 / 3.0;
  p.eps_u = 1.0;
  p.eps_l = 1.0;
  p.u0 = dimension;
  p.l0 = -dimension;
  p.validate();
  return p;
}

BarrierParams BarrierParams::for_preset(Preset preset, double d, int dimension) {
  return preset == Preset::standard ? standard(d, dimension) : simple(d, dimension);
}

void BarrierParams::validate() const {
  if (!(d >= kMinD))
    throw std::invalid_argument("d must exceed 1 + 1e-6; the barrier schedule degenerates as d -> 1");
  if (!(delta_u > 0.0) || !(delta_l > 0.0) || !(eps_u > 0.0) || !(eps_l > 0.0))
    throw std::invalid_argument("barrier increments and potential caps must be positive");
  if (!(l0 < 0.0) || !(u0 > 0.0))
    throw std::invalid_argument("barrier starts must satisfy l0 < 0 < u0");
  const double lhs = 1.0 / delta_u + eps_u;
  const double rhs = 1.0 / delta_l - eps_l;
  if (!(lhs >= 0.0) || lhs > rhs + 1e-12)
    throw std::invalid_argument("infeasible barrier parameters: need 0 <= 1/delta_u + eps_u <= 1/delta_l - eps_l");
}

VectorFamily::VectorFamily(Eigen::MatrixXd vectors) : vectors_(std::move(vectors)) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1)
    throw std::invalid_argument("vector family needs positive dimension and count");
  Eigen::MatrixXd gram = vectors_ * vectors_.transpose();
  gram.diagonal().array() -= 1.0;
  const double deviation = gram.cwiseAbs().maxCoeff();
  if (deviation > kIsotropyTol) {
    std::ostringstream msg;
    msg << "vector family is not isotropic: max |sum v v^T - I| = " << deviation;
    throw std::invalid_argument(msg.str());
  }
}

void write_trace(std::ostream& out, const SelectionTrace& trace) {
  std::string line;
  for (const TraceRecord& rec : trace) {
    line.clear();
    line += std::to_string(rec.step);
    line += ' ';
    line += std::to_string(rec.index);
    line += ' ';
    append_formatted(line, rec.t);
    line += ' ';
    append_formatted(line, rec.phi_upper);
    line += ' ';
    append_formatted(line, rec.phi_lower);
    line += ' ';
    append_formatted(line, rec.lambda_min);
    line += ' ';
    append_formatted(line, rec.lambda_max);
    line += '\n';
    out << line;
  }
}

double upper_potential(const Eigen::VectorXd& eigenvalues, double u) {
  if (!(u > eigenvalues[eigenvalues.size() - 1])) {
    std::ostringstream msg;
    msg << "upper barrier " << u << " does not exceed lambda_max = "
        << eigenvalues[eigenvalues.size() - 1];
    throw BarrierViolationError(msg.str());
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) sum += 1.0 / (u - eigenvalues[i]);
  return sum;
}

double upper_potential(const SymmetricMatrix& a, double u) {
  return upper_potential(eigh(a).eigenvalues, u);
}

double lower_potential(const Eigen::VectorXd& eigenvalues, double l) {
  if (!(l < eigenvalues[0])) {
    std::ostringstream msg;
    msg << "lower barrier " << l << " is not below lambda_min = " << eigenvalues[0];
    throw BarrierViolationError(msg.str());
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) sum += 1.0 / (eigenvalues[i] - l);
  return sum;
}

double lower_potential(const SymmetricMatrix& a, double l) {
  return lower_potential(eigh(a).eigenvalues, l);
}

BarrierState::BarrierState(const BarrierParams& params, int dimension, int family_count,
                           int refresh_interval)
    : params_(params),
      r_(dimension),
      refresh_interval_(refresh_interval > 0 ? refresh_interval : 25),
      a_(Eigen::MatrixXd::Zero(dimension, dimension)),
      s_(Eigen::VectorXd::Zero(family_count)) {
  params_.validate();
  if (dimension < 1 || family_count < 1)
    throw std::invalid_argument("barrier state needs positive dimension and family count");
  if (params_.l0 + params_.delta_l >= 0.0)
    throw std::invalid_argument("l0 + delta_l must stay below the initial spectrum at 0");
  refresh_direct();
}

void BarrierState::refresh_direct() {
  const Eigen::Index n = a_.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const double u = upper_barrier();
  const double l = lower_barrier();
  minv_u_ = spd_inverse(symmetrized((u + params_.delta_u) * id - a_), "(u + delta_u) I - A");
  minv_l_ = spd_inverse(symmetrized(a_ - (l + params_.delta_l) * id), "A - (l + delta_l) I");
  phi_u_ = spd_inverse(symmetrized(u * id - a_), "u I - A").trace();
  phi_l_ = spd_inverse(symmetrized(a_ - l * id), "A - l I").trace();
}

void BarrierState::apply(const VectorFamily& family, int index, double t) {
  if (index < 0 || index >= static_cast<int>(s_.size()))
    throw std::invalid_argument("chosen index out of range");
  if (!(t > 0.0)) throw std::invalid_argument("step weight t must be positive");
  const Eigen::VectorXd v = family.vector(index);

  // New potentials at the shifted positions via the rank-one trace identity;
  // the shifted caches are exactly the resolvents these traces come from.
  const Eigen::VectorXd wu = minv_u_ * v;
  const double cu = v.dot(wu);
  const double denom_u = 1.0 - t * cu;
  if (!(denom_u > 0.0))
    throw DegeneracyError("upper resolvent update denominator is not positive");
  const double phi_u_next = minv_u_.trace() + t * wu.squaredNorm() / denom_u;

  const Eigen::VectorXd wl = minv_l_ * v;
  const double cl = v.dot(wl);
  const double denom_l = 1.0 + t * cl;
  const double phi_l_next = minv_l_.trace() - t * wl.squaredNorm() / denom_l;

  s_[index] += t;
  a_.noalias() += (t * v) * v.transpose();
  ++q_;
  phi_u_ = phi_u_next;
  phi_l_ = phi_l_next;

  if (q_ % refresh_interval_ == 0) {
    refresh_direct();
    return;
  }
  // Rank-one part via Sherman-Morrison, then the barrier advance via a
  // resolvent shift (a diagonal change, outside Sherman-Morrison's reach).
  const Eigen::MatrixXd z_u = sherman_morrison_update(minv_u_, v, -t);
  minv_u_ = resolvent_shift(z_u, params_.delta_u, "upper cache");
  const Eigen::MatrixXd z_l = sherman_morrison_update(minv_l_, v, t);
  minv_l_ = resolvent_shift(z_l, -params_.delta_l, "lower cache");
}

double BarrierState::cache_drift() const {
  const Eigen::Index n = a_.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd fresh_u =
      spd_inverse(symmetrized((upper_barrier() + params_.delta_u) * id - a_), "(u + delta_u) I - A");
  const Eigen::MatrixXd fresh_l =
      spd_inverse(symmetrized(a_ - (lower_barrier() + params_.delta_l) * id), "A - (l + delta_l) I");
  return std::max((fresh_u - minv_u_).cwiseAbs().maxCoeff(),
                  (fresh_l - minv_l_).cwiseAbs().maxCoeff());
}

double upper_shift_bound(const BarrierState& state, const Eigen::VectorXd& v) {
  const double gap = state.phi_upper() - state.shifted_upper_inverse().trace();
  if (gap <= kPotentialGapTol)
    throw DegeneracyError("upper potential difference vanished; cannot price an update");
  const Eigen::VectorXd w = state.shifted_upper_inverse() * v;
  return w.squaredNorm() / gap + v.dot(w);
}

double lower_shift_bound(const BarrierState& state, const Eigen::VectorXd& v) {
  if (state.phi_lower() > 1.0 / state.params().delta_l + 1e-12) {
    std::ostringstream msg;
    msg << "lower potential " << state.phi_lower() << " exceeds 1/delta_l = "
        << 1.0 / state.params().delta_l;
    throw BarrierViolationError(msg.str());
  }
  const double gap = state.shifted_lower_inverse().trace() - state.phi_lower();
  if (gap <= kPotentialGapTol)
    throw DegeneracyError("lower potential difference vanished; cannot price an update");
  const Eigen::VectorXd w = state.shifted_lower_inverse() * v;
  return w.squaredNorm() / gap - v.dot(w);
}

StepChoice choose_step(const BarrierState& state, const VectorFamily& family) {
  if (family.dimension() != state.dimension())
    throw std::invalid_argument("family dimension does not match state");
  if (state.phi_lower() > 1.0 / state.params().delta_l + 1e-12)
    throw BarrierViolationError("lower potential exceeds 1/delta_l");

  const double gap_u = state.phi_upper() - state.shifted_upper_inverse().trace();
  const double gap_l = state.shifted_lower_inverse().trace() - state.phi_lower();
  if (gap_u <= kPotentialGapTol || gap_l <= kPotentialGapTol)
    throw DegeneracyError("potential differences vanished; cannot price updates");

  const Eigen::MatrixXd& v = family.columns();
  const Eigen::MatrixXd mu_v = state.shifted_upper_inverse() * v;
  const Eigen::MatrixXd ml_v = state.shifted_lower_inverse() * v;
  const Eigen::ArrayXd quad_u = (v.array() * mu_v.array()).colwise().sum();
  const Eigen::ArrayXd quad_u2 = (mu_v.array() * mu_v.array()).colwise().sum();
  const Eigen::ArrayXd quad_l = (v.array() * ml_v.array()).colwise().sum();
  const Eigen::ArrayXd quad_l2 = (ml_v.array() * ml_v.array()).colwise().sum();

  const Eigen::ArrayXd upper = quad_u2 / gap_u + quad_u;
  const Eigen::ArrayXd lower = quad_l2 / gap_l - quad_l;

  StepChoice choice{-1, 0.0, upper.sum(), lower.sum()};
  double best_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < family.count(); ++i) {
    if (!(upper[i] > 0.0) || !(lower[i] >= upper[i])) continue;
    const double gap = lower[i] - upper[i];
    if (gap > best_gap) {
      best_gap = gap;
      choice.index = i;
    }
  }
  if (choice.index < 0) {
    std::ostringstream msg;
    msg << "no admissible vector at step " << state.step()
        << ": sum U = " << choice.sum_upper << ", sum L = " << choice.sum_lower;
    throw InfeasibleError(msg.str(), {});
  }
  choice.t = 2.0 / (upper[choice.index] + lower[choice.index]);
  return choice;
}

namespace {

void check_step_via_eigh(const BarrierState& state, const Eigen::VectorXd& eigenvalues) {
  const double u = state.upper_barrier();
  const double l = state.lower_barrier();
  const double lmin = eigenvalues[0];
  const double lmax = eigenvalues[eigenvalues.size() - 1];
  if (!(lmax < u) || !(lmin > l)) {
    std::ostringstream msg;
    msg << "barrier crossing at step " << state.step() << ": spectrum [" << lmin << ", "
        << lmax << "] vs barriers (" << l << ", " << u << ")";
    throw BarrierViolationError(msg.str());
  }
  const double phi_u = upper_potential(eigenvalues, u);
  const double phi_l = lower_potential(eigenvalues, l);
  if (phi_u > state.params().eps_u + 1e-8 || phi_l > state.params().eps_l + 1e-8) {
    std::ostringstream msg;
    msg << "potential cap exceeded at step " << state.step() << ": phi_u = " << phi_u
        << ", phi_l = " << phi_l;
    throw BarrierViolationError(msg.str());
  }
}

}  // namespace

SelectionResult sparsify_vectors(const VectorFamily& family, const BarrierParams& params,
                                 const SelectionOptions& options) {
  params.validate();
  const int r = family.dimension();
  const int m = family.count();
  const double steps_exact = params.d * static_cast<double>(r);
  const int total_steps =
      static_cast<int>(std::ceil(steps_exact - 1e-9 * std::max(1.0, steps_exact)));

  BarrierState state(params, r, m, options.refresh_interval);
  SelectionTrace trace;
  trace.reserve(static_cast<std::size_t>(total_steps));

  for (int q = 0; q < total_steps; ++q) {
    StepChoice choice;
    try {
      choice = choose_step(state, family);
    } catch (InfeasibleError& err) {
      throw InfeasibleError(err.what(), std::move(trace));
    }
    state.apply(family, choice.index, choice.t);

    TraceRecord rec;
    rec.step = state.step();
    rec.index = choice.index;
    rec.t = choice.t;
    rec.phi_upper = state.phi_upper();
    rec.phi_lower = state.phi_lower();
    rec.lambda_min = std::numeric_limits<double>::quiet_NaN();
    rec.lambda_max = std::numeric_limits<double>::quiet_NaN();
    if (options.record_eigenvalues || options.validate_steps) {
      const Spectrum spec = eigh(SymmetricMatrix(state.matrix()));
      rec.lambda_min = spec.eigenvalues[0];
      rec.lambda_max = spec.eigenvalues[spec.eigenvalues.size() - 1];
      if (options.validate_steps) check_step_via_eigh(state, spec.eigenvalues);
    }
    trace.push_back(rec);

    if (options.drift_check_interval > 0 && state.step() % options.drift_check_interval == 0) {
      const double drift = state.cache_drift();
      if (drift > options.drift_tolerance) {
        std::ostringstream msg;
        msg << "cached inverses drifted by " << drift << " at step " << state.step();
        throw DegeneracyError(msg.str());
      }
    }
  }

  const Spectrum final_spec = eigh(SymmetricMatrix(state.matrix()));
  const double lambda_min = final_spec.eigenvalues[0];
  const double lambda_max = final_spec.eigenvalues[final_spec.eigenvalues.size() - 1];
  if (!(lambda_min > 1e-12 * std::max(1.0, lambda_max)))
    throw DegeneracyError("selection finished with a numerically singular accumulation");

  SelectionResult result;
  result.weights = state.weights() / lambda_min;
  result.trace = std::move(trace);
  result.kappa = lambda_max / lambda_min;
  return result;
}

SelectionResult sparsify_vectors(const VectorFamily& family, double d, Preset preset,
                                 const SelectionOptions& options) {
  return sparsify_vectors(family, BarrierParams::for_preset(preset, d, family.dimension()),
                          options);
}

}  // namespace spectral
