#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "plb/common.hpp"

namespace plb {

/// Degree data derived from the gradient homogeneity exponent k1:
/// k = k1 + 1 (total degree), gamma = k1 + 2, gamma_star = gamma / k.
struct HomogeneityProfile {
  double k1, k, gamma, gamma_star;
  static HomogeneityProfile from_k1(double k1) {
    double k = k1 + 1.0, gamma = k1 + 2.0;
    return {k1, k, gamma, gamma / k};
  }
};

/// A second-order operator H(q, X): gradient q, symmetric matrix X.
/// `evaluate` must be degenerate-elliptic (monotone in X), vanish on X = 0,
/// and |theta|^k1-homogeneous in q for the structure checks to pass.
struct OperatorDescriptor {
  std::string name;
  int dim = 2;
  double k1 = 0.0;
  std::function<double(const Vec&, const Mat&)> evaluate;

  // analytic sphere envelopes min_e H(e, lambda e⊗e − I) /
  // max_e H(e, lambda e⊗e + I), empty when no closed form is known
  std::function<double(double)> closed_lambda_min;
  std::function<double(double)> closed_lambda_max;

  HomogeneityProfile homogeneity() const {
    return HomogeneityProfile::from_k1(k1);
  }
};

struct OperatorParams {
  int n = 2;
  double p = 2.0;              // p_laplacian / pseudo_p_laplacian exponent
  double pucci_lambda = 1.0;   // Pucci ellipticity bounds
  double pucci_Lambda = 2.0;
  double k1 = 1.0;             // quasilinear_bracket declared exponent
};

/// Builtin factory. Names: p_laplacian, pseudo_p_laplacian,
/// infinity_laplacian, pucci_min, pucci_max, quasilinear_bracket,
/// det_operator.
OperatorDescriptor make_operator(const std::string& name,
                                 const OperatorParams& params = {});

/// Guarded evaluation: checks dimensions, symmetry of X and finiteness
/// before delegating to the descriptor.
double eval_operator(const OperatorDescriptor& desc, const Vec& q,
                     const Mat& X);

struct ConditionReport {
  bool monotone_ok = false;       // H(q, X + PSD) >= H(q, X)
  double worst_monotone = 0.0;    // most negative relative violation seen
  bool zero_ok = false;           // H(q, 0) = 0
  double worst_zero = 0.0;
  bool q_homog_ok = false;        // |theta|^k1 scaling against declared k1
  double worst_q_homog = 0.0;
  double k1_estimate = 0.0;       // measured gradient degree
  bool x_homog_ok = false;        // degree-1 scaling in X
  double worst_x_homog = 0.0;
  bool condition_c_ok = false;    // sign pinch + positive pinch constant
  double lambda0 = 0.0;           // 0 when condition C fails
  double script_H = 0.0;          // min_e H(e, e⊗e)
  double max_H_minus_I = 0.0;     // max_e H(e, -I), must be < 0
  double min_H_plus_I = 0.0;      // min_e H(e, I), must be > 0
  std::string notes;

  bool all_ok() const {
    return monotone_ok && zero_ok && q_homog_ok && x_homog_ok &&
           condition_c_ok;
  }
};

/// Randomized structure audit: `samples` (q, X, PSD) triples at mixed scales.
/// Failures are recorded in the report, never thrown.
ConditionReport check_structure_conditions(const OperatorDescriptor& desc,
                                           int samples = 10000,
                                           std::uint64_t seed = 1);

struct SphereSearchOptions {
  int budget = 4096;     // low-discrepancy candidates
  int refine_top = 8;    // candidates polished by projected descent
  int refine_iters = 80;
  std::uint64_t seed = 2024;
};

/// Minimize g over the unit sphere in R^dim. Deterministic for a fixed
/// option set. Maximization goes through negation.
double sphere_minimize(int dim, const std::function<double(const Vec&)>& g,
                       const SphereSearchOptions& opt = {});
double sphere_maximize(int dim, const std::function<double(const Vec&)>& g,
                       const SphereSearchOptions& opt = {});

struct EnvelopeOptions {
  double L = 1.0;  // slope-profile upper bound entering M_bar / M11
  double T = 1.0;  // time horizon entering M11
  SphereSearchOptions sphere;
};

/// Envelope constants feeding every barrier selection.
struct EnvelopeReport {
  double k1 = 0, k = 1, gamma = 2, gamma_star = 2;
  double L = 1, T = 1;
  double lambda0 = 0;  // smallest grid lambda with Lambda_min > 0
  double K0 = 0;       // Lambda_min(lambda0) / lambda0
  double script_H = 0; // min_e H(e, e⊗e)
  double N = 0;        // min_e H(e, -I)
  double M_bar = 0;    // max_e H(e, (2+L) I)
  double M11 = 0;      // max_e H(e, I + (1+T) L gamma_star e⊗e)
  double S = 0;        // min_e H(e, -2(I + e⊗e))
  bool closed_form_used = false;
};

/// Computes and caches the envelope report; exposes the lambda envelopes for
/// further probing. Throws ConditionCFailure when no grid lambda certifies
/// the pinch.
class SpectralEnvelopes {
 public:
  explicit SpectralEnvelopes(OperatorDescriptor desc,
                             EnvelopeOptions opt = {});

  /// min_e H(e, lambda e⊗e - I), sampled (closed form when available).
  double lambda_min(double lambda) const;
  /// max_e H(e, lambda e⊗e + I).
  double lambda_max(double lambda) const;
  /// min_e H(e, e⊗e - I/lambda); monotone nondecreasing in lambda.
  double script_H_lambda(double lambda) const;

  double sampled_lambda_min(double lambda) const;  // always via sampling
  double sampled_lambda_max(double lambda) const;

  const EnvelopeReport& report() const { return rep_; }
  const OperatorDescriptor& descriptor() const { return desc_; }
  const EnvelopeOptions& options() const { return opt_; }

  /// Probe grid for the pinch search: lambda_j = 1 + 2^j, j = -6..10.
  static std::vector<double> lambda_grid();

 private:
  OperatorDescriptor desc_;
  EnvelopeOptions opt_;
  EnvelopeReport rep_;
};

}  // namespace plb
