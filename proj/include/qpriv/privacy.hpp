// Copyright 2026 The qpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Privacy layer: neighborhood relations, hypothesis-testing and
// differential-privacy audits of channels, the Gamma/Omega/Theta bound
// calculators, parameter translations between the two notions and the
// depolarizing-channel closed forms.

#ifndef QPRIV_PRIVACY_HPP
#define QPRIV_PRIVACY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qpriv/divergences.hpp"
#include "qpriv/errors.hpp"
#include "qpriv/linalg.hpp"
#include "qpriv/quantum.hpp"

namespace qpriv {

inline constexpr double kAuditSlack = 1e-9;

/// Reflexive, symmetric relation over density operators. Explicit pair
/// lists are symmetrized on construction; the trace-distance ball is
/// symmetric because the distance is.
class NeighborhoodRelation {
 public:
  struct TraceDistanceBall {
    double d;
  };
  using Pair = std::pair<DensityOperator, DensityOperator>;

  static NeighborhoodRelation trace_distance_ball(double d) {
    if (!(d > 0.0 && d <= 1.0))
      throw OutOfRangeError("NeighborhoodRelation: radius d must lie in (0,1]");
    return NeighborhoodRelation(TraceDistanceBall{d});
  }

  static NeighborhoodRelation explicit_pairs(std::vector<Pair> pairs) {
    if (pairs.empty())
      throw EmptyRelationError("NeighborhoodRelation: empty pair list");
    std::vector<Pair> closed;
    closed.reserve(pairs.size() * 2);
    for (Pair& p : pairs) {
      const bool self = p.first.matrix().entries() == p.second.matrix().entries();
      closed.push_back(p);
      if (!self) closed.emplace_back(p.second, p.first);
    }
    return NeighborhoodRelation(std::move(closed));
  }

  bool is_trace_distance() const {
    return std::holds_alternative<TraceDistanceBall>(impl_);
  }
  double radius() const { return std::get<TraceDistanceBall>(impl_).d; }
  const std::vector<Pair>& pairs() const { return std::get<std::vector<Pair>>(impl_); }

 private:
  explicit NeighborhoodRelation(TraceDistanceBall b) : impl_(b) {}
  explicit NeighborhoodRelation(std::vector<Pair> p) : impl_(std::move(p)) {}

  std::variant<TraceDistanceBall, std::vector<Pair>> impl_;
};

struct HtPrivacyParams {
  double epsilon = 0.0;  // budget on D^eta between channel outputs
  double eta = 0.0;      // type-I error cap

  HtPrivacyParams(double epsilon_, double eta_) : epsilon(epsilon_), eta(eta_) {
    if (!(epsilon >= 0.0)) throw OutOfRangeError("HtPrivacyParams: epsilon must be >= 0");
    if (!(eta >= 0.0 && eta <= 1.0))
      throw OutOfRangeError("HtPrivacyParams: eta must lie in [0,1]");
  }
};

struct DpParams {
  double epsilon = 0.0;
  double delta = 0.0;

  DpParams(double epsilon_, double delta_) : epsilon(epsilon_), delta(delta_) {
    if (!(epsilon >= 0.0)) throw OutOfRangeError("DpParams: epsilon must be >= 0");
    if (!(delta >= 0.0 && delta <= 1.0))
      throw OutOfRangeError("DpParams: delta must lie in [0,1]");
  }
};

/// A hypothesis-testing guarantee that holds for every eta in [0,1].
struct HtPrivacyFamily {
  double epsilon = 0.0;
};

enum class AuditMode { ht, dp };
enum class AuditStatus { certified_closed_form, satisfied_on_pairs, falsified };

inline const char* audit_status_name(AuditStatus s) {
  switch (s) {
    case AuditStatus::certified_closed_form: return "CERTIFIED_CLOSED_FORM";
    case AuditStatus::satisfied_on_pairs: return "SATISFIED_ON_PAIRS";
    case AuditStatus::falsified: return "FALSIFIED";
  }
  return "?";
}

struct PairOutcome {
  int index = 0;
  double value = 0.0;     // D^eta (ht) or delta (dp) of the channel outputs
  double dual_gap = 0.0;  // solver certificate where one exists, else 0
};

struct AuditReport {
  AuditMode mode = AuditMode::ht;
  HtPrivacyParams ht{0.0, 0.0};  // meaningful when mode == ht
  DpParams dp{0.0, 0.0};         // meaningful when mode == dp
  std::vector<PairOutcome> per_pair;
  double worst_value = 0.0;
  int worst_pair_index = -1;
  std::optional<NeighborhoodRelation::Pair> worst_pair;  // channel inputs
  AuditStatus status = AuditStatus::satisfied_on_pairs;
  int pairs_examined = 0;
  std::uint64_t seed = 0;
  std::optional<double> certificate;  // closed-form budget, depolarizing only
  std::string note;
};

// ---------------------------------------------------------------------------
// Theorem bound calculators and parameter translations.

/// Lower bound on the symmetric error of any test against an
/// (epsilon, eta)-private channel. The expression divides by eta, so the
/// eta = 0 case returns the always-sound vacuous bound 0.
inline double gamma_bound(const HtPrivacyParams& params, const PriorPair& priors) {
  const double p_max = 0.5 * (1.0 - std::abs(priors.p_rho - priors.p_sigma()));
  if (params.eta <= 0.0) return 0.0;
  const double cut = params.epsilon * std::min(priors.p_rho, priors.p_sigma()) *
                     (1.0 - params.eta) / (2.0 * params.eta);
  return std::max(p_max - cut, 0.0);
}

/// Lower bound on the optimal type-II error against an
/// (epsilon, delta)-differentially-private channel.
inline double omega_bound(const DpParams& params, double eta, LogBase base) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw OutOfRangeError("omega_bound: eta outside [0,1]");
  return std::max(exp_in_base(-params.epsilon, base) * (1.0 - eta - params.delta), 0.0);
}

/// Lower bound on the symmetric error against an
/// (epsilon, delta)-differentially-private channel.
inline double theta_bound(const DpParams& params, const PriorPair& priors, LogBase base) {
  const double p_max = 0.5 * (1.0 - std::abs(priors.p_rho - priors.p_sigma()));
  const double body = p_max + std::max(priors.p_rho, priors.p_sigma()) *
                                  (1.0 - exp_in_base(params.epsilon, base) - params.delta);
  return std::max(body, 0.0);
}

/// (epsilon, eta)-privacy implies (epsilon, sqrt(2 eta))-differential
/// privacy; the delta is clamped to 1 since it is a probability.
inline DpParams ht_to_dp(const HtPrivacyParams& params) {
  return DpParams(params.epsilon, std::min(std::sqrt(2.0 * params.eta), 1.0));
}

/// (epsilon, 0)-differential privacy transfers to (epsilon, eta)-privacy
/// for every eta. Only the delta = 0 case translates.
inline HtPrivacyFamily dp_to_ht(const DpParams& params) {
  if (params.delta != 0.0)
    throw DeltaNotZeroError("dp_to_ht: only delta = 0 translates to a privacy family");
  return HtPrivacyFamily{params.epsilon};
}

/// Minimal delta making the depolarizing channel (epsilon, delta)-DP over
/// the trace-distance-d neighborhood. The neighborhood radius d plays the
/// role of the contraction coefficient in the closed form.
inline double depolarizing_dp_delta(const DepolarizingParams& params, double d,
                                    double epsilon, LogBase base) {
  if (!(d > 0.0 && d <= 1.0))
    throw OutOfRangeError("depolarizing_dp_delta: d must lie in (0,1]");
  if (!(epsilon >= 0.0)) throw OutOfRangeError("depolarizing_dp_delta: epsilon < 0");
  const double body = (1.0 - exp_in_base(epsilon, base)) * params.p / params.dim +
                      (1.0 - params.p) * d;
  return std::max(body, 0.0);
}

/// Budget at which the depolarizing channel is private for every eta.
inline HtPrivacyFamily depolarizing_ht_epsilon(const DepolarizingParams& params, double d,
                                               LogBase base) {
  if (params.p <= 0.0)
    throw ZeroMixingError("depolarizing_ht_epsilon: p = 0 has no closed-form budget");
  if (!(d > 0.0 && d <= 1.0))
    throw OutOfRangeError("depolarizing_ht_epsilon: d must lie in (0,1]");
  const double arg = 1.0 + (1.0 - params.p) * params.dim * d / params.p;
  return HtPrivacyFamily{log_in_base(arg, base)};
}

/// Whether an (epsilon, eta) guarantee transfers to (epsilon', eta')
/// without recomputation: eta' >= eta and epsilon' >= epsilon.
inline bool check_monotone_relaxation(const AuditReport& report,
                                      const HtPrivacyParams& params2) {
  if (report.mode != AuditMode::ht)
    throw WrongModeError("check_monotone_relaxation: report is not an ht audit");
  return params2.eta >= report.ht.eta && params2.epsilon >= report.ht.epsilon;
}

// ---------------------------------------------------------------------------
// Neighbor-pair sampling and best-effort falsification.

namespace detail {

// Euclidean projection onto {PSD, trace 1}: simplex projection of the
// eigenvalue vector in the eigenbasis.
inline DensityOperator project_to_density(const ComplexMatrix& hermitian) {
  const HermitianEigenSystem sys = hermitian_eig(hermitian);
  std::vector<double> sorted = sys.eigenvalues;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (int k = 0; k < int(sorted.size()); ++k) {
    cumulative += sorted[k];
    const double t = (cumulative - 1.0) / double(k + 1);
    if (sorted[k] - t > 0.0) theta = t;
  }
  ComplexMatrix out =
      spectral_map(sys, [&](double lam) { return std::max(lam - theta, 0.0); });
  // Kill the last drops of rounding so the constructor tolerance holds.
  const double tr = out.trace().real();
  out *= Complex(1.0 / tr);
  return DensityOperator(std::move(out));
}

inline ComplexMatrix random_traceless_hermitian(int dim, Rng& rng) {
  ComplexMatrix h(dim);
  for (int i = 0; i < dim; ++i) h(i, i) = rng.normal();
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const Complex z = rng.complex_normal();
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  const double shift = h.trace().real() / dim;
  for (int i = 0; i < dim; ++i) h(i, i) -= shift;
  return h;
}

// Pull sigma back onto the trace-distance ball around rho by shrinking the
// difference direction; a convex combination of density operators stays one.
inline DensityOperator rescale_into_ball(const DensityOperator& rho,
                                         const DensityOperator& sigma, double d) {
  const double t = trace_distance(rho, sigma);
  if (t <= d) return sigma;
  const double c = d / t;
  ComplexMatrix m = sigma.matrix();
  m *= Complex(c);
  ComplexMatrix base = rho.matrix();
  base *= Complex(1.0 - c);
  m += base;
  return DensityOperator(std::move(m));
}

inline int hermitian_basis_size(int dim) { return dim * dim - 1; }

// Unit-Frobenius traceless Hermitian coordinate direction number `idx`,
// in a fixed order: off-diagonal (symmetric, antisymmetric) pairs, then the
// diagonal directions. Built on demand to keep large dims cheap.
inline ComplexMatrix hermitian_basis_element(int dim, int idx) {
  const double inv_sqrt2 = 0.70710678118654752440;
  int count = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      if (count == idx) {
        ComplexMatrix sym(dim);
        sym(i, j) = inv_sqrt2;
        sym(j, i) = inv_sqrt2;
        return sym;
      }
      if (count + 1 == idx) {
        ComplexMatrix asym(dim);
        asym(i, j) = Complex(0.0, -inv_sqrt2);
        asym(j, i) = Complex(0.0, inv_sqrt2);
        return asym;
      }
      count += 2;
    }
  const int k = 1 + (idx - count);
  ComplexMatrix diag(dim);
  const double norm = 1.0 / std::sqrt(double(k) * (k + 1));
  for (int i = 0; i < k; ++i) diag(i, i) = norm;
  diag(k, k) = -double(k) * norm;
  return diag;
}

}  // namespace detail

/// Objective maximized over a neighborhood: either D^eta or the
/// hockey-stick divergence at gamma = base^epsilon, between channel outputs.
struct FalsifyObjective {
  enum class Kind { d_eta, hockey_stick };
  Kind kind = Kind::d_eta;
  double parameter = 0.0;  // eta or epsilon
  LogBase base = LogBase::natural;

  static FalsifyObjective for_d_eta(double eta, LogBase base) {
    return FalsifyObjective{Kind::d_eta, eta, base};
  }
  static FalsifyObjective for_hockey_stick(double epsilon, LogBase base) {
    return FalsifyObjective{Kind::hockey_stick, epsilon, base};
  }
};

/// Draw (rho, sigma) with T(rho, sigma) <= d: rho of the given rank, sigma
/// the projection of rho plus a random traceless Hermitian kick, pulled
/// back onto the ball.
inline NeighborhoodRelation::Pair random_neighbor_pair(int dim, double d, int rank,
                                                       Rng& rng) {
  const DensityOperator rho = random_density(dim, rank, rng);
  ComplexMatrix h = detail::random_traceless_hermitian(dim, rng);
  const double h_dist = 0.5 * trace_norm(h);
  h *= Complex(h_dist > 0.0 ? d / h_dist : 0.0);
  ComplexMatrix shifted = rho.matrix();
  shifted += h;
  DensityOperator sigma =
      detail::rescale_into_ball(rho, detail::project_to_density(shifted), d);
  return {rho, std::move(sigma)};
}

namespace detail {

struct Evaluation {
  double value = 0.0;
  double dual_gap = 0.0;
};

// The relation is symmetric, so a sampled pair is scored by the worse of
// its two orientations.
inline Evaluation evaluate_objective(const Channel& channel, const DensityOperator& rho,
                                     const DensityOperator& sigma,
                                     const FalsifyObjective& obj) {
  const DensityOperator out_r = channel.apply(rho);
  const DensityOperator out_s = channel.apply(sigma);
  if (obj.kind == FalsifyObjective::Kind::hockey_stick) {
    const double gamma = exp_in_base(obj.parameter, obj.base);
    const double fwd = hockey_stick(out_r, out_s, gamma);
    const double bwd = hockey_stick(out_s, out_r, gamma);
    return Evaluation{std::max(fwd, bwd), 0.0};
  }
  const AsymmetricTestResult fwd = neyman_pearson(out_r, out_s, obj.parameter, obj.base);
  const AsymmetricTestResult bwd = neyman_pearson(out_s, out_r, obj.parameter, obj.base);
  if (bwd.d_eta > fwd.d_eta) return Evaluation{bwd.d_eta, bwd.dual_gap};
  return Evaluation{fwd.d_eta, fwd.dual_gap};
}

struct SearchSample {
  NeighborhoodRelation::Pair pair;
  Evaluation eval;
};

// One sampled neighbor pair refined by cyclic coordinate ascent: propose a
// move along a Hermitian basis direction, project back to the state set and
// the T <= d ball, keep improvements, halve the step on failure.
inline SearchSample sampled_ascent(const Channel& channel, double d,
                                   const FalsifyObjective& obj, int sample_index,
                                   Rng& rng) {
  const int dim = channel.dim();
  const int rank = 1 + sample_index % dim;
  NeighborhoodRelation::Pair pair = random_neighbor_pair(dim, d, rank, rng);
  const DensityOperator& rho = pair.first;
  DensityOperator sigma = std::move(pair.second);

  Evaluation best = evaluate_objective(channel, rho, sigma, obj);
  double step = 0.5 * d;
  constexpr int kAscentSteps = 20;
  for (int s = 0; s < kAscentSteps; ++s) {
    const ComplexMatrix dir =
        hermitian_basis_element(dim, s % hermitian_basis_size(dim));
    bool improved = false;
    for (double sign : {1.0, -1.0}) {
      ComplexMatrix cand = sigma.matrix();
      ComplexMatrix move = dir;
      move *= Complex(sign * step);
      cand += move;
      DensityOperator trial = rescale_into_ball(rho, project_to_density(cand), d);
      const Evaluation e = evaluate_objective(channel, rho, trial, obj);
      if (e.value > best.value) {
        best = e;
        sigma = std::move(trial);
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  return SearchSample{{rho, sigma}, best};
}

}  // namespace detail

/// Best-effort maximization of the objective over the trace-distance-d
/// neighborhood: `budget` sampled pairs, each refined by coordinate ascent.
/// Deterministic per seed; the returned pair satisfies T <= d + 1e-9.
inline std::pair<NeighborhoodRelation::Pair, double> falsify_search(
    const Channel& channel, double d, const FalsifyObjective& objective, int budget,
    std::uint64_t seed) {
  if (budget < 1) throw OutOfRangeError("falsify_search: budget must be >= 1");
  if (!(d > 0.0 && d <= 1.0))
    throw OutOfRangeError("falsify_search: d must lie in (0,1]");
  Rng rng(seed);
  std::optional<detail::SearchSample> best;
  for (int i = 0; i < budget; ++i) {
    detail::SearchSample s = detail::sampled_ascent(channel, d, objective, i, rng);
    if (!best || s.eval.value > best->eval.value) best = std::move(s);
  }
  return {best->pair, best->eval.value};
}

namespace detail {

inline std::vector<SearchSample> collect_samples(const Channel& channel,
                                                 const NeighborhoodRelation& rel,
                                                 const FalsifyObjective& obj,
                                                 int search_budget, std::uint64_t seed) {
  std::vector<SearchSample> samples;
  if (rel.is_trace_distance()) {
    if (search_budget < 1)
      throw OutOfRangeError("audit: search budget must be >= 1 for a trace-distance "
                            "neighborhood");
    Rng rng(seed);
    samples.reserve(search_budget);
    for (int i = 0; i < search_budget; ++i)
      samples.push_back(sampled_ascent(channel, rel.radius(), obj, i, rng));
  } else {
    const auto& pairs = rel.pairs();
    if (pairs.empty()) throw EmptyRelationError("audit: relation has no pairs");
    samples.reserve(pairs.size());
    for (const auto& p : pairs) {
      if (p.first.dim() != channel.dim() || p.second.dim() != channel.dim())
        throw DimensionMismatchError("audit: pair dimension differs from channel");
      // Explicit lists are already symmetrized, so score one orientation.
      const DensityOperator out_r = channel.apply(p.first);
      const DensityOperator out_s = channel.apply(p.second);
      Evaluation e;
      if (obj.kind == FalsifyObjective::Kind::hockey_stick) {
        e.value = hockey_stick(out_r, out_s, exp_in_base(obj.parameter, obj.base));
      } else {
        const AsymmetricTestResult r = neyman_pearson(out_r, out_s, obj.parameter, obj.base);
        e.value = r.d_eta;
        e.dual_gap = r.dual_gap;
      }
      samples.push_back(SearchSample{p, e});
    }
  }
  return samples;
}

inline AuditReport reduce_report(std::vector<SearchSample> samples, AuditMode mode,
                                 std::uint64_t seed) {
  AuditReport report;
  report.mode = mode;
  report.seed = seed;
  report.pairs_examined = int(samples.size());
  report.worst_value = -kInf;
  for (int i = 0; i < int(samples.size()); ++i) {
    report.per_pair.push_back(PairOutcome{i, samples[i].eval.value,
                                          samples[i].eval.dual_gap});
    if (samples[i].eval.value > report.worst_value) {
      report.worst_value = samples[i].eval.value;
      report.worst_pair_index = i;
    }
  }
  report.worst_pair = samples[report.worst_pair_index].pair;
  return report;
}

}  // namespace detail

/// Audit a channel against the (epsilon, eta)-privacy definition: the worst
/// D^eta between channel outputs over the relation. Sampled search never
/// proves the guarantee; only the depolarizing closed form certifies it,
/// and only at eta = 0. Note that D^eta between identical outputs is
/// -log(1 - eta), so every audit at eta > 0 carries that floor: budgets
/// below it are unsatisfiable for any channel. At eta > 0 the closed form
/// is attached as reference metadata but does not bound the worst D^eta
/// (the identical-output floor alone can exceed it), so the status stays
/// sample-based.
inline AuditReport audit_ht(const Channel& channel, const NeighborhoodRelation& rel,
                            double eta, double epsilon_budget, LogBase base,
                            int search_budget, std::uint64_t seed) {
  const FalsifyObjective obj = FalsifyObjective::for_d_eta(eta, base);
  AuditReport report = detail::reduce_report(
      detail::collect_samples(channel, rel, obj, search_budget, seed), AuditMode::ht,
      seed);
  report.ht = HtPrivacyParams(epsilon_budget, eta);

  const bool depolarizing_ball = channel.depolarizing() && rel.is_trace_distance() &&
                                 channel.depolarizing()->p > 0.0;
  if (depolarizing_ball) {
    report.certificate =
        depolarizing_ht_epsilon(*channel.depolarizing(), rel.radius(), base).epsilon;
    report.note = "closed-form depolarizing budget over the trace-distance ball; "
                  "contraction coefficient taken as the radius d; certifies the "
                  "worst D^eta only at eta = 0";
  }

  if (report.worst_value > epsilon_budget + kAuditSlack)
    report.status = AuditStatus::falsified;
  else if (report.certificate && eta < 1e-12 && *report.certificate <= epsilon_budget)
    report.status = AuditStatus::certified_closed_form;
  else
    report.status = AuditStatus::satisfied_on_pairs;
  return report;
}

/// Audit a channel against the differential-privacy definition at a given
/// epsilon: the reported delta per pair is exact (the worst-case measurement
/// is attained analytically by the hockey-stick divergence). A delta budget
/// is optional; without one there is nothing to falsify and the report is
/// informational.
inline AuditReport audit_dp(const Channel& channel, const NeighborhoodRelation& rel,
                            double epsilon, LogBase base, int search_budget,
                            std::uint64_t seed,
                            std::optional<double> delta_budget = std::nullopt) {
  const FalsifyObjective obj = FalsifyObjective::for_hockey_stick(epsilon, base);
  AuditReport report = detail::reduce_report(
      detail::collect_samples(channel, rel, obj, search_budget, seed), AuditMode::dp,
      seed);

  if (channel.depolarizing() && rel.is_trace_distance()) {
    report.certificate =
        depolarizing_dp_delta(*channel.depolarizing(), rel.radius(), epsilon, base);
    report.note = "closed-form depolarizing delta over the trace-distance ball; "
                  "contraction coefficient taken as the radius d";
  }

  double budget = kInf;
  if (delta_budget)
    budget = *delta_budget;
  else if (report.certificate)
    budget = *report.certificate;

  double reported_delta = report.worst_value;
  if (delta_budget)
    reported_delta = *delta_budget;
  else if (report.certificate)
    reported_delta = *report.certificate;
  report.dp = DpParams(epsilon, std::clamp(reported_delta, 0.0, 1.0));

  if (report.worst_value > budget + kAuditSlack)
    report.status = AuditStatus::falsified;
  else if (report.certificate && *report.certificate <= budget)
    report.status = AuditStatus::certified_closed_form;
  else
    report.status = AuditStatus::satisfied_on_pairs;
  return report;
}

}  // namespace qpriv

#endif  // QPRIV_PRIVACY_HPP
