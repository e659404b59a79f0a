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

// Document parsing, report serialization and CSV curve emission for the
// command-line front end. Complex scalars are encoded as [re, im] pairs and
// matrices as row-major nested arrays; infinities serialize as the string
// "inf" so reports stay valid JSON.

#ifndef QPRIV_IO_HPP
#define QPRIV_IO_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpriv/errors.hpp"
#include "qpriv/privacy.hpp"
#include "qpriv/qpriv.hpp"

namespace qpriv::io {

using Json = nlohmann::ordered_json;

inline Json json_number(double x) {
  if (std::isinf(x)) return Json(x > 0 ? "inf" : "-inf");
  return Json(x);
}

inline std::string format_sig9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Input documents.

struct InputDocument {
  enum class NeighborhoodKind { none, trace_distance, pairs };

  int dim = 2;
  Channel channel{KrausChannel::identity(2)};
  std::vector<NeighborhoodRelation::Pair> pairs;
  NeighborhoodKind neighborhood = NeighborhoodKind::none;
  double neighborhood_d = 0.0;
  std::optional<double> p_rho;
  LogBase base = LogBase::natural;
  std::uint64_t seed = 0;

  PriorPair priors() const { return PriorPair(p_rho.value_or(0.5)); }
};

namespace detail {

inline double parse_real(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

inline Complex parse_complex(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(path + ": complex entries are two-element [re, im] arrays");
  return Complex(parse_real(j[0], path + "[0]"), parse_real(j[1], path + "[1]"));
}

inline ComplexMatrix parse_matrix(const Json& j, int dim, const std::string& path) {
  if (!j.is_array() || int(j.size()) != dim)
    throw ParseError(path + ": expected " + std::to_string(dim) + " rows");
  ComplexMatrix m(dim);
  for (int r = 0; r < dim; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || int(row.size()) != dim)
      throw ParseError(path + "[" + std::to_string(r) + "]: expected " +
                       std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = parse_complex(row[c], path + "[" + std::to_string(r) + "][" +
                                          std::to_string(c) + "]");
  }
  return m;
}

inline Json dump_complex(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Json dump_matrix(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.dim(); ++c) row.push_back(dump_complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Fn>
auto validated(const std::string& path, Fn&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace detail

inline InputDocument parse_document(const Json& j) {
  if (!j.is_object()) throw ParseError("document: expected a JSON object");
  InputDocument doc;

  if (!j.contains("dim")) throw ParseError("dim: missing");
  if (!j["dim"].is_number_integer()) throw ParseError("dim: expected an integer");
  doc.dim = j["dim"].get<int>();
  if (doc.dim < 1 || doc.dim > kMaxDim)
    throw ValidationError("dim: must lie in [1, " + std::to_string(kMaxDim) + "]");

  if (!j.contains("channel")) throw ParseError("channel: missing");
  const Json& ch = j["channel"];
  const std::string kind = ch.value("kind", "");
  if (kind == "kraus") {
    if (!ch.contains("operators") || !ch["operators"].is_array() ||
        ch["operators"].empty())
      throw ParseError("channel.operators: expected a nonempty array");
    std::vector<ComplexMatrix> ops;
    for (std::size_t i = 0; i < ch["operators"].size(); ++i)
      ops.push_back(detail::parse_matrix(ch["operators"][i], doc.dim,
                                         "channel.operators[" + std::to_string(i) + "]"));
    doc.channel = detail::validated("channel.operators", [&] {
      return Channel(KrausChannel(std::move(ops)));
    });
  } else if (kind == "depolarizing") {
    if (!ch.contains("p")) throw ParseError("channel.p: missing");
    const double p = detail::parse_real(ch["p"], "channel.p");
    doc.channel = detail::validated("channel", [&] {
      return Channel(DepolarizingParams(p, doc.dim));
    });
  } else {
    throw ParseError("channel.kind: expected \"kraus\" or \"depolarizing\"");
  }

  if (j.contains("pairs")) {
    if (!j["pairs"].is_array()) throw ParseError("pairs: expected an array");
    for (std::size_t i = 0; i < j["pairs"].size(); ++i) {
      const Json& p = j["pairs"][i];
      const std::string path = "pairs[" + std::to_string(i) + "]";
      if (!p.is_object() || !p.contains("rho") || !p.contains("sigma"))
        throw ParseError(path + ": expected {rho, sigma}");
      DensityOperator rho = detail::validated(path + ".rho", [&] {
        return DensityOperator(detail::parse_matrix(p["rho"], doc.dim, path + ".rho"));
      });
      DensityOperator sigma = detail::validated(path + ".sigma", [&] {
        return DensityOperator(
            detail::parse_matrix(p["sigma"], doc.dim, path + ".sigma"));
      });
      doc.pairs.emplace_back(std::move(rho), std::move(sigma));
    }
  }

  if (j.contains("neighborhood")) {
    const Json& nb = j["neighborhood"];
    const std::string nkind = nb.value("kind", "");
    if (nkind == "trace_distance") {
      if (!nb.contains("d")) throw ParseError("neighborhood.d: missing");
      doc.neighborhood = InputDocument::NeighborhoodKind::trace_distance;
      doc.neighborhood_d = detail::parse_real(nb["d"], "neighborhood.d");
      if (!(doc.neighborhood_d > 0.0 && doc.neighborhood_d <= 1.0))
        throw ValidationError("neighborhood.d: must lie in (0,1]");
    } else if (nkind == "pairs") {
      doc.neighborhood = InputDocument::NeighborhoodKind::pairs;
    } else {
      throw ParseError("neighborhood.kind: expected \"trace_distance\" or \"pairs\"");
    }
  }

  if (j.contains("priors")) {
    if (!j["priors"].is_object() || !j["priors"].contains("p_rho"))
      throw ParseError("priors: expected {p_rho}");
    doc.p_rho = detail::parse_real(j["priors"]["p_rho"], "priors.p_rho");
    detail::validated("priors.p_rho", [&] { return PriorPair(*doc.p_rho); });
  }

  if (j.contains("base")) {
    const std::string b = j["base"].get<std::string>();
    if (b == "two")
      doc.base = LogBase::two;
    else if (b == "natural")
      doc.base = LogBase::natural;
    else
      throw ParseError("base: expected \"two\" or \"natural\"");
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer()) throw ParseError("seed: expected an integer");
    doc.seed = j["seed"].get<std::uint64_t>();
  }
  return doc;
}

inline InputDocument parse_input_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  return parse_document(j);
}

inline InputDocument parse_input_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_input_text(buf.str());
}

inline Json serialize(const InputDocument& doc) {
  Json j;
  j["dim"] = doc.dim;
  if (const DepolarizingParams* dep = doc.channel.depolarizing()) {
    j["channel"] = {{"kind", "depolarizing"}, {"p", dep->p}};
  } else {
    Json ops = Json::array();
    for (const ComplexMatrix& e : doc.channel.kraus()->operators())
      ops.push_back(detail::dump_matrix(e));
    j["channel"] = {{"kind", "kraus"}, {"operators", std::move(ops)}};
  }
  if (!doc.pairs.empty()) {
    Json pairs = Json::array();
    for (const auto& p : doc.pairs)
      pairs.push_back({{"rho", detail::dump_matrix(p.first.matrix())},
                       {"sigma", detail::dump_matrix(p.second.matrix())}});
    j["pairs"] = std::move(pairs);
  }
  if (doc.neighborhood == InputDocument::NeighborhoodKind::trace_distance)
    j["neighborhood"] = {{"kind", "trace_distance"}, {"d", doc.neighborhood_d}};
  else if (doc.neighborhood == InputDocument::NeighborhoodKind::pairs)
    j["neighborhood"] = {{"kind", "pairs"}};
  if (doc.p_rho) j["priors"] = {{"p_rho", *doc.p_rho}};
  j["base"] = log_base_name(doc.base);
  j["seed"] = doc.seed;
  return j;
}

inline bool documents_equal(const InputDocument& a, const InputDocument& b) {
  if (a.dim != b.dim || a.neighborhood != b.neighborhood || a.seed != b.seed ||
      a.base != b.base || a.p_rho != b.p_rho)
    return false;
  if (a.neighborhood == InputDocument::NeighborhoodKind::trace_distance &&
      a.neighborhood_d != b.neighborhood_d)
    return false;
  const DepolarizingParams* da = a.channel.depolarizing();
  const DepolarizingParams* db = b.channel.depolarizing();
  if ((da == nullptr) != (db == nullptr)) return false;
  if (da) {
    if (da->p != db->p || da->dim != db->dim) return false;
  } else {
    const auto& oa = a.channel.kraus()->operators();
    const auto& ob = b.channel.kraus()->operators();
    if (oa.size() != ob.size()) return false;
    for (std::size_t i = 0; i < oa.size(); ++i)
      if (oa[i].entries() != ob[i].entries()) return false;
  }
  if (a.pairs.size() != b.pairs.size()) return false;
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    if (a.pairs[i].first.matrix().entries() != b.pairs[i].first.matrix().entries())
      return false;
    if (a.pairs[i].second.matrix().entries() != b.pairs[i].second.matrix().entries())
      return false;
  }
  return true;
}

/// Neighborhood selection for audit commands: exactly one of an explicit
/// pair list or a trace-distance ball.
inline NeighborhoodRelation audit_relation(const InputDocument& doc) {
  const bool has_ball =
      doc.neighborhood == InputDocument::NeighborhoodKind::trace_distance;
  const bool has_pairs = !doc.pairs.empty();
  if (has_ball && has_pairs)
    throw ValidationError(
        "audit documents must carry exactly one of pairs / trace_distance "
        "neighborhood; both are present");
  if (has_ball) return NeighborhoodRelation::trace_distance_ball(doc.neighborhood_d);
  if (has_pairs) return NeighborhoodRelation::explicit_pairs(doc.pairs);
  throw ValidationError(
      "audit documents must carry exactly one of pairs / trace_distance "
      "neighborhood; neither is present");
}

// ---------------------------------------------------------------------------
// Reports.

inline Json audit_report_json(const AuditReport& report, LogBase base) {
  Json j;
  j["command"] = "audit";
  j["mode"] = report.mode == AuditMode::ht ? "ht" : "dp";
  if (report.mode == AuditMode::ht)
    j["params"] = {{"epsilon", json_number(report.ht.epsilon)},
                   {"eta", json_number(report.ht.eta)}};
  else
    j["params"] = {{"epsilon", json_number(report.dp.epsilon)},
                   {"delta", json_number(report.dp.delta)}};
  j["base"] = log_base_name(base);
  j["seed"] = report.seed;
  j["status"] = audit_status_name(report.status);
  j["worst_value"] = json_number(report.worst_value);
  j["worst_pair_index"] = report.worst_pair_index;
  j["pairs_examined"] = report.pairs_examined;
  if (report.certificate) {
    j["certificate"] = {{"value", json_number(*report.certificate)},
                        {"note", report.note}};
  }
  Json per = Json::array();
  for (const PairOutcome& p : report.per_pair)
    per.push_back({{"index", p.index},
                   {"value", json_number(p.value)},
                   {"dual_gap", json_number(p.dual_gap)}});
  j["per_pair"] = std::move(per);
  return j;
}

/// All pairwise quantities for one (rho, sigma) after the channel.
inline Json divergence_pair_json(const DensityOperator& rho, const DensityOperator& sigma,
                                 double eta, LogBase base,
                                 std::optional<double> epsilon, const PriorPair& priors) {
  const AsymmetricTestResult np = neyman_pearson(rho, sigma, eta, base);
  const SymmetricTestResult hel = helstrom(rho, sigma, priors);
  Json j;
  j["trace_distance"] = json_number(trace_distance(rho, sigma));
  j["beta"] = json_number(np.beta);
  j["d_eta"] = json_number(np.d_eta);
  j["dual_value"] = json_number(np.dual_value);
  j["dual_gap"] = json_number(np.dual_gap);
  j["multiplier"] = json_number(np.multiplier);
  j["mixing_weight"] = json_number(np.mixing_weight);
  j["d_zero"] = json_number(d_zero(rho, sigma, base));
  j["relative_entropy"] = json_number(relative_entropy(rho, sigma, base));
  j["d_max"] = json_number(d_max(rho, sigma, base));
  j["helstrom"] = {{"p_err", json_number(hel.p_err)},
                   {"p_max", json_number(hel.p_max)}};
  if (epsilon) {
    const double gamma = exp_in_base(*epsilon, base);
    j["hockey_stick"] = {{"epsilon", json_number(*epsilon)},
                         {"gamma", json_number(gamma)},
                         {"delta", json_number(hockey_stick(rho, sigma, gamma))}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Bound curves.

struct CurveSpec {
  enum class Bound { gamma, omega, theta };

  Bound bound = Bound::gamma;
  double eps_min = 0.0;
  double eps_max = 3.0;
  int steps = 121;
  std::vector<double> fixed;  // eta values (gamma) or delta values (omega/theta)
  double omega_eta = 0.1;     // type-I cap used by the omega curve
  PriorPair priors{0.5};
  LogBase base = LogBase::natural;
  std::uint64_t seed = 0;

  static const char* name(Bound b) {
    switch (b) {
      case Bound::gamma: return "gamma";
      case Bound::omega: return "omega";
      case Bound::theta: return "theta";
    }
    return "?";
  }
};

inline std::string emit_curve(const CurveSpec& spec) {
  if (!(spec.eps_min >= 0.0) || !(spec.eps_max >= spec.eps_min))
    throw OutOfRangeError("emit_curve: need 0 <= eps_min <= eps_max");
  if (spec.steps < 2) throw OutOfRangeError("emit_curve: need at least 2 sweep points");
  if (spec.fixed.empty()) throw OutOfRangeError("emit_curve: no fixed parameter values");

  const char* param = spec.bound == CurveSpec::Bound::gamma ? "eta" : "delta";
  std::ostringstream out;
  out << "# bound=" << CurveSpec::name(spec.bound) << " base=" << log_base_name(spec.base)
      << " seed=" << spec.seed;
  if (spec.bound != CurveSpec::Bound::omega)
    out << " p_rho=" << format_sig9(spec.priors.p_rho);
  if (spec.bound == CurveSpec::Bound::omega)
    out << " eta=" << format_sig9(spec.omega_eta);
  out << "\n";
  out << "# fixed " << param << " values are artifact defaults unless set explicitly\n";

  out << "epsilon";
  for (double v : spec.fixed) out << "," << param << "=" << format_sig9(v);
  out << "\n";

  for (int i = 0; i < spec.steps; ++i) {
    const double eps =
        spec.eps_min + double(i) * (spec.eps_max - spec.eps_min) / double(spec.steps - 1);
    out << format_sig9(eps);
    for (double v : spec.fixed) {
      double y = 0.0;
      switch (spec.bound) {
        case CurveSpec::Bound::gamma:
          y = gamma_bound(HtPrivacyParams(eps, v), spec.priors);
          break;
        case CurveSpec::Bound::omega:
          y = omega_bound(DpParams(eps, v), spec.omega_eta, spec.base);
          break;
        case CurveSpec::Bound::theta:
          y = theta_bound(DpParams(eps, v), spec.priors, spec.base);
          break;
      }
      out << "," << format_sig9(y);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace qpriv::io

#endif  // QPRIV_IO_HPP
