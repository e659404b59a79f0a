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

// qpriv: hypothesis-testing and differential-privacy auditing of
// finite-dimensional quantum channels.
//
// Exit codes: 0 success / guarantee satisfied, 1 a counterexample pair was
// found (FALSIFIED), 2 input or validation error, 3 internal numerical
// failure (duality gap exceeded, eigensolver non-convergence).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpriv/io.hpp"

namespace {

using namespace qpriv;
using qpriv::io::InputDocument;
using qpriv::io::Json;

struct CommonArgs {
  std::string input;
  std::string input_b;
  std::string base_name;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool json = false;
};

LogBase pick_base(const CommonArgs& args, const InputDocument& doc) {
  if (args.base_name == "two") return LogBase::two;
  if (args.base_name == "natural") return LogBase::natural;
  return doc.base;
}

LogBase pick_base_no_doc(const CommonArgs& args) {
  if (args.base_name == "two") return LogBase::two;
  return LogBase::natural;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ValidationError("cannot open output file: " + out_path);
  out << text;
}

void emit_json(const Json& j, const std::string& out_path) {
  write_output(j.dump(2) + "\n", out_path);
}

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return qpriv::io::format_sig9(v);
}

struct EpsRange {
  double min = 0.0;
  double max = 3.0;
  int steps = 121;
};

EpsRange parse_eps_range(const std::string& text) {
  EpsRange r;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &r.min, &r.max, &r.steps) != 3)
    throw ValidationError("--eps expects MIN:MAX:STEPS, got \"" + text + "\"");
  return r;
}

int run_divergence(const CommonArgs& args, double eta, std::optional<double> epsilon) {
  const InputDocument doc = qpriv::io::parse_input_file(args.input);
  const LogBase base = pick_base(args, doc);
  const std::uint64_t seed = args.seed.value_or(doc.seed);
  if (doc.pairs.empty())
    throw ValidationError("divergence requires a document with explicit pairs");

  Json pairs = Json::array();
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < doc.pairs.size(); ++i) {
    const DensityOperator out_r = doc.channel.apply(doc.pairs[i].first);
    const DensityOperator out_s = doc.channel.apply(doc.pairs[i].second);
    Json entry;
    entry["index"] = int(i);
    entry.update(qpriv::io::divergence_pair_json(out_r, out_s, eta, base, epsilon,
                                                 doc.priors()));
    lines.push_back("pair " + std::to_string(i) +
                    ": beta=" + format_value(entry["beta"].get<double>()) +
                    " d_eta=" + format_value(d_eta(out_r, out_s, eta, base)) +
                    " trace_distance=" +
                    format_value(trace_distance(out_r, out_s)));
    pairs.push_back(std::move(entry));
  }

  if (args.json) {
    Json j;
    j["command"] = "divergence";
    j["base"] = log_base_name(base);
    j["eta"] = eta;
    j["seed"] = seed;
    j["pairs"] = std::move(pairs);
    emit_json(j, args.out);
  } else {
    std::string text;
    for (const std::string& l : lines) text += l + "\n";
    write_output(text, args.out);
  }
  return 0;
}

int finish_audit(const AuditReport& report, const CommonArgs& args, LogBase base) {
  if (args.json) {
    emit_json(qpriv::io::audit_report_json(report, base), args.out);
  } else {
    std::string text = std::string("audit ") +
                       (report.mode == AuditMode::ht ? "ht" : "dp") +
                       ": status=" + audit_status_name(report.status) +
                       " worst_value=" + format_value(report.worst_value) +
                       " pairs_examined=" + std::to_string(report.pairs_examined) +
                       "\n";
    write_output(text, args.out);
  }
  return report.status == AuditStatus::falsified ? 1 : 0;
}

int run_audit_ht(const CommonArgs& args, double eta, double epsilon, int budget) {
  const InputDocument doc = qpriv::io::parse_input_file(args.input);
  const LogBase base = pick_base(args, doc);
  const std::uint64_t seed = args.seed.value_or(doc.seed);
  const AuditReport report = audit_ht(doc.channel, qpriv::io::audit_relation(doc), eta,
                                      epsilon, base, budget, seed);
  return finish_audit(report, args, base);
}

int run_audit_dp(const CommonArgs& args, double epsilon, std::optional<double> delta,
                 int budget) {
  const InputDocument doc = qpriv::io::parse_input_file(args.input);
  const LogBase base = pick_base(args, doc);
  const std::uint64_t seed = args.seed.value_or(doc.seed);
  const AuditReport report = audit_dp(doc.channel, qpriv::io::audit_relation(doc),
                                      epsilon, base, budget, seed, delta);
  return finish_audit(report, args, base);
}

int run_bounds(const CommonArgs& args, qpriv::io::CurveSpec::Bound bound,
               const std::string& eps_text, std::optional<double> eta,
               std::optional<double> delta, double p_rho) {
  const EpsRange range = parse_eps_range(eps_text);
  qpriv::io::CurveSpec spec;
  spec.bound = bound;
  spec.eps_min = range.min;
  spec.eps_max = range.max;
  spec.steps = range.steps;
  spec.priors = PriorPair(p_rho);
  spec.base = pick_base_no_doc(args);
  spec.seed = args.seed.value_or(0);
  if (bound == qpriv::io::CurveSpec::Bound::gamma) {
    spec.fixed = eta ? std::vector<double>{*eta}
                     : std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9};
  } else {
    spec.fixed = delta ? std::vector<double>{*delta}
                       : std::vector<double>{0.0, 0.05, 0.1, 0.2};
    spec.omega_eta = eta.value_or(0.1);
  }
  write_output(qpriv::io::emit_curve(spec), args.out);
  return 0;
}

int run_compose(const CommonArgs& args, std::optional<double> epsilon_budget) {
  const InputDocument doc_a = qpriv::io::parse_input_file(args.input);
  const InputDocument doc_b = qpriv::io::parse_input_file(args.input_b);
  const LogBase base = pick_base(args, doc_a);
  if (doc_a.pairs.empty() || doc_b.pairs.empty())
    throw ValidationError("compose requires explicit pairs in both documents");

  const auto pairs_a = NeighborhoodRelation::explicit_pairs(doc_a.pairs).pairs();
  const auto pairs_b = NeighborhoodRelation::explicit_pairs(doc_b.pairs).pairs();
  const KrausChannel product =
      tensor_channel(doc_a.channel.to_kraus(), doc_b.channel.to_kraus());

  Json rows = Json::array();
  double worst = 0.0;
  double worst_additivity_gap = 0.0;
  for (std::size_t ia = 0; ia < pairs_a.size(); ++ia)
    for (std::size_t ib = 0; ib < pairs_b.size(); ++ib) {
      const DensityOperator ra = doc_a.channel.apply(pairs_a[ia].first);
      const DensityOperator sa = doc_a.channel.apply(pairs_a[ia].second);
      const DensityOperator rb = doc_b.channel.apply(pairs_b[ib].first);
      const DensityOperator sb = doc_b.channel.apply(pairs_b[ib].second);
      const double d_a = d_zero(ra, sa, base);
      const double d_b = d_zero(rb, sb, base);

      const DensityOperator joint_r = apply_channel(
          product, tensor_state(pairs_a[ia].first, pairs_b[ib].first));
      const DensityOperator joint_s = apply_channel(
          product, tensor_state(pairs_a[ia].second, pairs_b[ib].second));
      const double d_joint = d_zero(joint_r, joint_s, base);

      const double sum = d_a + d_b;
      double gap = 0.0;
      if (std::isinf(d_joint) || std::isinf(sum)) {
        if (std::isinf(d_joint) != std::isinf(sum)) gap = kInf;
      } else {
        gap = std::abs(d_joint - sum);
      }
      worst = std::max(worst, d_joint);
      worst_additivity_gap = std::max(worst_additivity_gap, gap);
      rows.push_back({{"index_a", int(ia)},
                      {"index_b", int(ib)},
                      {"d_zero_factors",
                       Json::array({qpriv::io::json_number(d_a),
                                    qpriv::io::json_number(d_b)})},
                      {"d_zero_sum", qpriv::io::json_number(sum)},
                      {"d_zero_joint", qpriv::io::json_number(d_joint)},
                      {"additivity_gap", qpriv::io::json_number(gap)}});
    }

  const bool falsified =
      epsilon_budget && worst > *epsilon_budget + kAuditSlack;
  if (args.json) {
    Json j;
    j["command"] = "compose";
    j["base"] = log_base_name(base);
    j["eta"] = 0.0;
    if (epsilon_budget) j["epsilon_budget"] = *epsilon_budget;
    j["worst_value"] = qpriv::io::json_number(worst);
    j["worst_additivity_gap"] = qpriv::io::json_number(worst_additivity_gap);
    j["status"] = falsified ? "FALSIFIED" : "SATISFIED_ON_PAIRS";
    j["pairs"] = std::move(rows);
    emit_json(j, args.out);
  } else {
    write_output("compose: worst d_zero=" + format_value(worst) +
                     " additivity_gap=" + format_value(worst_additivity_gap) +
                     (falsified ? " status=FALSIFIED" : " status=SATISFIED_ON_PAIRS") +
                     "\n",
                 args.out);
  }
  return falsified ? 1 : 0;
}

int run_translate_ht_to_dp(const CommonArgs& args, double epsilon, double eta) {
  const DpParams out = ht_to_dp(HtPrivacyParams(epsilon, eta));
  if (args.json) {
    Json j;
    j["command"] = "translate";
    j["direction"] = "ht_to_dp";
    j["input"] = {{"epsilon", epsilon}, {"eta", eta}};
    j["output"] = {{"epsilon", out.epsilon}, {"delta", out.delta}};
    emit_json(j, args.out);
  } else {
    write_output("dp: epsilon=" + format_value(out.epsilon) +
                     " delta=" + format_value(out.delta) + "\n",
                 args.out);
  }
  return 0;
}

int run_translate_dp_to_ht(const CommonArgs& args, double epsilon, double delta) {
  const HtPrivacyFamily out = dp_to_ht(DpParams(epsilon, delta));
  if (args.json) {
    Json j;
    j["command"] = "translate";
    j["direction"] = "dp_to_ht";
    j["input"] = {{"epsilon", epsilon}, {"delta", delta}};
    j["output"] = {{"epsilon", out.epsilon}, {"eta", "all"}};
    emit_json(j, args.out);
  } else {
    write_output("ht: epsilon=" + format_value(out.epsilon) + " for all eta in [0,1]\n",
                 args.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum channel privacy auditing against hypothesis-testing and "
               "differential-privacy adversaries"};
  app.require_subcommand(1);

  CommonArgs args;
  double eta = 0.0;
  double epsilon = 0.0;
  std::optional<double> opt_epsilon;
  std::optional<double> opt_eta;
  std::optional<double> opt_delta;
  double p_rho = 0.5;
  double delta_value = 0.0;
  int budget = 200;
  std::string eps_range = "0:3:121";

  const auto add_common = [&](CLI::App* cmd, bool with_input) {
    if (with_input) cmd->add_option("--input", args.input, "input document")->required();
    cmd->add_option("--base", args.base_name, "log base: two or natural")
        ->check(CLI::IsMember({"two", "natural"}));
    cmd->add_option("--seed", args.seed, "seed override");
    cmd->add_option("--out", args.out, "write output to a file");
    cmd->add_flag("--json", args.json, "machine-readable JSON report");
  };

  CLI::App* divergence =
      app.add_subcommand("divergence", "all pairwise divergences after the channel");
  add_common(divergence, true);
  divergence->add_option("--eta", eta, "type-I error cap");
  divergence->add_option("--epsilon", opt_epsilon,
                         "also report the hockey-stick divergence at gamma = base^eps");

  CLI::App* audit = app.add_subcommand("audit", "audit a channel against a budget");
  audit->require_subcommand(1);
  CLI::App* audit_ht_cmd =
      audit->add_subcommand("ht", "hypothesis-testing privacy audit");
  add_common(audit_ht_cmd, true);
  audit_ht_cmd->add_option("--eta", eta, "type-I error cap")->required();
  audit_ht_cmd->add_option("--epsilon", epsilon, "privacy budget")->required();
  audit_ht_cmd->add_option("--budget", budget, "falsification samples");

  CLI::App* audit_dp_cmd = audit->add_subcommand("dp", "differential privacy audit");
  add_common(audit_dp_cmd, true);
  audit_dp_cmd->add_option("--epsilon", epsilon, "DP budget")->required();
  audit_dp_cmd->add_option("--delta", opt_delta, "optional delta budget to test");
  audit_dp_cmd->add_option("--budget", budget, "falsification samples");

  CLI::App* bounds = app.add_subcommand("bounds", "emit theorem bound curves as CSV");
  bounds->require_subcommand(1);
  const auto add_bounds_common = [&](CLI::App* cmd) {
    cmd->add_option("--eps", eps_range, "sweep MIN:MAX:STEPS");
    cmd->add_option("--seed", args.seed, "seed recorded in the header");
    cmd->add_option("--base", args.base_name, "log base: two or natural")
        ->check(CLI::IsMember({"two", "natural"}));
    cmd->add_option("--out", args.out, "write CSV to a file");
  };
  CLI::App* bounds_gamma = bounds->add_subcommand("gamma", "symmetric-error bound");
  add_bounds_common(bounds_gamma);
  bounds_gamma->add_option("--eta", opt_eta, "fixed eta (default: a spread of values)");
  bounds_gamma->add_option("--p-rho", p_rho, "null-hypothesis prior");
  CLI::App* bounds_omega = bounds->add_subcommand("omega", "type-II error bound");
  add_bounds_common(bounds_omega);
  bounds_omega->add_option("--delta", opt_delta, "fixed delta (default: a spread)");
  bounds_omega->add_option("--eta", opt_eta, "type-I cap (default 0.1)");
  CLI::App* bounds_theta = bounds->add_subcommand("theta", "symmetric-error DP bound");
  add_bounds_common(bounds_theta);
  bounds_theta->add_option("--delta", opt_delta, "fixed delta (default: a spread)");
  bounds_theta->add_option("--p-rho", p_rho, "null-hypothesis prior");

  CLI::App* compose =
      app.add_subcommand("compose", "tensor two channels and audit at eta = 0");
  compose->add_option("--input", args.input, "first factor document")->required();
  compose->add_option("--input-b", args.input_b, "second factor document")->required();
  compose->add_option("--epsilon", opt_epsilon, "total budget epsilon_1 + epsilon_2");
  compose->add_option("--base", args.base_name, "log base: two or natural")
      ->check(CLI::IsMember({"two", "natural"}));
  compose->add_option("--out", args.out, "write output to a file");
  compose->add_flag("--json", args.json, "machine-readable JSON report");

  CLI::App* translate =
      app.add_subcommand("translate", "convert between privacy parameterizations");
  translate->require_subcommand(1);
  CLI::App* ht2dp = translate->add_subcommand("ht-to-dp", "(eps, eta) -> (eps, delta)");
  ht2dp->add_option("--epsilon", epsilon, "HT budget")->required();
  ht2dp->add_option("--eta", eta, "type-I cap")->required();
  ht2dp->add_option("--out", args.out, "write output to a file");
  ht2dp->add_flag("--json", args.json, "JSON output");
  CLI::App* dp2ht = translate->add_subcommand("dp-to-ht", "(eps, 0) -> all-eta family");
  dp2ht->add_option("--epsilon", epsilon, "DP budget")->required();
  dp2ht->add_option("--delta", delta_value, "must be zero");
  dp2ht->add_option("--out", args.out, "write output to a file");
  dp2ht->add_flag("--json", args.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (divergence->parsed()) return run_divergence(args, eta, opt_epsilon);
    if (audit_ht_cmd->parsed()) return run_audit_ht(args, eta, epsilon, budget);
    if (audit_dp_cmd->parsed()) return run_audit_dp(args, epsilon, opt_delta, budget);
    if (bounds_gamma->parsed())
      return run_bounds(args, qpriv::io::CurveSpec::Bound::gamma, eps_range, opt_eta,
                        opt_delta, p_rho);
    if (bounds_omega->parsed())
      return run_bounds(args, qpriv::io::CurveSpec::Bound::omega, eps_range, opt_eta,
                        opt_delta, p_rho);
    if (bounds_theta->parsed())
      return run_bounds(args, qpriv::io::CurveSpec::Bound::theta, eps_range, opt_eta,
                        opt_delta, p_rho);
    if (compose->parsed()) return run_compose(args, opt_epsilon);
    if (ht2dp->parsed()) return run_translate_ht_to_dp(args, epsilon, eta);
    if (dp2ht->parsed()) return run_translate_dp_to_ht(args, epsilon, delta_value);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
