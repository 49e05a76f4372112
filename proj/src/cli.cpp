/*
 * Copyright 2026 The qmarkov Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qmarkov/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmarkov/acceptance.hpp"
#include "qmarkov/channel.hpp"
#include "qmarkov/info.hpp"
#include "qmarkov/kidec.hpp"
#include "qmarkov/markov.hpp"
#include "qmarkov/protosim.hpp"
#include "qmarkov/state_io.hpp"

namespace qmarkov {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotApplicable = 2;
constexpr int kExitUsage = 64;

const char* const kNotApplicable = "this algorithm is not applicable";

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Rounds to the reported precision so text and JSON reports carry the same digits.
double r12(double x) { return std::strtod(fmt12(x).c_str(), nullptr); }

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct CliFailure {
  std::string tag;
  std::string message;
};

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? sep : "") + parts[i];
  return s;
}

void flatten(const std::string& prefix, const Json& v, std::ostream& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), out);
    }
  } else if (v.is_array()) {
    bool scalar = true;
    for (const auto& e : v) scalar = scalar && !e.is_structured();
    if (scalar) {
      out << prefix << ":";
      for (const auto& e : v) out << " " << (e.is_number() ? fmt12(e.get<double>()) : e.dump());
      out << "\n";
      return;
    }
    for (std::size_t i = 0; i < v.size(); ++i) flatten(prefix + "." + std::to_string(i), v[i], out);
  } else if (v.is_string()) {
    out << prefix << ": " << v.get<std::string>() << "\n";
  } else if (v.is_number_float()) {
    out << prefix << ": " << fmt12(v.get<double>()) << "\n";
  } else {
    out << prefix << ": " << v.dump() << "\n";
  }
}

struct Input {
  std::string text;
  LoadedState state;
};

Input read_input(const std::string& path, std::istream& in) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw StateFileError("IO", "cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  return {text, parse_state(text)};
}

const PureVec& require_pure(const Input& input) {
  if (!input.state.is_pure()) {
    throw CliFailure{"MIXED_UNSUPPORTED", "this command needs a pure state; the input is mixed"};
  }
  return *input.state.pure;
}

}  // namespace

int run_cli(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markovianizing cost toolkit", "markovcost"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string input = "-";
  bool as_json = false;
  std::uint64_t seed = kDefaultKISeed;
  bool seed_given = false;
  Labels a_labels{"A"}, b_labels{"B"}, c_labels{"C"}, labels;
  std::string other, route = "both", family = "VIC";
  double tol = 1e-9, delta = 1.0, rate = 3.0;
  int d = 2, n = 2, trials = 5;
  std::vector<double> lambda{0.5, 0.5};

  auto add_input = [&](CLI::App* sub) { sub->add_option("-i,--input", input, "state file, '-' for stdin"); };
  auto add_json = [&](CLI::App* sub) { sub->add_flag("--json", as_json, "emit one JSON document"); };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed = s; seed_given = true; }, "random seed");
  };
  auto add_parties = [&](CLI::App* sub) {
    sub->add_option("--a", a_labels, "labels of A")->delimiter(',');
    sub->add_option("--b", b_labels, "labels of B")->delimiter(',');
    sub->add_option("--c", c_labels, "labels of C")->delimiter(',');
  };
  auto state_cmd = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    add_input(sub);
    add_json(sub);
    return sub;
  };

  auto* entropy_cmd = state_cmd("entropy", "von Neumann entropy of a marginal");
  entropy_cmd->add_option("--labels", labels, "factors to keep (default: all)")->delimiter(',');
  auto* qcmi_cmd = state_cmd("qcmi", "conditional mutual information I(A;C|B)");
  add_parties(qcmi_cmd);
  auto* td_cmd = state_cmd("trace-dist", "trace norm distance between two states");
  td_cmd->add_option("--other", other, "second state file")->required();
  auto* ki_cmd = state_cmd("ki-decompose", "Koashi-Imoto decomposition of A against C");
  ki_cmd->add_option("--a", a_labels, "labels of A")->delimiter(',');
  ki_cmd->add_option("--c", c_labels, "labels of C")->delimiter(',');
  add_seed(ki_cmd);
  auto* cost_cmd = state_cmd("markov-cost", "Markovianizing cost of a pure tripartite state");
  cost_cmd->add_option("--route", route, "formula|algorithm|both")
      ->check(CLI::IsMember({"formula", "algorithm", "both"}));
  add_parties(cost_cmd);
  add_seed(cost_cmd);
  auto* im_cmd = state_cmd("is-markov", "test I(A;C|B) against a tolerance");
  add_parties(im_cmd);
  im_cmd->add_option("--tol", tol, "tolerance");
  auto* md_cmd = state_cmd("markov-decompose", "structure of a Markov state");
  add_parties(md_cmd);
  add_seed(md_cmd);
  auto* rc_cmd = state_cmd("recovery-check", "Petz recovery residuals");
  add_parties(rc_cmd);
  auto* bounds_cmd = state_cmd("bounds", "cost against its entropic bounds");
  add_parties(bounds_cmd);
  add_seed(bounds_cmd);

  auto* ex_cmd = app.add_subcommand("example", "write a closed-form example state");
  ex_cmd->add_option("--family", family, "VIA|VIB|VIC")->check(CLI::IsMember({"VIA", "VIB", "VIC"}));
  ex_cmd->add_option("--d", d, "local dimension");
  ex_cmd->add_option("--lambda", lambda, "comma separated weights")->delimiter(',');

  auto* sim_cmd = app.add_subcommand("simulate", "random-unitary protocol simulation (CSV)");
  sim_cmd->add_option("-i,--input", input, "state file (default: GHZ with weights 1/2)");
  add_json(sim_cmd);
  sim_cmd->add_option("--n", n, "block length");
  sim_cmd->add_option("--delta", delta, "typicality window");
  sim_cmd->add_option("--rate", rate, "unitaries per block, in bits");
  sim_cmd->add_option("--trials", trials, "independent trials");
  add_seed(sim_cmd);

  auto* st_cmd = app.add_subcommand("self-test", "run the acceptance suite");
  std::uint64_t st_seed = kAcceptanceSeed;
  st_cmd->add_option("--seed", st_seed, "suite seed");
  add_json(st_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::string> echo;
  for (int i = 1; i < argc; ++i) echo.emplace_back(argv[i]);

  Json report;
  report["command"] = join(echo, " ");
  int code = kExitOk;

  auto emit = [&] {
    if (as_json) {
      out << report.dump(2) << "\n";
    } else {
      flatten("", report, out);
    }
    err << "wall_time_s: " << fmt12(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count())
        << "\n";
  };

  try {
    if (ex_cmd->parsed()) {
      const auto psi = build_example(family, family == "VIC" && d == static_cast<int>(lambda.size()) ? 0 : d, lambda);
      out << format_state(psi);
      return kExitOk;
    }
    if (st_cmd->parsed()) {
      const auto results = run_acceptance(st_seed, {}, &err);
      bool all = true;
      for (const auto& r : results) all = all && r.pass;
      if (as_json) {
        Json doc;
        doc["seed"] = st_seed;
        doc["criteria"] = Json::array();
        for (const auto& r : results) {
          doc["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        }
        doc["overall"] = all ? "PASS" : "FAIL";
        out << doc.dump(2) << "\n";
      } else {
        out << "seed: " << st_seed << "\n" << format_acceptance(results) << "overall: " << (all ? "PASS" : "FAIL")
            << "\n";
      }
      return all ? kExitOk : kExitError;
    }
    if (sim_cmd->parsed()) {
      const bool from_file = sim_cmd->count("--input") > 0;
      Input src;
      if (from_file) src = read_input(input, in);
      const PureVec psi = from_file ? require_pure(src) : build_example("VIC", 0, {0.5, 0.5});
      const std::uint64_t sim_seed = seed_given ? seed : kAcceptanceSeed;
      const auto res = simulate(psi, n, delta, rate, trials, sim_seed, dim_cap_from_env());
      if (as_json) {
        Json doc{{"n", res.n},
                 {"delta", r12(res.delta)},
                 {"rate", r12(res.rate)},
                 {"N", res.n_unitaries},
                 {"err_avg", r12(res.err_to_average)},
                 {"err_full", r12(res.err_full)},
                 {"D", r12(res.mass)},
                 {"chernoff_N", r12(res.chernoff_n)},
                 {"seed", res.seed},
                 {"trials", res.trials},
                 {"gentle", r12(res.gentle)},
                 {"min_eigenvalue", r12(res.min_eigenvalue)},
                 {"min_eigenvalue_bound", r12(res.min_eigenvalue_bound)}};
        if (from_file) doc["input_digest"] = hex64(fnv1a(src.text));
        out << doc.dump(2) << "\n";
      } else {
        out << "n,delta,rate,N,err_avg,err_full,D,chernoff_N,seed\n"
            << res.n << "," << fmt12(res.delta) << "," << fmt12(res.rate) << "," << res.n_unitaries << ","
            << fmt12(res.err_to_average) << "," << fmt12(res.err_full) << "," << fmt12(res.mass) << ","
            << fmt12(res.chernoff_n) << "," << res.seed << "\n";
      }
      return kExitOk;
    }

    const Input src = read_input(input, in);
    report["input_digest"] = hex64(fnv1a(src.text));
    const Parties parties{a_labels, b_labels, c_labels};

    if (entropy_cmd->parsed()) {
      const auto rho = src.state.density();
      const Labels keep = labels.empty() ? rho.layout().labels() : labels;
      report["labels"] = join(keep, ",");
      report["entropy"] = r12(marginal_entropy(rho, keep));
    } else if (qcmi_cmd->parsed()) {
      report["qcmi"] = r12(qcmi(src.state.density(), a_labels, b_labels, c_labels));
    } else if (td_cmd->parsed()) {
      const Input second = read_input(other, in);
      report["other_digest"] = hex64(fnv1a(second.text));
      report["trace_distance"] = r12(trace_distance(src.state.density(), second.state.density()));
    } else if (ki_cmd->parsed()) {
      report["seed"] = seed;
      Labels keep = a_labels;
      keep.insert(keep.end(), c_labels.begin(), c_labels.end());
      const DensityOp rho = src.state.is_pure() ? reduced_state(*src.state.pure, keep)
                                                : partial_trace(src.state.density(), keep);
      const auto dec = ki_decompose(rho, a_labels, c_labels, seed);
      const auto rep = validate_ki(dec, rho);
      report["d_a0"] = dec.d_a0;
      report["d_al"] = dec.d_al;
      report["d_ar"] = dec.d_ar;
      Json blocks = Json::array();
      for (const auto& b : dec.blocks) {
        blocks.push_back({{"p", r12(b.p)}, {"dim_l", b.dim_l}, {"dim_r", b.dim_r}});
      }
      report["blocks"] = blocks;
      report["residual"] = {{"reconstruction", r12(rep.reconstruction)},
                            {"isometry", r12(rep.isometry)},
                            {"irreducibility", r12(rep.irreducibility)},
                            {"intertwiner", r12(rep.intertwiner)},
                            {"probability_sum", r12(rep.probability_sum)}};
    } else if (cost_cmd->parsed()) {
      const PureVec& psi = require_pure(src);
      report["seed"] = seed;
      report["route"] = route;
      if (route != "algorithm") {
        const auto tki = ki_tripartite(psi, parties.a, parties.b, parties.c, seed);
        report["m_formula"] = r12(markov_cost_formula(tki));
        report["ki_reconstruction"] = r12(tki.reconstruction);
      }
      if (route != "formula") {
        const auto alg = markov_cost_algorithm_detail(psi, parties);
        if (alg.value) {
          report["m_algorithm"] = r12(*alg.value);
        } else {
          report["m_algorithm"] = "not applicable";
          report["reason"] = kNotApplicable;
          code = kExitNotApplicable;
        }
        report["hermiticity"] = r12(alg.hermiticity);
        report["fixed_rank"] = alg.fixed_rank;
      }
    } else if (im_cmd->parsed()) {
      const auto rho = src.state.density();
      report["tol"] = r12(tol);
      report["qcmi"] = r12(qcmi(rho, a_labels, b_labels, c_labels));
      report["is_markov"] = is_markov_state(rho, parties, tol);
    } else if (md_cmd->parsed()) {
      report["seed"] = seed;
      const auto dec = markov_decomposition(src.state.density(), parties, 1e-8, seed);
      Json terms = Json::array();
      for (const auto& t : dec.terms) {
        terms.push_back({{"q", r12(t.q)}, {"dim_l", t.dim_l}, {"dim_r", t.dim_r}});
      }
      report["terms"] = terms;
      report["residual"] = r12(dec.residual);
    } else if (rc_cmd->parsed()) {
      const auto rep = recovery_check(src.state.density(), parties);
      report["residual_bc"] = r12(rep.residual_bc);
      report["residual_ab"] = r12(rep.residual_ab);
    } else if (bounds_cmd->parsed()) {
      const PureVec& psi = require_pure(src);
      report["seed"] = seed;
      const auto rep = bounds_check(psi, parties, seed);
      report["qcmi"] = r12(rep.qcmi);
      report["m_formula"] = r12(rep.m_formula);
      if (rep.m_algorithm) {
        report["m_algorithm"] = r12(*rep.m_algorithm);
      } else {
        report["m_algorithm"] = "not applicable";
      }
      report["qmi_a_bc"] = r12(rep.qmi_a_bc);
      report["self_adjoint"] = rep.self_adjoint;
      report["lower_ok"] = rep.qcmi - 1e-7 <= rep.m_formula;
      report["upper_ok"] = rep.m_formula <= rep.qmi_a_bc + 1e-7;
      Json blocks = Json::array();
      for (const auto& b : rep.blocks) {
        blocks.push_back({{"p", r12(b.p)}, {"dim_l", b.dim_l}, {"dim_r", b.dim_r}, {"s_phi_ar", r12(b.s_phi_ar)}});
      }
      report["blocks"] = blocks;
    }
  } catch (const CliFailure& f) {
    err << "error: " << f.tag << ": " << f.message << "\n";
    return kExitError;
  } catch (const StateFileError& e) {
    err << "error: " << e.tag() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: NUMERICAL: " << e.what() << "\n";
    return kExitError;
  }
  emit();
  return code;
}

}  // namespace qmarkov
