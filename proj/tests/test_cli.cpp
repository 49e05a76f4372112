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

#include "doctest.h"

#include <sstream>
#include <string>
#include <vector>

#include "qmarkov/cli.hpp"
#include "qmarkov/markov.hpp"
#include "qmarkov/state_io.hpp"

using namespace qmarkov;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& stdin_text = "") {
  args.insert(args.begin(), "markovcost");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& report, const std::string& key) {
  std::istringstream is(report);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  }
  return "";
}

}  // namespace

TEST_CASE("example piped into markov-cost gives both routes") {
  const auto ex = run({"example", "--family", "VIC", "--d", "2", "--lambda", "0.5,0.5"});
  REQUIRE(ex.code == 0);
  const auto cost = run({"markov-cost", "--route", "both"}, ex.out);
  CHECK(cost.code == 0);
  CHECK(value_of(cost.out, "m_formula") == "1");
  CHECK(value_of(cost.out, "m_algorithm") == "1");
  CHECK(!value_of(cost.out, "input_digest").empty());
  CHECK(value_of(cost.out, "command") == "markov-cost --route both");
}

TEST_CASE("mixed input to markov-cost is rejected") {
  const std::string mixed = format_state(DensityOp(SystemLayout({{"A", 2}, {"B", 2}, {"C", 2}}), identity(8) / 8.0));
  const auto r = run({"markov-cost"}, mixed);
  CHECK(r.code == 1);
  CHECK(r.err.find("MIXED_UNSUPPORTED") != std::string::npos);
}

TEST_CASE("algorithm route reports not applicable with exit 2") {
  Rng rng(61);
  const SystemLayout l({{"A", 2}, {"B", 3}, {"C", 2}});
  const auto r = run({"markov-cost", "--route", "algorithm"}, format_state(PureVec(l, random_state_vector(12, rng))));
  CHECK(r.code == 2);
  CHECK(value_of(r.out, "m_algorithm") == "not applicable");
  CHECK(value_of(r.out, "reason") == "this algorithm is not applicable");
}

TEST_CASE("simulate prints one CSV row") {
  const auto r = run({"simulate", "--n", "2", "--delta", "1.0", "--rate", "3", "--trials", "5", "--seed", "7"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  std::string header, row, extra;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(header == "n,delta,rate,N,err_avg,err_full,D,chernoff_N,seed");
  CHECK(row.rfind("2,1,3,64,", 0) == 0);
  CHECK(row.substr(row.size() - 2) == ",7");
  CHECK_FALSE(std::getline(is, extra));
  CHECK(run({"simulate", "--n", "2", "--delta", "1.0", "--rate", "3", "--trials", "5", "--seed", "7"}).out == r.out);
}

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == 64);
  CHECK(run({"frobnicate"}).code == 64);
  CHECK(run({"markov-cost", "--route", "sideways"}).code == 64);
  CHECK(run({"entropy", "--bogus"}).code == 64);
}

TEST_CASE("state-file errors surface their tag") {
  const auto r = run({"entropy"}, R"({"version":1,"kind":"pure","layout":[["A",2]],"data":[[1,0]]})");
  CHECK(r.code == 1);
  CHECK(r.err.find("SCHEMA_LEN") != std::string::npos);
}

TEST_CASE("entropy, qcmi and is-markov reports") {
  const std::string ghz = format_state(build_example("VIC", 0, {0.5, 0.5}));
  CHECK(value_of(run({"entropy", "--labels", "A"}, ghz).out, "entropy") == "1");
  CHECK(value_of(run({"qcmi"}, ghz).out, "qcmi") == "1");
  CHECK(value_of(run({"is-markov"}, ghz).out, "is_markov") == "false");
  const std::string via = format_state(build_example("VIA", 2, {0.25}));
  CHECK(value_of(run({"is-markov"}, via).out, "is_markov") == "true");
  const auto dec = run({"markov-decompose"}, via);
  CHECK(dec.code == 0);
  CHECK(run({"markov-decompose"}, ghz).code == 1);
}

TEST_CASE("json output is one document") {
  const std::string ghz = format_state(build_example("VIC", 0, {0.5, 0.5}));
  const auto r = run({"bounds", "--json"}, ghz);
  CHECK(r.code == 0);
  CHECK(r.out.front() == '{');
  CHECK(r.out.find("\"m_formula\": 1") != std::string::npos);
}

TEST_CASE("reports are reproducible") {
  const std::string vib = format_state(build_example("VIB", 2, {0.5}));
  CHECK(run({"ki-decompose", "--seed", "5"}, vib).out == run({"ki-decompose", "--seed", "5"}, vib).out);
  CHECK(value_of(run({"ki-decompose", "--seed", "5"}, vib).out, "seed") == "5");
}
