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

// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: acceptance <path-to-markovcost>

#include <array>
#include <cstdio>
#include <iostream>
#include <memory>
#include <string>

#include "qmarkov/acceptance.hpp"

namespace {

// Captures stdout of a command; the exit status is appended as a final line
// so that a failing run can never compare equal to a passing one.
std::string capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return "<popen failed>";
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return out + "status=" + std::to_string(status) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <markovcost>\n";
    return 64;
  }
  auto results = qmarkov::run_acceptance(qmarkov::kAcceptanceSeed, {}, &std::cerr);

  const std::string cmd =
      std::string("\"") + argv[1] + "\" self-test --seed " + std::to_string(qmarkov::kAcceptanceSeed) + " 2>/dev/null";
  const std::string first = capture(cmd);
  const std::string second = capture(cmd);
  qmarkov::CriterionResult det{10, "self-test determinism", false, ""};
  det.pass = first == second && first.find("overall: ") != std::string::npos;
  det.detail = "bytes=" + std::to_string(first.size()) + " identical=" + (first == second ? "yes" : "no");
  results.push_back(det);

  std::cout << qmarkov::format_acceptance(results);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << (failed ? "ACCEPTANCE FAILED: " + std::to_string(failed) + " criteria\n" : "ACCEPTANCE PASSED\n");
  return failed ? 1 : 0;
}
