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

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace qmarkov {

inline constexpr std::uint64_t kAcceptanceSeed = 7;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  ///< measured values, fixed formatting, no timings
};

/// Runs the numbered acceptance criteria (1-9; determinism is checked by
/// running this twice). Wall times go to `timing` when given, never into the
/// results, so the formatted report is reproducible.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed, const std::vector<int>& which = {},
                                            std::ostream* timing = nullptr);

/// One "PASS|FAIL <id> <name>: <detail>" line per criterion.
std::string format_acceptance(const std::vector<CriterionResult>& results);

}  // namespace qmarkov
