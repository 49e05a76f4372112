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

#include <optional>
#include <string>

#include "qmarkov/qmat.hpp"

namespace qmarkov {

/// Rejection of a state document. `tag` is a stable identifier such as
/// SCHEMA_LEN, SCHEMA_FIELD, PARSE, NORM, TRACE or DIM_MISMATCH.
class StateFileError : public std::runtime_error {
 public:
  StateFileError(std::string tag, const std::string& what)
      : std::runtime_error(what), tag_(std::move(tag)) {}
  const std::string& tag() const noexcept { return tag_; }

 private:
  std::string tag_;
};

inline constexpr double kFileNormTol = 1e-6;

/// Exactly one of `pure` / `mixed` is set.
struct LoadedState {
  std::optional<PureVec> pure;
  std::optional<DensityOp> mixed;

  bool is_pure() const { return pure.has_value(); }
  const SystemLayout& layout() const { return pure ? pure->layout() : mixed->layout(); }
  DensityOp density() const { return pure ? DensityOp::from_pure(*pure) : *mixed; }
};

/// Document: {"version":1,"kind":"pure"|"mixed","layout":[["A",2],...],
/// "data":[[re,im],...]} with row-major matrix entries for mixed states.
LoadedState parse_state(const std::string& text);
LoadedState load_state_file(const std::string& path);

std::string format_state(const PureVec& psi);
std::string format_state(const DensityOp& rho);

}  // namespace qmarkov
