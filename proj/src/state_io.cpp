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

#include "qmarkov/state_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qmarkov {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw StateFileError("SCHEMA_FIELD", std::string("missing field '") + key + "'");
  return doc.at(key);
}

SystemLayout parse_layout(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw StateFileError("SCHEMA_FIELD", "layout must be a non-empty array");
  std::vector<Factor> factors;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& f = arr[i];
    if (!f.is_array() || f.size() != 2 || !f[0].is_string() || !f[1].is_number_integer()) {
      throw StateFileError("SCHEMA_FIELD", "layout[" + std::to_string(i) + "] must be [label, dim]");
    }
    factors.push_back({f[0].get<std::string>(), f[1].get<int>()});
  }
  try {
    return SystemLayout(std::move(factors));
  } catch (const Error& e) {
    throw StateFileError("SCHEMA_FIELD", e.what());
  }
}

std::vector<Complex> parse_data(const json& arr, std::size_t expected) {
  if (!arr.is_array()) throw StateFileError("SCHEMA_FIELD", "data must be an array");
  if (arr.size() != expected) {
    throw StateFileError("SCHEMA_LEN", "data has " + std::to_string(arr.size()) + " entries, layout needs " +
                                           std::to_string(expected));
  }
  std::vector<Complex> out;
  out.reserve(expected);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& e = arr[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw StateFileError("SCHEMA_FIELD", "data[" + std::to_string(i) + "] must be [re, im]");
    }
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

std::string tag_for(ErrorCode code, bool pure) {
  switch (code) {
    case ErrorCode::kNotNormalized: return pure ? "NORM" : "TRACE";
    case ErrorCode::kDimensionMismatch: return "DIM_MISMATCH";
    case ErrorCode::kNotHermitian: return "NOT_HERMITIAN";
    case ErrorCode::kNotPositive: return "NOT_POSITIVE";
    default: return error_code_name(code);
  }
}

json layout_json(const SystemLayout& layout) {
  json arr = json::array();
  for (const auto& f : layout.factors()) arr.push_back(json::array({f.label, f.dim}));
  return arr;
}

}  // namespace

LoadedState parse_state(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw StateFileError("PARSE", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw StateFileError("SCHEMA_FIELD", "state document must be an object");
  const auto& version = field(doc, "version");
  if (!version.is_number_integer() || version.get<int>() != 1) {
    throw StateFileError("SCHEMA_FIELD", "unsupported version (expected 1)");
  }
  const auto& kind = field(doc, "kind");
  if (!kind.is_string() || (kind != "pure" && kind != "mixed")) {
    throw StateFileError("SCHEMA_FIELD", "kind must be \"pure\" or \"mixed\"");
  }
  const bool pure = kind == "pure";
  const SystemLayout layout = parse_layout(field(doc, "layout"));
  const auto d = static_cast<std::size_t>(layout.total_dim());
  const auto data = parse_data(field(doc, "data"), pure ? d : d * d);

  LoadedState out;
  try {
    if (pure) {
      CVector v(d);
      for (std::size_t i = 0; i < d; ++i) v(i) = data[i];
      out.pure = PureVec(layout, v, kFileNormTol);
    } else {
      CMatrix m(d, d);
      for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) m(i, j) = data[i * d + j];
      }
      out.mixed = DensityOp(layout, m, kFileNormTol);
    }
  } catch (const Error& e) {
    throw StateFileError(tag_for(e.code(), pure), e.what());
  }
  return out;
}

LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StateFileError("IO", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str());
}

std::string format_state(const PureVec& psi) {
  json doc = {{"version", 1}, {"kind", "pure"}, {"layout", layout_json(psi.layout())}};
  json data = json::array();
  for (Eigen::Index i = 0; i < psi.vec().size(); ++i) data.push_back({psi.vec()(i).real(), psi.vec()(i).imag()});
  doc["data"] = std::move(data);
  return doc.dump() + "\n";
}

std::string format_state(const DensityOp& rho) {
  json doc = {{"version", 1}, {"kind", "mixed"}, {"layout", layout_json(rho.layout())}};
  json data = json::array();
  for (Eigen::Index i = 0; i < rho.mat().rows(); ++i) {
    for (Eigen::Index j = 0; j < rho.mat().cols(); ++j) data.push_back({rho.mat()(i, j).real(), rho.mat()(i, j).imag()});
  }
  doc["data"] = std::move(data);
  return doc.dump() + "\n";
}

}  // namespace qmarkov
