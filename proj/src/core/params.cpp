// Copyright 2026 The eitk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eitk/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace eitk {

using nlohmann::json;

double PowerLawBetas::Term(std::size_t i) const {
  const double mag = c * std::pow(static_cast<double>(i), -p);
  switch (signs) {
    case SignPattern::kPositive:
      return mag;
    case SignPattern::kNegative:
      return -mag;
    case SignPattern::kAlternating:
      return (i % 2 == 0) ? mag : -mag;
  }
  return mag;
}

void CanonicalParams::Validate() const {
  if (!std::isfinite(alpha)) throw InvalidArgument("alpha must be finite");
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InvalidArgument("sigma must be finite and nonnegative");
  }
  if (!std::isfinite(truncation_tol) || truncation_tol < 0.0) {
    throw InvalidArgument("truncation_tol must be finite and nonnegative");
  }
  if (const auto* list = std::get_if<BetaList>(&betas)) {
    for (double b : list->values) {
      if (!std::isfinite(b)) throw InvalidArgument("beta values must be finite");
    }
    return;
  }
  const auto& pl = std::get<PowerLawBetas>(betas);
  if (!(pl.c > 0.0) || !std::isfinite(pl.c)) {
    throw InvalidArgument("beta.c must be positive");
  }
  if (!(pl.p > 0.5) || !std::isfinite(pl.p)) {
    throw InvalidArgument("beta.p must exceed 1/2 for square summability");
  }
  if (!max_jumps && truncation_tol <= 0.0) {
    throw InvalidArgument("power-law betas need truncation_tol > 0");
  }
}

double CanonicalParams::TailSquareBound(std::size_t n) const {
  if (const auto* list = std::get_if<BetaList>(&betas)) {
    double s = 0.0;
    for (std::size_t i = n; i < list->values.size(); ++i) {
      s += list->values[i] * list->values[i];
    }
    return s;
  }
  const auto& pl = std::get<PowerLawBetas>(betas);
  const double q = 2.0 * pl.p;
  // sum_{i>n} i^-q <= integral_n^inf x^-q dx; for n = 0 add the first term.
  if (n == 0) return pl.c * pl.c * (1.0 + 1.0 / (q - 1.0));
  return pl.c * pl.c * std::pow(static_cast<double>(n), 1.0 - q) / (q - 1.0);
}

std::size_t CanonicalParams::TruncationIndex() const {
  if (const auto* list = std::get_if<BetaList>(&betas)) {
    if (max_jumps) return std::min(*max_jumps, list->values.size());
    return list->values.size();
  }
  if (max_jumps) return *max_jumps;
  const auto& pl = std::get<PowerLawBetas>(betas);
  const double q = 2.0 * pl.p;
  const double raw = std::pow(pl.c * pl.c / ((q - 1.0) * truncation_tol *
                                             truncation_tol),
                              1.0 / (q - 1.0));
  if (!(raw < static_cast<double>(kMaxMaterializedJumps))) {
    throw InvalidArgument("truncation_tol too small: more than 2^26 jumps");
  }
  std::size_t n = static_cast<std::size_t>(std::ceil(raw));
  while (n > 1 && TailSquareBound(n - 1) <= truncation_tol * truncation_tol) {
    --n;
  }
  return std::max<std::size_t>(n, 1);
}

std::vector<double> CanonicalParams::MaterializeBetas() const {
  const std::size_t n = TruncationIndex();
  if (n > kMaxMaterializedJumps) {
    throw InvalidArgument("too many jumps requested");
  }
  if (const auto* list = std::get_if<BetaList>(&betas)) {
    return {list->values.begin(), list->values.begin() + n};
  }
  const auto& pl = std::get<PowerLawBetas>(betas);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = pl.Term(i + 1);
  return out;
}

double CanonicalParams::FiniteVariationDrift() const {
  double s = 0.0;
  for (double b : MaterializeBetas()) s += b;
  return alpha - s;
}

CanonicalParams CanonicalParams::Scaled(double factor) const {
  CanonicalParams out = *this;
  out.alpha *= factor;
  out.sigma *= std::abs(factor);
  if (auto* list = std::get_if<BetaList>(&out.betas)) {
    for (double& b : list->values) b *= factor;
  } else {
    auto& pl = std::get<PowerLawBetas>(out.betas);
    pl.c *= std::abs(factor);
    if (factor < 0.0) {
      if (pl.signs == SignPattern::kPositive) {
        pl.signs = SignPattern::kNegative;
      } else if (pl.signs == SignPattern::kNegative) {
        pl.signs = SignPattern::kPositive;
      } else {
        // -(-1)^i is not an alternating pattern in our convention.
        throw InvalidArgument("cannot negate an alternating power law");
      }
    }
    out.truncation_tol *= std::abs(factor);
  }
  return out;
}

Classification Classify(const CanonicalParams& params) {
  Classification out;
  if (const auto* list = std::get_if<BetaList>(&params.betas)) {
    std::size_t nonzero = 0, pos = 0, neg = 0;
    double sum = 0.0;
    for (double b : list->values) {
      sum += b;
      if (b != 0.0) ++nonzero;
      if (b > 0.0) ++pos;
      if (b < 0.0) ++neg;
    }
    out.variation =
        params.sigma > 0.0 ? Variation::kInfinite : Variation::kFinite;
    out.npl = params.sigma > 0.0;
    out.um = params.sigma != 0.0 || sum != params.alpha;
    if (nonzero == 0) {
      out.spectral = Spectral::kNone;
    } else if (neg == 0) {
      out.spectral = Spectral::kPositive;
    } else if (pos == 0) {
      out.spectral = Spectral::kNegative;
    } else {
      out.spectral = Spectral::kTwoSided;
    }
    return out;
  }
  const auto& pl = std::get<PowerLawBetas>(params.betas);
  out.variation = (params.sigma > 0.0 || pl.p <= 1.0) ? Variation::kInfinite
                                                       : Variation::kFinite;
  out.npl = true;
  out.um = true;
  switch (pl.signs) {
    case SignPattern::kPositive:
      out.spectral = Spectral::kPositive;
      break;
    case SignPattern::kNegative:
      out.spectral = Spectral::kNegative;
      break;
    case SignPattern::kAlternating:
      out.spectral = Spectral::kTwoSided;
      break;
  }
  return out;
}

std::string ToString(Variation v) {
  return v == Variation::kInfinite ? "infinite" : "finite";
}

std::string ToString(Spectral s) {
  switch (s) {
    case Spectral::kNone:
      return "none";
    case Spectral::kPositive:
      return "positive";
    case Spectral::kNegative:
      return "negative";
    case Spectral::kTwoSided:
      return "two-sided";
  }
  return "none";
}

std::string ToString(SignPattern s) {
  switch (s) {
    case SignPattern::kAlternating:
      return "alternating";
    case SignPattern::kPositive:
      return "positive";
    case SignPattern::kNegative:
      return "negative";
  }
  return "positive";
}

SignPattern ParseSignPattern(const std::string& s) {
  if (s == "alternating") return SignPattern::kAlternating;
  if (s == "positive") return SignPattern::kPositive;
  if (s == "negative") return SignPattern::kNegative;
  throw InvalidArgument("unknown beta.signs: " + s);
}

namespace {

// Folds "beta.kind"-style keys into a nested "beta" object.
json Unflatten(const json& in) {
  json out = json::object();
  for (auto it = in.begin(); it != in.end(); ++it) {
    const std::string& key = it.key();
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      if (out.contains(key) && out[key].is_object() && it->is_object()) {
        out[key].update(*it);
      } else {
        out[key] = *it;
      }
    } else {
      out[key.substr(0, dot)][key.substr(dot + 1)] = *it;
    }
  }
  return out;
}

double GetNumber(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw InvalidArgument(std::string("expected a number for key ") + key);
  }
  return j[key].get<double>();
}

}  // namespace

CanonicalParams ParamsFromJson(const std::string& text, int* grid_level) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed parameter document: ") +
                          e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("parameters must be an object");
  doc = Unflatten(doc);

  CanonicalParams p;
  p.alpha = GetNumber(doc, "alpha", 0.0);
  p.sigma = GetNumber(doc, "sigma", 0.0);
  p.truncation_tol = GetNumber(doc, "truncation_tol", 1e-2);
  if (doc.contains("max_jumps")) {
    p.max_jumps = doc["max_jumps"].get<std::size_t>();
  }
  if (grid_level != nullptr && doc.contains("grid_level")) {
    *grid_level = doc["grid_level"].get<int>();
  }
  if (doc.contains("beta")) {
    const json& beta = doc["beta"];
    if (!beta.is_object() || !beta.contains("kind")) {
      throw InvalidArgument("beta must be an object with a kind");
    }
    const std::string kind = beta["kind"].get<std::string>();
    if (kind == "list") {
      BetaList list;
      if (beta.contains("values")) {
        list.values = beta["values"].get<std::vector<double>>();
      }
      p.betas = list;
    } else if (kind == "powerlaw") {
      PowerLawBetas pl;
      pl.c = GetNumber(beta, "c", 1.0);
      pl.p = GetNumber(beta, "p", 1.0);
      pl.signs = ParseSignPattern(beta.value("signs", std::string("positive")));
      p.betas = pl;
    } else {
      throw InvalidArgument("unknown beta.kind: " + kind);
    }
  }
  p.Validate();
  return p;
}

CanonicalParams ParamsFromFile(const std::string& path, int* grid_level) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open parameter file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParamsFromJson(ss.str(), grid_level);
}

std::string ParamsToJson(const CanonicalParams& params) {
  json j;
  j["alpha"] = params.alpha;
  j["sigma"] = params.sigma;
  j["truncation_tol"] = params.truncation_tol;
  if (params.max_jumps) j["max_jumps"] = *params.max_jumps;
  if (const auto* list = std::get_if<BetaList>(&params.betas)) {
    j["beta"] = {{"kind", "list"}, {"values", list->values}};
  } else {
    const auto& pl = std::get<PowerLawBetas>(params.betas);
    j["beta"] = {{"kind", "powerlaw"},
                 {"c", pl.c},
                 {"p", pl.p},
                 {"signs", ToString(pl.signs)}};
  }
  return j.dump();
}

std::uint64_t ParamsHash(const CanonicalParams& params) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : ParamsToJson(params)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace eitk
