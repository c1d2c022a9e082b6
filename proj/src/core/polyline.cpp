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

#include "eitk/polyline.hpp"

#include <algorithm>
#include <cmath>

#include "eitk/params.hpp"

namespace eitk {

Polyline::Polyline(std::vector<double> times, std::vector<double> lefts,
                   std::vector<double> values)
    : times_(std::move(times)),
      lefts_(std::move(lefts)),
      values_(std::move(values)) {
  if (times_.size() != lefts_.size() || times_.size() != values_.size()) {
    throw InvalidArgument("polyline arrays differ in length");
  }
  for (std::size_t j = 1; j < times_.size(); ++j) {
    if (!(times_[j] > times_[j - 1])) {
      throw InvalidArgument("polyline knots must be strictly increasing");
    }
  }
}

void Polyline::Append(double t, double left, double value) {
  if (!times_.empty()) {
    const double last = times_.back();
    if (t <= last) {
      // Seams computed along different arithmetic routes may land an ulp or
      // two apart; anything larger is a caller bug.
      if (last - t > 1e-12 * (1.0 + std::abs(last))) {
        throw InvalidArgument("polyline knots appended out of order");
      }
      values_.back() = value;
      return;
    }
  }
  times_.push_back(t);
  lefts_.push_back(times_.size() == 1 ? value : left);
  values_.push_back(value);
}

std::size_t Polyline::FindKnot(double t) const {
  auto it = std::lower_bound(times_.begin(), times_.end(), t);
  if (it != times_.end() && *it == t) {
    return static_cast<std::size_t>(it - times_.begin());
  }
  return times_.size();
}

double Polyline::Eval(double t) const {
  if (times_.empty() || t < start() || t > end() || std::isnan(t)) {
    throw InvalidArgument("evaluation time outside the path domain");
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - times_.begin()) - 1;
  if (times_[j] == t || j + 1 == times_.size()) return values_[j];
  const double w = (t - times_[j]) / (times_[j + 1] - times_[j]);
  return values_[j] + w * (lefts_[j + 1] - values_[j]);
}

double Polyline::EvalLeft(double t) const {
  const std::size_t k = FindKnot(t);
  if (k < times_.size()) return lefts_[k];
  return Eval(t);
}

Polyline Polyline::WithKnot(double t) const {
  if (FindKnot(t) < size()) return *this;
  const double v = Eval(t);
  Polyline out;
  out.times_.reserve(size() + 1);
  out.lefts_.reserve(size() + 1);
  out.values_.reserve(size() + 1);
  bool inserted = false;
  for (std::size_t j = 0; j < size(); ++j) {
    if (!inserted && times_[j] > t) {
      out.times_.push_back(t);
      out.lefts_.push_back(v);
      out.values_.push_back(v);
      inserted = true;
    }
    out.times_.push_back(times_[j]);
    out.lefts_.push_back(lefts_[j]);
    out.values_.push_back(values_[j]);
  }
  return out;
}

MinLocation Polyline::Min() const {
  MinLocation m;
  if (empty()) return m;
  m.min_value = values_[0];
  m.rho = times_[0];
  m.attained_from_left = false;
  for (std::size_t j = 0; j < size(); ++j) {
    // The left limit precedes the value in time order.
    if (j > 0 && lefts_[j] < m.min_value) {
      m.min_value = lefts_[j];
      m.rho = times_[j];
      m.attained_from_left = lefts_[j] < values_[j];
    }
    if (values_[j] < m.min_value) {
      m.min_value = values_[j];
      m.rho = times_[j];
      m.attained_from_left = false;
    }
  }
  m.tau = m.rho;
  for (std::size_t j = size(); j-- > 0;) {
    if (lower(j) == m.min_value) {
      m.tau = times_[j];
      break;
    }
  }
  const std::size_t k = FindKnot(m.rho);
  m.value_at_rho = values_[k];
  m.left_at_rho = lefts_[k];
  return m;
}

double Polyline::Max() const {
  double best = values_.empty() ? 0.0 : values_[0];
  for (std::size_t j = 0; j < size(); ++j) {
    best = std::max({best, lefts_[j], values_[j]});
  }
  return best;
}

double Polyline::ArgMax() const {
  const double best = Max();
  for (std::size_t j = 0; j < size(); ++j) {
    if (lefts_[j] == best || values_[j] == best) return times_[j];
  }
  return start();
}

Polyline Polyline::Shifted(double dt, double dv) const {
  Polyline out = *this;
  for (std::size_t j = 0; j < size(); ++j) {
    out.times_[j] += dt;
    out.lefts_[j] += dv;
    out.values_[j] += dv;
  }
  return out;
}

Polyline Polyline::PlusLinear(double slope, double intercept) const {
  Polyline out = *this;
  for (std::size_t j = 0; j < size(); ++j) {
    const double add = intercept + slope * times_[j];
    out.lefts_[j] += add;
    out.values_[j] += add;
  }
  return out;
}

}  // namespace eitk
