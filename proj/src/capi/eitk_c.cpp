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

#include "eitk/eitk.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "eitk/minorant.hpp"
#include "eitk/params.hpp"
#include "eitk/path.hpp"
#include "eitk/runner.hpp"
#include "eitk/tilting.hpp"

struct eitk_params {
  eitk::CanonicalParams value;
};

struct eitk_path {
  eitk::EIPath value;
};

struct eitk_report {
  eitk::RunResult value;
};

namespace {

thread_local std::string g_last_error;

eitk_status Fail(eitk_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
eitk_status Guard(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const eitk::InvalidArgument& e) {
    return Fail(EITK_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(EITK_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return Fail(EITK_INTERNAL_ERROR, e.what());
  } catch (...) {
    return Fail(EITK_INTERNAL_ERROR, "unknown error");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Require(const void* p, const char* name) {
  if (p == nullptr) {
    throw eitk::InvalidArgument(std::string(name) + " must not be null");
  }
}

}  // namespace

extern "C" {

const char* eitk_version(void) {
  static const std::string v = eitk::Version();
  return v.c_str();
}

const char* eitk_last_error(void) { return g_last_error.c_str(); }

void eitk_string_free(char* s) { std::free(s); }

eitk_status eitk_params_from_json(const char* json, eitk_params** out) {
  return Guard([&] {
    Require(json, "json");
    Require(out, "out");
    *out = new eitk_params{eitk::ParamsFromJson(json)};
    return EITK_OK;
  });
}

eitk_status eitk_params_from_file(const char* path, eitk_params** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new eitk_params{eitk::ParamsFromFile(path)};
    return EITK_OK;
  });
}

void eitk_params_free(eitk_params* p) { delete p; }

eitk_status eitk_params_classify(const eitk_params* p,
                                 eitk_classification* out) {
  return Guard([&] {
    Require(p, "params");
    Require(out, "out");
    const eitk::Classification c = eitk::Classify(p->value);
    out->infinite_variation = c.variation == eitk::Variation::kInfinite;
    out->um = c.um;
    out->npl = c.npl;
    out->spectral = static_cast<int>(c.spectral);
    return EITK_OK;
  });
}

eitk_status eitk_params_to_json(const eitk_params* p, char** out) {
  return Guard([&] {
    Require(p, "params");
    Require(out, "out");
    *out = CopyString(eitk::ParamsToJson(p->value));
    return EITK_OK;
  });
}

eitk_status eitk_params_jump_count(const eitk_params* p, size_t* out) {
  return Guard([&] {
    Require(p, "params");
    Require(out, "out");
    *out = p->value.TruncationIndex();
    return EITK_OK;
  });
}

eitk_status eitk_path_simulate(const eitk_params* p, int grid_level,
                               uint64_t seed, eitk_path** out) {
  return Guard([&] {
    Require(p, "params");
    Require(out, "out");
    *out = new eitk_path{eitk::SimulatePath(p->value, grid_level, seed)};
    return EITK_OK;
  });
}

void eitk_path_free(eitk_path* path) { delete path; }

eitk_status eitk_path_eval(const eitk_path* path, double t, double* out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = path->value.Eval(t);
    return EITK_OK;
  });
}

eitk_status eitk_path_eval_left(const eitk_path* path, double t, double* out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = path->value.EvalLeft(t);
    return EITK_OK;
  });
}

eitk_status eitk_path_min(const eitk_path* path, double* min_value,
                          double* rho, double* value_at_rho,
                          double* left_at_rho) {
  return Guard([&] {
    Require(path, "path");
    const eitk::MinLocation m = eitk::MinAndLocation(path->value);
    if (min_value != nullptr) *min_value = m.min_value;
    if (rho != nullptr) *rho = m.rho;
    if (value_at_rho != nullptr) *value_at_rho = m.value_at_rho;
    if (left_at_rho != nullptr) *left_at_rho = m.left_at_rho;
    return EITK_OK;
  });
}

eitk_status eitk_path_reverse(const eitk_path* path, eitk_path** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new eitk_path{path->value.Reversed()};
    return EITK_OK;
  });
}

eitk_status eitk_path_jumps(const eitk_path* path, eitk_jump* buf, size_t cap,
                            size_t* count) {
  return Guard([&] {
    Require(path, "path");
    Require(count, "count");
    const auto jumps = path->value.jumps();
    *count = jumps.size();
    if (cap > 0) Require(buf, "buf");
    for (std::size_t i = 0; i < jumps.size() && i < cap; ++i) {
      buf[i] = {jumps[i].location, jumps[i].size};
    }
    return EITK_OK;
  });
}

eitk_status eitk_path_minorant(const eitk_path* path, eitk_face* buf,
                               size_t cap, size_t* count) {
  return Guard([&] {
    Require(path, "path");
    Require(count, "count");
    const eitk::ConvexMinorant c =
        eitk::ComputeMinorant(path->value.ToPolyline());
    const auto faces = c.faces();
    *count = faces.size();
    if (cap > 0) Require(buf, "buf");
    for (std::size_t i = 0; i < faces.size() && i < cap; ++i) {
      const eitk::Face& f = faces[i];
      buf[i] = {f.start_time, f.end_time, f.start_value, f.end_value, f.slope};
    }
    return EITK_OK;
  });
}

eitk_status eitk_mgf(const eitk_params* p, double t, double theta,
                     double* out) {
  return Guard([&] {
    Require(p, "params");
    Require(out, "out");
    *out = eitk::Mgf(p->value, t, theta);
    return EITK_OK;
  });
}

eitk_status eitk_log_mgf(const eitk_params* p, double t, double theta,
                         double* out) {
  return Guard([&] {
    Require(p, "params");
    Require(out, "out");
    *out = eitk::LogMgf(p->value, t, theta);
    return EITK_OK;
  });
}

eitk_status eitk_tilt_probabilities(const eitk_params* p, double theta,
                                    double T, double* buf, size_t cap,
                                    size_t* count) {
  return Guard([&] {
    Require(p, "params");
    Require(count, "count");
    eitk::TiltParams tilt{theta, T};
    tilt.Validate();
    const auto probs = eitk::TiltProbabilities(p->value, tilt);
    *count = probs.size();
    if (cap > 0) Require(buf, "buf");
    for (std::size_t i = 0; i < probs.size() && i < cap; ++i) buf[i] = probs[i];
    return EITK_OK;
  });
}

eitk_status eitk_mean_alpha_theta(const eitk_params* p, double theta, double T,
                                  double* out) {
  return Guard([&] {
    Require(p, "params");
    Require(out, "out");
    eitk::TiltParams tilt{theta, T};
    tilt.Validate();
    *out = eitk::MeanAlphaTheta(p->value, tilt);
    return EITK_OK;
  });
}

eitk_status eitk_run(const char* config_json, eitk_report** out) {
  return Guard([&] {
    Require(config_json, "config_json");
    Require(out, "out");
    *out = nullptr;
    const eitk::RunConfig config = eitk::RunConfigFromJson(config_json);
    eitk::RunResult r = eitk::Run(config);
    switch (r.exit_code) {
      case eitk::kExitUsage:
        return Fail(EITK_INVALID_ARGUMENT, r.message.c_str());
      case eitk::kExitCrash:
        return Fail(EITK_INTERNAL_ERROR, r.message.c_str());
      default:
        break;
    }
    const int code = r.exit_code;
    *out = new eitk_report{std::move(r)};
    return code == eitk::kExitPass ? EITK_OK : EITK_VERDICT_FAIL;
  });
}

void eitk_report_free(eitk_report* r) { delete r; }

eitk_status eitk_report_json(const eitk_report* r, char** out) {
  return Guard([&] {
    Require(r, "report");
    Require(out, "out");
    if (!r->value.report) {
      throw eitk::InvalidArgument("aggregate runs carry no single report");
    }
    *out = CopyString(eitk::ReportToJson(*r->value.report));
    return EITK_OK;
  });
}

eitk_status eitk_report_csv(const eitk_report* r, char** out) {
  return Guard([&] {
    Require(r, "report");
    Require(out, "out");
    if (r->value.aggregate) {
      *out = CopyString(r->value.aggregate->ToCsv());
    } else {
      *out = CopyString(eitk::TableToCsv(r->value.report->table));
    }
    return EITK_OK;
  });
}

eitk_status eitk_report_passed(const eitk_report* r, int* out) {
  return Guard([&] {
    Require(r, "report");
    Require(out, "out");
    *out = r->value.exit_code == eitk::kExitPass;
    return EITK_OK;
  });
}

eitk_status eitk_report_statistic(const eitk_report* r, const char* key,
                                  double* out) {
  return Guard([&] {
    Require(r, "report");
    Require(key, "key");
    Require(out, "out");
    if (!r->value.report || !r->value.report->Has(key)) {
      throw eitk::InvalidArgument(std::string("no statistic '") + key + "'");
    }
    *out = r->value.report->Get(key);
    return EITK_OK;
  });
}

eitk_status eitk_aggregate_reports(const char* dir, char** csv_out,
                                   char** warnings_out) {
  return Guard([&] {
    Require(dir, "dir");
    Require(csv_out, "csv_out");
    const eitk::Aggregate a = eitk::AggregateReports(dir);
    std::string warn;
    for (const auto& w : a.warnings) warn += w + "\n";
    *csv_out = CopyString(a.ToCsv());
    if (warnings_out != nullptr) *warnings_out = CopyString(warn);
    return a.all_pass() ? EITK_OK : EITK_VERDICT_FAIL;
  });
}

}  // extern "C"
