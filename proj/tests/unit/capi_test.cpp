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


#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "eitk/eitk.h"

namespace {

const char kTen[] =
    R"({"alpha":0.3,"sigma":0.7,"beta":{"kind":"list","values":)"
    R"([1,-0.8,0.6,-0.5,0.45,-0.4,0.35,-0.3,0.25,-0.2]}})";

struct Params {
  eitk_params* p = nullptr;
  explicit Params(const char* json) {
    EXPECT_EQ(eitk_params_from_json(json, &p), EITK_OK) << eitk_last_error();
  }
  ~Params() { eitk_params_free(p); }
};

TEST(CApiTest, Version) { EXPECT_STREQ(eitk_version(), "0.3.0"); }

TEST(CApiTest, NullArgumentsAreRejected) {
  eitk_params* p = nullptr;
  EXPECT_EQ(eitk_params_from_json(nullptr, &p), EITK_INVALID_ARGUMENT);
  EXPECT_EQ(eitk_params_from_json("{}", nullptr), EITK_INVALID_ARGUMENT);
  double v = 0;
  EXPECT_EQ(eitk_path_eval(nullptr, 0.5, &v), EITK_INVALID_ARGUMENT);
  EXPECT_GT(std::strlen(eitk_last_error()), 0u);
  eitk_params_free(nullptr);
  eitk_path_free(nullptr);
  eitk_report_free(nullptr);
  eitk_string_free(nullptr);
}

TEST(CApiTest, InvalidParamsReportError) {
  eitk_params* p = nullptr;
  EXPECT_EQ(eitk_params_from_json(R"({"sigma":-1})", &p),
            EITK_INVALID_ARGUMENT);
  EXPECT_EQ(p, nullptr);
  EXPECT_NE(std::string(eitk_last_error()).find("sigma"), std::string::npos);
  EXPECT_EQ(eitk_params_from_json("{oops", &p), EITK_INVALID_ARGUMENT);
  EXPECT_EQ(eitk_params_from_file("/nonexistent.json", &p),
            EITK_INVALID_ARGUMENT);
}

TEST(CApiTest, ClassifyAndRoundTrip) {
  Params a(R"({"alpha":0,"sigma":0,"beta":{"kind":"powerlaw","c":1,"p":1,"signs":"alternating"}})");
  eitk_classification c{};
  ASSERT_EQ(eitk_params_classify(a.p, &c), EITK_OK);
  EXPECT_EQ(c.infinite_variation, 1);
  EXPECT_EQ(c.spectral, 3);
  char* json = nullptr;
  ASSERT_EQ(eitk_params_to_json(a.p, &json), EITK_OK);
  Params b(json);
  eitk_string_free(json);
  eitk_classification d{};
  ASSERT_EQ(eitk_params_classify(b.p, &d), EITK_OK);
  EXPECT_EQ(std::memcmp(&c, &d, sizeof c), 0);
  size_t n = 0;
  ASSERT_EQ(eitk_params_jump_count(a.p, &n), EITK_OK);
  EXPECT_GT(n, 100u);
}

TEST(CApiTest, PathQueries) {
  Params q(R"({"alpha":0,"sigma":0,"beta":{"kind":"list","values":[1]}})");
  eitk_path* path = nullptr;
  ASSERT_EQ(eitk_path_simulate(q.p, 4, 9, &path), EITK_OK);
  eitk_jump j{};
  size_t count = 0;
  ASSERT_EQ(eitk_path_jumps(path, &j, 1, &count), EITK_OK);
  ASSERT_EQ(count, 1u);
  double v = 0, left = 0;
  ASSERT_EQ(eitk_path_eval(path, j.location, &v), EITK_OK);
  ASSERT_EQ(eitk_path_eval_left(path, j.location, &left), EITK_OK);
  EXPECT_NEAR(v - left, 1.0, 1e-15);
  EXPECT_NEAR(left, -j.location, 1e-15);
  double m = 0, rho = 0, at = 0, before = 0;
  ASSERT_EQ(eitk_path_min(path, &m, &rho, &at, &before), EITK_OK);
  EXPECT_NEAR(m, -j.location, 1e-15);
  EXPECT_NEAR(rho, j.location, 1e-15);
  EXPECT_EQ(eitk_path_eval(path, 1.5, &v), EITK_INVALID_ARGUMENT);

  size_t faces = 0;
  ASSERT_EQ(eitk_path_minorant(path, nullptr, 0, &faces), EITK_OK);
  std::vector<eitk_face> buf(faces);
  ASSERT_EQ(eitk_path_minorant(path, buf.data(), buf.size(), &faces), EITK_OK);
  ASSERT_EQ(faces, 2u);
  EXPECT_NEAR(buf[0].slope, -1.0, 1e-12);
  EXPECT_NEAR(buf[1].end_value, 0.0, 1e-12);

  eitk_path* rev = nullptr;
  ASSERT_EQ(eitk_path_reverse(path, &rev), EITK_OK);
  ASSERT_EQ(eitk_path_jumps(rev, &j, 1, &count), EITK_OK);
  eitk_jump orig{};
  eitk_path_jumps(path, &orig, 1, &count);
  EXPECT_NEAR(j.location, 1.0 - orig.location, 1e-15);
  eitk_path_free(rev);
  eitk_path_free(path);
}

TEST(CApiTest, Tilting) {
  Params one(R"({"alpha":0,"sigma":0,"beta":{"kind":"list","values":[1]}})");
  double m = 0, lm = 0;
  ASSERT_EQ(eitk_mgf(one.p, 0.5, 1.0, &m), EITK_OK);
  ASSERT_EQ(eitk_log_mgf(one.p, 0.5, 1.0, &lm), EITK_OK);
  EXPECT_NEAR(m, std::cosh(0.5), 1e-12);
  EXPECT_NEAR(lm, std::log(std::cosh(0.5)), 1e-12);
  Params ten(kTen);
  size_t count = 0;
  ASSERT_EQ(eitk_tilt_probabilities(ten.p, 0.0, 0.3, nullptr, 0, &count),
            EITK_OK);
  EXPECT_EQ(count, 10u);
  std::vector<double> p(count);
  ASSERT_EQ(eitk_tilt_probabilities(ten.p, 0.0, 0.3, p.data(), p.size(), &count),
            EITK_OK);
  for (double x : p) EXPECT_DOUBLE_EQ(x, 0.3);
  double mean = 0;
  EXPECT_EQ(eitk_mean_alpha_theta(ten.p, 1.0, 1.5, &mean),
            EITK_INVALID_ARGUMENT);
}

TEST(CApiTest, RunSpitzer) {
  eitk_report* r = nullptr;
  ASSERT_EQ(eitk_run(R"({"command":"identity","kind":"spitzer",)"
                     R"("knobs":{"walk_n":2,"p":0.5}})",
                     &r),
            EITK_OK)
      << eitk_last_error();
  int passed = 0;
  ASSERT_EQ(eitk_report_passed(r, &passed), EITK_OK);
  EXPECT_EQ(passed, 1);
  double lhs = 0;
  ASSERT_EQ(eitk_report_statistic(r, "lhs", &lhs), EITK_OK);
  EXPECT_DOUBLE_EQ(lhs, 0.75);
  EXPECT_EQ(eitk_report_statistic(r, "nope", &lhs), EITK_INVALID_ARGUMENT);
  char* json = nullptr;
  ASSERT_EQ(eitk_report_json(r, &json), EITK_OK);
  EXPECT_NE(std::string(json).find("identity-spitzer"), std::string::npos);
  eitk_string_free(json);
  char* csv = nullptr;
  ASSERT_EQ(eitk_report_csv(r, &csv), EITK_OK);
  eitk_string_free(csv);
  eitk_report_free(r);
}

TEST(CApiTest, RunErrors) {
  eitk_report* r = nullptr;
  EXPECT_EQ(eitk_run(R"({"command":"nope"})", &r), EITK_INVALID_ARGUMENT);
  EXPECT_EQ(r, nullptr);
  EXPECT_EQ(eitk_run("not json", &r), EITK_INVALID_ARGUMENT);
}

TEST(CApiTest, AggregateEmptyDirectory) {
  namespace fs = std::filesystem;
  const fs::path d = fs::temp_directory_path() / "eitk_capi_empty";
  fs::remove_all(d);
  fs::create_directories(d);
  char* csv = nullptr;
  char* warn = nullptr;
  ASSERT_EQ(eitk_aggregate_reports(d.c_str(), &csv, &warn), EITK_OK);
  EXPECT_STREQ(csv, "file,name,verdict,key,value\n");
  eitk_string_free(csv);
  eitk_string_free(warn);
}

}  // namespace
