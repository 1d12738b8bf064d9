/* Copyright 2026 The EdgeMark Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "edgemark/dataset.hpp"
#include "edgemark/error.hpp"
#include "testutil.hpp"

using namespace edgemark;

namespace {

DatasetSpec classification_spec() {
  DatasetSpec ds;
  ds.kind = DatasetKind::kRandomClassification;
  ds.feature_shape = {6};
  ds.num_classes = 4;
  return ds;
}

}  // namespace

TEST_CASE("samples are a pure function of spec, count and seed") {
  DatasetSpec ds = classification_spec();
  SampleSet a = generate_samples(ds, 8, 11);
  SampleSet b = generate_samples(ds, 8, 11);
  REQUIRE(a.size() == 8);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.inputs[i].f == b.inputs[i].f);
    CHECK(a.targets[i] == b.targets[i]);
  }
  SampleSet c = generate_samples(ds, 8, 12);
  CHECK(a.inputs[0].f != c.inputs[0].f);
}

TEST_CASE("sample i depends only on seed and i") {
  DatasetSpec ds;
  ds.kind = DatasetKind::kRandomRegression;
  ds.feature_shape = {10};
  ds.target_dim = 3;
  SampleSet small = generate_samples(ds, 3, 7);
  SampleSet big = generate_samples(ds, 40, 7);
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(small.inputs[i].f == big.inputs[i].f);
    CHECK(small.targets[i] == big.targets[i]);
  }
}

TEST_CASE("features live in the unit interval") {
  DatasetSpec ds = classification_spec();
  SampleSet set = generate_samples(ds, 32, 5);
  for (const auto& t : set.inputs) {
    for (float v : t.f) {
      CHECK(v >= 0.0f);
      CHECK(v < 1.0f);
    }
  }
  // Classification targets are one-hot.
  for (const auto& target : set.targets) {
    REQUIRE(target.size() == 4);
    float sum = 0.0f;
    for (float v : target) {
      CHECK((v == 0.0f || v == 1.0f));
      sum += v;
    }
    CHECK(sum == 1.0f);
  }
}

TEST_CASE("sinus is a fixed grid and ignores the seed") {
  DatasetSpec ds;
  ds.kind = DatasetKind::kSinus;
  ds.feature_shape = {1};
  SampleSet a = generate_samples(ds, 9, 1);
  SampleSet b = generate_samples(ds, 9, 999);
  REQUIRE(a.size() == 9);
  CHECK(a.inputs.front().f[0] == doctest::Approx(-std::numbers::pi));
  CHECK(a.inputs.back().f[0] == doctest::Approx(std::numbers::pi));
  CHECK(a.inputs[4].f[0] == doctest::Approx(0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.inputs[i].f == b.inputs[i].f);
    CHECK(a.targets[i][0] == doctest::Approx(std::sin(a.inputs[i].f[0])));
  }
}

TEST_CASE("token sequences draw integer tokens in range") {
  DatasetSpec ds;
  ds.kind = DatasetKind::kRandomSequence;
  ds.sequence_length = 12;
  ds.num_classes = 65;
  DatasetIoInfo info = dataset_io_info(ds);
  CHECK(info.token_input);
  CHECK(info.vocab == 65);
  CHECK(info.per_step_head);
  CHECK(info.input_shape == std::vector<int>{12});

  SampleSet set = generate_samples(ds, 4, 3);
  for (const auto& t : set.inputs) {
    CHECK(t.dtype == DType::kI32);
    REQUIRE(t.q.size() == 12);
    for (auto v : t.q) {
      CHECK(v >= 0);
      CHECK(v < 65);
    }
  }
  // Next-token targets: target[j] is the class index of token j + 1.
  const auto& q = set.inputs[0].q;
  const auto& target = set.targets[0];
  for (std::size_t j = 0; j + 1 < q.size(); ++j) {
    CHECK(target[j] == static_cast<float>(q[j + 1]));
  }
}

TEST_CASE("float sequences shift to make next-frame targets") {
  DatasetSpec ds;
  ds.kind = DatasetKind::kRandomSequence;
  ds.sequence_length = 5;
  ds.feature_shape = {3};
  DatasetIoInfo info = dataset_io_info(ds);
  CHECK(info.input_shape == std::vector<int>{5, 3});
  CHECK(info.head_dim == 3);

  SampleSet set = generate_samples(ds, 2, 21);
  const auto& x = set.inputs[0].f;
  const auto& target = set.targets[0];
  REQUIRE(target.size() == x.size());
  for (std::size_t j = 0; j + 3 < x.size(); ++j) {
    CHECK(target[j] == x[j + 3]);
  }
}

TEST_CASE("csv datasets return every row") {
  auto dir = testutil::scratch_dir("dataset_csv");
  auto path = testutil::write_file(dir / "tiny.csv",
                                   "0.5,1.5,10\n"
                                   "0.25,2.5,20\n"
                                   "0.125,3.5,30\n");
  DatasetSpec ds;
  ds.kind = DatasetKind::kCsvFile;
  ds.csv_path = path.string();

  DatasetIoInfo info = dataset_io_info(ds);
  CHECK(info.input_shape == std::vector<int>{2});

  SampleSet set = generate_samples(ds, 0, 0);
  REQUIRE(set.size() == 3);
  CHECK(set.inputs[1].f == std::vector<float>{0.25f, 2.5f});
  CHECK(set.targets[2] == std::vector<float>{30.0f});
}

TEST_CASE("csv errors are reported with kind and location") {
  auto dir = testutil::scratch_dir("dataset_csv_bad");
  DatasetSpec ds;
  ds.kind = DatasetKind::kCsvFile;

  ds.csv_path = (dir / "missing.csv").string();
  CHECK_THROWS_AS(dataset_io_info(ds), Error);

  ds.csv_path =
      testutil::write_file(dir / "ragged.csv", "1,2,3\n1,2\n").string();
  try {
    generate_samples(ds, 0, 0);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::kSyntax);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }

  ds.csv_path =
      testutil::write_file(dir / "alpha.csv", "1,abc\n").string();
  CHECK_THROWS_AS(generate_samples(ds, 0, 0), Error);
}

TEST_CASE("sample count must be positive for generated sets") {
  DatasetSpec ds = classification_spec();
  CHECK_THROWS_AS(generate_samples(ds, 0, 1), Error);
}
