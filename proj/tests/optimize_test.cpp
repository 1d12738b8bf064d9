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

#include <algorithm>
#include <cmath>
#include <set>

#include "edgemark/config.hpp"
#include "edgemark/dataset.hpp"
#include "edgemark/error.hpp"
#include "edgemark/graph.hpp"
#include "edgemark/optimize.hpp"
#include "edgemark/pipeline.hpp"
#include "testutil.hpp"

using namespace edgemark;

namespace {

ModelSpec spec_of(const std::string& stem) {
  return parse_model_config(testutil::config_dir() / (stem + ".yaml"));
}

SampleSet calib_for(const ModelSpec& spec) {
  return generate_samples(spec.dataset, kCalibrationSamples,
                          calibration_seed(spec));
}

}  // namespace

TEST_CASE("variant names are canonical and parse back") {
  auto variants = all_variants();
  CHECK(variants.size() == 11);
  std::set<std::string> names;
  for (const auto& vd : variants) {
    CAPTURE(vd.name());
    names.insert(vd.name());
    auto parsed = VariantDescriptor::parse(vd.name());
    REQUIRE(parsed.has_value());
    CHECK(*parsed == vd);
  }
  CHECK(names.size() == 11);
  CHECK(names.count("basic"));
  CHECK(names.count("basic+pruned"));
  CHECK(names.count("basic+clustered"));
  CHECK(names.count("int8_only+pruned"));
  CHECK(names.count("int8_only+clustered"));
  CHECK(names.count("16x8_int_only"));
  CHECK(names.count("float16"));
  CHECK_FALSE(VariantDescriptor::parse("int9").has_value());
  CHECK_FALSE(VariantDescriptor::parse("basic+shrunk").has_value());
}

TEST_CASE("scheme predicates") {
  CHECK_FALSE(scheme_is_integer(Scheme::kBasic));
  CHECK_FALSE(scheme_is_integer(Scheme::kDynamic));
  CHECK_FALSE(scheme_is_integer(Scheme::kFloat16));
  CHECK(scheme_is_integer(Scheme::kInt8));
  CHECK(scheme_is_integer(Scheme::kInt8Only));
  CHECK(scheme_is_integer(Scheme::kA16W8));
  CHECK(scheme_is_integer(Scheme::kA16W8IntOnly));
  CHECK_FALSE(scheme_is_int_only(Scheme::kInt8));
  CHECK(scheme_is_int_only(Scheme::kInt8Only));
  CHECK(scheme_is_int_only(Scheme::kA16W8IntOnly));
}

TEST_CASE("pruning zeroes the smallest weights, ties toward lower index") {
  Graph g = build_graph(spec_of("fc1"));
  auto ids = compressible_weight_ids(g);
  REQUIRE_FALSE(ids.empty());

  // Plant a known pattern in the first eligible tensor: |w| ties at 1.
  auto& w = g.tensor(ids[0]).fdata;
  REQUIRE(w.size() >= 8);
  std::vector<float> pattern = {3.f, -2.f, 2.f, -1.f, 1.f, 1.f, 4.f, 5.f};
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = i < pattern.size() ? pattern[i] : 6.0f + static_cast<float>(i);
  }

  double sparsity = 2.0 / static_cast<double>(w.size());
  Graph pruned = prune_magnitude(g, sparsity);
  const auto& pw = pruned.tensor(ids[0]).fdata;
  // floor(sparsity * n) == 2 zeros; the |1| tie resolves to indices 3 and 4.
  CHECK(pw[3] == 0.0f);
  CHECK(pw[4] == 0.0f);
  CHECK(pw[5] == 1.0f);
  CHECK(pw[0] == 3.0f);
  CHECK(pw[1] == -2.0f);
}

TEST_CASE("pruning hits the sparsity target and spares biases") {
  Graph g = build_graph(spec_of("fc3"));
  Graph pruned = prune_magnitude(g, 0.5);
  for (int id : compressible_weight_ids(pruned)) {
    const auto& base = g.tensor(id).fdata;
    const auto& data = pruned.tensor(id).fdata;
    std::size_t zeros = std::count(data.begin(), data.end(), 0.0f);
    std::size_t expected = data.size() / 2;
    CHECK(zeros >= expected);
    // Surviving weights are untouched, and none is smaller than a zeroed one.
    float min_kept = 1e9f;
    float max_cut = 0.0f;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i] == 0.0f) {
        max_cut = std::max(max_cut, std::abs(base[i]));
      } else {
        CHECK(data[i] == base[i]);
        min_kept = std::min(min_kept, std::abs(data[i]));
      }
    }
    CHECK(max_cut <= min_kept);
  }
  // Biases and non-eligible params keep their values.
  for (const auto& t : pruned.tensors) {
    if (t.role == TensorRole::kBias) {
      CHECK(t.fdata == g.tensor(t.id).fdata);
    }
  }
  CHECK(weight_sparsity(pruned) >= 0.5);
  CHECK(weight_sparsity(g) < 0.05);
}

TEST_CASE("clustering matches a direct lloyd iteration oracle") {
  Graph g = build_graph(spec_of("fc1"));
  int id = compressible_weight_ids(g)[0];
  const std::vector<float> base = g.tensor(id).fdata;

  Graph clustered = cluster_weights(g, kDefaultCentroids);
  const auto& got = clustered.tensor(id).fdata;

  // Oracle: even [min, max] grid init, 30 assignment/update rounds over the
  // original data, ties to the lower centroid.
  const auto [mn_it, mx_it] = std::minmax_element(base.begin(), base.end());
  const double mn = *mn_it, mx = *mx_it;
  std::vector<double> centers(kDefaultCentroids);
  for (int c = 0; c < kDefaultCentroids; ++c) {
    centers[c] = mn + (mx - mn) * c / static_cast<double>(kDefaultCentroids - 1);
  }
  std::vector<int> assign(base.size(), 0);
  for (int iter = 0; iter < kClusterIterations; ++iter) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      int best = 0;
      double best_d = std::fabs(base[i] - centers[0]);
      for (int c = 1; c < kDefaultCentroids; ++c) {
        double d = std::fabs(base[i] - centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[i] = best;
    }
    std::vector<double> sum(kDefaultCentroids, 0.0);
    std::vector<std::int64_t> cnt(kDefaultCentroids, 0);
    for (std::size_t i = 0; i < base.size(); ++i) {
      sum[assign[i]] += base[i];
      cnt[assign[i]]++;
    }
    for (int c = 0; c < kDefaultCentroids; ++c) {
      if (cnt[c] > 0) centers[c] = sum[c] / static_cast<double>(cnt[c]);
    }
  }
  REQUIRE(got.size() == base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(got[i] == static_cast<float>(centers[assign[i]]));
  }
}

TEST_CASE("clustering collapses each tensor to at most 16 values") {
  Graph g = build_graph(spec_of("cnn_tiny"));
  Graph clustered = cluster_weights(g, kDefaultCentroids);
  for (int id : compressible_weight_ids(clustered)) {
    const auto& data = clustered.tensor(id).fdata;
    std::set<float> distinct(data.begin(), data.end());
    CHECK(distinct.size() <= 16);
    // Values stay inside the original range.
    const auto& base = g.tensor(id).fdata;
    auto [mn, mx] = std::minmax_element(base.begin(), base.end());
    for (float v : data) {
      CHECK(v >= *mn - 1e-6f);
      CHECK(v <= *mx + 1e-6f);
    }
  }
  CHECK(cluster_weights(g, 16).tensor(compressible_weight_ids(g)[0]).fdata ==
        clustered.tensor(compressible_weight_ids(g)[0]).fdata);
  CHECK_THROWS_AS(cluster_weights(g, 1), Error);
}

TEST_CASE("float16 conversion rounds weights through binary16") {
  Graph g = build_graph(spec_of("fc2"));
  Graph half = quantize_graph(g, Scheme::kFloat16, nullptr);
  for (const auto& t : half.tensors) {
    if (!t.is_param()) continue;
    CHECK(t.dtype == DType::kF16);
    const auto& base = g.tensor(t.id).fdata;
    for (std::size_t i = 0; i < t.fdata.size(); ++i) {
      CHECK(t.fdata[i] == f16_round_trip(base[i]));
    }
  }
  CHECK_FALSE(half.is_integer_variant());
}

TEST_CASE("dynamic conversion quantizes kernels only") {
  Graph g = build_graph(spec_of("fc2"));
  Graph dyn = quantize_graph(g, Scheme::kDynamic, nullptr);
  CHECK_FALSE(dyn.is_integer_variant());
  CHECK(dyn.nodes.size() == g.nodes.size());  // no boundary ops
  for (int id : compressible_weight_ids(g)) {
    const auto& t = dyn.tensor(id);
    CHECK(t.dtype == DType::kI8);
    REQUIRE(t.quant.has_value());
    CHECK(t.quant->zero_point == 0);
    // Symmetric per-tensor i8: scale = max|w| / 127.
    const auto& base = g.tensor(id).fdata;
    double max_abs = 0.0;
    for (float v : base) max_abs = std::max(max_abs, std::abs(double(v)));
    CHECK(t.quant->scale == doctest::Approx(max_abs / 127.0));
    for (std::size_t i = 0; i < t.qdata.size(); ++i) {
      CHECK(t.qdata[i] == quantize_value(base[i], *t.quant));
    }
  }
  // Biases stay float under dynamic quantization.
  for (const auto& t : dyn.tensors) {
    if (t.role == TensorRole::kBias) CHECK(t.dtype == DType::kF32);
  }
}

TEST_CASE("integer conversion quantizes activations and biases") {
  ModelSpec spec = spec_of("fc2");
  Graph g = build_graph(spec);
  SampleSet calib = calib_for(spec);
  CalibrationStats stats = calibrate(g, calib);
  CHECK(stats.samples == kCalibrationSamples);
  CHECK_FALSE(stats.ranges.empty());

  Graph q = quantize_graph(g, Scheme::kInt8, &stats);
  CHECK(q.is_integer_variant());
  // f32 boundary: quantize on entry, dequantize on exit.
  CHECK(q.nodes.front().kind == OpKind::kQuantize);
  CHECK(q.nodes.back().kind == OpKind::kDequantize);
  CHECK(q.input().dtype == DType::kF32);
  CHECK(q.output().dtype == DType::kF32);

  for (const auto& node : q.nodes) {
    if (node.kind != OpKind::kDense) continue;
    const auto& w = q.tensor(node.params[0]);
    const auto& b = q.tensor(node.params[1]);
    const auto& in = q.tensor(node.input);
    CHECK(w.dtype == DType::kI8);
    CHECK(b.dtype == DType::kI32);
    REQUIRE(in.quant.has_value());
    // Bias scale is input scale times weight scale.
    CHECK(b.quant->scale ==
          doctest::Approx(in.quant->scale * w.quant->scale));
    CHECK(b.quant->zero_point == 0);
  }

  Graph q16 = quantize_graph(g, Scheme::kA16W8, &stats);
  for (const auto& node : q16.nodes) {
    if (node.kind != OpKind::kDense) continue;
    const auto& in = q16.tensor(node.input);
    CHECK(in.dtype == DType::kI16);
    REQUIRE(in.quant.has_value());
    // i16 activations are symmetric.
    CHECK(in.quant->zero_point == 0);
    CHECK(in.quant->qmax == 32767);
  }
}

TEST_CASE("int_only schemes move the boundary into integers") {
  ModelSpec spec = spec_of("fc_class");
  Graph g = build_graph(spec);
  CalibrationStats stats = calibrate(g, calib_for(spec));
  Graph q = quantize_graph(g, Scheme::kInt8Only, &stats);
  CHECK(q.input().dtype == DType::kI8);
  CHECK(q.output().dtype == DType::kI8);
  for (const auto& node : q.nodes) {
    CHECK(node.kind != OpKind::kQuantize);
    CHECK(node.kind != OpKind::kDequantize);
  }
  CHECK(io_in_arena(VariantDescriptor{Scheme::kInt8}));
  CHECK_FALSE(io_in_arena(VariantDescriptor{Scheme::kInt8Only}));
  CHECK_FALSE(io_in_arena(VariantDescriptor{Scheme::kA16W8IntOnly}));
}

TEST_CASE("integer schemes demand calibration") {
  Graph g = build_graph(spec_of("fc1"));
  CHECK_THROWS_AS(quantize_graph(g, Scheme::kInt8, nullptr), Error);
  VariantDescriptor vd{Scheme::kInt8Only};
  CHECK_THROWS_AS(apply_variant(g, vd, nullptr), Error);
}

TEST_CASE("apply_variant composes prune, cluster and quantize") {
  ModelSpec spec = spec_of("fc3");
  Graph g = build_graph(spec);
  SampleSet calib = calib_for(spec);

  VariantDescriptor vd;
  vd.scheme = Scheme::kInt8Only;
  vd.pruned = true;
  vd.clustered = true;
  Graph out = apply_variant(g, vd, &calib);
  CHECK(out.is_integer_variant());

  // Same result as composing the stages by hand.
  Graph manual = cluster_weights(prune_magnitude(g, vd.sparsity), vd.centroids);
  CalibrationStats stats = calibrate(manual, calib);
  Graph expect = quantize_graph(manual, Scheme::kInt8Only, &stats);
  REQUIRE(out.tensors.size() == expect.tensors.size());
  for (std::size_t i = 0; i < out.tensors.size(); ++i) {
    CHECK(out.tensors[i].qdata == expect.tensors[i].qdata);
    CHECK(out.tensors[i].fdata == expect.tensors[i].fdata);
  }
}

TEST_CASE("eligible weights exclude embeddings and batch norm") {
  Graph g = build_graph(spec_of("shakespeare1"));
  auto ids = compressible_weight_ids(g);
  for (int id : ids) {
    CHECK(g.tensor(id).name.find("embedding") == std::string::npos);
  }
  // The recurrent matrices and the head kernel are eligible.
  CHECK(ids.size() == 3);

  Graph bn = build_graph(spec_of("cnn_bn"));
  for (int id : compressible_weight_ids(bn)) {
    CHECK(bn.tensor(id).name.find("_scale") == std::string::npos);
  }
}
