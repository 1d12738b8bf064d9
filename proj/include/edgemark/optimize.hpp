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
#ifndef EDGEMARK_OPTIMIZE_HPP_
#define EDGEMARK_OPTIMIZE_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgemark/dataset.hpp"
#include "edgemark/graph.hpp"

namespace edgemark {

// Conversion schemes. "Integer" schemes quantize activations; the two
// *_int_only variants additionally quantize the model boundary, so the host
// exchanges integer buffers with the model.
enum class Scheme {
  kBasic,        // f32 weights and activations
  kDynamic,      // i8 weights dequantized on the fly, f32 activations
  kInt8,         // i8 weights/activations, f32 boundary
  kInt8Only,     // i8 end to end
  kA16W8,        // i8 weights, i16 activations, f32 boundary
  kA16W8IntOnly, // i8 weights, i16 activations, integer boundary
  kFloat16,      // f16 weights, f32 activations
};

inline constexpr int kSchemeCount = 7;
const char* scheme_name(Scheme s);  // basic, dynamic, int8, int8_only,
                                    // 16x8, 16x8_int_only, float16
std::optional<Scheme> parse_scheme(std::string_view name);
bool scheme_is_integer(Scheme s);
bool scheme_is_int_only(Scheme s);

inline constexpr double kDefaultSparsity = 0.5;
inline constexpr int kDefaultCentroids = 16;
inline constexpr int kClusterIterations = 30;
inline constexpr int kCalibrationSamples = 64;

struct VariantDescriptor {
  Scheme scheme = Scheme::kBasic;
  bool pruned = false;
  bool clustered = false;
  double sparsity = kDefaultSparsity;
  int centroids = kDefaultCentroids;

  // Canonical name: scheme, then "+pruned", then "+clustered".
  std::string name() const;
  static std::optional<VariantDescriptor> parse(std::string_view name);
  bool operator==(const VariantDescriptor&) const = default;
};

// The standard benchmark matrix: every scheme plain, plus pruned and
// clustered forms of the float baseline and the int8-only scheme.
std::vector<VariantDescriptor> all_variants();

// Observed activation ranges, keyed by tensor id of the calibrated graph.
struct CalibrationStats {
  std::map<int, std::pair<double, double>> ranges;
  int samples = 0;
};

// Runs the float graph over the samples recording per-tensor min/max.
CalibrationStats calibrate(const Graph& g, const SampleSet& samples);

// Magnitude pruning: per eligible weight tensor, zeroes the
// floor(sparsity * n) entries of smallest |w|, ties resolved toward the
// lower flat index. Eligible tensors are dense/conv kernels and recurrent
// weight matrices; biases, embedding tables and batch-norm parameters are
// untouched.
Graph prune_magnitude(const Graph& g, double sparsity);

// Weight clustering: per eligible tensor (same set as pruning), 1-D k-means
// with `centroids` centers initialized on an even [min, max] grid, exactly
// kClusterIterations Lloyd iterations, assignment ties toward the lower
// centroid index, empty clusters keep their previous center. Weights are
// replaced by their centroid value; storage stays dense.
Graph cluster_weights(const Graph& g, int centroids);

// Applies a conversion scheme. Integer schemes require calibration stats for
// the same graph. Weight quantization is per-tensor symmetric i8; i8
// activations are affine over the observed range, i16 activations symmetric.
// Biases become i32 at scale s_in * s_w of the consuming op.
Graph quantize_graph(const Graph& g, Scheme scheme,
                     const CalibrationStats* stats);

// prune -> cluster -> quantize, calibrating on the compressed float graph.
Graph apply_variant(const Graph& base, const VariantDescriptor& vd,
                    const SampleSet* calib_samples);

// Weight tensors eligible for pruning/clustering, in graph order.
std::vector<int> compressible_weight_ids(const Graph& g);
// Fraction of exact zeros across the eligible weight set.
double weight_sparsity(const Graph& g);

}  // namespace edgemark

#endif  // EDGEMARK_OPTIMIZE_HPP_
