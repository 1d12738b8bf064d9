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
#ifndef EDGEMARK_GRAPH_HPP_
#define EDGEMARK_GRAPH_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "edgemark/config.hpp"
#include "edgemark/tensor.hpp"

namespace edgemark {

enum class OpKind {
  kDense,
  kConv2d,
  kMaxPool2d,
  kGlobalAvgPool2d,
  kActivation,
  kBatchNorm,  // inference-frozen scale/shift
  kSimpleRnn,
  kLstm,
  kGru,
  kEmbedding,
  kSoftmax,
  kQuantize,    // f32 -> integer, at the graph input boundary
  kDequantize,  // integer -> f32, at the graph output boundary
  kRequantize,  // integer -> integer rescale
};

const char* op_kind_name(OpKind kind);

enum class TensorRole { kInput, kOutput, kActivation, kWeight, kBias };

struct TensorInfo {
  int id = -1;
  std::string name;
  TensorRole role = TensorRole::kActivation;
  DType dtype = DType::kF32;
  std::vector<int> shape;
  std::optional<QuantParams> quant;
  // Constant payload for weights and biases; float values live in fdata
  // (f16 weights are stored as f32 values already rounded through binary16),
  // integer values in qdata.
  std::vector<float> fdata;
  std::vector<std::int32_t> qdata;

  std::int64_t elements() const { return shape_elements(shape); }
  std::size_t bytes() const {
    return static_cast<std::size_t>(elements()) * dtype_size(dtype);
  }
  bool is_param() const {
    return role == TensorRole::kWeight || role == TensorRole::kBias;
  }
};

struct OpNode {
  OpKind kind = OpKind::kDense;
  std::string name;
  int input = -1;
  int output = -1;
  std::vector<int> params;  // weight/bias tensor ids, op-defined order
  // Attributes.
  int kernel = 0;
  int stride = 1;
  Activation act = Activation::kRelu;
  RnnKind rnn = RnnKind::kSimple;
  bool per_step = false;      // dense applies row-wise over a sequence
  int scratch_elems = 0;      // transient working set, arena-planned [i, i]
};

struct Graph {
  std::string model_name;
  std::uint64_t source_hash = 0;  // hash of the originating ModelSpec
  std::uint64_t seed = 0;
  std::vector<OpNode> nodes;
  std::vector<TensorInfo> tensors;
  int input_id = -1;
  int output_id = -1;
  bool classification = false;

  const TensorInfo& tensor(int id) const { return tensors.at(id); }
  TensorInfo& tensor(int id) { return tensors.at(id); }
  const TensorInfo& input() const { return tensors.at(input_id); }
  const TensorInfo& output() const { return tensors.at(output_id); }
  bool has_rnn() const;
  bool is_integer_variant() const;  // true when activations are quantized

  // Structural consistency: exactly one input/output role, each node's
  // output shape matches what its attributes imply, params well formed.
  void validate() const;
};

struct LayerStats {
  std::string name;
  std::int64_t params = 0;
  std::int64_t macs = 0;
};

struct ModelStats {
  std::int64_t param_count = 0;
  std::int64_t mac_count = 0;
  std::vector<LayerStats> layers;
};

// Materializes the inference graph for a model spec, including
// deterministically initialized weights (uniform [-0.5, 0.5] per tensor
// stream derived from random_seed; batch-norm scales use [0.5, 1.5]).
Graph build_graph(const ModelSpec& spec);

// Trainable parameter count, weights plus biases.
std::int64_t count_params(const Graph& graph);
// Multiply-accumulate count per inference; multiplies only, so additions,
// comparisons and table lookups do not contribute. Recurrent layers count
// sequence_length repetitions of their per-step MACs.
std::int64_t count_macs(const Graph& graph);
ModelStats model_stats(const Graph& graph);

}  // namespace edgemark

#endif  // EDGEMARK_GRAPH_HPP_
