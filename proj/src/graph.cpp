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
#include "edgemark/graph.hpp"

#include <algorithm>

#include "edgemark/dataset.hpp"
#include "edgemark/error.hpp"
#include "edgemark/prng.hpp"

namespace edgemark {

const char* op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::kDense: return "dense";
    case OpKind::kConv2d: return "conv2d";
    case OpKind::kMaxPool2d: return "max_pool2d";
    case OpKind::kGlobalAvgPool2d: return "global_avg_pool2d";
    case OpKind::kActivation: return "activation";
    case OpKind::kBatchNorm: return "batch_norm";
    case OpKind::kSimpleRnn: return "simple_rnn";
    case OpKind::kLstm: return "lstm";
    case OpKind::kGru: return "gru";
    case OpKind::kEmbedding: return "embedding";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kQuantize: return "quantize";
    case OpKind::kDequantize: return "dequantize";
    case OpKind::kRequantize: return "requantize";
  }
  return "?";
}

namespace {

// Output spatial extent of a valid-padding window op, or -1 if the window
// does not fit.
int window_out(int in, int kernel, int stride) {
  if (in < kernel) return -1;
  return (in - kernel) / stride + 1;
}

class GraphBuilder {
 public:
  explicit GraphBuilder(const ModelSpec& spec) : spec_(spec) {
    g_.model_name = spec.name;
    g_.source_hash = spec_hash(spec);
    g_.seed = spec.random_seed;
  }

  Graph build() {
    DatasetIoInfo io = dataset_io_info(spec_.dataset);
    g_.classification = io.classification;

    std::vector<int> in_shape;
    DType in_dtype = DType::kF32;
    switch (spec_.model_type) {
      case ModelType::kFC:
        in_shape = {static_cast<int>(shape_elements(io.input_shape))};
        break;
      case ModelType::kCNN:
        in_shape = io.input_shape;
        break;
      case ModelType::kRNN:
        in_shape = io.input_shape;
        if (io.token_input) in_dtype = DType::kI32;
        break;
    }
    cur_ = add_tensor("input", TensorRole::kInput, in_dtype, in_shape);
    g_.input_id = cur_;

    if (spec_.model_type == ModelType::kCNN) build_conv_section();
    if (spec_.model_type == ModelType::kRNN) {
      build_rnn_section(io);
    } else {
      build_dense_section(io, /*per_step=*/false);
    }

    g_.output_id = cur_;
    g_.tensors[cur_].role = TensorRole::kOutput;
    g_.validate();
    return std::move(g_);
  }

 private:
  int add_tensor(const std::string& name, TensorRole role, DType dtype,
                 const std::vector<int>& shape) {
    TensorInfo t;
    t.id = static_cast<int>(g_.tensors.size());
    t.name = name;
    t.role = role;
    t.dtype = dtype;
    t.shape = shape;
    g_.tensors.push_back(std::move(t));
    return g_.tensors.back().id;
  }

  // Adds a parameter tensor filled from its own substream of the model seed.
  // Streams are indexed by creation order, so the values of one tensor never
  // depend on the sizes of the others.
  int add_param(const std::string& name, TensorRole role,
                const std::vector<int>& shape, float lo, float hi) {
    int id = add_tensor(name, role, DType::kF32, shape);
    TensorInfo& t = g_.tensors[id];
    SplitMix64 rng(substream_seed(spec_.random_seed, weight_ordinal_++));
    t.fdata.resize(t.elements());
    for (auto& v : t.fdata) v = rng.uniform(lo, hi);
    return id;
  }

  OpNode& add_node(OpKind kind, const std::string& name,
                   const std::vector<int>& out_shape, DType out_dtype) {
    OpNode node;
    node.kind = kind;
    node.name = name;
    node.input = cur_;
    node.output =
        add_tensor(name + "_out", TensorRole::kActivation, out_dtype, out_shape);
    g_.nodes.push_back(std::move(node));
    cur_ = g_.nodes.back().output;
    return g_.nodes.back();
  }

  void add_activation(const std::string& name) {
    const auto shape = g_.tensors[cur_].shape;
    OpNode& node = add_node(OpKind::kActivation, name, shape, DType::kF32);
    node.act = spec_.activation;
  }

  void add_batch_norm(const std::string& name, int channels) {
    const auto shape = g_.tensors[cur_].shape;
    int scale = add_param(name + "_scale", TensorRole::kWeight, {channels},
                          0.5f, 1.5f);
    int shift = add_param(name + "_shift", TensorRole::kBias, {channels},
                          -0.5f, 0.5f);
    OpNode& node = add_node(OpKind::kBatchNorm, name, shape, DType::kF32);
    node.params = {scale, shift};
  }

  void build_conv_section() {
    int conv_i = 0, pool_i = 0;
    for (std::size_t i = 0; i < spec_.convs_params.size(); ++i) {
      const ConvParams& cp = spec_.convs_params[i];
      const auto in_shape = g_.tensors[cur_].shape;
      if (cp.channels > 0) {
        if (in_shape.size() != 3) {
          throw Error(ErrKind::kShape, spec_.name + ": conv" +
                                           std::to_string(conv_i) +
                                           " needs (H, W, C) input");
        }
        int oh = window_out(in_shape[0], cp.kernel, cp.stride);
        int ow = window_out(in_shape[1], cp.kernel, cp.stride);
        if (oh < 1 || ow < 1) {
          throw Error(ErrKind::kShape,
                      spec_.name + ": conv" + std::to_string(conv_i) +
                          " kernel does not fit input " + shape_str(in_shape));
        }
        std::string name = "conv" + std::to_string(conv_i++);
        int w = add_param(name + "_w", TensorRole::kWeight,
                          {cp.channels, cp.kernel, cp.kernel, in_shape[2]},
                          -0.5f, 0.5f);
        int b = add_param(name + "_b", TensorRole::kBias, {cp.channels}, -0.5f,
                          0.5f);
        OpNode& node =
            add_node(OpKind::kConv2d, name, {oh, ow, cp.channels}, DType::kF32);
        node.params = {w, b};
        node.kernel = cp.kernel;
        node.stride = cp.stride;
        if (spec_.use_batch_norm) {
          add_batch_norm("bn" + std::to_string(conv_i - 1), cp.channels);
        }
        add_activation("act_" + name);
      } else if (cp.kernel > 0) {
        if (in_shape.size() != 3) {
          throw Error(ErrKind::kShape, spec_.name + ": pooling needs (H, W, C)");
        }
        int oh = window_out(in_shape[0], cp.kernel, cp.stride);
        int ow = window_out(in_shape[1], cp.kernel, cp.stride);
        if (oh < 1 || ow < 1) {
          throw Error(ErrKind::kShape,
                      spec_.name + ": pool kernel does not fit input " +
                          shape_str(in_shape));
        }
        std::string name = "pool" + std::to_string(pool_i++);
        OpNode& node =
            add_node(OpKind::kMaxPool2d, name, {oh, ow, in_shape[2]},
                     DType::kF32);
        node.kernel = cp.kernel;
        node.stride = cp.stride;
      } else {
        if (in_shape.size() != 3) {
          throw Error(ErrKind::kShape,
                      spec_.name + ": global pooling needs (H, W, C)");
        }
        add_node(OpKind::kGlobalAvgPool2d, "gap", {in_shape[2]}, DType::kF32);
      }
    }
  }

  void add_dense(const std::string& name, int units, bool per_step) {
    const auto in_shape = g_.tensors[cur_].shape;
    int in_dim;
    std::vector<int> out_shape;
    if (per_step) {
      in_dim = in_shape.back();
      out_shape = {in_shape[0], units};
    } else {
      in_dim = static_cast<int>(shape_elements(in_shape));
      out_shape = {units};
    }
    if (in_dim < 1) {
      throw Error(ErrKind::kShape, spec_.name + ": " + name + " has no inputs");
    }
    int w = add_param(name + "_w", TensorRole::kWeight, {units, in_dim}, -0.5f,
                      0.5f);
    int b = add_param(name + "_b", TensorRole::kBias, {units}, -0.5f, 0.5f);
    OpNode& node = add_node(OpKind::kDense, name, out_shape, DType::kF32);
    node.params = {w, b};
    node.per_step = per_step;
  }

  void build_dense_section(const DatasetIoInfo& io, bool per_step) {
    for (std::size_t i = 0; i < spec_.denses_params.size(); ++i) {
      std::string name = "dense" + std::to_string(i);
      add_dense(name, spec_.denses_params[i], per_step);
      if (spec_.use_batch_norm && !per_step) {
        add_batch_norm("bn_" + name, spec_.denses_params[i]);
      }
      add_activation("act_" + name);
    }
    add_dense("head", io.head_dim, per_step);
    if (io.classification) {
      const auto shape = g_.tensors[cur_].shape;
      add_node(OpKind::kSoftmax, "softmax", shape, DType::kF32);
    }
  }

  void build_rnn_section(const DatasetIoInfo& io) {
    int feat;
    if (io.token_input) {
      int table = add_param("embedding_table", TensorRole::kWeight,
                            {io.vocab, spec_.embedding_dim}, -0.5f, 0.5f);
      OpNode& node =
          add_node(OpKind::kEmbedding, "embedding",
                   {spec_.sequence_length, spec_.embedding_dim}, DType::kF32);
      node.params = {table};
      feat = spec_.embedding_dim;
    } else {
      feat = g_.tensors[cur_].shape[1];
    }

    int units = spec_.rnn_units;
    int gates = spec_.rnn_kind == RnnKind::kLstm
                    ? 4
                    : (spec_.rnn_kind == RnnKind::kGru ? 3 : 1);
    std::string name = rnn_kind_name(spec_.rnn_kind);
    int wx = add_param(name + "_wx", TensorRole::kWeight, {gates * units, feat},
                       -0.5f, 0.5f);
    int wh = add_param(name + "_wh", TensorRole::kWeight,
                       {gates * units, units}, -0.5f, 0.5f);
    std::vector<int> params = {wx, wh};
    if (spec_.rnn_kind == RnnKind::kGru) {
      // Reset-after formulation carries separate input and recurrent biases.
      params.push_back(add_param(name + "_bx", TensorRole::kBias,
                                 {gates * units}, -0.5f, 0.5f));
      params.push_back(add_param(name + "_bh", TensorRole::kBias,
                                 {gates * units}, -0.5f, 0.5f));
    } else {
      params.push_back(add_param(name + "_b", TensorRole::kBias,
                                 {gates * units}, -0.5f, 0.5f));
    }
    OpKind kind = spec_.rnn_kind == RnnKind::kLstm
                      ? OpKind::kLstm
                      : (spec_.rnn_kind == RnnKind::kGru ? OpKind::kGru
                                                         : OpKind::kSimpleRnn);
    OpNode& node =
        add_node(kind, name, {spec_.sequence_length, units}, DType::kF32);
    node.params = params;
    node.rnn = spec_.rnn_kind;
    node.scratch_elems = spec_.rnn_kind == RnnKind::kSimple ? 2 * units
                                                            : 6 * units;

    build_dense_section(io, /*per_step=*/true);
  }

  const ModelSpec& spec_;
  Graph g_;
  int cur_ = -1;
  int weight_ordinal_ = 0;
};

}  // namespace

bool Graph::has_rnn() const {
  return std::any_of(nodes.begin(), nodes.end(), [](const OpNode& n) {
    return n.kind == OpKind::kSimpleRnn || n.kind == OpKind::kLstm ||
           n.kind == OpKind::kGru;
  });
}

bool Graph::is_integer_variant() const {
  for (const auto& t : tensors) {
    if (t.role == TensorRole::kActivation || t.role == TensorRole::kOutput) {
      if (t.dtype == DType::kI8 || t.dtype == DType::kI16) return true;
    }
  }
  return false;
}

namespace {

std::vector<int> infer_out_shape(const Graph& g, const OpNode& node) {
  const auto& in = g.tensor(node.input).shape;
  switch (node.kind) {
    case OpKind::kDense: {
      int units = g.tensor(node.params.at(0)).shape.at(0);
      if (node.per_step) return {in.at(0), units};
      return {units};
    }
    case OpKind::kConv2d: {
      const auto& w = g.tensor(node.params.at(0)).shape;
      return {window_out(in.at(0), node.kernel, node.stride),
              window_out(in.at(1), node.kernel, node.stride), w.at(0)};
    }
    case OpKind::kMaxPool2d:
      return {window_out(in.at(0), node.kernel, node.stride),
              window_out(in.at(1), node.kernel, node.stride), in.at(2)};
    case OpKind::kGlobalAvgPool2d:
      return {in.at(2)};
    case OpKind::kSimpleRnn:
      return {in.at(0), g.tensor(node.params.at(0)).shape.at(0)};
    case OpKind::kLstm:
      return {in.at(0), g.tensor(node.params.at(0)).shape.at(0) / 4};
    case OpKind::kGru:
      return {in.at(0), g.tensor(node.params.at(0)).shape.at(0) / 3};
    case OpKind::kEmbedding:
      return {in.at(0), g.tensor(node.params.at(0)).shape.at(1)};
    case OpKind::kActivation:
    case OpKind::kBatchNorm:
    case OpKind::kSoftmax:
    case OpKind::kQuantize:
    case OpKind::kDequantize:
    case OpKind::kRequantize:
      return in;
  }
  return in;
}

}  // namespace

void Graph::validate() const {
  if (nodes.empty()) {
    throw Error(ErrKind::kInternal, model_name + ": empty graph");
  }
  int inputs = 0, outputs = 0;
  for (const auto& t : tensors) {
    if (t.role == TensorRole::kInput) inputs++;
    if (t.role == TensorRole::kOutput) outputs++;
    if (t.is_param() && t.fdata.empty() && t.qdata.empty()) {
      throw Error(ErrKind::kInternal,
                  model_name + ": parameter tensor '" + t.name + "' has no data");
    }
  }
  if (inputs != 1 || outputs != 1) {
    throw Error(ErrKind::kInternal,
                model_name + ": graph must have exactly one input and output");
  }
  int cur = input_id;
  for (const auto& node : nodes) {
    if (node.input != cur) {
      throw Error(ErrKind::kInternal,
                  model_name + ": node '" + node.name + "' breaks the chain");
    }
    auto expect = infer_out_shape(*this, node);
    if (tensor(node.output).shape != expect) {
      throw Error(ErrKind::kInternal,
                  model_name + ": node '" + node.name + "' output shape " +
                      shape_str(tensor(node.output).shape) + " != expected " +
                      shape_str(expect));
    }
    cur = node.output;
  }
  if (cur != output_id) {
    throw Error(ErrKind::kInternal,
                model_name + ": chain does not end at the output tensor");
  }
}

Graph build_graph(const ModelSpec& spec) { return GraphBuilder(spec).build(); }

namespace {

std::int64_t node_macs(const Graph& g, const OpNode& node) {
  const auto& in = g.tensor(node.input).shape;
  const auto& out = g.tensor(node.output).shape;
  switch (node.kind) {
    case OpKind::kDense: {
      std::int64_t in_dim = node.per_step ? in.back() : shape_elements(in);
      std::int64_t units = out.back();
      std::int64_t steps = node.per_step ? out.front() : 1;
      return steps * in_dim * units;
    }
    case OpKind::kConv2d: {
      const auto& w = g.tensor(node.params.at(0)).shape;
      std::int64_t per_out = static_cast<std::int64_t>(w.at(1)) * w.at(2) *
                             w.at(3);
      return shape_elements(out) * per_out;
    }
    case OpKind::kSimpleRnn:
    case OpKind::kLstm:
    case OpKind::kGru: {
      std::int64_t steps = in.at(0);
      std::int64_t feat = in.at(1);
      std::int64_t units = out.at(1);
      std::int64_t gates = node.kind == OpKind::kLstm
                               ? 4
                               : (node.kind == OpKind::kGru ? 3 : 1);
      return steps * gates * units * (feat + units);
    }
    default:
      return 0;
  }
}

}  // namespace

std::int64_t count_params(const Graph& graph) {
  std::int64_t n = 0;
  for (const auto& t : graph.tensors) {
    if (t.is_param()) n += t.elements();
  }
  return n;
}

std::int64_t count_macs(const Graph& graph) {
  std::int64_t n = 0;
  for (const auto& node : graph.nodes) n += node_macs(graph, node);
  return n;
}

ModelStats model_stats(const Graph& graph) {
  ModelStats stats;
  for (const auto& node : graph.nodes) {
    LayerStats layer;
    layer.name = node.name;
    for (int pid : node.params) layer.params += graph.tensor(pid).elements();
    layer.macs = node_macs(graph, node);
    stats.layers.push_back(layer);
    stats.param_count += layer.params;
    stats.mac_count += layer.macs;
  }
  return stats;
}

}  // namespace edgemark
