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
#include "edgemark/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "edgemark/error.hpp"
#include "edgemark/execute.hpp"
#include "edgemark/tensor.hpp"

namespace edgemark {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kBasic: return "basic";
    case Scheme::kDynamic: return "dynamic";
    case Scheme::kInt8: return "int8";
    case Scheme::kInt8Only: return "int8_only";
    case Scheme::kA16W8: return "16x8";
    case Scheme::kA16W8IntOnly: return "16x8_int_only";
    case Scheme::kFloat16: return "float16";
  }
  return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name) {
  for (int i = 0; i < kSchemeCount; ++i) {
    Scheme s = static_cast<Scheme>(i);
    if (name == scheme_name(s)) return s;
  }
  return std::nullopt;
}

bool scheme_is_integer(Scheme s) {
  return s == Scheme::kInt8 || s == Scheme::kInt8Only || s == Scheme::kA16W8 ||
         s == Scheme::kA16W8IntOnly;
}

bool scheme_is_int_only(Scheme s) {
  return s == Scheme::kInt8Only || s == Scheme::kA16W8IntOnly;
}

std::string VariantDescriptor::name() const {
  std::string n = scheme_name(scheme);
  if (pruned) n += "+pruned";
  if (clustered) n += "+clustered";
  return n;
}

std::optional<VariantDescriptor> VariantDescriptor::parse(
    std::string_view name) {
  VariantDescriptor vd;
  std::size_t plus = name.find('+');
  auto scheme = parse_scheme(name.substr(0, plus));
  if (!scheme) return std::nullopt;
  vd.scheme = *scheme;
  while (plus != std::string_view::npos) {
    name.remove_prefix(plus + 1);
    plus = name.find('+');
    std::string_view part = name.substr(0, plus);
    if (part == "pruned" && !vd.pruned) {
      vd.pruned = true;
    } else if (part == "clustered" && !vd.clustered) {
      vd.clustered = true;
    } else {
      return std::nullopt;
    }
  }
  return vd;
}

std::vector<VariantDescriptor> all_variants() {
  std::vector<VariantDescriptor> out;
  for (int i = 0; i < kSchemeCount; ++i) {
    out.push_back({.scheme = static_cast<Scheme>(i)});
  }
  for (Scheme s : {Scheme::kBasic, Scheme::kInt8Only}) {
    out.push_back({.scheme = s, .pruned = true});
    out.push_back({.scheme = s, .clustered = true});
  }
  return out;
}

CalibrationStats calibrate(const Graph& g, const SampleSet& samples) {
  CalibrationStats stats;
  ExecHooks hooks;
  hooks.observe = [&stats](const TensorInfo& t, const std::vector<float>& v) {
    auto [it, fresh] = stats.ranges.try_emplace(
        t.id, std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity());
    for (float x : v) {
      it->second.first = std::min(it->second.first, static_cast<double>(x));
      it->second.second = std::max(it->second.second, static_cast<double>(x));
    }
  };
  for (const auto& input : samples.inputs) {
    execute_graph(g, input, &hooks);
    stats.samples++;
  }
  return stats;
}

std::vector<int> compressible_weight_ids(const Graph& g) {
  std::vector<int> ids;
  for (const auto& node : g.nodes) {
    switch (node.kind) {
      case OpKind::kDense:
      case OpKind::kConv2d:
        ids.push_back(node.params[0]);
        break;
      case OpKind::kSimpleRnn:
      case OpKind::kLstm:
      case OpKind::kGru:
        ids.push_back(node.params[0]);
        ids.push_back(node.params[1]);
        break;
      default:
        break;
    }
  }
  return ids;
}

double weight_sparsity(const Graph& g) {
  std::int64_t zeros = 0, total = 0;
  for (int id : compressible_weight_ids(g)) {
    for (float v : g.tensor(id).fdata) {
      if (v == 0.0f) zeros++;
    }
    total += g.tensor(id).elements();
  }
  return total ? static_cast<double>(zeros) / static_cast<double>(total) : 0.0;
}

Graph prune_magnitude(const Graph& g, double sparsity) {
  if (sparsity < 0.0 || sparsity >= 1.0) {
    throw Error(ErrKind::kValidation, "sparsity must lie in [0, 1)");
  }
  Graph out = g;
  for (int id : compressible_weight_ids(out)) {
    auto& data = out.tensor(id).fdata;
    const std::size_t n = data.size();
    const std::size_t kill =
        static_cast<std::size_t>(std::floor(sparsity * static_cast<double>(n)));
    if (kill == 0) continue;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Stable magnitude order; equal magnitudes drop the lower flat index.
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const float ma = std::fabs(data[a]), mb = std::fabs(data[b]);
      if (ma != mb) return ma < mb;
      return a < b;
    });
    for (std::size_t i = 0; i < kill; ++i) data[order[i]] = 0.0f;
  }
  return out;
}

Graph cluster_weights(const Graph& g, int centroids) {
  if (centroids < 2) {
    throw Error(ErrKind::kValidation, "centroids must be >= 2");
  }
  Graph out = g;
  for (int id : compressible_weight_ids(out)) {
    auto& data = out.tensor(id).fdata;
    if (data.empty()) continue;
    const auto [mn_it, mx_it] = std::minmax_element(data.begin(), data.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<double> centers(centroids);
    for (int c = 0; c < centroids; ++c) {
      centers[c] = centroids == 1
                       ? mn
                       : mn + (mx - mn) * c / static_cast<double>(centroids - 1);
    }
    std::vector<int> assign(data.size(), 0);
    for (int iter = 0; iter < kClusterIterations; ++iter) {
      for (std::size_t i = 0; i < data.size(); ++i) {
        int best = 0;
        double best_d = std::fabs(data[i] - centers[0]);
        for (int c = 1; c < centroids; ++c) {
          const double d = std::fabs(data[i] - centers[c]);
          if (d < best_d) {  // strict: ties keep the lower centroid index
            best_d = d;
            best = c;
          }
        }
        assign[i] = best;
      }
      std::vector<double> sum(centroids, 0.0);
      std::vector<std::int64_t> cnt(centroids, 0);
      for (std::size_t i = 0; i < data.size(); ++i) {
        sum[assign[i]] += data[i];
        cnt[assign[i]]++;
      }
      for (int c = 0; c < centroids; ++c) {
        if (cnt[c] > 0) centers[c] = sum[c] / static_cast<double>(cnt[c]);
      }
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      data[i] = static_cast<float>(centers[assign[i]]);
    }
  }
  return out;
}

namespace {

// Fixed output params for saturating nonlinearities, matching common
// converter conventions so their outputs use the full integer range.
QuantParams fixed_act_params(Activation act, bool wide) {
  if (wide) {
    QuantParams qp;
    qp.scale = 1.0 / 32768.0;
    qp.zero_point = 0;
    qp.qmin = -32768;
    qp.qmax = 32767;
    return qp;
  }
  QuantParams qp;
  qp.qmin = -128;
  qp.qmax = 127;
  if (act == Activation::kTanh) {
    qp.scale = 1.0 / 128.0;
    qp.zero_point = 0;
  } else {  // sigmoid, softmax
    qp.scale = 1.0 / 256.0;
    qp.zero_point = -128;
  }
  return qp;
}

QuantParams range_params(const CalibrationStats& stats, int id, bool wide,
                         const std::string& name) {
  auto it = stats.ranges.find(id);
  if (it == stats.ranges.end()) {
    throw Error(ErrKind::kInternal,
                "no calibration range for tensor '" + name + "'");
  }
  const auto [mn, mx] = it->second;
  if (wide) {
    return symmetric_i16_params(std::max(std::fabs(mn), std::fabs(mx)));
  }
  return affine_i8_params(mn, mx);
}

void quantize_weight_i8(TensorInfo& t) {
  double max_abs = 0.0;
  for (float v : t.fdata) max_abs = std::max(max_abs, std::fabs(static_cast<double>(v)));
  QuantParams qp = symmetric_params(max_abs, 8);
  t.qdata.resize(t.fdata.size());
  for (std::size_t i = 0; i < t.fdata.size(); ++i) {
    t.qdata[i] = quantize_value(t.fdata[i], qp);
  }
  t.fdata.clear();
  t.dtype = DType::kI8;
  t.quant = qp;
}

void quantize_bias_i32(TensorInfo& t, double scale) {
  QuantParams qp;
  qp.scale = scale;
  qp.zero_point = 0;
  qp.qmin = std::numeric_limits<std::int32_t>::min();
  qp.qmax = std::numeric_limits<std::int32_t>::max();
  t.qdata.resize(t.fdata.size());
  for (std::size_t i = 0; i < t.fdata.size(); ++i) {
    t.qdata[i] = quantize_value(t.fdata[i], qp);
  }
  t.fdata.clear();
  t.dtype = DType::kI32;
  t.quant = qp;
}

Graph quantize_integer(const Graph& g, Scheme scheme,
                       const CalibrationStats& stats) {
  const bool wide = scheme == Scheme::kA16W8 || scheme == Scheme::kA16W8IntOnly;
  const bool int_only = scheme_is_int_only(scheme);
  const DType act_dtype = wide ? DType::kI16 : DType::kI8;
  Graph out = g;

  // Weight matrices, embedding tables and batch-norm scales first; bias
  // scales depend on them.
  for (const auto& node : out.nodes) {
    switch (node.kind) {
      case OpKind::kDense:
      case OpKind::kConv2d:
      case OpKind::kBatchNorm:
        quantize_weight_i8(out.tensor(node.params[0]));
        break;
      case OpKind::kSimpleRnn:
      case OpKind::kLstm:
      case OpKind::kGru:
        quantize_weight_i8(out.tensor(node.params[0]));
        quantize_weight_i8(out.tensor(node.params[1]));
        break;
      case OpKind::kEmbedding:
        quantize_weight_i8(out.tensor(node.params[0]));
        break;
      default:
        break;
    }
  }

  // Activation tensors in graph order: stats ranges by default, inherited
  // params through shape/range preserving ops, fixed params after
  // saturating nonlinearities, table params after embedding lookups.
  TensorInfo& gin = out.tensor(out.input_id);
  if (gin.dtype == DType::kF32) {
    gin.quant = range_params(stats, gin.id, wide, gin.name);
    if (int_only) gin.dtype = act_dtype;
    // For the f32 boundary the params are attached to the quantize node's
    // output below; keeping them on the input too records the range.
  }
  for (const auto& node : out.nodes) {
    TensorInfo& t = out.tensor(node.output);
    const TensorInfo& in = out.tensor(node.input);
    switch (node.kind) {
      case OpKind::kMaxPool2d:
      case OpKind::kGlobalAvgPool2d:
        t.quant = in.quant;
        break;
      case OpKind::kActivation:
        if (node.act == Activation::kRelu ||
            node.act == Activation::kLeakyRelu) {
          t.quant = in.quant;
        } else {
          t.quant = fixed_act_params(node.act, wide);
        }
        break;
      case OpKind::kSoftmax:
        t.quant = fixed_act_params(Activation::kSigmoid, wide);
        break;
      case OpKind::kEmbedding:
        t.quant = out.tensor(node.params[0]).quant;
        break;
      default:
        t.quant = range_params(stats, t.id, wide, t.name);
        break;
    }
    t.dtype = act_dtype;
  }

  // Biases, now that both factor scales are known.
  for (const auto& node : out.nodes) {
    const double s_in = out.tensor(node.input).quant->scale;
    switch (node.kind) {
      case OpKind::kDense:
      case OpKind::kConv2d:
      case OpKind::kBatchNorm:
        quantize_bias_i32(out.tensor(node.params[1]),
                          s_in * out.tensor(node.params[0]).quant->scale);
        break;
      case OpKind::kSimpleRnn:
      case OpKind::kLstm:
        quantize_bias_i32(out.tensor(node.params[2]),
                          s_in * out.tensor(node.params[0]).quant->scale);
        break;
      case OpKind::kGru: {
        const double s_h = out.tensor(node.output).quant->scale;
        quantize_bias_i32(out.tensor(node.params[2]),
                          s_in * out.tensor(node.params[0]).quant->scale);
        quantize_bias_i32(out.tensor(node.params[3]),
                          s_h * out.tensor(node.params[1]).quant->scale);
        break;
      }
      default:
        break;
    }
  }

  if (!int_only) {
    // f32 boundary: quantize on entry, dequantize on exit.
    if (out.tensor(out.input_id).dtype == DType::kF32) {
      TensorInfo qin;
      qin.id = static_cast<int>(out.tensors.size());
      qin.name = "input_q";
      qin.role = TensorRole::kActivation;
      qin.dtype = act_dtype;
      qin.shape = out.tensor(out.input_id).shape;
      qin.quant = out.tensor(out.input_id).quant;
      out.tensor(out.input_id).quant.reset();
      out.tensors.push_back(qin);

      OpNode qnode;
      qnode.kind = OpKind::kQuantize;
      qnode.name = "quantize_input";
      qnode.input = out.input_id;
      qnode.output = qin.id;
      out.nodes.front().input = qin.id;
      out.nodes.insert(out.nodes.begin(), qnode);
    }

    out.tensor(out.output_id).role = TensorRole::kActivation;
    TensorInfo fout;
    fout.id = static_cast<int>(out.tensors.size());
    fout.name = "output_f32";
    fout.role = TensorRole::kOutput;
    fout.dtype = DType::kF32;
    fout.shape = out.tensor(out.output_id).shape;
    out.tensors.push_back(fout);

    OpNode dnode;
    dnode.kind = OpKind::kDequantize;
    dnode.name = "dequantize_output";
    dnode.input = out.output_id;
    dnode.output = fout.id;
    out.nodes.push_back(dnode);
    out.output_id = fout.id;
  }

  out.validate();
  return out;
}

}  // namespace

Graph quantize_graph(const Graph& g, Scheme scheme,
                     const CalibrationStats* stats) {
  switch (scheme) {
    case Scheme::kBasic:
      return g;
    case Scheme::kFloat16: {
      Graph out = g;
      for (auto& t : out.tensors) {
        if (!t.is_param()) continue;
        for (auto& v : t.fdata) v = f16_round_trip(v);
        t.dtype = DType::kF16;
      }
      return out;
    }
    case Scheme::kDynamic: {
      Graph out = g;
      for (const auto& node : out.nodes) {
        switch (node.kind) {
          case OpKind::kDense:
          case OpKind::kConv2d:
          case OpKind::kEmbedding:
            quantize_weight_i8(out.tensor(node.params[0]));
            break;
          case OpKind::kSimpleRnn:
          case OpKind::kLstm:
          case OpKind::kGru:
            quantize_weight_i8(out.tensor(node.params[0]));
            quantize_weight_i8(out.tensor(node.params[1]));
            break;
          default:
            break;
        }
      }
      return out;
    }
    default: {
      if (!stats || stats->samples < 1) {
        throw Error(ErrKind::kValidation,
                    std::string(scheme_name(scheme)) +
                        " conversion requires calibration data");
      }
      return quantize_integer(g, scheme, *stats);
    }
  }
}

Graph apply_variant(const Graph& base, const VariantDescriptor& vd,
                    const SampleSet* calib_samples) {
  Graph g = base;
  if (vd.pruned) g = prune_magnitude(g, vd.sparsity);
  if (vd.clustered) g = cluster_weights(g, vd.centroids);
  if (scheme_is_integer(vd.scheme)) {
    if (!calib_samples) {
      throw Error(ErrKind::kValidation,
                  "integer schemes require calibration samples");
    }
    CalibrationStats stats = calibrate(g, *calib_samples);
    return quantize_graph(g, vd.scheme, &stats);
  }
  return quantize_graph(g, vd.scheme, nullptr);
}

}  // namespace edgemark
