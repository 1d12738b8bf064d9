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
#include "edgemark/execute.hpp"

#include <cmath>
#include <unordered_map>

#include "edgemark/error.hpp"
#include "edgemark/kernels.hpp"

namespace edgemark {
namespace {

namespace k = kernels;

QuantParams qp_of(const TensorInfo& t) {
  if (!t.quant) {
    throw Error(ErrKind::kInternal,
                "tensor '" + t.name + "' has no quantization parameters");
  }
  return *t.quant;
}

class Executor {
 public:
  Executor(const Graph& g, const ExecHooks* hooks) : g_(g), hooks_(hooks) {
    vals_.resize(g.tensors.size());
  }

  TensorValue run(const TensorValue& input) {
    bind_input(input);
    for (const auto& node : g_.nodes) {
      exec_node(node);
      observe(node.output);
    }
    return vals_[g_.output_id];
  }

 private:
  void bind_input(const TensorValue& input) {
    const TensorInfo& in = g_.input();
    if (input.shape != in.shape) {
      throw Error(ErrKind::kShape, g_.model_name + ": input shape " +
                                       shape_str(input.shape) +
                                       " != expected " + shape_str(in.shape));
    }
    TensorValue v;
    v.shape = in.shape;
    v.dtype = in.dtype;
    v.quant = in.quant;
    const std::int64_t n = in.elements();
    switch (in.dtype) {
      case DType::kF32:
        if (input.dtype != DType::kF32) {
          throw Error(ErrKind::kShape, g_.model_name + ": float input expected");
        }
        v.f = input.f;
        break;
      case DType::kI32:
        if (input.dtype != DType::kI32) {
          throw Error(ErrKind::kShape, g_.model_name + ": token input expected");
        }
        v.q = input.q;
        break;
      case DType::kI8:
      case DType::kI16:
        // Integer-only variant: the host quantizes on the way in.
        if (input.dtype == DType::kF32) {
          v.q.resize(n);
          k::quantize_f32(input.f.data(), n, qp_of(in), v.q.data());
        } else {
          v.q = input.q;
        }
        break;
      case DType::kF16:
        throw Error(ErrKind::kUnsupportedOp, "f16 graph inputs do not exist");
    }
    vals_[g_.input_id] = std::move(v);
    observe(g_.input_id);
  }

  void observe(int id) {
    if (!hooks_ || !hooks_->observe) return;
    const TensorValue& v = vals_[id];
    if (v.dtype == DType::kF32) hooks_->observe(g_.tensor(id), v.f);
  }

  // Float view of a parameter tensor; integer weights (dynamic / low-bit
  // variants executed by a float backend) are dequantized on first use.
  const std::vector<float>& weight_f(int id) {
    const TensorInfo& t = g_.tensor(id);
    if (t.dtype == DType::kF32 || t.dtype == DType::kF16) return t.fdata;
    auto it = dequant_.find(id);
    if (it != dequant_.end()) return it->second;
    QuantParams qp = qp_of(t);
    std::vector<float> out(t.qdata.size());
    k::dequantize_int(t.qdata.data(), qp, static_cast<std::int64_t>(out.size()),
                      out.data());
    return dequant_.emplace(id, std::move(out)).first->second;
  }

  const std::vector<std::int32_t>& weight_q(int id) {
    const TensorInfo& t = g_.tensor(id);
    if (t.qdata.empty()) {
      throw Error(ErrKind::kUnsupportedOp,
                  "float parameter '" + t.name + "' in an integer op");
    }
    return t.qdata;
  }

  TensorValue& out_buf(const OpNode& node) {
    const TensorInfo& t = g_.tensor(node.output);
    TensorValue& v = vals_[node.output];
    v.shape = t.shape;
    v.dtype = t.dtype;
    v.quant = t.quant;
    if (dtype_is_float(t.dtype)) {
      v.f.assign(t.elements(), 0.0f);
    } else {
      v.q.assign(t.elements(), 0);
    }
    return v;
  }

  void exec_node(const OpNode& node) {
    const TensorInfo& oinfo = g_.tensor(node.output);
    const TensorInfo& iinfo = g_.tensor(node.input);
    const TensorValue& in = vals_[node.input];
    const bool int_out = !dtype_is_float(oinfo.dtype);
    TensorValue& out = out_buf(node);

    const auto& ishape = iinfo.shape;
    switch (node.kind) {
      case OpKind::kDense: {
        const int rows = node.per_step ? ishape[0] : 1;
        const int in_dim = node.per_step
                               ? ishape[1]
                               : static_cast<int>(shape_elements(ishape));
        const int out_dim = oinfo.shape.back();
        if (int_out) {
          const TensorInfo& w = g_.tensor(node.params[0]);
          k::dense_int(in.q.data(), qp_of(iinfo), weight_q(node.params[0]).data(),
                       qp_of(w).scale, weight_q(node.params[1]).data(), rows,
                       in_dim, out_dim, out.q.data(), qp_of(oinfo));
        } else {
          k::dense_f32(in.f.data(), weight_f(node.params[0]).data(),
                       weight_f(node.params[1]).data(), rows, in_dim, out_dim,
                       out.f.data());
        }
        break;
      }
      case OpKind::kConv2d: {
        const int oh = oinfo.shape[0], ow = oinfo.shape[1],
                  oc = oinfo.shape[2];
        if (int_out) {
          const TensorInfo& w = g_.tensor(node.params[0]);
          k::conv2d_int(in.q.data(), qp_of(iinfo), ishape[0], ishape[1],
                        ishape[2], weight_q(node.params[0]).data(),
                        qp_of(w).scale, weight_q(node.params[1]).data(), oc,
                        node.kernel, node.stride, oh, ow, out.q.data(),
                        qp_of(oinfo));
        } else {
          k::conv2d_f32(in.f.data(), ishape[0], ishape[1], ishape[2],
                        weight_f(node.params[0]).data(),
                        weight_f(node.params[1]).data(), oc, node.kernel,
                        node.stride, oh, ow, out.f.data());
        }
        break;
      }
      case OpKind::kMaxPool2d: {
        const int oh = oinfo.shape[0], ow = oinfo.shape[1];
        if (int_out) {
          k::maxpool2d_int(in.q.data(), ishape[0], ishape[1], ishape[2],
                           node.kernel, node.stride, oh, ow, out.q.data());
        } else {
          k::maxpool2d_f32(in.f.data(), ishape[0], ishape[1], ishape[2],
                           node.kernel, node.stride, oh, ow, out.f.data());
        }
        break;
      }
      case OpKind::kGlobalAvgPool2d: {
        if (int_out) {
          k::global_avg_pool_int(in.q.data(), ishape[0], ishape[1], ishape[2],
                                 out.q.data());
        } else {
          k::global_avg_pool_f32(in.f.data(), ishape[0], ishape[1], ishape[2],
                                 out.f.data());
        }
        break;
      }
      case OpKind::kActivation: {
        const std::int64_t n = oinfo.elements();
        if (int_out) {
          k::activation_int(in.q.data(), n, static_cast<int>(node.act),
                            qp_of(iinfo), out.q.data(), qp_of(oinfo));
        } else {
          k::activation_f32(in.f.data(), n, static_cast<int>(node.act),
                            out.f.data());
        }
        break;
      }
      case OpKind::kBatchNorm: {
        const int ch = oinfo.shape.back();
        const std::int64_t rows = oinfo.elements() / ch;
        if (int_out) {
          const TensorInfo& s = g_.tensor(node.params[0]);
          k::batch_norm_int(in.q.data(), qp_of(iinfo), rows, ch,
                            weight_q(node.params[0]).data(), qp_of(s).scale,
                            weight_q(node.params[1]).data(), out.q.data(),
                            qp_of(oinfo));
        } else {
          k::batch_norm_f32(in.f.data(), rows, ch,
                            weight_f(node.params[0]).data(),
                            weight_f(node.params[1]).data(), out.f.data());
        }
        break;
      }
      case OpKind::kSoftmax: {
        const int cols = oinfo.shape.back();
        const std::int64_t rows = oinfo.elements() / cols;
        if (int_out) {
          k::softmax_int(in.q.data(), qp_of(iinfo), rows, cols, out.q.data(),
                         qp_of(oinfo));
        } else {
          k::softmax_f32(in.f.data(), rows, cols, out.f.data());
        }
        break;
      }
      case OpKind::kSimpleRnn: {
        const int steps = ishape[0], feat = ishape[1];
        const int units = oinfo.shape[1];
        if (int_out) {
          const TensorInfo& wx = g_.tensor(node.params[0]);
          const TensorInfo& wh = g_.tensor(node.params[1]);
          k::simple_rnn_int(in.q.data(), qp_of(iinfo),
                            weight_q(node.params[0]).data(), qp_of(wx).scale,
                            weight_q(node.params[1]).data(), qp_of(wh).scale,
                            weight_q(node.params[2]).data(), steps, feat,
                            units, out.q.data(), qp_of(oinfo));
        } else {
          k::simple_rnn_f32(in.f.data(), steps, feat, units,
                            weight_f(node.params[0]).data(),
                            weight_f(node.params[1]).data(),
                            weight_f(node.params[2]).data(), out.f.data());
        }
        break;
      }
      case OpKind::kLstm: {
        const int steps = ishape[0], feat = ishape[1];
        const int units = oinfo.shape[1];
        if (int_out) {
          const TensorInfo& wx = g_.tensor(node.params[0]);
          const TensorInfo& wh = g_.tensor(node.params[1]);
          k::lstm_int(in.q.data(), qp_of(iinfo),
                      weight_q(node.params[0]).data(), qp_of(wx).scale,
                      weight_q(node.params[1]).data(), qp_of(wh).scale,
                      weight_q(node.params[2]).data(), steps, feat, units,
                      out.q.data(), qp_of(oinfo));
        } else {
          k::lstm_f32(in.f.data(), steps, feat, units,
                      weight_f(node.params[0]).data(),
                      weight_f(node.params[1]).data(),
                      weight_f(node.params[2]).data(), out.f.data());
        }
        break;
      }
      case OpKind::kGru: {
        const int steps = ishape[0], feat = ishape[1];
        const int units = oinfo.shape[1];
        if (int_out) {
          const TensorInfo& wx = g_.tensor(node.params[0]);
          const TensorInfo& wh = g_.tensor(node.params[1]);
          k::gru_int(in.q.data(), qp_of(iinfo),
                     weight_q(node.params[0]).data(), qp_of(wx).scale,
                     weight_q(node.params[1]).data(), qp_of(wh).scale,
                     weight_q(node.params[2]).data(),
                     weight_q(node.params[3]).data(), steps, feat, units,
                     out.q.data(), qp_of(oinfo));
        } else {
          k::gru_f32(in.f.data(), steps, feat, units,
                     weight_f(node.params[0]).data(),
                     weight_f(node.params[1]).data(),
                     weight_f(node.params[2]).data(),
                     weight_f(node.params[3]).data(), out.f.data());
        }
        break;
      }
      case OpKind::kEmbedding: {
        const TensorInfo& table = g_.tensor(node.params[0]);
        const int steps = ishape[0];
        const int dim = oinfo.shape[1];
        const int vocab = table.shape[0];
        if (int_out) {
          k::embedding_int(in.q.data(), steps, weight_q(node.params[0]).data(),
                           vocab, dim, out.q.data());
        } else {
          k::embedding_f32(in.q.data(), steps, weight_f(node.params[0]).data(),
                           vocab, dim, out.f.data());
        }
        break;
      }
      case OpKind::kQuantize:
        k::quantize_f32(in.f.data(), oinfo.elements(), qp_of(oinfo),
                        out.q.data());
        break;
      case OpKind::kDequantize:
        k::dequantize_int(in.q.data(), qp_of(iinfo), oinfo.elements(),
                          out.f.data());
        break;
      case OpKind::kRequantize:
        k::requantize_int(in.q.data(), qp_of(iinfo), oinfo.elements(),
                          out.q.data(), qp_of(oinfo));
        break;
    }
  }

  const Graph& g_;
  const ExecHooks* hooks_;
  std::vector<TensorValue> vals_;
  std::unordered_map<int, std::vector<float>> dequant_;
};

}  // namespace

TensorValue execute_graph(const Graph& g, const TensorValue& input,
                          const ExecHooks* hooks) {
  return Executor(g, hooks).run(input);
}

std::vector<std::vector<float>> run_reference(const Graph& g,
                                              const SampleSet& samples) {
  std::vector<std::vector<float>> outs;
  outs.reserve(samples.size());
  for (const auto& input : samples.inputs) {
    TensorValue out = execute_graph(g, input);
    std::vector<float> flat = out.as_f32();
    for (float v : flat) {
      if (!std::isfinite(v)) {
        throw Error(ErrKind::kNonFinite,
                    g.model_name + ": non-finite reference output");
      }
    }
    outs.push_back(std::move(flat));
  }
  return outs;
}

}  // namespace edgemark
