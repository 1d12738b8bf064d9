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
#ifndef EDGEMARK_KERNELS_HPP_
#define EDGEMARK_KERNELS_HPP_

// OpenMP-parallel kernels backing graph execution. Parallelism is always
// over output elements with a fixed per-output accumulation order, so
// results are bit-identical for any thread count. A deliberately naive
// serial implementation of the same contracts lives in tests/refkernels and
// is used as the oracle; tools/bench_kernels compares the two for speed.

#include <cstdint>

#include "edgemark/tensor.hpp"

namespace edgemark::kernels {

inline constexpr float kLeakyReluAlpha = 0.1f;

// Requantizes an integer accumulator: multiplies by the real-valued ratio in
// double precision, rounds half away from zero, adds the output zero point
// and clamps. Every integer kernel funnels through this helper.
std::int32_t requantize_acc(std::int64_t acc, double real_multiplier,
                            const QuantParams& out);

// ---- float kernels ----
// Dense over `rows` independent input rows: y[r, o] = b[o] + x[r] . w[o].
// w layout (out_dim, in_dim) row-major. Accumulation in double, output f32.
void dense_f32(const float* x, const float* w, const float* b, int rows,
               int in_dim, int out_dim, float* y);

// Valid padding, stride `stride`, kernel layout (oc, k, k, c) row-major,
// input (h, w, c), output (oh, ow, oc).
void conv2d_f32(const float* x, int h, int w, int c, const float* kern,
                const float* b, int oc, int kernel, int stride, int oh, int ow,
                float* y);

void maxpool2d_f32(const float* x, int h, int w, int c, int kernel, int stride,
                   int oh, int ow, float* y);
void global_avg_pool_f32(const float* x, int h, int w, int c, float* y);

void activation_f32(const float* x, std::int64_t n, int act_kind, float* y);
void batch_norm_f32(const float* x, std::int64_t rows, int ch,
                    const float* scale, const float* shift, float* y);
// Row-wise softmax over the last dimension, max-subtracted for stability.
void softmax_f32(const float* x, std::int64_t rows, int cols, float* y);

// Recurrent kernels: sequential over time steps, parallel over units.
// y has shape (steps, units) and always holds the full output sequence.
void simple_rnn_f32(const float* x, int steps, int feat, int units,
                    const float* wx, const float* wh, const float* b, float* y);
// LSTM gate row order in wx/wh/b: input, forget, cell, output.
void lstm_f32(const float* x, int steps, int feat, int units, const float* wx,
              const float* wh, const float* b, float* y);
// GRU, reset-after with separate input/recurrent biases; gate row order:
// update, reset, candidate.
void gru_f32(const float* x, int steps, int feat, int units, const float* wx,
             const float* wh, const float* bx, const float* bh, float* y);

void embedding_f32(const std::int32_t* tokens, int steps, const float* table,
                   int vocab, int dim, float* y);

// ---- integer kernels ----
// Quantized values travel as int32 regardless of nominal width; the quant
// params carry the clamping range. Weights are symmetric (zero point 0).
void dense_int(const std::int32_t* x, const QuantParams& qx,
               const std::int32_t* w, double w_scale, const std::int32_t* bias,
               int rows, int in_dim, int out_dim, std::int32_t* y,
               const QuantParams& qy);

void conv2d_int(const std::int32_t* x, const QuantParams& qx, int h, int w,
                int c, const std::int32_t* kern, double w_scale,
                const std::int32_t* bias, int oc, int kernel, int stride,
                int oh, int ow, std::int32_t* y, const QuantParams& qy);

void maxpool2d_int(const std::int32_t* x, int h, int w, int c, int kernel,
                   int stride, int oh, int ow, std::int32_t* y);
// Same quant params in and out; mean rounds half away from zero.
void global_avg_pool_int(const std::int32_t* x, int h, int w, int c,
                         std::int32_t* y);

// relu/leaky keep the input params; tanh/sigmoid requantize into qy.
void activation_int(const std::int32_t* x, std::int64_t n, int act_kind,
                    const QuantParams& qx, std::int32_t* y,
                    const QuantParams& qy);
void batch_norm_int(const std::int32_t* x, const QuantParams& qx,
                    std::int64_t rows, int ch, const std::int32_t* scale_q,
                    double scale_scale, const std::int32_t* shift_q,
                    std::int32_t* y, const QuantParams& qy);
void softmax_int(const std::int32_t* x, const QuantParams& qx,
                 std::int64_t rows, int cols, std::int32_t* y,
                 const QuantParams& qy);

// Recurrent integer kernels: matrix accumulations stay integer; the two
// paths are combined in double (their scales differ), gate nonlinearities
// run in double, and the hidden state is requantized to qh every step so the
// recurrence consumes exactly what the output tensor stores. LSTM cell state
// is carried in double across steps.
void simple_rnn_int(const std::int32_t* x, const QuantParams& qx,
                    const std::int32_t* wx, double wx_scale,
                    const std::int32_t* wh, double wh_scale,
                    const std::int32_t* bias, int steps, int feat, int units,
                    std::int32_t* y, const QuantParams& qh);
void lstm_int(const std::int32_t* x, const QuantParams& qx,
              const std::int32_t* wx, double wx_scale, const std::int32_t* wh,
              double wh_scale, const std::int32_t* bias, int steps, int feat,
              int units, std::int32_t* y, const QuantParams& qh);
void gru_int(const std::int32_t* x, const QuantParams& qx,
             const std::int32_t* wx, double wx_scale, const std::int32_t* wh,
             double wh_scale, const std::int32_t* bx, const std::int32_t* bh,
             int steps, int feat, int units, std::int32_t* y,
             const QuantParams& qh);

void embedding_int(const std::int32_t* tokens, int steps,
                   const std::int32_t* table, int vocab, int dim,
                   std::int32_t* y);

void quantize_f32(const float* x, std::int64_t n, const QuantParams& qy,
                  std::int32_t* y);
void dequantize_int(const std::int32_t* x, const QuantParams& qx,
                    std::int64_t n, float* y);
void requantize_int(const std::int32_t* x, const QuantParams& qx,
                    std::int64_t n, std::int32_t* y, const QuantParams& qy);

}  // namespace edgemark::kernels

#endif  // EDGEMARK_KERNELS_HPP_
