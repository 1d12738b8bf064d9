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
#ifndef EDGEMARK_TESTS_REFKERNELS_HPP_
#define EDGEMARK_TESTS_REFKERNELS_HPP_

// Deliberately naive serial kernels with the same contracts as
// edgemark::kernels. Unit tests treat these as the oracle; tools/bench_kernels
// uses them as the baseline. Integer kernels accumulate in __int128, so any
// accumulator overflow in the production path shows up as a mismatch.

#include <cstdint>

#include "edgemark/tensor.hpp"

namespace edgemark::refkernels {

void dense_f32(const float* x, const float* w, const float* b, int rows,
               int in_dim, int out_dim, float* y);
void conv2d_f32(const float* x, int h, int w, int c, const float* kern,
                const float* b, int oc, int kernel, int stride, int oh, int ow,
                float* y);
void maxpool2d_f32(const float* x, int h, int w, int c, int kernel, int stride,
                   int oh, int ow, float* y);
void global_avg_pool_f32(const float* x, int h, int w, int c, float* y);
void activation_f32(const float* x, std::int64_t n, int act_kind, float* y);
void batch_norm_f32(const float* x, std::int64_t rows, int ch,
                    const float* scale, const float* shift, float* y);
void softmax_f32(const float* x, std::int64_t rows, int cols, float* y);
void simple_rnn_f32(const float* x, int steps, int feat, int units,
                    const float* wx, const float* wh, const float* b, float* y);
void lstm_f32(const float* x, int steps, int feat, int units, const float* wx,
              const float* wh, const float* b, float* y);
void gru_f32(const float* x, int steps, int feat, int units, const float* wx,
             const float* wh, const float* bx, const float* bh, float* y);
void embedding_f32(const std::int32_t* tokens, int steps, const float* table,
                   int vocab, int dim, float* y);

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
void global_avg_pool_int(const std::int32_t* x, int h, int w, int c,
                         std::int32_t* y);
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

}  // namespace edgemark::refkernels

#endif  // EDGEMARK_TESTS_REFKERNELS_HPP_
