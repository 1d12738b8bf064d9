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
#include <algorithm>
#include <cmath>
#include <vector>

#include "edgemark/config.hpp"
#include "edgemark/kernels.hpp"

namespace edgemark::kernels {
namespace {

inline float apply_act(float v, int act_kind) {
  switch (static_cast<Activation>(act_kind)) {
    case Activation::kRelu:
      return v > 0.0f ? v : 0.0f;
    case Activation::kTanh:
      return static_cast<float>(std::tanh(static_cast<double>(v)));
    case Activation::kSigmoid:
      return static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(v))));
    case Activation::kLeakyRelu:
      return v > 0.0f ? v : kLeakyReluAlpha * v;
  }
  return v;
}

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

void dense_f32(const float* x, const float* w, const float* b, int rows,
               int in_dim, int out_dim, float* y) {
  const std::int64_t total = static_cast<std::int64_t>(rows) * out_dim;
#pragma omp parallel for
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const int r = static_cast<int>(idx / out_dim);
    const int o = static_cast<int>(idx % out_dim);
    const float* xr = x + static_cast<std::int64_t>(r) * in_dim;
    const float* wo = w + static_cast<std::int64_t>(o) * in_dim;
    double acc = b[o];
    for (int i = 0; i < in_dim; ++i) acc += static_cast<double>(xr[i]) * wo[i];
    y[idx] = static_cast<float>(acc);
  }
}

void conv2d_f32(const float* x, int h, int w, int c, const float* kern,
                const float* b, int oc, int kernel, int stride, int oh, int ow,
                float* y) {
  const std::int64_t total = static_cast<std::int64_t>(oh) * ow * oc;
#pragma omp parallel for
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const int o = static_cast<int>(idx % oc);
    const int ox = static_cast<int>((idx / oc) % ow);
    const int oy = static_cast<int>(idx / (static_cast<std::int64_t>(ow) * oc));
    double acc = b[o];
    const float* ko = kern + static_cast<std::int64_t>(o) * kernel * kernel * c;
    for (int ky = 0; ky < kernel; ++ky) {
      const int iy = oy * stride + ky;
      for (int kx = 0; kx < kernel; ++kx) {
        const int ix = ox * stride + kx;
        const float* xp = x + (static_cast<std::int64_t>(iy) * w + ix) * c;
        const float* kp = ko + (static_cast<std::int64_t>(ky) * kernel + kx) * c;
        for (int ci = 0; ci < c; ++ci) {
          acc += static_cast<double>(xp[ci]) * kp[ci];
        }
      }
    }
    y[idx] = static_cast<float>(acc);
  }
}

void maxpool2d_f32(const float* x, int h, int w, int c, int kernel, int stride,
                   int oh, int ow, float* y) {
  const std::int64_t total = static_cast<std::int64_t>(oh) * ow * c;
#pragma omp parallel for
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const int ci = static_cast<int>(idx % c);
    const int ox = static_cast<int>((idx / c) % ow);
    const int oy = static_cast<int>(idx / (static_cast<std::int64_t>(ow) * c));
    float best = x[(static_cast<std::int64_t>(oy * stride) * w + ox * stride) * c + ci];
    for (int ky = 0; ky < kernel; ++ky) {
      for (int kx = 0; kx < kernel; ++kx) {
        const float v =
            x[(static_cast<std::int64_t>(oy * stride + ky) * w + ox * stride + kx) * c + ci];
        best = std::max(best, v);
      }
    }
    y[idx] = best;
  }
}

void global_avg_pool_f32(const float* x, int h, int w, int c, float* y) {
#pragma omp parallel for
  for (int ci = 0; ci < c; ++ci) {
    double acc = 0.0;
    const std::int64_t hw = static_cast<std::int64_t>(h) * w;
    for (std::int64_t i = 0; i < hw; ++i) acc += x[i * c + ci];
    y[ci] = static_cast<float>(acc / static_cast<double>(hw));
  }
}

void activation_f32(const float* x, std::int64_t n, int act_kind, float* y) {
#pragma omp parallel for
  for (std::int64_t i = 0; i < n; ++i) y[i] = apply_act(x[i], act_kind);
}

void batch_norm_f32(const float* x, std::int64_t rows, int ch,
                    const float* scale, const float* shift, float* y) {
  const std::int64_t total = rows * ch;
#pragma omp parallel for
  for (std::int64_t i = 0; i < total; ++i) {
    const int c = static_cast<int>(i % ch);
    y[i] = x[i] * scale[c] + shift[c];
  }
}

void softmax_f32(const float* x, std::int64_t rows, int cols, float* y) {
#pragma omp parallel for
  for (std::int64_t r = 0; r < rows; ++r) {
    const float* xr = x + r * cols;
    float* yr = y + r * cols;
    double mx = xr[0];
    for (int j = 1; j < cols; ++j) mx = std::max(mx, static_cast<double>(xr[j]));
    double sum = 0.0;
    for (int j = 0; j < cols; ++j) sum += std::exp(xr[j] - mx);
    for (int j = 0; j < cols; ++j) {
      yr[j] = static_cast<float>(std::exp(xr[j] - mx) / sum);
    }
  }
}

void simple_rnn_f32(const float* x, int steps, int feat, int units,
                    const float* wx, const float* wh, const float* b,
                    float* y) {
  std::vector<float> h(units, 0.0f);
  std::vector<float> pre(units);
  for (int t = 0; t < steps; ++t) {
    const float* xt = x + static_cast<std::int64_t>(t) * feat;
#pragma omp parallel for
    for (int u = 0; u < units; ++u) {
      double acc = b[u];
      const float* wxu = wx + static_cast<std::int64_t>(u) * feat;
      for (int i = 0; i < feat; ++i) acc += static_cast<double>(xt[i]) * wxu[i];
      const float* whu = wh + static_cast<std::int64_t>(u) * units;
      for (int j = 0; j < units; ++j) acc += static_cast<double>(h[j]) * whu[j];
      pre[u] = static_cast<float>(std::tanh(acc));
    }
    float* yt = y + static_cast<std::int64_t>(t) * units;
    for (int u = 0; u < units; ++u) {
      h[u] = pre[u];
      yt[u] = pre[u];
    }
  }
}

void lstm_f32(const float* x, int steps, int feat, int units, const float* wx,
              const float* wh, const float* b, float* y) {
  std::vector<float> h(units, 0.0f);
  std::vector<double> c(units, 0.0);
  std::vector<double> gates(static_cast<std::size_t>(4) * units);
  for (int t = 0; t < steps; ++t) {
    const float* xt = x + static_cast<std::int64_t>(t) * feat;
#pragma omp parallel for
    for (int g = 0; g < 4 * units; ++g) {
      double acc = b[g];
      const float* wxg = wx + static_cast<std::int64_t>(g) * feat;
      for (int i = 0; i < feat; ++i) acc += static_cast<double>(xt[i]) * wxg[i];
      const float* whg = wh + static_cast<std::int64_t>(g) * units;
      for (int j = 0; j < units; ++j) acc += static_cast<double>(h[j]) * whg[j];
      gates[g] = acc;
    }
    float* yt = y + static_cast<std::int64_t>(t) * units;
    for (int u = 0; u < units; ++u) {
      const double gi = sigmoid(gates[u]);
      const double gf = sigmoid(gates[units + u]);
      const double gg = std::tanh(gates[2 * units + u]);
      const double go = sigmoid(gates[3 * units + u]);
      c[u] = gf * c[u] + gi * gg;
      const double hu = go * std::tanh(c[u]);
      h[u] = static_cast<float>(hu);
      yt[u] = h[u];
    }
  }
}

void gru_f32(const float* x, int steps, int feat, int units, const float* wx,
             const float* wh, const float* bx, const float* bh, float* y) {
  std::vector<float> h(units, 0.0f);
  std::vector<double> ax(static_cast<std::size_t>(3) * units);
  std::vector<double> ah(static_cast<std::size_t>(3) * units);
  for (int t = 0; t < steps; ++t) {
    const float* xt = x + static_cast<std::int64_t>(t) * feat;
#pragma omp parallel for
    for (int g = 0; g < 3 * units; ++g) {
      double accx = bx[g];
      const float* wxg = wx + static_cast<std::int64_t>(g) * feat;
      for (int i = 0; i < feat; ++i) accx += static_cast<double>(xt[i]) * wxg[i];
      ax[g] = accx;
      double acch = bh[g];
      const float* whg = wh + static_cast<std::int64_t>(g) * units;
      for (int j = 0; j < units; ++j) acch += static_cast<double>(h[j]) * whg[j];
      ah[g] = acch;
    }
    float* yt = y + static_cast<std::int64_t>(t) * units;
    for (int u = 0; u < units; ++u) {
      const double z = sigmoid(ax[u] + ah[u]);
      const double r = sigmoid(ax[units + u] + ah[units + u]);
      const double hh = std::tanh(ax[2 * units + u] + r * ah[2 * units + u]);
      const double hu = z * h[u] + (1.0 - z) * hh;
      h[u] = static_cast<float>(hu);
      yt[u] = h[u];
    }
  }
}

void embedding_f32(const std::int32_t* tokens, int steps, const float* table,
                   int vocab, int dim, float* y) {
#pragma omp parallel for
  for (int t = 0; t < steps; ++t) {
    std::int32_t tok = tokens[t];
    if (tok < 0) tok = 0;
    if (tok >= vocab) tok = vocab - 1;
    const float* row = table + static_cast<std::int64_t>(tok) * dim;
    float* yt = y + static_cast<std::int64_t>(t) * dim;
    for (int d = 0; d < dim; ++d) yt[d] = row[d];
  }
}

}  // namespace edgemark::kernels
