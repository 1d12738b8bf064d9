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

inline std::int32_t clamp_q(long long v, const QuantParams& qp) {
  v = std::clamp(v, static_cast<long long>(qp.qmin),
                 static_cast<long long>(qp.qmax));
  return static_cast<std::int32_t>(v);
}

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

std::int32_t requantize_acc(std::int64_t acc, double real_multiplier,
                            const QuantParams& out) {
  const long long r = std::llround(static_cast<double>(acc) * real_multiplier);
  return clamp_q(r + out.zero_point, out);
}

void dense_int(const std::int32_t* x, const QuantParams& qx,
               const std::int32_t* w, double w_scale, const std::int32_t* bias,
               int rows, int in_dim, int out_dim, std::int32_t* y,
               const QuantParams& qy) {
  const double mult = qx.scale * w_scale / qy.scale;
  const std::int64_t total = static_cast<std::int64_t>(rows) * out_dim;
#pragma omp parallel for
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const int r = static_cast<int>(idx / out_dim);
    const int o = static_cast<int>(idx % out_dim);
    const std::int32_t* xr = x + static_cast<std::int64_t>(r) * in_dim;
    const std::int32_t* wo = w + static_cast<std::int64_t>(o) * in_dim;
    std::int64_t acc = bias[o];
    for (int i = 0; i < in_dim; ++i) {
      acc += static_cast<std::int64_t>(xr[i] - qx.zero_point) * wo[i];
    }
    y[idx] = requantize_acc(acc, mult, qy);
  }
}

void conv2d_int(const std::int32_t* x, const QuantParams& qx, int h, int w,
                int c, const std::int32_t* kern, double w_scale,
                const std::int32_t* bias, int oc, int kernel, int stride,
                int oh, int ow, std::int32_t* y, const QuantParams& qy) {
  const double mult = qx.scale * w_scale / qy.scale;
  const std::int64_t total = static_cast<std::int64_t>(oh) * ow * oc;
#pragma omp parallel for
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const int o = static_cast<int>(idx % oc);
    const int ox = static_cast<int>((idx / oc) % ow);
    const int oy = static_cast<int>(idx / (static_cast<std::int64_t>(ow) * oc));
    std::int64_t acc = bias[o];
    const std::int32_t* ko =
        kern + static_cast<std::int64_t>(o) * kernel * kernel * c;
    for (int ky = 0; ky < kernel; ++ky) {
      const int iy = oy * stride + ky;
      for (int kx = 0; kx < kernel; ++kx) {
        const int ix = ox * stride + kx;
        const std::int32_t* xp = x + (static_cast<std::int64_t>(iy) * w + ix) * c;
        const std::int32_t* kp =
            ko + (static_cast<std::int64_t>(ky) * kernel + kx) * c;
        for (int ci = 0; ci < c; ++ci) {
          acc += static_cast<std::int64_t>(xp[ci] - qx.zero_point) * kp[ci];
        }
      }
    }
    y[idx] = requantize_acc(acc, mult, qy);
  }
}

void maxpool2d_int(const std::int32_t* x, int h, int w, int c, int kernel,
                   int stride, int oh, int ow, std::int32_t* y) {
  const std::int64_t total = static_cast<std::int64_t>(oh) * ow * c;
#pragma omp parallel for
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const int ci = static_cast<int>(idx % c);
    const int ox = static_cast<int>((idx / c) % ow);
    const int oy = static_cast<int>(idx / (static_cast<std::int64_t>(ow) * c));
    std::int32_t best =
        x[(static_cast<std::int64_t>(oy * stride) * w + ox * stride) * c + ci];
    for (int ky = 0; ky < kernel; ++ky) {
      for (int kx = 0; kx < kernel; ++kx) {
        best = std::max(
            best,
            x[(static_cast<std::int64_t>(oy * stride + ky) * w + ox * stride + kx) *
                  c +
              ci]);
      }
    }
    y[idx] = best;
  }
}

void global_avg_pool_int(const std::int32_t* x, int h, int w, int c,
                         std::int32_t* y) {
  const std::int64_t hw = static_cast<std::int64_t>(h) * w;
#pragma omp parallel for
  for (int ci = 0; ci < c; ++ci) {
    std::int64_t acc = 0;
    for (std::int64_t i = 0; i < hw; ++i) acc += x[i * c + ci];
    y[ci] = static_cast<std::int32_t>(
        std::llround(static_cast<double>(acc) / static_cast<double>(hw)));
  }
}

void activation_int(const std::int32_t* x, std::int64_t n, int act_kind,
                    const QuantParams& qx, std::int32_t* y,
                    const QuantParams& qy) {
  const auto kind = static_cast<Activation>(act_kind);
#pragma omp parallel for
  for (std::int64_t i = 0; i < n; ++i) {
    switch (kind) {
      case Activation::kRelu:
        y[i] = std::max(x[i], qx.zero_point);
        break;
      case Activation::kLeakyRelu: {
        if (x[i] >= qx.zero_point) {
          y[i] = x[i];
        } else {
          const long long v = std::llround(
              static_cast<double>(kLeakyReluAlpha) * (x[i] - qx.zero_point));
          y[i] = clamp_q(v + qx.zero_point, qx);
        }
        break;
      }
      case Activation::kTanh: {
        const double v = std::tanh(qx.scale * (x[i] - qx.zero_point));
        y[i] = clamp_q(std::llround(v / qy.scale) + qy.zero_point, qy);
        break;
      }
      case Activation::kSigmoid: {
        const double v = sigmoid(qx.scale * (x[i] - qx.zero_point));
        y[i] = clamp_q(std::llround(v / qy.scale) + qy.zero_point, qy);
        break;
      }
    }
  }
}

void batch_norm_int(const std::int32_t* x, const QuantParams& qx,
                    std::int64_t rows, int ch, const std::int32_t* scale_q,
                    double scale_scale, const std::int32_t* shift_q,
                    std::int32_t* y, const QuantParams& qy) {
  const double mult = qx.scale * scale_scale / qy.scale;
  const std::int64_t total = rows * ch;
#pragma omp parallel for
  for (std::int64_t i = 0; i < total; ++i) {
    const int c = static_cast<int>(i % ch);
    std::int64_t acc =
        static_cast<std::int64_t>(x[i] - qx.zero_point) * scale_q[c] +
        shift_q[c];
    y[i] = requantize_acc(acc, mult, qy);
  }
}

void softmax_int(const std::int32_t* x, const QuantParams& qx,
                 std::int64_t rows, int cols, std::int32_t* y,
                 const QuantParams& qy) {
#pragma omp parallel for
  for (std::int64_t r = 0; r < rows; ++r) {
    const std::int32_t* xr = x + r * cols;
    std::int32_t* yr = y + r * cols;
    double mx = qx.scale * (xr[0] - qx.zero_point);
    for (int j = 1; j < cols; ++j) {
      mx = std::max(mx, qx.scale * (xr[j] - qx.zero_point));
    }
    double sum = 0.0;
    for (int j = 0; j < cols; ++j) {
      sum += std::exp(qx.scale * (xr[j] - qx.zero_point) - mx);
    }
    for (int j = 0; j < cols; ++j) {
      const double p = std::exp(qx.scale * (xr[j] - qx.zero_point) - mx) / sum;
      yr[j] = clamp_q(std::llround(p / qy.scale) + qy.zero_point, qy);
    }
  }
}

void simple_rnn_int(const std::int32_t* x, const QuantParams& qx,
                    const std::int32_t* wx, double wx_scale,
                    const std::int32_t* wh, double wh_scale,
                    const std::int32_t* bias, int steps, int feat, int units,
                    std::int32_t* y, const QuantParams& qh) {
  const double sx = qx.scale * wx_scale;
  const double sh = qh.scale * wh_scale;
  std::vector<std::int32_t> h(units, qh.zero_point);
  std::vector<std::int32_t> next(units);
  for (int t = 0; t < steps; ++t) {
    const std::int32_t* xt = x + static_cast<std::int64_t>(t) * feat;
#pragma omp parallel for
    for (int u = 0; u < units; ++u) {
      std::int64_t accx = bias[u];
      const std::int32_t* wxu = wx + static_cast<std::int64_t>(u) * feat;
      for (int i = 0; i < feat; ++i) {
        accx += static_cast<std::int64_t>(xt[i] - qx.zero_point) * wxu[i];
      }
      std::int64_t acch = 0;
      const std::int32_t* whu = wh + static_cast<std::int64_t>(u) * units;
      for (int j = 0; j < units; ++j) {
        acch += static_cast<std::int64_t>(h[j] - qh.zero_point) * whu[j];
      }
      const double pre = static_cast<double>(accx) * sx +
                         static_cast<double>(acch) * sh;
      const double hv = std::tanh(pre);
      next[u] = clamp_q(std::llround(hv / qh.scale) + qh.zero_point, qh);
    }
    std::int32_t* yt = y + static_cast<std::int64_t>(t) * units;
    for (int u = 0; u < units; ++u) {
      h[u] = next[u];
      yt[u] = next[u];
    }
  }
}

void lstm_int(const std::int32_t* x, const QuantParams& qx,
              const std::int32_t* wx, double wx_scale, const std::int32_t* wh,
              double wh_scale, const std::int32_t* bias, int steps, int feat,
              int units, std::int32_t* y, const QuantParams& qh) {
  const double sx = qx.scale * wx_scale;
  const double sh = qh.scale * wh_scale;
  std::vector<std::int32_t> h(units, qh.zero_point);
  std::vector<double> c(units, 0.0);
  std::vector<double> gates(static_cast<std::size_t>(4) * units);
  for (int t = 0; t < steps; ++t) {
    const std::int32_t* xt = x + static_cast<std::int64_t>(t) * feat;
#pragma omp parallel for
    for (int g = 0; g < 4 * units; ++g) {
      std::int64_t accx = bias[g];
      const std::int32_t* wxg = wx + static_cast<std::int64_t>(g) * feat;
      for (int i = 0; i < feat; ++i) {
        accx += static_cast<std::int64_t>(xt[i] - qx.zero_point) * wxg[i];
      }
      std::int64_t acch = 0;
      const std::int32_t* whg = wh + static_cast<std::int64_t>(g) * units;
      for (int j = 0; j < units; ++j) {
        acch += static_cast<std::int64_t>(h[j] - qh.zero_point) * whg[j];
      }
      gates[g] = static_cast<double>(accx) * sx + static_cast<double>(acch) * sh;
    }
    std::int32_t* yt = y + static_cast<std::int64_t>(t) * units;
    for (int u = 0; u < units; ++u) {
      const double gi = sigmoid(gates[u]);
      const double gf = sigmoid(gates[units + u]);
      const double gg = std::tanh(gates[2 * units + u]);
      const double go = sigmoid(gates[3 * units + u]);
      c[u] = gf * c[u] + gi * gg;
      const double hv = go * std::tanh(c[u]);
      h[u] = clamp_q(std::llround(hv / qh.scale) + qh.zero_point, qh);
      yt[u] = h[u];
    }
  }
}

void gru_int(const std::int32_t* x, const QuantParams& qx,
             const std::int32_t* wx, double wx_scale, const std::int32_t* wh,
             double wh_scale, const std::int32_t* bx, const std::int32_t* bh,
             int steps, int feat, int units, std::int32_t* y,
             const QuantParams& qh) {
  const double sx = qx.scale * wx_scale;
  const double sh = qh.scale * wh_scale;
  std::vector<std::int32_t> h(units, qh.zero_point);
  std::vector<double> ax(static_cast<std::size_t>(3) * units);
  std::vector<double> ah(static_cast<std::size_t>(3) * units);
  for (int t = 0; t < steps; ++t) {
    const std::int32_t* xt = x + static_cast<std::int64_t>(t) * feat;
#pragma omp parallel for
    for (int g = 0; g < 3 * units; ++g) {
      std::int64_t accx = bx[g];
      const std::int32_t* wxg = wx + static_cast<std::int64_t>(g) * feat;
      for (int i = 0; i < feat; ++i) {
        accx += static_cast<std::int64_t>(xt[i] - qx.zero_point) * wxg[i];
      }
      ax[g] = static_cast<double>(accx) * sx;
      std::int64_t acch = bh[g];
      const std::int32_t* whg = wh + static_cast<std::int64_t>(g) * units;
      for (int j = 0; j < units; ++j) {
        acch += static_cast<std::int64_t>(h[j] - qh.zero_point) * whg[j];
      }
      ah[g] = static_cast<double>(acch) * sh;
    }
    std::int32_t* yt = y + static_cast<std::int64_t>(t) * units;
    for (int u = 0; u < units; ++u) {
      const double z = sigmoid(ax[u] + ah[u]);
      const double r = sigmoid(ax[units + u] + ah[units + u]);
      const double hh = std::tanh(ax[2 * units + u] + r * ah[2 * units + u]);
      const double hq = qh.scale * (h[u] - qh.zero_point);
      const double hv = z * hq + (1.0 - z) * hh;
      h[u] = clamp_q(std::llround(hv / qh.scale) + qh.zero_point, qh);
      yt[u] = h[u];
    }
  }
}

void embedding_int(const std::int32_t* tokens, int steps,
                   const std::int32_t* table, int vocab, int dim,
                   std::int32_t* y) {
#pragma omp parallel for
  for (int t = 0; t < steps; ++t) {
    std::int32_t tok = tokens[t];
    if (tok < 0) tok = 0;
    if (tok >= vocab) tok = vocab - 1;
    const std::int32_t* row = table + static_cast<std::int64_t>(tok) * dim;
    std::int32_t* yt = y + static_cast<std::int64_t>(t) * dim;
    for (int d = 0; d < dim; ++d) yt[d] = row[d];
  }
}

void quantize_f32(const float* x, std::int64_t n, const QuantParams& qy,
                  std::int32_t* y) {
#pragma omp parallel for
  for (std::int64_t i = 0; i < n; ++i) {
    y[i] = quantize_value(static_cast<double>(x[i]), qy);
  }
}

void dequantize_int(const std::int32_t* x, const QuantParams& qx,
                    std::int64_t n, float* y) {
#pragma omp parallel for
  for (std::int64_t i = 0; i < n; ++i) {
    y[i] = static_cast<float>(dequantize_value(x[i], qx));
  }
}

void requantize_int(const std::int32_t* x, const QuantParams& qx,
                    std::int64_t n, std::int32_t* y, const QuantParams& qy) {
  const double mult = qx.scale / qy.scale;
#pragma omp parallel for
  for (std::int64_t i = 0; i < n; ++i) {
    y[i] = requantize_acc(x[i] - qx.zero_point, mult, qy);
  }
}

}  // namespace edgemark::kernels
