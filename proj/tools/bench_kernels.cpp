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

// Compares the OpenMP kernels against the serial reference kernels, both for
// wall time and for agreement, on a few representative shapes.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#include "edgemark/kernels.hpp"
#include "edgemark/prng.hpp"
#include "edgemark/tensor.hpp"
#include "refkernels.hpp"

namespace {

using edgemark::QuantParams;
using edgemark::SplitMix64;

double time_ms(int iters, const std::function<void()>& fn) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < iters; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / iters;
}

std::vector<float> rand_f32(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>(rng.uniform(-0.5, 0.5));
  return v;
}

std::vector<std::int32_t> rand_i8(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::int32_t> v(n);
  for (auto& x : v) {
    x = static_cast<std::int32_t>(rng.next_below(255)) - 127;
  }
  return v;
}

float max_abs_diff(const std::vector<float>& a, const std::vector<float>& b) {
  float m = 0.0f;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

long max_abs_diff(const std::vector<std::int32_t>& a,
                  const std::vector<std::int32_t>& b) {
  long m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::labs(static_cast<long>(a[i]) - b[i]));
  }
  return m;
}

void row(const char* name, double par_ms, double ser_ms, double diff) {
  std::printf("%-14s %10.3f ms %10.3f ms %8.2fx  max|d|=%g\n", name, par_ms,
              ser_ms, ser_ms / par_ms, diff);
}

}  // namespace

int main(int argc, char** argv) {
  int iters = 20;
  int scale = 1;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--quick")) {
      iters = 3;
      scale = 0;
    } else if (!std::strcmp(argv[i], "--iters") && i + 1 < argc) {
      iters = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--quick] [--iters N]\n", argv[0]);
      return 2;
    }
  }

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-14s %13s %13s %9s\n", "kernel", "parallel", "serial",
              "speedup");

  {
    const int rows = scale ? 64 : 4, in = scale ? 512 : 32,
              out = scale ? 512 : 16;
    const auto x = rand_f32(static_cast<std::size_t>(rows) * in, 1);
    const auto w = rand_f32(static_cast<std::size_t>(out) * in, 2);
    const auto b = rand_f32(out, 3);
    std::vector<float> yp(static_cast<std::size_t>(rows) * out), ys = yp;
    const double pm = time_ms(iters, [&] {
      edgemark::kernels::dense_f32(x.data(), w.data(), b.data(), rows, in, out,
                                   yp.data());
    });
    const double sm = time_ms(iters, [&] {
      edgemark::refkernels::dense_f32(x.data(), w.data(), b.data(), rows, in,
                                      out, ys.data());
    });
    row("dense_f32", pm, sm, max_abs_diff(yp, ys));
  }

  {
    const int h = scale ? 64 : 12, w = scale ? 64 : 12, c = scale ? 16 : 2;
    const int oc = scale ? 32 : 4, k = 3, s = 1;
    const int oh = (h - k) / s + 1, ow = (w - k) / s + 1;
    const auto x = rand_f32(static_cast<std::size_t>(h) * w * c, 4);
    const auto kern = rand_f32(static_cast<std::size_t>(oc) * k * k * c, 5);
    const auto b = rand_f32(oc, 6);
    std::vector<float> yp(static_cast<std::size_t>(oh) * ow * oc), ys = yp;
    const double pm = time_ms(iters, [&] {
      edgemark::kernels::conv2d_f32(x.data(), h, w, c, kern.data(), b.data(),
                                    oc, k, s, oh, ow, yp.data());
    });
    const double sm = time_ms(iters, [&] {
      edgemark::refkernels::conv2d_f32(x.data(), h, w, c, kern.data(),
                                       b.data(), oc, k, s, oh, ow, ys.data());
    });
    row("conv2d_f32", pm, sm, max_abs_diff(yp, ys));
  }

  {
    const int steps = scale ? 96 : 8, feat = scale ? 64 : 4,
              units = scale ? 96 : 8;
    const auto x = rand_f32(static_cast<std::size_t>(steps) * feat, 7);
    const auto wx = rand_f32(static_cast<std::size_t>(4) * units * feat, 8);
    const auto wh = rand_f32(static_cast<std::size_t>(4) * units * units, 9);
    const auto b = rand_f32(static_cast<std::size_t>(4) * units, 10);
    std::vector<float> yp(static_cast<std::size_t>(steps) * units), ys = yp;
    const double pm = time_ms(iters, [&] {
      edgemark::kernels::lstm_f32(x.data(), steps, feat, units, wx.data(),
                                  wh.data(), b.data(), yp.data());
    });
    const double sm = time_ms(iters, [&] {
      edgemark::refkernels::lstm_f32(x.data(), steps, feat, units, wx.data(),
                                     wh.data(), b.data(), ys.data());
    });
    row("lstm_f32", pm, sm, max_abs_diff(yp, ys));
  }

  {
    const int rows = scale ? 64 : 4, in = scale ? 512 : 32,
              out = scale ? 512 : 16;
    const auto x = rand_i8(static_cast<std::size_t>(rows) * in, 11);
    const auto w = rand_i8(static_cast<std::size_t>(out) * in, 12);
    std::vector<std::int32_t> bias(out, 100);
    QuantParams qx{0.02, 3, -128, 127};
    QuantParams qy{0.05, -10, -128, 127};
    std::vector<std::int32_t> yp(static_cast<std::size_t>(rows) * out),
        ys = yp;
    const double pm = time_ms(iters, [&] {
      edgemark::kernels::dense_int(x.data(), qx, w.data(), 0.003, bias.data(),
                                   rows, in, out, yp.data(), qy);
    });
    const double sm = time_ms(iters, [&] {
      edgemark::refkernels::dense_int(x.data(), qx, w.data(), 0.003,
                                      bias.data(), rows, in, out, ys.data(),
                                      qy);
    });
    row("dense_int", pm, sm, static_cast<double>(max_abs_diff(yp, ys)));
  }

  return 0;
}
