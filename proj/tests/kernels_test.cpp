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
#include <doctest.h>
#include <omp.h>

#include <cmath>

#include "edgemark/kernels.hpp"
#include "edgemark/tensor.hpp"
#include "kernel_compare.hpp"

using namespace edgemark;

TEST_CASE("parallel kernels match the serial reference") {
  // The acceptance suite runs the full 100 cases; keep the unit pass lighter.
  auto r = kernelcmp::compare_kernels(25, 0x5eedULL);
  CHECK(r.float_checks > 10000);
  CHECK(r.int_checks > 10000);
  CHECK(r.max_float_rel <= 1e-5);
  CHECK_MESSAGE(r.int_exact(), r.first_int_mismatch);
}

TEST_CASE("results do not depend on the thread count") {
  int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto serial = kernelcmp::compare_kernels(5, 42);
  omp_set_num_threads(4);
  auto threaded = kernelcmp::compare_kernels(5, 42);
  omp_set_num_threads(saved);
  // Identical inputs, identical accumulation order: identical deviations.
  CHECK(serial.max_float_rel == threaded.max_float_rel);
  CHECK(serial.first_int_mismatch == threaded.first_int_mismatch);
}

TEST_CASE("requantize_acc rounds half away from zero and clamps") {
  QuantParams q{0.5, 10, -128, 127};
  CHECK(kernels::requantize_acc(0, 1.0, q) == 10);
  CHECK(kernels::requantize_acc(3, 0.5, q) == 12);   // 1.5 -> 2
  CHECK(kernels::requantize_acc(-3, 0.5, q) == 8);   // -1.5 -> -2
  CHECK(kernels::requantize_acc(5, 0.5, q) == 13);   // 2.5 -> 3
  CHECK(kernels::requantize_acc(1000000, 1.0, q) == 127);
  CHECK(kernels::requantize_acc(-1000000, 1.0, q) == -128);
}

TEST_CASE("activations compute the documented functions") {
  const float xs[] = {-2.0f, -0.5f, 0.0f, 0.5f, 2.0f};
  float y[5];
  kernels::activation_f32(xs, 5, 0, y);  // relu
  CHECK(y[0] == 0.0f);
  CHECK(y[4] == 2.0f);
  kernels::activation_f32(xs, 5, 1, y);  // tanh
  CHECK(y[1] == doctest::Approx(std::tanh(-0.5)));
  kernels::activation_f32(xs, 5, 2, y);  // sigmoid
  CHECK(y[2] == doctest::Approx(0.5));
  kernels::activation_f32(xs, 5, 3, y);  // leaky relu
  CHECK(y[0] == doctest::Approx(-2.0 * kernels::kLeakyReluAlpha));
  CHECK(y[4] == 2.0f);
}

TEST_CASE("softmax rows sum to one and order is preserved") {
  const float xs[] = {1.0f, 2.0f, 3.0f, -1.0f, -2.0f, -3.0f};
  float y[6];
  kernels::softmax_f32(xs, 2, 3, y);
  CHECK(y[0] + y[1] + y[2] == doctest::Approx(1.0));
  CHECK(y[3] + y[4] + y[5] == doctest::Approx(1.0));
  CHECK(y[2] > y[1]);
  CHECK(y[3] > y[4]);
  // Max subtraction keeps large logits finite.
  const float big[] = {500.0f, 501.0f};
  float yb[2];
  kernels::softmax_f32(big, 1, 2, yb);
  CHECK(std::isfinite(yb[0]));
  CHECK(yb[1] > yb[0]);
}

TEST_CASE("integer relu clamps at the zero point") {
  QuantParams qx{0.1, -5, -128, 127};
  const std::int32_t xs[] = {-120, -5, 0, 60};
  std::int32_t y[4];
  kernels::activation_int(xs, 4, 0, qx, y, qx);
  CHECK(y[0] == -5);
  CHECK(y[1] == -5);
  CHECK(y[2] == 0);
  CHECK(y[3] == 60);
}

TEST_CASE("binary16 round trip is exact on representable values") {
  CHECK(f16_round_trip(1.0f) == 1.0f);
  CHECK(f16_round_trip(-0.375f) == -0.375f);
  CHECK(f16_round_trip(65504.0f) == 65504.0f);   // f16 max
  CHECK(f16_round_trip(100000.0f) > 65504.0f);   // overflows to inf
  CHECK(f16_round_trip(0.0f) == 0.0f);
  // Rounding is to nearest even in the 10 bit mantissa.
  float x = 1.0f + 1.0f / 2048.0f;  // halfway between 1.0 and 1.0 + 2^-10
  CHECK(f16_round_trip(x) == 1.0f);
}
