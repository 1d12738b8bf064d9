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
#ifndef EDGEMARK_TENSOR_HPP_
#define EDGEMARK_TENSOR_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace edgemark {

enum class DType { kF32, kF16, kI32, kI16, kI8 };

std::size_t dtype_size(DType dtype);
const char* dtype_name(DType dtype);
bool dtype_is_float(DType dtype);

// Affine quantization parameters: real = scale * (q - zero_point).
struct QuantParams {
  double scale = 1.0;
  std::int32_t zero_point = 0;
  std::int32_t qmin = -128;
  std::int32_t qmax = 127;

  bool operator==(const QuantParams&) const = default;
};

// Per-tensor symmetric weight parameters for `bits` wide signed integers:
// scale = max|w| / qmax, zero_point = 0.
QuantParams symmetric_params(double max_abs, int bits);
// Affine activation parameters covering [min, max].
QuantParams affine_i8_params(double min, double max);
// Symmetric 16 bit activation parameters covering [-max_abs, max_abs].
QuantParams symmetric_i16_params(double max_abs);

// Rounds half away from zero, quantizes, clamps to [qmin, qmax].
std::int32_t quantize_value(double x, const QuantParams& qp);
inline double dequantize_value(std::int32_t q, const QuantParams& qp) {
  return qp.scale * (q - qp.zero_point);
}

// IEEE 754 binary16 conversions, round to nearest even on the way down.
std::uint16_t f32_to_f16_bits(float x);
float f16_bits_to_f32(std::uint16_t h);
inline float f16_round_trip(float x) { return f16_bits_to_f32(f32_to_f16_bits(x)); }

// A runtime tensor. Float data lives in `f`, integer data (i8/i16/i32) in
// `q`; exactly one of the two is populated depending on dtype.
struct TensorValue {
  DType dtype = DType::kF32;
  std::vector<int> shape;
  std::vector<float> f;
  std::vector<std::int32_t> q;
  std::optional<QuantParams> quant;

  std::int64_t elements() const;
  // Dequantized (or plain float) view, used for metric computation.
  std::vector<float> as_f32() const;
};

std::int64_t shape_elements(const std::vector<int>& shape);
std::string shape_str(const std::vector<int>& shape);

}  // namespace edgemark

#endif  // EDGEMARK_TENSOR_HPP_
