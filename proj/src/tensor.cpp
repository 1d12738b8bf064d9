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
#include "edgemark/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>

#include "edgemark/error.hpp"

namespace edgemark {

std::size_t dtype_size(DType dtype) {
  switch (dtype) {
    case DType::kF32:
    case DType::kI32:
      return 4;
    case DType::kF16:
    case DType::kI16:
      return 2;
    case DType::kI8:
      return 1;
  }
  return 4;
}

const char* dtype_name(DType dtype) {
  switch (dtype) {
    case DType::kF32: return "f32";
    case DType::kF16: return "f16";
    case DType::kI32: return "i32";
    case DType::kI16: return "i16";
    case DType::kI8: return "i8";
  }
  return "?";
}

bool dtype_is_float(DType dtype) {
  return dtype == DType::kF32 || dtype == DType::kF16;
}

QuantParams symmetric_params(double max_abs, int bits) {
  QuantParams qp;
  qp.qmax = (1 << (bits - 1)) - 1;
  qp.qmin = -qp.qmax - 1;
  qp.zero_point = 0;
  qp.scale = max_abs > 0.0 ? max_abs / qp.qmax : 1.0;
  return qp;
}

QuantParams affine_i8_params(double min, double max) {
  // The represented range must include zero so that zero padding and relu
  // cutoffs stay exact.
  min = std::min(min, 0.0);
  max = std::max(max, 0.0);
  QuantParams qp;
  qp.qmin = -128;
  qp.qmax = 127;
  double range = max - min;
  qp.scale = range > 0.0 ? range / 255.0 : 1.0;
  double zp = -128.0 - min / qp.scale;
  qp.zero_point = static_cast<std::int32_t>(
      std::clamp(std::llround(zp), -128LL, 127LL));
  return qp;
}

QuantParams symmetric_i16_params(double max_abs) {
  QuantParams qp;
  qp.qmin = -32768;
  qp.qmax = 32767;
  qp.zero_point = 0;
  qp.scale = max_abs > 0.0 ? max_abs / 32767.0 : 1.0;
  return qp;
}

std::int32_t quantize_value(double x, const QuantParams& qp) {
  // llround rounds half away from zero, the convention used everywhere in
  // the integer pipeline.
  long long q = std::llround(x / qp.scale) + qp.zero_point;
  q = std::clamp(q, static_cast<long long>(qp.qmin),
                 static_cast<long long>(qp.qmax));
  return static_cast<std::int32_t>(q);
}

std::uint16_t f32_to_f16_bits(float x) {
  std::uint32_t bits;
  std::memcpy(&bits, &x, 4);
  std::uint32_t sign = (bits >> 16) & 0x8000u;
  std::int32_t exp = static_cast<std::int32_t>((bits >> 23) & 0xff) - 127 + 15;
  std::uint32_t mant = bits & 0x7fffffu;

  if (exp >= 31) {
    // Overflow to inf; NaN keeps a mantissa bit.
    if (((bits >> 23) & 0xff) == 0xff && mant != 0) {
      return static_cast<std::uint16_t>(sign | 0x7e00u);
    }
    return static_cast<std::uint16_t>(sign | 0x7c00u);
  }
  if (exp <= 0) {
    if (exp < -10) return static_cast<std::uint16_t>(sign);
    // Subnormal: shift in the implicit leading one, round to nearest even.
    mant |= 0x800000u;
    int shift = 14 - exp;
    std::uint32_t half = mant >> shift;
    std::uint32_t rem = mant & ((1u << shift) - 1);
    std::uint32_t halfway = 1u << (shift - 1);
    if (rem > halfway || (rem == halfway && (half & 1))) half++;
    return static_cast<std::uint16_t>(sign | half);
  }
  std::uint32_t half = (static_cast<std::uint32_t>(exp) << 10) | (mant >> 13);
  std::uint32_t rem = mant & 0x1fffu;
  if (rem > 0x1000u || (rem == 0x1000u && (half & 1))) half++;
  return static_cast<std::uint16_t>(sign | half);
}

float f16_bits_to_f32(std::uint16_t h) {
  std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000u) << 16;
  std::uint32_t exp = (h >> 10) & 0x1f;
  std::uint32_t mant = h & 0x3ffu;
  std::uint32_t bits;
  if (exp == 0) {
    if (mant == 0) {
      bits = sign;
    } else {
      // Normalize the subnormal.
      int e = -1;
      do {
        mant <<= 1;
        e++;
      } while ((mant & 0x400u) == 0);
      bits = sign | static_cast<std::uint32_t>(113 - e) << 23 |
             ((mant & 0x3ffu) << 13);
    }
  } else if (exp == 31) {
    bits = sign | 0x7f800000u | (mant << 13);
  } else {
    bits = sign | ((exp - 15 + 127) << 23) | (mant << 13);
  }
  float out;
  std::memcpy(&out, &bits, 4);
  return out;
}

std::int64_t TensorValue::elements() const { return shape_elements(shape); }

std::vector<float> TensorValue::as_f32() const {
  if (dtype == DType::kF32 || dtype == DType::kF16) return f;
  std::vector<float> out(q.size());
  QuantParams qp = quant.value_or(QuantParams{});
  for (std::size_t i = 0; i < q.size(); ++i) {
    out[i] = static_cast<float>(dequantize_value(q[i], qp));
  }
  return out;
}

std::int64_t shape_elements(const std::vector<int>& shape) {
  std::int64_t n = 1;
  for (int d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

std::string shape_str(const std::vector<int>& shape) {
  std::string s = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  s += ")";
  return s;
}

}  // namespace edgemark
