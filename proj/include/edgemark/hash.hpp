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
#ifndef EDGEMARK_HASH_HPP_
#define EDGEMARK_HASH_HPP_

#include <cstdint>
#include <string>
#include <string_view>

namespace edgemark {

// FNV-1a, 64 bit. Used for content addressing of cached artifacts.
class Fnv1a64 {
 public:
  Fnv1a64& update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a64& update(std::string_view s) { return update(s.data(), s.size()); }
  template <typename T>
  Fnv1a64& update_value(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    return update(&v, sizeof(v));
  }
  std::uint64_t digest() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view s) {
  return Fnv1a64().update(s).digest();
}

std::string hash_hex(std::uint64_t h);

}  // namespace edgemark

#endif  // EDGEMARK_HASH_HPP_
