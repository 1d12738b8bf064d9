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
#include "edgemark/error.hpp"

#include <cstdio>

#include "edgemark/hash.hpp"

namespace edgemark {

const char* err_kind_name(ErrKind kind) {
  switch (kind) {
    case ErrKind::kSyntax: return "syntax";
    case ErrKind::kValidation: return "validation";
    case ErrKind::kUnsupportedModel: return "unsupported_model";
    case ErrKind::kIo: return "io";
    case ErrKind::kShape: return "shape";
    case ErrKind::kNonFinite: return "non_finite";
    case ErrKind::kUnsupportedOp: return "unsupported_op";
    case ErrKind::kInfeasible: return "infeasible";
    case ErrKind::kNonMonotone: return "non_monotone";
    case ErrKind::kUsage: return "usage";
    case ErrKind::kInternal: return "internal";
  }
  return "unknown";
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace edgemark
