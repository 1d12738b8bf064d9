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
#include "edgemark/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "edgemark/error.hpp"
#include "edgemark/prng.hpp"

namespace edgemark {
namespace {

struct CsvData {
  int feature_dim = 0;
  std::vector<std::vector<float>> rows;  // feature_dim + 1 columns
};

CsvData load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrKind::kIo, "cannot open csv dataset: " + path);
  CsvData data;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.empty()) continue;
    std::vector<float> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stof(cell));
      } catch (const std::exception&) {
        throw Error(ErrKind::kSyntax, path + ":" + std::to_string(lineno) +
                                          ": not a number: '" + cell + "'");
      }
    }
    if (row.size() < 2) {
      throw Error(ErrKind::kSyntax,
                  path + ":" + std::to_string(lineno) +
                      ": need at least one feature and one target column");
    }
    if (data.rows.empty()) {
      data.feature_dim = static_cast<int>(row.size()) - 1;
    } else if (static_cast<int>(row.size()) != data.feature_dim + 1) {
      throw Error(ErrKind::kSyntax, path + ":" + std::to_string(lineno) +
                                        ": inconsistent column count");
    }
    data.rows.push_back(std::move(row));
  }
  if (data.rows.empty()) {
    throw Error(ErrKind::kSyntax, path + ": no data rows");
  }
  return data;
}

// Sample substreams; features and targets draw independently so adding one
// never perturbs the other.
std::uint64_t feature_seed(std::uint64_t seed, int i) {
  return substream_seed(seed, 2 * static_cast<std::uint64_t>(i));
}
std::uint64_t target_seed(std::uint64_t seed, int i) {
  return substream_seed(seed, 2 * static_cast<std::uint64_t>(i) + 1);
}

}  // namespace

DatasetIoInfo dataset_io_info(const DatasetSpec& ds) {
  DatasetIoInfo info;
  switch (ds.kind) {
    case DatasetKind::kRandomClassification:
      info.input_shape = ds.feature_shape;
      info.head_dim = ds.num_classes;
      info.classification = true;
      break;
    case DatasetKind::kRandomRegression:
      info.input_shape = ds.feature_shape;
      info.head_dim = ds.target_dim;
      break;
    case DatasetKind::kRandomSequence:
      if (ds.num_classes > 0) {
        info.input_shape = {ds.sequence_length};
        info.token_input = true;
        info.vocab = ds.num_classes;
        info.head_dim = ds.num_classes;
        info.classification = true;
      } else {
        info.input_shape = {ds.sequence_length, ds.feature_shape[0]};
        info.head_dim = ds.feature_shape[0];
      }
      info.per_step_head = true;
      break;
    case DatasetKind::kSinus:
      info.input_shape = {1};
      info.head_dim = 1;
      break;
    case DatasetKind::kCsvFile: {
      CsvData data = load_csv(ds.csv_path);
      info.input_shape = {data.feature_dim};
      info.head_dim = 1;
      break;
    }
  }
  return info;
}

SampleSet generate_samples(const DatasetSpec& ds, int count,
                           std::uint64_t seed) {
  if (count < 1 && ds.kind != DatasetKind::kCsvFile) {
    throw Error(ErrKind::kValidation, "sample count must be >= 1");
  }
  SampleSet set;

  if (ds.kind == DatasetKind::kCsvFile) {
    CsvData data = load_csv(ds.csv_path);
    for (const auto& row : data.rows) {
      TensorValue t;
      t.shape = {data.feature_dim};
      t.f.assign(row.begin(), row.end() - 1);
      set.inputs.push_back(std::move(t));
      set.targets.push_back({row.back()});
    }
    return set;
  }

  if (ds.kind == DatasetKind::kSinus) {
    for (int i = 0; i < count; ++i) {
      double x = count == 1
                     ? 0.0
                     : -std::numbers::pi +
                           2.0 * std::numbers::pi * i / (count - 1);
      TensorValue t;
      t.shape = {1};
      t.f = {static_cast<float>(x)};
      set.inputs.push_back(std::move(t));
      set.targets.push_back({static_cast<float>(std::sin(x))});
    }
    return set;
  }

  DatasetIoInfo info = dataset_io_info(ds);
  for (int i = 0; i < count; ++i) {
    SplitMix64 frng(feature_seed(seed, i));
    SplitMix64 trng(target_seed(seed, i));
    TensorValue t;
    t.shape = info.input_shape;
    std::int64_t n = shape_elements(t.shape);
    if (info.token_input) {
      t.dtype = DType::kI32;
      t.q.resize(n);
      for (auto& v : t.q) {
        v = static_cast<std::int32_t>(
            frng.next_below(static_cast<std::uint64_t>(info.vocab)));
      }
      // Next-token targets, one class index per step.
      std::vector<float> target(t.q.size());
      for (std::size_t j = 0; j + 1 < t.q.size(); ++j) {
        target[j] = static_cast<float>(t.q[j + 1]);
      }
      if (!t.q.empty()) {
        target.back() = static_cast<float>(
            trng.next_below(static_cast<std::uint64_t>(info.vocab)));
      }
      set.targets.push_back(std::move(target));
    } else {
      t.f.resize(n);
      for (auto& v : t.f) v = static_cast<float>(frng.next_double());
      std::vector<float> target;
      if (info.classification) {
        auto label = trng.next_below(static_cast<std::uint64_t>(info.head_dim));
        target.assign(info.head_dim, 0.0f);
        target[label] = 1.0f;
      } else if (ds.kind == DatasetKind::kRandomSequence) {
        // Next-frame targets: the sequence shifted by one step.
        target.assign(t.f.begin() + info.head_dim, t.f.end());
        for (int j = 0; j < info.head_dim; ++j) {
          target.push_back(static_cast<float>(trng.next_double()));
        }
      } else {
        // Random linear map of the features.
        target.resize(info.head_dim);
        for (auto& y : target) {
          double acc = 0.0;
          for (float x : t.f) acc += (trng.next_double() - 0.5) * x;
          y = static_cast<float>(acc);
        }
      }
      set.targets.push_back(std::move(target));
    }
    set.inputs.push_back(std::move(t));
  }
  return set;
}

}  // namespace edgemark
