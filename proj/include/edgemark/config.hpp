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
#ifndef EDGEMARK_CONFIG_HPP_
#define EDGEMARK_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace edgemark {

enum class ModelType { kFC, kCNN, kRNN };
enum class Activation { kRelu, kTanh, kSigmoid, kLeakyRelu };
enum class RnnKind { kSimple, kLstm, kGru };

const char* model_type_name(ModelType t);
const char* activation_name(Activation a);
const char* rnn_kind_name(RnnKind k);

enum class DatasetKind {
  kRandomClassification,  // uniform features, integer labels
  kRandomRegression,      // uniform features, linear-ish targets
  kRandomSequence,        // sequences: float frames or integer tokens
  kSinus,                 // fixed grid on [-pi, pi], target sin(x)
  kCsvFile,               // features + last-column target from a csv file
};

const char* dataset_kind_name(DatasetKind k);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kRandomRegression;
  // Feature shape. One entry for flat vectors, three (H, W, C) for images.
  std::vector<int> feature_shape;
  bool flat_features = false;
  // > 0 selects classification with this many classes. For sequence data it
  // also switches frames to integer tokens in [0, num_classes).
  int num_classes = 0;
  int sequence_length = 0;
  int target_dim = 1;
  std::string csv_path;

  bool operator==(const DatasetSpec&) const = default;
};

// One entry of convs_params: channels, kernel, stride.
//   c > 0, k > 0  -> conv2d
//   c = 0, k > 0  -> max pooling
//   c = 0, k = 0  -> global average pooling
struct ConvParams {
  int channels = 0;
  int kernel = 0;
  int stride = 1;

  bool operator==(const ConvParams&) const = default;
};

struct ModelSpec {
  std::string name;  // config file stem
  ModelType model_type = ModelType::kFC;
  std::vector<ConvParams> convs_params;
  std::vector<int> denses_params;
  double convs_dropout = 0.0;
  double denses_dropout = 0.0;
  Activation activation = Activation::kRelu;
  bool use_batch_norm = false;
  int epochs = 0;
  int batch_size = 0;
  DatasetSpec dataset;
  std::uint64_t random_seed = 0;
  // RNN only.
  RnnKind rnn_kind = RnnKind::kSimple;
  int rnn_units = 0;
  int sequence_length = 0;
  int embedding_dim = 0;

  bool operator==(const ModelSpec&) const = default;
};

// Parses a single YAML model configuration. Throws Error{kSyntax} on
// malformed YAML, Error{kValidation} on unknown keys or constraint
// violations, Error{kUnsupportedModel} on an unknown model_type.
ModelSpec parse_model_config(const std::filesystem::path& path);

// Same, from an in-memory document. `name` becomes ModelSpec::name.
ModelSpec parse_model_yaml(const std::string& text, const std::string& name);

// *.yaml / *.yml files in `dir`, sorted lexicographically by filename.
std::vector<std::filesystem::path> list_config_files(
    const std::filesystem::path& dir);

// Parses every *.yaml / *.yml in `dir`, sorted lexicographically by
// filename. Throws on the first invalid config.
std::vector<ModelSpec> scan_config_dir(const std::filesystem::path& dir);

// Canonical single-document YAML round-trip form: fixed key order, defaults
// included. parse(serialize(s)) == s.
std::string serialize_spec(const ModelSpec& spec);

// Content hash of the canonical form; stable across load order.
std::uint64_t spec_hash(const ModelSpec& spec);

}  // namespace edgemark

#endif  // EDGEMARK_CONFIG_HPP_
