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
#include "edgemark/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "edgemark/error.hpp"
#include "edgemark/hash.hpp"

namespace edgemark {
namespace {

[[noreturn]] void fail_validation(const std::string& name,
                                  const std::string& msg) {
  throw Error(ErrKind::kValidation, name + ": " + msg);
}

template <typename T>
T read_scalar(const YAML::Node& node, const std::string& key,
              const std::string& name, T fallback) {
  if (!node) return fallback;
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail_validation(name, "key '" + key + "' has the wrong type");
  }
}

void check_known_keys(const YAML::Node& map, const std::set<std::string>& known,
                      const std::string& name, const std::string& where) {
  std::string unknown;
  for (const auto& kv : map) {
    std::string key = kv.first.as<std::string>();
    if (!known.count(key)) {
      if (!unknown.empty()) unknown += ", ";
      unknown += key;
    }
  }
  if (!unknown.empty()) {
    fail_validation(name, "unknown key(s) in " + where + ": " + unknown);
  }
}

std::vector<int> read_feature_shape(const YAML::Node& node,
                                    const std::string& name) {
  std::vector<int> shape;
  if (node.IsSequence()) {
    for (const auto& d : node) shape.push_back(d.as<int>());
  } else {
    shape.push_back(node.as<int>());
  }
  if (shape.empty() || shape.size() > 3) {
    fail_validation(name, "feature_dim must have 1 to 3 dimensions");
  }
  for (int d : shape) {
    if (d < 1) fail_validation(name, "feature_dim entries must be >= 1");
  }
  return shape;
}

DatasetSpec parse_dataset(const YAML::Node& node, const std::string& name) {
  if (!node || !node.IsMap()) {
    fail_validation(name, "dataset must be a map with a 'name' key");
  }
  check_known_keys(node, {"name", "args"}, name, "dataset");
  if (!node["name"]) fail_validation(name, "dataset.name is required");
  std::string ds_name = node["name"].as<std::string>();

  YAML::Node args = node["args"];
  if (args && !args.IsMap()) fail_validation(name, "dataset.args must be a map");
  if (args) {
    check_known_keys(args,
                     {"feature_dim", "flat_features", "num_classes",
                      "sequence_length", "target_dim", "path"},
                     name, "dataset.args");
  }

  DatasetSpec ds;
  bool has_feature_dim = false;
  if (args) {
    ds.flat_features =
        read_scalar<bool>(args["flat_features"], "flat_features", name, false);
    ds.num_classes =
        read_scalar<int>(args["num_classes"], "num_classes", name, 0);
    ds.sequence_length =
        read_scalar<int>(args["sequence_length"], "sequence_length", name, 0);
    ds.target_dim = read_scalar<int>(args["target_dim"], "target_dim", name, 1);
    ds.csv_path = read_scalar<std::string>(args["path"], "path", name, "");
    if (args["feature_dim"]) {
      ds.feature_shape = read_feature_shape(args["feature_dim"], name);
      has_feature_dim = true;
    }
  }
  if (ds.num_classes < 0 || ds.num_classes == 1) {
    fail_validation(name, "num_classes must be 0 or >= 2");
  }
  if (ds.target_dim < 1) fail_validation(name, "target_dim must be >= 1");
  if (ds.sequence_length < 0) {
    fail_validation(name, "sequence_length must be >= 1");
  }

  if (ds_name == "randomset_classification") {
    ds.kind = DatasetKind::kRandomClassification;
    if (!has_feature_dim) fail_validation(name, "feature_dim is required");
    if (ds.num_classes < 2) {
      fail_validation(name, "classification requires num_classes >= 2");
    }
  } else if (ds_name == "mnist") {
    // Alias: synthetic stand-in with the mnist geometry.
    ds.kind = DatasetKind::kRandomClassification;
    if (!has_feature_dim) ds.feature_shape = {28, 28, 1};
    if (ds.num_classes == 0) ds.num_classes = 10;
  } else if (ds_name == "randomset_regression") {
    ds.kind = DatasetKind::kRandomRegression;
    if (!has_feature_dim) fail_validation(name, "feature_dim is required");
    if (ds.num_classes != 0) {
      fail_validation(name, "randomset_regression does not take num_classes");
    }
  } else if (ds_name == "randomset_sequence") {
    ds.kind = DatasetKind::kRandomSequence;
    if (ds.num_classes > 0) {
      // Token sequences: the frame is a class index, not a feature vector.
      if (has_feature_dim) {
        fail_validation(name,
                        "token sequences take num_classes, not feature_dim");
      }
    } else if (!has_feature_dim) {
      fail_validation(name, "feature_dim is required for frame sequences");
    } else if (ds.feature_shape.size() != 1) {
      fail_validation(name, "sequence feature_dim must be flat");
    }
  } else if (ds_name == "sinus") {
    ds.kind = DatasetKind::kSinus;
    if (has_feature_dim &&
        (ds.feature_shape.size() != 1 || ds.feature_shape[0] != 1)) {
      fail_validation(name, "sinus features are one-dimensional");
    }
    ds.feature_shape = {1};
    if (ds.num_classes != 0) {
      fail_validation(name, "sinus is a regression dataset");
    }
  } else if (ds_name == "csv_file") {
    ds.kind = DatasetKind::kCsvFile;
    if (ds.csv_path.empty()) fail_validation(name, "csv_file requires path");
    // Shape is discovered when the file is loaded.
  } else {
    fail_validation(name, "unknown dataset '" + ds_name + "'");
  }

  if (ds.flat_features && ds.feature_shape.size() > 1) {
    std::int64_t n = 1;
    for (int d : ds.feature_shape) n *= d;
    ds.feature_shape = {static_cast<int>(n)};
  }
  return ds;
}

std::vector<ConvParams> parse_convs(const YAML::Node& node,
                                    const std::string& name) {
  std::vector<ConvParams> convs;
  if (!node) return convs;
  if (!node.IsSequence()) {
    fail_validation(name, "convs_params must be a list of [c, k, s] triples");
  }
  int idx = 0;
  for (const auto& entry : node) {
    if (!entry.IsSequence() || entry.size() != 3) {
      fail_validation(name, "convs_params[" + std::to_string(idx) +
                                "] must be a [c, k, s] triple");
    }
    ConvParams p;
    p.channels = entry[0].as<int>();
    p.kernel = entry[1].as<int>();
    p.stride = entry[2].as<int>();
    if (p.channels < 0 || p.kernel < 0) {
      fail_validation(name, "convs_params[" + std::to_string(idx) +
                                "]: channels and kernel must be >= 0");
    }
    if (p.channels > 0 && p.kernel == 0) {
      fail_validation(name, "convs_params[" + std::to_string(idx) +
                                "]: channels without a kernel size");
    }
    if (p.kernel == 0) {
      // [0, 0, 0] pools the feature map down to one value per channel.
      if (p.stride != 0) {
        fail_validation(name, "convs_params[" + std::to_string(idx) +
                                  "]: the global pool marker is [0, 0, 0]");
      }
    } else if (p.stride < 1) {
      fail_validation(name, "convs_params[" + std::to_string(idx) +
                                "]: stride must be >= 1");
    }
    convs.push_back(p);
    idx++;
  }
  return convs;
}

}  // namespace

const char* model_type_name(ModelType t) {
  switch (t) {
    case ModelType::kFC: return "FC";
    case ModelType::kCNN: return "CNN";
    case ModelType::kRNN: return "RNN";
  }
  return "?";
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kLeakyRelu: return "leaky_relu";
  }
  return "?";
}

const char* rnn_kind_name(RnnKind k) {
  switch (k) {
    case RnnKind::kSimple: return "simple";
    case RnnKind::kLstm: return "lstm";
    case RnnKind::kGru: return "gru";
  }
  return "?";
}

const char* dataset_kind_name(DatasetKind k) {
  switch (k) {
    case DatasetKind::kRandomClassification: return "randomset_classification";
    case DatasetKind::kRandomRegression: return "randomset_regression";
    case DatasetKind::kRandomSequence: return "randomset_sequence";
    case DatasetKind::kSinus: return "sinus";
    case DatasetKind::kCsvFile: return "csv_file";
  }
  return "?";
}

ModelSpec parse_model_yaml(const std::string& text, const std::string& name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrKind::kSyntax, name + ": " + e.what());
  }
  if (!root.IsMap()) {
    throw Error(ErrKind::kSyntax, name + ": top level must be a map");
  }
  check_known_keys(root,
                   {"model_type", "convs_params", "denses_params",
                    "convs_dropout", "denses_dropout", "activation",
                    "use_batch_norm", "epochs", "batch_size", "dataset",
                    "random_seed", "rnn_kind", "rnn_units", "sequence_length",
                    "embedding_dim"},
                   name, "config");

  ModelSpec spec;
  spec.name = name;

  if (!root["model_type"]) fail_validation(name, "model_type is required");
  std::string mt = root["model_type"].as<std::string>();
  if (mt == "FC") {
    spec.model_type = ModelType::kFC;
  } else if (mt == "CNN") {
    spec.model_type = ModelType::kCNN;
  } else if (mt == "RNN") {
    spec.model_type = ModelType::kRNN;
  } else {
    throw Error(ErrKind::kUnsupportedModel,
                name + ": unsupported model_type '" + mt + "'");
  }

  spec.convs_params = parse_convs(root["convs_params"], name);
  if (root["denses_params"]) {
    if (!root["denses_params"].IsSequence()) {
      fail_validation(name, "denses_params must be a list of widths");
    }
    for (const auto& d : root["denses_params"]) {
      int w = d.as<int>();
      if (w < 1) fail_validation(name, "denses_params entries must be >= 1");
      spec.denses_params.push_back(w);
    }
  }
  spec.convs_dropout =
      read_scalar<double>(root["convs_dropout"], "convs_dropout", name, 0.0);
  spec.denses_dropout =
      read_scalar<double>(root["denses_dropout"], "denses_dropout", name, 0.0);
  if (spec.convs_dropout < 0.0 || spec.convs_dropout >= 1.0 ||
      spec.denses_dropout < 0.0 || spec.denses_dropout >= 1.0) {
    fail_validation(name, "dropout rates must lie in [0, 1)");
  }

  std::string act =
      read_scalar<std::string>(root["activation"], "activation", name, "relu");
  if (act == "relu") {
    spec.activation = Activation::kRelu;
  } else if (act == "tanh") {
    spec.activation = Activation::kTanh;
  } else if (act == "sigmoid") {
    spec.activation = Activation::kSigmoid;
  } else if (act == "leaky_relu") {
    spec.activation = Activation::kLeakyRelu;
  } else {
    fail_validation(name, "unknown activation '" + act + "'");
  }

  spec.use_batch_norm =
      read_scalar<bool>(root["use_batch_norm"], "use_batch_norm", name, false);
  spec.epochs = read_scalar<int>(root["epochs"], "epochs", name, 0);
  spec.batch_size = read_scalar<int>(root["batch_size"], "batch_size", name, 0);
  if (spec.epochs < 0 || spec.batch_size < 0) {
    fail_validation(name, "epochs and batch_size must be >= 0");
  }
  spec.random_seed = read_scalar<std::uint64_t>(root["random_seed"],
                                                "random_seed", name, 0);

  if (!root["dataset"]) fail_validation(name, "dataset is required");
  spec.dataset = parse_dataset(root["dataset"], name);

  bool has_rnn_keys = root["rnn_kind"] || root["rnn_units"] ||
                      root["sequence_length"] || root["embedding_dim"];
  if (spec.model_type == ModelType::kRNN) {
    if (!spec.convs_params.empty()) {
      fail_validation(name, "RNN models do not take convs_params");
    }
    if (spec.use_batch_norm) {
      fail_validation(name, "use_batch_norm is not supported for RNN models");
    }
    std::string kind =
        read_scalar<std::string>(root["rnn_kind"], "rnn_kind", name, "simple");
    if (kind == "simple") {
      spec.rnn_kind = RnnKind::kSimple;
    } else if (kind == "lstm") {
      spec.rnn_kind = RnnKind::kLstm;
    } else if (kind == "gru") {
      spec.rnn_kind = RnnKind::kGru;
    } else {
      fail_validation(name, "unknown rnn_kind '" + kind + "'");
    }
    spec.rnn_units = read_scalar<int>(root["rnn_units"], "rnn_units", name, 0);
    if (spec.rnn_units < 1) {
      fail_validation(name, "RNN models require rnn_units >= 1");
    }
    spec.sequence_length = read_scalar<int>(root["sequence_length"],
                                            "sequence_length", name, 0);
    if (spec.dataset.kind != DatasetKind::kRandomSequence) {
      fail_validation(name, "RNN models require a sequence dataset");
    }
    if (spec.sequence_length == 0) {
      spec.sequence_length = spec.dataset.sequence_length;
    } else if (spec.dataset.sequence_length != 0 &&
               spec.dataset.sequence_length != spec.sequence_length) {
      fail_validation(name, "sequence_length disagrees with dataset args");
    }
    if (spec.sequence_length < 1) {
      fail_validation(name, "sequence_length must be >= 1");
    }
    spec.dataset.sequence_length = spec.sequence_length;
    spec.embedding_dim =
        read_scalar<int>(root["embedding_dim"], "embedding_dim", name, 0);
    if (spec.dataset.num_classes > 0) {
      if (spec.embedding_dim < 1) {
        fail_validation(name, "token sequences require embedding_dim >= 1");
      }
    } else if (spec.embedding_dim != 0) {
      fail_validation(name, "embedding_dim requires a token sequence dataset");
    }
  } else {
    if (has_rnn_keys) {
      fail_validation(name, "rnn_kind/rnn_units/sequence_length/embedding_dim "
                            "are only valid for RNN models");
    }
    if (spec.dataset.kind == DatasetKind::kRandomSequence) {
      fail_validation(name, "sequence datasets require an RNN model");
    }
    if (spec.model_type == ModelType::kCNN) {
      if (spec.dataset.feature_shape.size() != 3) {
        fail_validation(name, "CNN models require (H, W, C) features");
      }
    }
    if (spec.model_type == ModelType::kFC && !spec.convs_params.empty()) {
      fail_validation(name, "FC models do not take convs_params");
    }
  }
  return spec;
}

ModelSpec parse_model_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrKind::kIo, "cannot open config: " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_model_yaml(buf.str(), path.stem().string());
}

std::vector<std::filesystem::path> list_config_files(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrKind::kIo, "config directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    if (ext == ".yaml" || ext == ".yml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) {
              return a.filename().string() < b.filename().string();
            });
  return files;
}

std::vector<ModelSpec> scan_config_dir(const std::filesystem::path& dir) {
  const auto files = list_config_files(dir);
  std::vector<ModelSpec> specs;
  specs.reserve(files.size());
  for (const auto& f : files) specs.push_back(parse_model_config(f));
  return specs;
}

std::string serialize_spec(const ModelSpec& spec) {
  std::ostringstream out;
  out << "model_type: " << model_type_name(spec.model_type) << "\n";
  out << "convs_params: [";
  for (std::size_t i = 0; i < spec.convs_params.size(); ++i) {
    const auto& c = spec.convs_params[i];
    if (i) out << ", ";
    out << "[" << c.channels << ", " << c.kernel << ", " << c.stride << "]";
  }
  out << "]\n";
  out << "denses_params: [";
  for (std::size_t i = 0; i < spec.denses_params.size(); ++i) {
    if (i) out << ", ";
    out << spec.denses_params[i];
  }
  out << "]\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", spec.convs_dropout);
  out << "convs_dropout: " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.9g", spec.denses_dropout);
  out << "denses_dropout: " << buf << "\n";
  out << "activation: " << activation_name(spec.activation) << "\n";
  out << "use_batch_norm: " << (spec.use_batch_norm ? "true" : "false") << "\n";
  out << "epochs: " << spec.epochs << "\n";
  out << "batch_size: " << spec.batch_size << "\n";
  if (spec.model_type == ModelType::kRNN) {
    out << "rnn_kind: " << rnn_kind_name(spec.rnn_kind) << "\n";
    out << "rnn_units: " << spec.rnn_units << "\n";
    out << "sequence_length: " << spec.sequence_length << "\n";
    if (spec.embedding_dim > 0) {
      out << "embedding_dim: " << spec.embedding_dim << "\n";
    }
  }
  out << "dataset:\n";
  out << "  name: " << dataset_kind_name(spec.dataset.kind) << "\n";
  out << "  args:\n";
  if (!spec.dataset.feature_shape.empty() &&
      spec.dataset.kind != DatasetKind::kSinus) {
    out << "    feature_dim: [";
    for (std::size_t i = 0; i < spec.dataset.feature_shape.size(); ++i) {
      if (i) out << ", ";
      out << spec.dataset.feature_shape[i];
    }
    out << "]\n";
  }
  out << "    flat_features: " << (spec.dataset.flat_features ? "true" : "false")
      << "\n";
  if (spec.dataset.num_classes > 0) {
    out << "    num_classes: " << spec.dataset.num_classes << "\n";
  }
  if (spec.dataset.kind == DatasetKind::kRandomSequence) {
    out << "    sequence_length: " << spec.dataset.sequence_length << "\n";
  }
  if (spec.dataset.target_dim != 1) {
    out << "    target_dim: " << spec.dataset.target_dim << "\n";
  }
  if (spec.dataset.kind == DatasetKind::kCsvFile) {
    out << "    path: " << spec.dataset.csv_path << "\n";
  }
  out << "random_seed: " << spec.random_seed << "\n";
  return out.str();
}

std::uint64_t spec_hash(const ModelSpec& spec) {
  return fnv1a64(serialize_spec(spec));
}

}  // namespace edgemark
