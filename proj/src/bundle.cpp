#include "lxt/bundle.hpp"

#include "lxt/errors.hpp"
#include "lxt/hash.hpp"
#include "lxt/tensor.hpp"

#include <algorithm>
#include <fstream>

namespace lxt {

namespace {

namespace fs = std::filesystem;

void write_manifest(const fs::path& dir, const Json& manifest) {
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw DataError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

Matrix load_matrix(const fs::path& path, Index rows, Index cols) {
  const Tensor t = load_tensor(path);
  if (t.rank() != 2 || static_cast<Index>(t.shape()[0]) != rows || static_cast<Index>(t.shape()[1]) != cols) {
    throw DataError(path.string() + ": expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " tensor");
  }
  return t.to_matrix();
}

Matrix load_matrix(const fs::path& path) {
  const Tensor t = load_tensor(path);
  if (t.rank() != 2) throw DataError(path.string() + ": expected a rank-2 tensor");
  return t.to_matrix();
}

template <typename T>
T field(const Json& j, const char* key, const fs::path& dir) {
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw DataError((dir / "manifest.json").string() + ": missing or invalid field '" + key + "'");
  }
}

std::uint64_t seed_field(const Json& j, const fs::path& dir) { return field<std::uint64_t>(j, "seed", dir); }

}  // namespace

Json read_manifest(const fs::path& dir, const std::string& expected_format) {
  const fs::path path = dir / "manifest.json";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("not a bundle: cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  const auto format = field<std::string>(j, "format", dir);
  if (format != expected_format) {
    throw DataError(path.string() + ": bundle format '" + format + "', expected '" + expected_format + "'");
  }
  const int version = field<int>(j, "version", dir);
  if (version != kBundleVersion) {
    throw DataError(path.string() + ": bundle version " + std::to_string(version) + " not supported (expected " +
                    std::to_string(kBundleVersion) + ")");
  }
  return j;
}

void save_embedding_bundle(const fs::path& dir, const EmbeddingBundle& b) {
  fs::create_directories(dir);
  save_vocab(dir, b.vocab);
  save_tensor(dir / "center.lxt", Tensor::from_matrix(b.model.center.value));
  save_tensor(dir / "context.lxt", Tensor::from_matrix(b.model.context.value));
  Json m;
  m["format"] = kEmbeddingFormat;
  m["version"] = kBundleVersion;
  m["mode"] = to_string(b.config.mode);
  m["dim"] = b.model.center.value.cols();
  m["vocab_size"] = b.vocab.size();
  m["vocab_file"] = "vocab.txt";
  m["seed"] = b.seed;
  m["config"] = to_json(b.config);
  m["cleaning"] = to_json(b.cleaning);
  m["tensors"] = {{"center", "center.lxt"}, {"context", "context.lxt"}};
  m["epoch_loss"] = b.log.epoch_loss;
  m["epoch_pairs"] = b.log.epoch_pairs;
  write_manifest(dir, m);
}

EmbeddingBundle load_embedding_bundle(const fs::path& dir) {
  const Json m = read_manifest(dir, kEmbeddingFormat);
  EmbeddingBundle b;
  try {
    b.config = embedding_from_json(m.at("config"));
    b.cleaning = cleaning_from_json(m.at("cleaning"));
  } catch (const ConfigError& e) {
    throw DataError((dir / "manifest.json").string() + ": " + e.what());
  } catch (const Json::exception&) {
    throw DataError((dir / "manifest.json").string() + ": missing config or cleaning section");
  }
  b.seed = seed_field(m, dir);
  b.vocab = load_vocab(dir, field<std::string>(m, "vocab_file", dir));
  const auto dim = field<Index>(m, "dim", dir);
  const auto rows = static_cast<Index>(b.vocab.size());
  b.model.center = Parameter<float>(load_matrix(dir / "center.lxt", rows, dim), "center");
  b.model.context = Parameter<float>(load_matrix(dir / "context.lxt", rows, dim), "context");
  b.log.epoch_loss = field<std::vector<double>>(m, "epoch_loss", dir);
  b.log.epoch_pairs = field<std::vector<std::size_t>>(m, "epoch_pairs", dir);
  return b;
}

std::vector<std::string> classifier_tensor_files(const ClassifierModel& model) {
  std::vector<std::string> out;
  for (const auto* p : model.parameters()) out.push_back(p->name + ".lxt");
  return out;
}

void save_classifier_bundle(const fs::path& dir, const ClassifierBundle& b) {
  fs::create_directories(dir);
  save_vocab(dir, b.vocab);
  const auto params = b.model.parameters();
  const auto files = classifier_tensor_files(b.model);
  Json tensors = Json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    save_tensor(dir / files[i], Tensor::from_matrix(params[i]->value));
    tensors.push_back({{"name", params[i]->name},
                       {"file", files[i]},
                       {"rows", params[i]->value.rows()},
                       {"cols", params[i]->value.cols()}});
  }
  Json m;
  m["format"] = kClassifierFormat;
  m["version"] = kBundleVersion;
  m["arch"] = to_string(b.model.arch);
  m["dim"] = b.model.dim();
  m["heads"] = b.model.heads;
  m["num_blocks"] = b.model.blocks.size();
  m["max_len"] = b.model.max_len;
  m["dropout_p"] = b.model.dropout_p;
  m["vocab_size"] = b.vocab.size();
  m["vocab_file"] = "vocab.txt";
  m["freeze"] = b.model.freeze.names();
  m["seed"] = b.seed;
  m["config"] = to_json(b.config);
  m["cleaning"] = to_json(b.cleaning);
  m["tensors"] = tensors;
  m["provenance"] = b.provenance;
  m["experiment"] = b.experiment;
  write_manifest(dir, m);
}

ClassifierBundle load_classifier_bundle(const fs::path& dir) {
  const Json m = read_manifest(dir, kClassifierFormat);
  ClassifierBundle b;
  try {
    b.config = classifier_from_json(m.at("config"));
    b.cleaning = cleaning_from_json(m.at("cleaning"));
  } catch (const ConfigError& e) {
    throw DataError((dir / "manifest.json").string() + ": " + e.what());
  } catch (const Json::exception&) {
    throw DataError((dir / "manifest.json").string() + ": missing config or cleaning section");
  }
  b.seed = seed_field(m, dir);
  b.provenance = m.value("provenance", Json::object());
  b.experiment = m.value("experiment", Json());
  b.vocab = load_vocab(dir, field<std::string>(m, "vocab_file", dir));

  ClassifierModel& model = b.model;
  try {
    model.arch = parse_architecture(field<std::string>(m, "arch", dir));
  } catch (const ConfigError& e) {
    throw DataError((dir / "manifest.json").string() + ": " + e.what());
  }
  model.heads = field<int>(m, "heads", dir);
  model.max_len = field<int>(m, "max_len", dir);
  model.dropout_p = field<double>(m, "dropout_p", dir);
  const auto dim = field<Index>(m, "dim", dir);
  const auto num_blocks = field<std::size_t>(m, "num_blocks", dir);
  if (dim <= 0 || model.heads <= 0 || dim % model.heads != 0 || model.max_len <= 0 || num_blocks == 0) {
    throw DataError((dir / "manifest.json").string() + ": inconsistent architecture fields");
  }
  model.blocks.resize(num_blocks);
  if (model.arch == Architecture::enhanced) model.positional = positional_encoding<float>(model.max_len, dim);

  // Names follow make_classifier so that classifier_tensor_files() matches the manifest.
  model.embedding.name = "embedding";
  for (std::size_t i = 0; i < num_blocks; ++i) {
    const std::string prefix = "block" + std::to_string(i) + ".";
    auto& blk = model.blocks[i];
    blk.wq.name = prefix + "wq";
    blk.wk.name = prefix + "wk";
    blk.wv.name = prefix + "wv";
    blk.wo.name = prefix + "wo";
    blk.ln_gain.name = prefix + "ln_gain";
    blk.ln_bias.name = prefix + "ln_bias";
  }
  model.head_weight.name = "head.w";
  model.head_bias.name = "head.b";

  const Json& tensors = m.at("tensors");
  const auto params = model.parameters();
  if (!tensors.is_array() || tensors.size() != params.size()) {
    throw DataError((dir / "manifest.json").string() + ": tensor list does not match the architecture");
  }
  const auto vocab_rows = static_cast<Index>(b.vocab.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto name = field<std::string>(tensors[i], "name", dir);
    if (name != params[i]->name) {
      throw DataError((dir / "manifest.json").string() + ": unexpected tensor '" + name + "'");
    }
    Matrix value = load_matrix(dir / field<std::string>(tensors[i], "file", dir));
    Index rows = dim, cols = dim;
    if (name == "embedding") rows = vocab_rows;
    else if (name.ends_with("ln_gain") || name.ends_with("ln_bias")) rows = 1;
    else if (name == "head.w") cols = 1;
    else if (name == "head.b") rows = cols = 1;
    if (value.rows() != rows || value.cols() != cols) {
      throw DataError(dir.string() + "/" + name + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                      ", found " + std::to_string(value.rows()) + "x" + std::to_string(value.cols()));
    }
    *params[i] = Parameter<float>(std::move(value), name);
  }
  std::vector<std::string> frozen;
  try {
    frozen = field<std::vector<std::string>>(m, "freeze", dir);
    model.set_freeze(FreezeMask::from_names(frozen));
  } catch (const ConfigError& e) {
    throw DataError((dir / "manifest.json").string() + ": " + e.what());
  }
  return b;
}

std::string bundle_hash(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("not a bundle directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir));
  }
  std::sort(files.begin(), files.end());
  Sha256 h;
  for (const auto& f : files) {
    h.update(f.generic_string());
    h.update(std::string_view("\0", 1));
    h.update(sha256_file(dir / f));
    h.update("\n");
  }
  return h.hex();
}

std::string group_hash(const ClassifierModel& model, ParamGroup group) {
  Sha256 h;
  for (const auto* p : model.parameters(group)) {
    h.update(p->name);
    h.update(tensor_bytes(Tensor::from_matrix(p->value)));
  }
  return h.hex();
}

}  // namespace lxt
