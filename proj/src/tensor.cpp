#include "lxt/tensor.hpp"

#include "lxt/errors.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

namespace lxt {

namespace {

constexpr char kMagic[4] = {'L', 'X', 'T', '1'};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw DataError("tensor: truncated stream");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

Tensor::Tensor(std::vector<std::uint32_t> shape, std::vector<float> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  std::uint64_t n = std::accumulate(shape_.begin(), shape_.end(), std::uint64_t{1},
                                    std::multiplies<>());
  if (n != values_.size()) {
    throw std::invalid_argument("Tensor: shape product " + std::to_string(n) +
                                " does not match value count " + std::to_string(values_.size()));
  }
  for (float v : values_) {
    if (!std::isfinite(v)) throw NumericalError("Tensor: non-finite value");
  }
}

Matrix Tensor::to_matrix() const {
  Index rows = 1, cols = 1;
  if (rank() == 1) {
    cols = shape_[0];
  } else if (rank() >= 2) {
    cols = shape_.back();
    for (std::size_t i = 0; i + 1 < rank(); ++i) rows *= shape_[i];
  }
  Matrix m(rows, cols);
  if (!values_.empty()) std::memcpy(m.data(), values_.data(), values_.size() * sizeof(float));
  return m;
}

void write_tensor(std::ostream& out, const Tensor& t) {
  out.write(kMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) put_u32(out, d);
  for (float v : t.values()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  if (!out) throw DataError("tensor: write failed");
}

Tensor read_tensor(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("tensor: bad magic (expected LXT1)");
  }
  std::uint32_t rank = get_u32(in);
  if (rank > 8) throw DataError("tensor: implausible rank " + std::to_string(rank));
  std::vector<std::uint32_t> shape(rank);
  std::uint64_t n = 1;
  for (auto& d : shape) {
    d = get_u32(in);
    n *= d;
  }
  if (n > (std::uint64_t{1} << 34)) throw DataError("tensor: implausible size");
  std::vector<float> values(n);
  for (auto& v : values) v = std::bit_cast<float>(get_u32(in));
  try {
    return Tensor(std::move(shape), std::move(values));
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("tensor: ") + e.what());
  }
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_tensor(out, t);
}

Tensor load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_tensor(in);
}

std::vector<std::uint8_t> tensor_bytes(const Tensor& t) {
  std::ostringstream out(std::ios::binary);
  write_tensor(out, t);
  const std::string s = out.str();
  return {s.begin(), s.end()};
}

}  // namespace lxt
