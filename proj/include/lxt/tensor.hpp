#ifndef LXT_TENSOR_HPP_
#define LXT_TENSOR_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace lxt {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using RowVectorX = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using Matrix = MatrixX<float>;
using Index = Eigen::Index;

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

/// Rank-N float32 tensor in row-major order; the on-disk unit of persistence.
/// Construction rejects shape/size disagreement and non-finite values.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::uint32_t> shape, std::vector<float> values);

  template <typename Derived>
  static Tensor from_matrix(const Eigen::MatrixBase<Derived>& m) {
    Matrix rm = m.template cast<float>();
    return Tensor({static_cast<std::uint32_t>(rm.rows()), static_cast<std::uint32_t>(rm.cols())},
                  std::vector<float>(rm.data(), rm.data() + rm.size()));
  }

  const std::vector<std::uint32_t>& shape() const { return shape_; }
  std::span<const float> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::size_t rank() const { return shape_.size(); }

  /// Rank 0 -> 1x1, rank 1 -> 1xn, rank 2 -> mxn. Higher ranks fold leading dims into rows.
  Matrix to_matrix() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<std::uint32_t> shape_;
  std::vector<float> values_;
};

// "LXT1" binary format: magic, u32 LE rank, u32 LE dims, f32 LE row-major values.
void write_tensor(std::ostream& out, const Tensor& t);
Tensor read_tensor(std::istream& in);
void save_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor(const std::filesystem::path& path);

/// Serialized LXT1 bytes, used for content hashing.
std::vector<std::uint8_t> tensor_bytes(const Tensor& t);

}  // namespace lxt

#endif  // LXT_TENSOR_HPP_
