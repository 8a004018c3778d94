#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace relmech {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Rank-3 array stored as one matrix per leading index. For metric partials
/// `d[l](m, n)` is the derivative of g_{mn} along coordinate l; for
/// connection symbols the leading index is the upper one.
using Rank3 = std::vector<Matrix>;

/// Dense rank-k array over a dim-dimensional index space, row-major with the
/// last index contiguous.
class DenseTensor {
 public:
  DenseTensor() = default;
  DenseTensor(int dim, int rank);

  static DenseTensor from_matrix(const Matrix& m);

  int dim() const { return dim_; }
  int rank() const { return rank_; }
  std::size_t size() const { return data_.size(); }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& at(std::span<const int> index);
  double at(std::span<const int> index) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  /// Contracts the trailing `rank() - keep` indices with u.
  DenseTensor contract(const Vector& u, int keep) const;

  /// Full contraction T_{a1..ak} u^a1 ... u^ak.
  double full(const Vector& u) const;

  /// Contraction down to one free index.
  Vector contract_vector(const Vector& u) const;

  /// Contraction down to two free indices.
  Matrix contract_matrix(const Vector& u) const;

  /// Average over all permutations of the index positions.
  DenseTensor symmetrized() const;

  /// Largest |T_{..a..b..} - T_{..b..a..}| over all index transpositions.
  double asymmetry() const;

  DenseTensor& operator+=(const DenseTensor& other);
  DenseTensor& operator*=(double s);

  static DenseTensor outer(const DenseTensor& a, const DenseTensor& b);

 private:
  std::size_t flat_index(std::span<const int> index) const;

  int dim_ = 0;
  int rank_ = 0;
  std::vector<double> data_;
};

DenseTensor operator+(DenseTensor a, const DenseTensor& b);
DenseTensor operator*(double s, DenseTensor a);

}  // namespace relmech
