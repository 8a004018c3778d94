#include "relmech/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relmech/errors.hpp"

namespace relmech {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

void decode(std::size_t flat, int dim, std::span<int> index) {
  for (int k = static_cast<int>(index.size()) - 1; k >= 0; --k) {
    index[k] = static_cast<int>(flat % static_cast<std::size_t>(dim));
    flat /= static_cast<std::size_t>(dim);
  }
}

}  // namespace

DenseTensor::DenseTensor(int dim, int rank)
    : dim_(dim), rank_(rank), data_(ipow(dim, rank), 0.0) {
  if (dim < 1 || rank < 0) {
    throw InvalidArgument("DenseTensor: dimension must be positive and rank non-negative");
  }
}

DenseTensor DenseTensor::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch("DenseTensor::from_matrix: matrix is not square");
  }
  const int n = static_cast<int>(m.rows());
  DenseTensor t(n, 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) t.data_[static_cast<std::size_t>(i * n + j)] = m(i, j);
  }
  return t;
}

std::size_t DenseTensor::flat_index(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != rank_) {
    throw DimensionMismatch("DenseTensor: index length does not match rank");
  }
  std::size_t flat = 0;
  for (int i : index) {
    if (i < 0 || i >= dim_) throw DimensionMismatch("DenseTensor: index out of range");
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return flat;
}

double& DenseTensor::at(std::span<const int> index) { return data_[flat_index(index)]; }

double DenseTensor::at(std::span<const int> index) const { return data_[flat_index(index)]; }

DenseTensor DenseTensor::contract(const Vector& u, int keep) const {
  if (u.size() != dim_) throw DimensionMismatch("DenseTensor::contract: vector dimension mismatch");
  if (keep < 0 || keep > rank_) throw InvalidArgument("DenseTensor::contract: invalid number of free indices");
  std::vector<double> cur = data_;
  const auto n = static_cast<std::size_t>(dim_);
  for (int r = rank_; r > keep; --r) {
    std::vector<double> next(cur.size() / n, 0.0);
    for (std::size_t row = 0; row < next.size(); ++row) {
      double s = 0.0;
      const double* block = cur.data() + row * n;
      for (std::size_t j = 0; j < n; ++j) s += block[j] * u[static_cast<Eigen::Index>(j)];
      next[row] = s;
    }
    cur = std::move(next);
  }
  DenseTensor out;
  out.dim_ = dim_;
  out.rank_ = keep;
  out.data_ = std::move(cur);
  return out;
}

double DenseTensor::full(const Vector& u) const { return contract(u, 0).data_[0]; }

Vector DenseTensor::contract_vector(const Vector& u) const {
  const DenseTensor t = contract(u, 1);
  return Eigen::Map<const Vector>(t.data_.data(), dim_);
}

Matrix DenseTensor::contract_matrix(const Vector& u) const {
  const DenseTensor t = contract(u, 2);
  Matrix m(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) m(i, j) = t.data_[static_cast<std::size_t>(i * dim_ + j)];
  }
  return m;
}

DenseTensor DenseTensor::symmetrized() const {
  if (rank_ < 2) return *this;
  DenseTensor out(dim_, rank_);
  std::vector<int> index(static_cast<std::size_t>(rank_));
  std::vector<int> perm(static_cast<std::size_t>(rank_));
  std::vector<int> permuted(static_cast<std::size_t>(rank_));
  double count = 0.0;
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    decode(flat, dim_, index);
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    count = 0.0;
    do {
      for (std::size_t k = 0; k < perm.size(); ++k) permuted[k] = index[static_cast<std::size_t>(perm[k])];
      sum += data_[flat_index(permuted)];
      count += 1.0;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.data_[flat] = sum / count;
  }
  return out;
}

double DenseTensor::asymmetry() const {
  double worst = 0.0;
  std::vector<int> index(static_cast<std::size_t>(rank_));
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    decode(flat, dim_, index);
    for (int a = 0; a < rank_; ++a) {
      for (int b = a + 1; b < rank_; ++b) {
        std::vector<int> swapped = index;
        std::swap(swapped[static_cast<std::size_t>(a)], swapped[static_cast<std::size_t>(b)]);
        worst = std::max(worst, std::abs(data_[flat] - data_[flat_index(swapped)]));
      }
    }
  }
  return worst;
}

DenseTensor& DenseTensor::operator+=(const DenseTensor& other) {
  if (other.dim_ != dim_ || other.rank_ != rank_) {
    throw DimensionMismatch("DenseTensor: shape mismatch in addition");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseTensor& DenseTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

DenseTensor DenseTensor::outer(const DenseTensor& a, const DenseTensor& b) {
  if (a.dim_ != b.dim_) throw DimensionMismatch("DenseTensor::outer: dimension mismatch");
  DenseTensor out(a.dim_, a.rank_ + b.rank_);
  const std::size_t nb = b.data_.size();
  for (std::size_t i = 0; i < a.data_.size(); ++i) {
    for (std::size_t j = 0; j < nb; ++j) out.data_[i * nb + j] = a.data_[i] * b.data_[j];
  }
  return out;
}

DenseTensor operator+(DenseTensor a, const DenseTensor& b) {
  a += b;
  return a;
}

DenseTensor operator*(double s, DenseTensor a) {
  a *= s;
  return a;
}

}  // namespace relmech
