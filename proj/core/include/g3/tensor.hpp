#pragma once

#include <cstddef>
#include <vector>

namespace g3 {

// Dense n×n×n array, row-major in (i, j, k).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }
  double& operator()(int i, int j, int k) { return data_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  double operator()(int i, int j, int k) const { return data_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  Tensor3& operator+=(const Tensor3& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }
  double max_abs() const {
    double m = 0;
    for (double x : data_) m = x > m ? x : (-x > m ? -x : m);
    return m;
  }
  bool operator==(const Tensor3& o) const = default;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

}  // namespace g3
