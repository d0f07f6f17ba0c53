#pragma once

#include <Eigen/Core>

namespace sel {

/// Uniform cell-centred grid on [0, 1].
class Grid {
 public:
  explicit Grid(Eigen::Index n);

  Eigen::Index size() const { return n_; }
  double dx() const { return dx_; }
  const Eigen::ArrayXd& centers() const { return centers_; }
  double center(Eigen::Index i) const { return centers_[i]; }

 private:
  Eigen::Index n_;
  double dx_;
  Eigen::ArrayXd centers_;
};

}  // namespace sel
