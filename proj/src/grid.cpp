#include "sel/grid.hpp"

#include "sel/errors.hpp"

namespace sel {

Grid::Grid(Eigen::Index n) : n_(n), dx_(0.0) {
  if (n < 3) throw ParameterError("grid needs at least 3 cells");
  dx_ = 1.0 / static_cast<double>(n);
  centers_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    centers_[i] = (static_cast<double>(i) + 0.5) * dx_;
}

}  // namespace sel
