#pragma once

#include <Eigen/Dense>

namespace ctmc {

// Scaling and squaring with a truncated Taylor kernel. The argument is scaled
// so that its 1-norm is at most 1/2 before the series is summed.
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a);

}  // namespace ctmc
