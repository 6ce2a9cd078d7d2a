#include "ctmc/matrix_exponential.hpp"

#include <cmath>

#include "ctmc/generator.hpp"

namespace ctmc {

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw Error("matrix_exponential: matrix is not square");
  const Eigen::Index n = a.rows();
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm)) throw Error("matrix_exponential: non-finite entries");

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);

  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  // ||scaled|| <= 1/2, so 1/2^k / k! drops below 1e-20 well before k = 24.
  for (int k = 1; k <= 24; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-20 * result.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace ctmc
