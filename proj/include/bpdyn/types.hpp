#pragma once

#include <Eigen/Dense>

namespace bpdyn {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

} // namespace bpdyn
