#pragma once

#include <Eigen/Core>

namespace dcopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace dcopt
