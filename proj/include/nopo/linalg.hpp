#pragma once

#include <Eigen/Dense>

namespace nopo {

using Mat2 = Eigen::Matrix2d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

/// Matrix exponential by Pade approximation with scaling and squaring.
Mat2 expm(const Mat2& a);
Mat4c expm(const Mat4c& a);

}  // namespace nopo
