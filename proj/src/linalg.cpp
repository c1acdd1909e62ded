#include "nopo/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace nopo {

Mat2 expm(const Mat2& a) { return a.exp(); }

Mat4c expm(const Mat4c& a) { return a.exp(); }

}  // namespace nopo
