#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cosserat_dem {

using Index = std::size_t;
inline constexpr Index kNoCell = static_cast<Index>(-1);

/// Points are stored in 3D; 2D meshes keep z = 0.
using Point = Eigen::Vector3d;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Vector-valued field of position and time. Only the first d (or r)
/// components are read by consumers.
using Field = std::function<Eigen::Vector3d(const Point& x, double t)>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Field constant_field(const Eigen::Vector3d& value) {
  return [value](const Point&, double) { return value; };
}

inline Field zero_field() { return constant_field(Eigen::Vector3d::Zero()); }

/// Number of rotation components: scalar in 2D, vector in 3D.
inline int rotation_components(int dim) { return dim == 2 ? 1 : 3; }

/// Permutation symbol. In 2D the rotation index k is ignored and
/// eps = [[0, 1], [-1, 0]].
inline double permutation(int dim, int i, int j, int k = 2) {
  if (dim == 2) {
    if (i == 0 && j == 1) return 1.0;
    if (i == 1 && j == 0) return -1.0;
    return 0.0;
  }
  if (i == j || j == k || i == k) return 0.0;
  // even permutations of (0, 1, 2)
  if ((i == 0 && j == 1 && k == 2) || (i == 1 && j == 2 && k == 0) || (i == 2 && j == 0 && k == 1))
    return 1.0;
  return -1.0;
}

inline SpMat from_triplets(Eigen::Index rows, Eigen::Index cols, const std::vector<Triplet>& t) {
  SpMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace cosserat_dem
