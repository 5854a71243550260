#pragma once

#include <Eigen/Core>

#include <vector>

namespace sherdreg {

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// method with potentials, O(n^3)). Returns column[row].
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace sherdreg
