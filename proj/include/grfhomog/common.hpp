#pragma once

#include <Eigen/Dense>

namespace grfhomog {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Tolerance for structural validation (antisymmetry, Jacobi, reductivity,
// metric symmetry). Inputs are exact rationals rendered in doubles, so the
// default is tight. Mutable process-wide setting.
double& validation_tolerance();

// Defect threshold below which a tensor counts as isotropy-invariant.
double& invariance_tolerance();

}  // namespace grfhomog
