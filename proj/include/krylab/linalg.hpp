#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "krylab/poly_jet.hpp"

namespace krylab {

using CMat = Eigen::MatrixXcd;
using EVec = Eigen::VectorXcd;

CMat to_cmat(const std::vector<CVec>& rows);
EVec to_evec(const CVec& v);
CVec to_cvec(const EVec& v);

// Eigenvalues of a Hermitian matrix, sorted descending, with matching
// unitary column frame.
struct HermEig {
    Eigen::VectorXd evals; // descending
    CMat frame;            // columns are eigenvectors
};
HermEig herm_eig(const CMat& H);

double max_abs(const CMat& A);
bool is_hermitian(const CMat& A, double tol = 1e-12);

// Hermitian inverse square root (descending-eigenvalue frame).
CMat herm_inv_sqrt(const CMat& H);

// Matrix exponential by scaling and squaring (small matrices).
CMat expm(const CMat& A);

// Unitary matrix whose n-th (last) column is the given unit vector; the
// rest is a deterministic Gram-Schmidt completion of the standard basis.
CMat unitary_with_last_column(const EVec& u);

} // namespace krylab
