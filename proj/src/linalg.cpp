#include "krylab/linalg.hpp"

#include <cmath>

#include "krylab/error.hpp"

namespace krylab {

CMat to_cmat(const std::vector<CVec>& rows) {
    int n = int(rows.size());
    CMat A(n, rows.empty() ? 0 : int(rows[0].size()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < A.cols(); ++j) A(i, j) = rows[i][j];
    return A;
}

EVec to_evec(const CVec& v) {
    EVec r(int(v.size()));
    for (int i = 0; i < r.size(); ++i) r(i) = v[i];
    return r;
}

CVec to_cvec(const EVec& v) {
    CVec r(v.size());
    for (int i = 0; i < v.size(); ++i) r[i] = v(i);
    return r;
}

HermEig herm_eig(const CMat& H) {
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    if (es.info() != Eigen::Success) fail(ErrKind::invalid_argument, "hermitian eigensolver failed");
    int n = int(H.rows());
    HermEig out;
    out.evals.resize(n);
    out.frame.resize(n, n);
    // Eigen returns ascending; flip to descending.
    for (int i = 0; i < n; ++i) {
        out.evals(i) = es.eigenvalues()(n - 1 - i);
        out.frame.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return out;
}

double max_abs(const CMat& A) { return A.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMat& A, double tol) {
    return max_abs(A - A.adjoint()) <= tol * std::max(1.0, max_abs(A));
}

CMat herm_inv_sqrt(const CMat& H) {
    HermEig e = herm_eig(H);
    int n = int(H.rows());
    CMat D = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (e.evals(i) <= 0.0) fail(ErrKind::geometry, "inverse sqrt of non positive definite matrix");
        D(i, i) = 1.0 / std::sqrt(e.evals(i));
    }
    return e.frame * D * e.frame.adjoint();
}

CMat expm(const CMat& A) {
    double nrm = max_abs(A);
    int k = 0;
    while (nrm > 0.5 && k < 40) {
        nrm *= 0.5;
        ++k;
    }
    CMat B = A / std::pow(2.0, k);
    int n = int(A.rows());
    CMat term = CMat::Identity(n, n);
    CMat sum = term;
    for (int j = 1; j <= 20; ++j) {
        term = term * B / double(j);
        sum += term;
    }
    for (int j = 0; j < k; ++j) sum = sum * sum;
    return sum;
}

CMat unitary_with_last_column(const EVec& u) {
    int n = int(u.size());
    CMat U(n, n);
    U.col(n - 1) = u / u.norm();
    int filled = 0;
    for (int cand = 0; cand < n && filled < n - 1; ++cand) {
        EVec v = EVec::Zero(n);
        v(cand) = 1.0;
        v -= U.col(n - 1) * (U.col(n - 1).adjoint() * v);
        for (int j = 0; j < filled; ++j) v -= U.col(j) * (U.col(j).adjoint() * v);
        double nv = v.norm();
        if (nv < 1e-8) continue;
        U.col(filled++) = v / nv;
    }
    if (filled != n - 1) fail(ErrKind::invalid_argument, "unitary completion failed");
    return U;
}

} // namespace krylab
