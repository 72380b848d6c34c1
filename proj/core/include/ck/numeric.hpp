#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <random>

namespace ck {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Operator (spectral) norm, via the Gram matrix on the smaller side.
inline double op_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Matrix gram = a.rows() <= a.cols() ? Matrix(a * a.adjoint())
                                       : Matrix(a.adjoint() * a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Rank threshold: max(D, 64) * eps * sigma_max.
inline double rank_threshold(int dim, double sigma_max) {
    double d = static_cast<double>(std::max(dim, 64));
    return d * std::numeric_limits<double>::epsilon() * sigma_max;
}

/// Numerical rank of a Hermitian PSD matrix from its eigenvalues.
inline int numerical_rank_psd(const Eigen::VectorXd& eigs, int dim, double floor_tol = 0.0) {
    double smax = eigs.size() ? eigs.cwiseAbs().maxCoeff() : 0.0;
    double thr = std::max(rank_threshold(dim, smax), floor_tol);
    int r = 0;
    for (int i = 0; i < eigs.size(); ++i)
        if (eigs(i) > thr) ++r;
    return r;
}

/// Haar-ish random unitary via QR of a complex Gaussian matrix.
inline Matrix random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex d = r(j, j);
        Complex phase = std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
        q.col(j) *= phase;
    }
    return q;
}

/// Max deviation of V's columns from orthonormality.
inline double orthonormality_defect(const Matrix& v) {
    if (v.cols() == 0) return 0.0;
    Matrix g = v.adjoint() * v;
    return (g - Matrix::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
}

/// Orthonormal basis for the orthogonal complement of range(V) in C^n.
inline Matrix orthogonal_complement(const Matrix& v, int n) {
    Matrix p = Matrix::Identity(n, n);
    if (v.cols() > 0) p -= v * v.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(p);
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 0.5) ++k;
    Matrix out(n, k);
    int c = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 0.5) out.col(c++) = es.eigenvectors().col(i);
    return out;
}

/// Orthonormal basis of the intersection of two subspaces given by
/// orthonormal column matrices (eigenvalue-1 space of P1 P2 P1).
inline Matrix subspace_intersection(const Matrix& a, const Matrix& b, int n,
                                    double tol = 1e-8) {
    if (a.cols() == 0 || b.cols() == 0) return Matrix(n, 0);
    Matrix pa = a * a.adjoint();
    Matrix pb = b * b.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(pa * pb * pa);
    int k = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 1.0 - tol) ++k;
    Matrix out(n, k);
    int c = 0;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 1.0 - tol) out.col(c++) = es.eigenvectors().col(i);
    return out;
}

}  // namespace ck
