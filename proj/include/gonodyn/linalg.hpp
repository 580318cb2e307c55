#ifndef GONODYN_LINALG_HPP
#define GONODYN_LINALG_HPP

#include <array>
#include <initializer_list>
#include <vector>

namespace gonodyn::linalg {

/// Dense square matrix of dimension <= 8, row-major, value semantics.
class Matrix {
public:
    static constexpr int max_dim = 8;

    Matrix() = default;
    explicit Matrix(int n);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(int n);

    int size() const { return n_; }
    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * max_dim + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * max_dim + j]; }

    double inf_norm() const;   ///< max absolute row sum
    double trace() const;
    Matrix transposed() const;
    bool all_finite() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);

private:
    int n_ = 0;
    std::array<double, max_dim * max_dim> a_{};
};

std::vector<double> multiply(const Matrix& a, const std::vector<double>& x);

struct Eigenvalue {
    double re = 0.0;
    double im = 0.0;
    bool converged = true;
};

/// Eigenvalues in canonical order (descending real part, conjugates adjacent).
struct Spectrum {
    std::vector<Eigenvalue> values;
    bool all_converged() const;
};

/// Solve Ax = b by LU with partial pivoting. Throws SingularMatrixError
/// (carrying the failing pivot index) when a pivot magnitude drops to 1e-13.
std::vector<double> lu_solve(const Matrix& A, const std::vector<double>& b);

/// Determinant via the same LU factorization.
double determinant(const Matrix& A);

/// Hessenberg reduction followed by shifted QR iteration. Non-converged
/// eigenvalues (sweep cap 100*n^2) are returned with converged=false.
Spectrum eigenvalues(const Matrix& A);

/// Max real part over the spectrum. Throws NumericError on non-convergence.
double spectral_abscissa(const Matrix& A);
double spectral_abscissa(const Spectrum& s);

/// Max modulus over the spectrum. Throws NumericError on non-convergence.
double spectral_radius(const Matrix& A);
double spectral_radius(const Spectrum& s);

struct NullVectors {
    std::vector<double> right; ///< h with A h ~ 0
    std::vector<double> left;  ///< v with v^T A ~ 0, scaled so v.h = 1
};

/// Right/left null vectors of a matrix with exactly one eigenvalue of
/// modulus < tol (pass tol <= 0 for the default 1e-7 * ||A||_inf). Inverse
/// iteration from a fixed deterministic start; result satisfies
/// ||A h||, ||v^T A|| <= 1e-8 * ||A||_inf and v.h = 1.
NullVectors null_vectors(const Matrix& A, double tol = -1.0);

} // namespace gonodyn::linalg

#endif
