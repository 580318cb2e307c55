#include "gonodyn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gonodyn/errors.hpp"

namespace gonodyn::linalg {

Matrix::Matrix(int n) : n_(n) {
    if (n < 1 || n > max_dim)
        throw ConfigError("Matrix dimension must be in [1," + std::to_string(max_dim) +
                          "], got " + std::to_string(n));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : Matrix(static_cast<int>(rows.size())) {
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n_)
            throw ConfigError("Matrix initializer is not square");
        int j = 0;
        for (double v : row) (*this)(i, j++) = v;
        ++i;
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double Matrix::trace() const {
    double s = 0.0;
    for (int i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
}

Matrix Matrix::transposed() const {
    Matrix t(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::all_finite() const {
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (!std::isfinite((*this)(i, j))) return false;
    return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.size());
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j) {
            double s = 0.0;
            for (int k = 0; k < a.size(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

std::vector<double> multiply(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(a.size()), 0.0);
    for (int i = 0; i < a.size(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.size(); ++j) s += a(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

bool Spectrum::all_converged() const {
    return std::all_of(values.begin(), values.end(),
                       [](const Eigenvalue& e) { return e.converged; });
}

namespace {

struct Lu {
    Matrix lu;
    std::array<int, Matrix::max_dim> perm{};
    int sign = 1;
};

// Partial-pivoting LU. pivot_floor <= 0 enforces the 1e-13 singularity
// contract; a positive floor substitutes tiny pivots instead (inverse
// iteration on a near-singular matrix needs the factorization to survive).
Lu lu_factor(const Matrix& A, double pivot_floor) {
    const int n = A.size();
    Lu f{A, {}, 1};
    for (int i = 0; i < n; ++i) f.perm[i] = i;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        double p = f.lu(k, k);
        if (pivot_floor > 0.0) {
            if (std::abs(p) < pivot_floor) {
                p = (p >= 0.0) ? pivot_floor : -pivot_floor;
                f.lu(k, k) = p;
            }
        } else if (std::abs(p) <= 1e-13) {
            throw SingularMatrixError(
                "matrix singular to tolerance: pivot " + std::to_string(k) +
                " has magnitude " + std::to_string(std::abs(p)), k);
        }
        for (int i = k + 1; i < n; ++i) {
            f.lu(i, k) /= p;
            const double m = f.lu(i, k);
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

std::vector<double> lu_backsolve(const Lu& f, const std::vector<double>& b) {
    const int n = f.lu.size();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(f.perm[i])];
    for (int i = 1; i < n; ++i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / f.lu(i, i);
    }
    return x;
}

// Householder reduction to upper Hessenberg form, in place.
void hessenberg(Matrix& H) {
    const int n = H.size();
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(H(i, k));
        if (scale == 0.0) continue;

        std::array<double, Matrix::max_dim> v{};
        double norm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = H(i, k) / scale;
            norm2 += v[i] * v[i];
        }
        double alpha = (v[k + 1] >= 0.0) ? -std::sqrt(norm2) : std::sqrt(norm2);
        if (alpha == 0.0) continue;
        norm2 -= v[k + 1] * alpha;
        v[k + 1] -= alpha;
        if (norm2 == 0.0) continue;

        // Apply P = I - v v^T / norm2 from both sides.
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * H(i, j);
            s /= norm2;
            for (int i = k + 1; i < n; ++i) H(i, j) -= s * v[i];
        }
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += H(i, j) * v[j];
            s /= norm2;
            for (int j = k + 1; j < n; ++j) H(i, j) -= s * v[j];
        }
        H(k + 1, k) = alpha * scale;
        for (int i = k + 2; i < n; ++i) H(i, k) = 0.0;
    }
}

bool subdiag_negligible(const Matrix& H, int i) {
    const double thresh = 1e-12 * (std::abs(H(i - 1, i - 1)) + std::abs(H(i, i)));
    return std::abs(H(i, i - 1)) <= thresh;
}

void push_pair(std::vector<Eigenvalue>& out, double a, double b, double c, double d,
               bool converged) {
    const double tr = a + d;
    const double det = a * d - b * c;
    const double half = 0.5 * tr;
    const double disc = half * half - det;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        double l1 = (half >= 0.0) ? half + root : half - root;
        double l2 = (l1 != 0.0) ? det / l1 : half - ((half >= 0.0) ? -root : root);
        out.push_back({l1, 0.0, converged});
        out.push_back({l2, 0.0, converged});
    } else {
        const double im = std::sqrt(-disc);
        out.push_back({half, im, converged});
        out.push_back({half, -im, converged});
    }
}

// Francis implicit double-shift QR on the Hessenberg matrix H, eigenvalues only.
std::vector<Eigenvalue> francis_eigenvalues(Matrix H) {
    const int n = H.size();
    std::vector<Eigenvalue> out;
    out.reserve(static_cast<std::size_t>(n));

    int hi = n - 1;
    long sweeps = 0;
    const long max_sweeps = 100L * n * n;
    int stagnation = 0;

    while (hi >= 0 && sweeps <= max_sweeps) {
        // Deflate converged trailing eigenvalues.
        if (hi == 0) {
            out.push_back({H(0, 0), 0.0, true});
            break;
        }
        if (subdiag_negligible(H, hi)) {
            out.push_back({H(hi, hi), 0.0, true});
            --hi;
            stagnation = 0;
            continue;
        }
        if (hi == 1 || subdiag_negligible(H, hi - 1)) {
            push_pair(out, H(hi - 1, hi - 1), H(hi - 1, hi), H(hi, hi - 1), H(hi, hi), true);
            hi -= 2;
            stagnation = 0;
            continue;
        }

        // Active block [lo, hi].
        int lo = hi - 1;
        while (lo > 0 && !subdiag_negligible(H, lo)) --lo;

        ++sweeps;
        ++stagnation;

        // Double shift from the trailing 2x2; exceptional shift on stagnation.
        double s, t;
        if (stagnation > 0 && stagnation % 16 == 0) {
            const double w = std::abs(H(hi, hi - 1)) + std::abs(H(hi - 1, hi - 2));
            s = 1.5 * w;
            t = w * w;
        } else {
            s = H(hi - 1, hi - 1) + H(hi, hi);
            t = H(hi - 1, hi - 1) * H(hi, hi) - H(hi - 1, hi) * H(hi, hi - 1);
        }

        double x = H(lo, lo) * H(lo, lo) + H(lo, lo + 1) * H(lo + 1, lo) - s * H(lo, lo) + t;
        double y = H(lo + 1, lo) * (H(lo, lo) + H(lo + 1, lo + 1) - s);
        double z = (lo + 2 <= hi) ? H(lo + 2, lo + 1) * H(lo + 1, lo) : 0.0;

        for (int k = lo; k <= hi - 2; ++k) {
            // Householder reflector annihilating (y, z) below x.
            const double scale = std::abs(x) + std::abs(y) + std::abs(z);
            if (scale != 0.0) {
                const double xs = x / scale, ys = y / scale, zs = z / scale;
                double nrm = std::sqrt(xs * xs + ys * ys + zs * zs);
                if (xs < 0.0) nrm = -nrm;
                if (nrm != 0.0) {
                    double v0 = xs + nrm, v1 = ys, v2 = zs;
                    const double beta = v0 * nrm; // = (v.v)/2 for this construction
                    if (beta != 0.0) {
                        const int rlo = std::max(lo, k - 1);
                        for (int j = rlo; j <= hi; ++j) {
                            double sum = v0 * H(k, j) + v1 * H(k + 1, j);
                            if (k + 2 <= hi) sum += v2 * H(k + 2, j);
                            sum /= beta;
                            H(k, j) -= sum * v0;
                            H(k + 1, j) -= sum * v1;
                            if (k + 2 <= hi) H(k + 2, j) -= sum * v2;
                        }
                        const int rhi = std::min(hi, k + 3);
                        for (int i = lo; i <= rhi; ++i) {
                            double sum = v0 * H(i, k) + v1 * H(i, k + 1);
                            if (k + 2 <= hi) sum += v2 * H(i, k + 2);
                            sum /= beta;
                            H(i, k) -= sum * v0;
                            H(i, k + 1) -= sum * v1;
                            if (k + 2 <= hi) H(i, k + 2) -= sum * v2;
                        }
                    }
                }
            }
            x = H(k + 1, k);
            y = (k + 2 <= hi) ? H(k + 2, k) : 0.0;
            z = (k + 3 <= hi) ? H(k + 3, k) : 0.0;
        }
        // Trailing 2x2 reflector (Givens-like) on rows hi-1, hi.
        {
            const double scale = std::abs(x) + std::abs(y);
            if (scale != 0.0) {
                const double xs = x / scale, ys = y / scale;
                double nrm = std::sqrt(xs * xs + ys * ys);
                if (xs < 0.0) nrm = -nrm;
                if (nrm != 0.0) {
                    double v0 = xs + nrm, v1 = ys;
                    const double beta = v0 * nrm;
                    if (beta != 0.0) {
                        const int k = hi - 1;
                        for (int j = std::max(lo, k - 1); j <= hi; ++j) {
                            double sum = (v0 * H(k, j) + v1 * H(k + 1, j)) / beta;
                            H(k, j) -= sum * v0;
                            H(k + 1, j) -= sum * v1;
                        }
                        for (int i = lo; i <= hi; ++i) {
                            double sum = (v0 * H(i, k) + v1 * H(i, k + 1)) / beta;
                            H(i, k) -= sum * v0;
                            H(i, k + 1) -= sum * v1;
                        }
                    }
                }
            }
        }
        // Restore exact Hessenberg zeros below the first subdiagonal.
        for (int i = lo + 2; i <= hi; ++i)
            for (int j = lo; j <= i - 2; ++j) H(i, j) = 0.0;
    }

    if (static_cast<int>(out.size()) < n) {
        // Sweep cap hit: report the remaining active block from its diagonal,
        // flagged unconverged.
        for (int i = hi; i >= 0; --i) out.push_back({H(i, i), 0.0, false});
    }
    return out;
}

} // namespace

std::vector<double> lu_solve(const Matrix& A, const std::vector<double>& b) {
    if (static_cast<int>(b.size()) != A.size())
        throw ConfigError("lu_solve: dimension mismatch");
    const Lu f = lu_factor(A, 0.0);
    return lu_backsolve(f, b);
}

double determinant(const Matrix& A) {
    Lu f;
    try {
        f = lu_factor(A, 0.0);
    } catch (const SingularMatrixError&) {
        return 0.0;
    }
    double d = f.sign;
    for (int i = 0; i < A.size(); ++i) d *= f.lu(i, i);
    return d;
}

Spectrum eigenvalues(const Matrix& A) {
    if (!A.all_finite())
        throw NumericError("eigenvalues: matrix has non-finite entries");
    Matrix H = A;
    hessenberg(H);
    Spectrum s;
    s.values = francis_eigenvalues(H);
    std::sort(s.values.begin(), s.values.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        if (a.re != b.re) return a.re > b.re;
        return a.im > b.im;
    });
    return s;
}

double spectral_abscissa(const Spectrum& s) {
    if (!s.all_converged())
        throw NumericError("spectral_abscissa: eigenvalue iteration did not converge");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& e : s.values) best = std::max(best, e.re);
    return best;
}

double spectral_abscissa(const Matrix& A) { return spectral_abscissa(eigenvalues(A)); }

double spectral_radius(const Spectrum& s) {
    if (!s.all_converged())
        throw NumericError("spectral_radius: eigenvalue iteration did not converge");
    double best = 0.0;
    for (const auto& e : s.values) best = std::max(best, std::hypot(e.re, e.im));
    return best;
}

double spectral_radius(const Matrix& A) { return spectral_radius(eigenvalues(A)); }

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
    const double n = norm2(v);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

std::vector<double> inverse_iterate(const Matrix& A, double pivot_floor, int max_rounds,
                                    double resid_target) {
    const int n = A.size();
    const Lu f = lu_factor(A, pivot_floor);
    // Fixed deterministic start: a mild ramp avoids accidental orthogonality
    // to the null direction while keeping reruns byte-identical.
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = 1.0 + 0.25 * i;
    normalize(x);
    for (int round = 0; round < max_rounds; ++round) {
        x = lu_backsolve(f, x);
        normalize(x);
        if (round >= 1) {
            const auto r = multiply(A, x);
            double rn = 0.0;
            for (double v : r) rn = std::max(rn, std::abs(v));
            if (rn <= resid_target) break;
        }
    }
    return x;
}

} // namespace

NullVectors null_vectors(const Matrix& A, double tol) {
    const double norm = A.inf_norm();
    if (tol <= 0.0) tol = 1e-7 * norm;

    const Spectrum s = eigenvalues(A);
    int zero_count = 0;
    for (const auto& e : s.values)
        if (std::hypot(e.re, e.im) < tol) ++zero_count;
    if (zero_count != 1)
        throw NumericError("null_vectors: expected exactly one eigenvalue of modulus < " +
                           std::to_string(tol) + ", found " + std::to_string(zero_count));

    const double pivot_floor = std::numeric_limits<double>::epsilon() * std::max(norm, 1e-30);
    const double resid_target = 1e-10 * norm;
    auto h = inverse_iterate(A, pivot_floor, 5, resid_target);
    auto v = inverse_iterate(A.transposed(), pivot_floor, 5, resid_target);

    // Deterministic sign: largest |component| of h positive.
    int imax = 0;
    for (int i = 1; i < A.size(); ++i)
        if (std::abs(h[static_cast<std::size_t>(i)]) > std::abs(h[static_cast<std::size_t>(imax)])) imax = i;
    if (h[static_cast<std::size_t>(imax)] < 0.0)
        for (double& x : h) x = -x;

    double dot = 0.0;
    for (int i = 0; i < A.size(); ++i) dot += v[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(i)];
    if (std::abs(dot) < 1e-10)
        throw NumericError("null_vectors: left/right null vectors are numerically orthogonal "
                           "(zero eigenvalue defective?)");
    for (double& x : v) x /= dot;

    const double resid_limit = 1e-8 * norm;
    const auto rh = multiply(A, h);
    const auto rv = multiply(A.transposed(), v);
    double rhn = 0.0, rvn = 0.0;
    for (double x : rh) rhn = std::max(rhn, std::abs(x));
    for (double x : rv) rvn = std::max(rvn, std::abs(x));
    if (rhn > resid_limit || rvn > resid_limit)
        throw NumericError("null_vectors: residual " + std::to_string(std::max(rhn, rvn)) +
                           " exceeds " + std::to_string(resid_limit));

    return {std::move(h), std::move(v)};
}

} // namespace gonodyn::linalg
