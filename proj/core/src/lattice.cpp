#include "lgcrit/lattice.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lgcrit/errors.hpp"

namespace lgcrit {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotReflexive: return "NotReflexive";
        case ErrorCode::NotSmooth: return "NotSmooth";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::SingularBasis: return "SingularBasis";
        case ErrorCode::UnboundedPolytope: return "UnboundedPolytope";
        case ErrorCode::UnboundedRegion: return "UnboundedRegion";
        case ErrorCode::NotStronglyExceptional: return "NotStronglyExceptional";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::SpecInvariantViolated: return "SpecInvariantViolated";
        case ErrorCode::ParameterTooSmall: return "ParameterTooSmall";
        case ErrorCode::BadModelSpec: return "BadModelSpec";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
        case ErrorCode::Diverged: return "Diverged";
        case ErrorCode::LeftTorus: return "LeftTorus";
        case ErrorCode::IncompleteSolve: return "IncompleteSolve";
        case ErrorCode::PathJump: return "PathJump";
        case ErrorCode::IncompleteStart: return "IncompleteStart";
        case ErrorCode::NotStabilized: return "NotStabilized";
        case ErrorCode::RecipeUnavailable: return "RecipeUnavailable";
        case ErrorCode::MatchAmbiguous: return "MatchAmbiguous";
        case ErrorCode::NonBijective: return "NonBijective";
        case ErrorCode::AlignmentFailure: return "AlignmentFailure";
        case ErrorCode::NotEquivalent: return "NotEquivalent";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorKind kind_of(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::SingularJacobian:
        case ErrorCode::Diverged:
        case ErrorCode::LeftTorus:
        case ErrorCode::IncompleteSolve:
        case ErrorCode::PathJump:
        case ErrorCode::IncompleteStart:
        case ErrorCode::NotStabilized:
        case ErrorCode::MatchAmbiguous:
        case ErrorCode::NonBijective:
        case ErrorCode::IoError:
            return ErrorKind::Numerical;
        case ErrorCode::NotStronglyExceptional:
        case ErrorCode::AlignmentFailure:
        case ErrorCode::NotEquivalent:
            return ErrorKind::Verification;
        default:
            return ErrorKind::Usage;
    }
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows, int cols) {
    IntMatrix m(int(rows.size()), cols);
    for (int i = 0; i < m.rows(); ++i) {
        if (int(rows[i].size()) != cols) throw Error(ErrorCode::LengthMismatch, "ragged rows");
        for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntVec IntMatrix::column(int j) const {
    IntVec c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

IntVec IntMatrix::apply(std::span<const std::int64_t> x) const {
    if (int(x.size()) != cols_) throw Error(ErrorCode::LengthMismatch, "matrix-vector product");
    IntVec y(rows_, 0);
    for (int i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
    return y;
}

std::vector<double> IntMatrix::apply(std::span<const double> x) const {
    if (int(x.size()) != cols_) throw Error(ErrorCode::LengthMismatch, "matrix-vector product");
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) y[i] += double((*this)(i, j)) * x[j];
    return y;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw Error(ErrorCode::LengthMismatch, "matrix product");
    IntMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            auto a = (*this)(i, k);
            if (a == 0) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

bool IntMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](auto v) { return v == 0; });
}

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "dot product");
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::int64_t gcd_of(std::span<const std::int64_t> v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

namespace {

using QMatrix = std::vector<std::vector<mpq_class>>;

QMatrix to_rational(const IntMatrix& m) {
    QMatrix q(m.rows(), std::vector<mpq_class>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) q[i][j] = mpq_class(static_cast<long>(m(i, j)));
    return q;
}

std::int64_t to_int64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("integer overflow in exact arithmetic");
    return z.get_si();
}

// Reduced row echelon form in place, pivoting only among the first `cols` columns; returns pivot columns.
std::vector<int> rref(QMatrix& a, int cols) {
    std::vector<int> pivots;
    int rows = int(a.size());
    int width = rows ? int(a[0].size()) : 0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (sgn(a[i][c]) != 0) { p = i; break; }
        if (p < 0) continue;
        std::swap(a[p], a[r]);
        mpq_class inv = 1 / a[r][c];
        for (int j = c; j < width; ++j) a[r][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || sgn(a[i][c]) == 0) continue;
            mpq_class f = a[i][c];
            for (int j = c; j < width; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

std::int64_t determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::LengthMismatch, "determinant of non-square matrix");
    int n = m.rows();
    if (n == 0) return 1;
    std::vector<std::vector<mpz_class>> a(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = static_cast<long>(m(i, j));
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * to_int64(a[n - 1][n - 1]);
}

int rank(const IntMatrix& m) {
    auto q = to_rational(m);
    return int(rref(q, m.cols()).size());
}

std::vector<IntVec> integer_kernel(const IntMatrix& m) {
    int n = m.cols();
    auto q = to_rational(m);
    auto pivots = rref(q, n);
    std::vector<bool> is_pivot(n, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<IntVec> basis;
    for (int free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<mpq_class> v(n, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -q[r][free];
        mpz_class den = 1;
        for (auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
        IntVec iv(n);
        for (int i = 0; i < n; ++i) {
            mpq_class s = v[i] * den;
            iv[i] = to_int64(s.get_num());
        }
        auto g = gcd_of(iv);
        if (g > 1)
            for (auto& x : iv) x /= g;
        basis.push_back(std::move(iv));
    }
    return basis;
}

bool invert(const IntMatrix& m, RationalInverse& out) {
    int n = m.rows();
    if (n != m.cols()) throw Error(ErrorCode::LengthMismatch, "inverse of non-square matrix");
    QMatrix a(n, std::vector<mpq_class>(2 * n, 0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = static_cast<long>(m(i, j));
        a[i][n + i] = 1;
    }
    auto pivots = rref(a, n);
    if (int(pivots.size()) < n) return false;
    mpz_class den = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a[i][n + j].get_den_mpz_t());
    out.denominator = to_int64(den);
    out.numerators = IntMatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            mpq_class s = a[i][n + j] * den;
            out.numerators(i, j) = to_int64(s.get_num());
        }
    return true;
}

}  // namespace lgcrit
