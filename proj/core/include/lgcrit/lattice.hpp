#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lgcrit {

using IntVec = std::vector<std::int64_t>;

/// Dense row-major integer matrix.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, 0) {}
    static IntMatrix from_rows(const std::vector<IntVec>& rows, int cols);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    std::int64_t& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    std::int64_t operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
    std::span<const std::int64_t> row(int i) const { return {data_.data() + std::size_t(i) * cols_, std::size_t(cols_)}; }
    IntVec column(int j) const;
    IntVec apply(std::span<const std::int64_t> x) const;
    std::vector<double> apply(std::span<const double> x) const;
    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix& rhs) const;
    bool is_zero() const;
    bool operator==(const IntMatrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<std::int64_t> data_;
};

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

/// Exact determinant of a square matrix (Bareiss elimination over big integers).
std::int64_t determinant(const IntMatrix& m);

/// Exact rank over the rationals.
int rank(const IntMatrix& m);

/// Primitive integer basis of the rational kernel {x : m x = 0}.
/// Each vector is scaled to coprime integer entries.
std::vector<IntVec> integer_kernel(const IntMatrix& m);

/// Exact inverse of a square matrix as numerators over a common denominator.
/// Returns false when singular.
struct RationalInverse {
    IntMatrix numerators;
    std::int64_t denominator = 1;
};
bool invert(const IntMatrix& m, RationalInverse& out);

/// Nonnegative gcd of all entries (0 for the zero vector).
std::int64_t gcd_of(std::span<const std::int64_t> v);

}  // namespace lgcrit
