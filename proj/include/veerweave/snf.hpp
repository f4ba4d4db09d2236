#pragma once

#include "veerweave/numeric.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace veerweave {

// Dense matrix over Int, row-major.
class IMat {
  public:
    IMat() = default;
    IMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), Int(0)) {}

    static IMat identity(int n) {
        IMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Int& at(int r, int c) { return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)]; }
    const Int& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)]; }

    std::vector<Int> col(int c) const {
        std::vector<Int> v(static_cast<std::size_t>(rows_));
        for (int r = 0; r < rows_; ++r) v[static_cast<std::size_t>(r)] = at(r, c);
        return v;
    }

    IMat mul(const IMat& o) const {
        IMat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Int& x = at(i, k);
                if (x == 0) continue;
                for (int j = 0; j < o.cols_; ++j)
                    if (o.at(k, j) != 0) r.at(i, j) += x * o.at(k, j);
            }
        return r;
    }

    std::vector<Int> apply(const std::vector<Int>& v) const {
        std::vector<Int> r(static_cast<std::size_t>(rows_), Int(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (at(i, j) != 0) r[static_cast<std::size_t>(i)] += at(i, j) * v[static_cast<std::size_t>(j)];
        return r;
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<Int> a_;
};

// U * A * V = S with U, V unimodular and S diagonal, s_1 | s_2 | ... >= 0.
struct SmithResult {
    IMat S, U, Uinv, V, Vinv;
    int rank = 0;
    std::vector<Int> invariant_factors;  // the nonzero diagonal entries
};

// pivot_strategy 0: smallest |entry| (default); 1: first nonzero in scan
// order. Both must produce identical invariant factors; the second exists so
// tests can cross-check that.
SmithResult smith_normal_form(const IMat& A, int pivot_strategy = 0);

// Integer basis of ker(A) as matrix columns (saturated lattice basis).
IMat integer_kernel(const IMat& A);

// Solve A x = b over the integers; nullopt if no integral solution.
std::optional<std::vector<Int>> solve_integer(const IMat& A, const std::vector<Int>& b);

// rank over Q
int rational_rank(const IMat& A);

}  // namespace veerweave
