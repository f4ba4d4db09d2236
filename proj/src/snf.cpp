#include "veerweave/snf.hpp"

namespace veerweave {

namespace {

struct Worker {
    IMat S, U, Uinv, V, Vinv;

    explicit Worker(const IMat& A)
        : S(A),
          U(IMat::identity(A.rows())),
          Uinv(IMat::identity(A.rows())),
          V(IMat::identity(A.cols())),
          Vinv(IMat::identity(A.cols())) {}

    // row_i += k * row_j on S and U; inverse op on Uinv columns
    void row_add(int i, int j, const Int& k) {
        for (int c = 0; c < S.cols(); ++c) S.at(i, c) += k * S.at(j, c);
        for (int c = 0; c < U.cols(); ++c) U.at(i, c) += k * U.at(j, c);
        for (int r = 0; r < Uinv.rows(); ++r) Uinv.at(r, j) -= k * Uinv.at(r, i);
    }
    void row_swap(int i, int j) {
        for (int c = 0; c < S.cols(); ++c) std::swap(S.at(i, c), S.at(j, c));
        for (int c = 0; c < U.cols(); ++c) std::swap(U.at(i, c), U.at(j, c));
        for (int r = 0; r < Uinv.rows(); ++r) std::swap(Uinv.at(r, i), Uinv.at(r, j));
    }
    void row_negate(int i) {
        for (int c = 0; c < S.cols(); ++c) S.at(i, c) = -S.at(i, c);
        for (int c = 0; c < U.cols(); ++c) U.at(i, c) = -U.at(i, c);
        for (int r = 0; r < Uinv.rows(); ++r) Uinv.at(r, i) = -Uinv.at(r, i);
    }
    void col_add(int i, int j, const Int& k) {  // col_i += k * col_j
        for (int r = 0; r < S.rows(); ++r) S.at(r, i) += k * S.at(r, j);
        for (int r = 0; r < V.rows(); ++r) V.at(r, i) += k * V.at(r, j);
        for (int c = 0; c < Vinv.cols(); ++c) Vinv.at(j, c) -= k * Vinv.at(i, c);
    }
    void col_swap(int i, int j) {
        for (int r = 0; r < S.rows(); ++r) std::swap(S.at(r, i), S.at(r, j));
        for (int r = 0; r < V.rows(); ++r) std::swap(V.at(r, i), V.at(r, j));
        for (int c = 0; c < Vinv.cols(); ++c) std::swap(Vinv.at(i, c), Vinv.at(j, c));
    }
    void col_negate(int i) {
        for (int r = 0; r < S.rows(); ++r) S.at(r, i) = -S.at(r, i);
        for (int r = 0; r < V.rows(); ++r) V.at(r, i) = -V.at(r, i);
        for (int c = 0; c < Vinv.cols(); ++c) Vinv.at(i, c) = -Vinv.at(i, c);
    }
};

Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

}  // namespace

SmithResult smith_normal_form(const IMat& A, int pivot_strategy) {
    Worker w(A);
    int m = A.rows(), n = A.cols();
    int t = 0;
    while (t < m && t < n) {
        // pick pivot in the trailing block
        int pr = -1, pc = -1;
        if (pivot_strategy == 0) {
            Int best = 0;
            for (int r = t; r < m; ++r)
                for (int c = t; c < n; ++c) {
                    const Int& v = w.S.at(r, c);
                    if (v == 0) continue;
                    Int av = abs_int(v);
                    if (pr < 0 || av < best) {
                        best = av;
                        pr = r;
                        pc = c;
                    }
                }
        } else {
            for (int r = t; r < m && pr < 0; ++r)
                for (int c = t; c < n; ++c)
                    if (w.S.at(r, c) != 0) {
                        pr = r;
                        pc = c;
                        break;
                    }
        }
        if (pr < 0) break;
        if (pr != t) w.row_swap(t, pr);
        if (pc != t) w.col_swap(t, pc);
        if (w.S.at(t, t) < 0) w.row_negate(t);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (int r = t + 1; r < m; ++r) {
                if (w.S.at(r, t) == 0) continue;
                Int q = w.S.at(r, t) / w.S.at(t, t);
                w.row_add(r, t, -q);
                if (w.S.at(r, t) != 0) {
                    w.row_swap(t, r);  // smaller remainder becomes the pivot
                    if (w.S.at(t, t) < 0) w.row_negate(t);
                    dirty = true;
                }
            }
            for (int c = t + 1; c < n; ++c) {
                if (w.S.at(t, c) == 0) continue;
                Int q = w.S.at(t, c) / w.S.at(t, t);
                w.col_add(c, t, -q);
                if (w.S.at(t, c) != 0) {
                    w.col_swap(t, c);
                    if (w.S.at(t, t) < 0) w.col_negate(t);
                    dirty = true;
                }
            }
        }
        ++t;
    }
    int rank = t;

    // enforce divisibility s_i | s_{i+1}
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i + 1 < rank; ++i) {
            Int a = w.S.at(i, i), b = w.S.at(i + 1, i + 1);
            if (b % a == 0) continue;
            changed = true;
            // fold the two diagonal entries: standard gcd trick
            w.col_add(i, i + 1, 1);  // col_i += col_{i+1}: puts b into position (i+1, i)
            // now clear the 2x2 block back to diagonal via euclid
            while (true) {
                Int& d = w.S.at(i, i);
                Int& e = w.S.at(i + 1, i);
                if (e == 0) break;
                Int q = e / d;
                w.row_add(i + 1, i, -q);
                if (w.S.at(i + 1, i) != 0) {
                    w.row_swap(i, i + 1);
                    if (w.S.at(i, i) < 0) w.row_negate(i);
                }
            }
            // clear the (i, i+1) entry created by the fold
            if (w.S.at(i, i + 1) != 0) {
                Int q = w.S.at(i, i + 1) / w.S.at(i, i);
                w.col_add(i + 1, i, -q);
                // exact since s_i now divides everything in its row/col
            }
            if (w.S.at(i + 1, i + 1) < 0) w.row_negate(i + 1);
        }
    }

    SmithResult res{std::move(w.S), std::move(w.U), std::move(w.Uinv), std::move(w.V), std::move(w.Vinv), rank, {}};
    for (int i = 0; i < rank; ++i) res.invariant_factors.push_back(res.S.at(i, i));
    return res;
}

IMat integer_kernel(const IMat& A) {
    SmithResult s = smith_normal_form(A);
    int k = A.cols() - s.rank;
    IMat K(A.cols(), k);
    for (int j = 0; j < k; ++j)
        for (int r = 0; r < A.cols(); ++r) K.at(r, j) = s.V.at(r, s.rank + j);
    return K;
}

std::optional<std::vector<Int>> solve_integer(const IMat& A, const std::vector<Int>& b) {
    SmithResult s = smith_normal_form(A);
    std::vector<Int> c = s.U.apply(b);
    std::vector<Int> y(static_cast<std::size_t>(A.cols()), Int(0));
    for (int i = 0; i < A.rows(); ++i) {
        const Int& ci = c[static_cast<std::size_t>(i)];
        if (i < s.rank) {
            if (ci % s.S.at(i, i) != 0) return std::nullopt;
            if (i < A.cols()) y[static_cast<std::size_t>(i)] = ci / s.S.at(i, i);
        } else if (ci != 0) {
            return std::nullopt;
        }
    }
    return s.V.apply(y);
}

int rational_rank(const IMat& A) { return smith_normal_form(A).rank; }

}  // namespace veerweave
