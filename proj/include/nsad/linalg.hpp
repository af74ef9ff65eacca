#pragma once

#include <optional>
#include <vector>

#include "nsad/rational.hpp"

namespace nsad {

// Small dense matrix over exact rationals. Row-major.
struct RatMat {
    int rows = 0;
    int cols = 0;
    std::vector<Rat> a;

    RatMat() = default;
    RatMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Rat& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Rat& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    static RatMat identity(int n) {
        RatMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static RatMat from_rows(const std::vector<std::vector<Rat>>& rows_in) {
        RatMat m(static_cast<int>(rows_in.size()),
                 rows_in.empty() ? 0 : static_cast<int>(rows_in[0].size()));
        for (int r = 0; r < m.rows; ++r)
            for (int c = 0; c < m.cols; ++c) m.at(r, c) = rows_in[r][c];
        return m;
    }

    RatMat transpose() const {
        RatMat t(cols, rows);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    bool operator==(const RatMat& o) const {
        return rows == o.rows && cols == o.cols && a == o.a;
    }
};

RatMat mat_mul(const RatMat& x, const RatMat& y);
std::vector<Rat> mat_vec(const RatMat& m, const std::vector<Rat>& v);

// In-place row scaling by a diagonal given as a vector: diag(d) * m.
RatMat diag_mul(const std::vector<Rat>& d, const RatMat& m);
// m * diag(d).
RatMat mul_diag(const RatMat& m, const std::vector<Rat>& d);

RatMat block_diag(const RatMat& x, const RatMat& y);
RatMat vstack(const RatMat& x, const RatMat& y);
RatMat hstack(const RatMat& x, const RatMat& y);
RatMat negate(const RatMat& m);

// Gauss-Jordan. Empty when singular.
std::optional<RatMat> mat_inverse(const RatMat& m);

} // namespace nsad
