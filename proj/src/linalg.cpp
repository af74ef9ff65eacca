#include "nsad/linalg.hpp"

#include <cassert>

namespace nsad {

RatMat mat_mul(const RatMat& x, const RatMat& y) {
    assert(x.cols == y.rows);
    RatMat z(x.rows, y.cols);
    for (int r = 0; r < x.rows; ++r) {
        for (int k = 0; k < x.cols; ++k) {
            const Rat& xv = x.at(r, k);
            if (xv == 0) continue;
            for (int c = 0; c < y.cols; ++c) {
                const Rat& yv = y.at(k, c);
                if (yv != 0) z.at(r, c) += xv * yv;
            }
        }
    }
    return z;
}

std::vector<Rat> mat_vec(const RatMat& m, const std::vector<Rat>& v) {
    assert(static_cast<int>(v.size()) == m.cols);
    std::vector<Rat> out(m.rows);
    for (int r = 0; r < m.rows; ++r) {
        Rat acc = 0;
        for (int c = 0; c < m.cols; ++c) {
            const Rat& mv = m.at(r, c);
            if (mv != 0) acc += mv * v[c];
        }
        out[r] = acc;
    }
    return out;
}

RatMat diag_mul(const std::vector<Rat>& d, const RatMat& m) {
    assert(static_cast<int>(d.size()) == m.rows);
    RatMat z(m.rows, m.cols);
    for (int r = 0; r < m.rows; ++r) {
        if (d[r] == 0) continue;
        for (int c = 0; c < m.cols; ++c) z.at(r, c) = d[r] * m.at(r, c);
    }
    return z;
}

RatMat mul_diag(const RatMat& m, const std::vector<Rat>& d) {
    assert(static_cast<int>(d.size()) == m.cols);
    RatMat z(m.rows, m.cols);
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
            if (d[c] != 0) z.at(r, c) = m.at(r, c) * d[c];
    return z;
}

RatMat block_diag(const RatMat& x, const RatMat& y) {
    RatMat z(x.rows + y.rows, x.cols + y.cols);
    for (int r = 0; r < x.rows; ++r)
        for (int c = 0; c < x.cols; ++c) z.at(r, c) = x.at(r, c);
    for (int r = 0; r < y.rows; ++r)
        for (int c = 0; c < y.cols; ++c) z.at(x.rows + r, x.cols + c) = y.at(r, c);
    return z;
}

RatMat vstack(const RatMat& x, const RatMat& y) {
    assert(x.cols == y.cols);
    RatMat z(x.rows + y.rows, x.cols);
    for (int r = 0; r < x.rows; ++r)
        for (int c = 0; c < x.cols; ++c) z.at(r, c) = x.at(r, c);
    for (int r = 0; r < y.rows; ++r)
        for (int c = 0; c < y.cols; ++c) z.at(x.rows + r, c) = y.at(r, c);
    return z;
}

RatMat hstack(const RatMat& x, const RatMat& y) {
    assert(x.rows == y.rows);
    RatMat z(x.rows, x.cols + y.cols);
    for (int r = 0; r < x.rows; ++r) {
        for (int c = 0; c < x.cols; ++c) z.at(r, c) = x.at(r, c);
        for (int c = 0; c < y.cols; ++c) z.at(r, x.cols + c) = y.at(r, c);
    }
    return z;
}

RatMat negate(const RatMat& m) {
    RatMat z(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) z.a[i] = -m.a[i];
    return z;
}

std::optional<RatMat> mat_inverse(const RatMat& m) {
    if (m.rows != m.cols) return std::nullopt;
    int n = m.rows;
    RatMat a = m;
    RatMat inv = RatMat::identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r) {
            if (a.at(r, col) != 0) { pivot = r; break; }
        }
        if (pivot < 0) return std::nullopt;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a.at(pivot, c), a.at(col, c));
                std::swap(inv.at(pivot, c), inv.at(col, c));
            }
        }
        Rat piv = a.at(col, col);
        for (int c = 0; c < n; ++c) {
            a.at(col, c) /= piv;
            inv.at(col, c) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Rat f = a.at(r, col);
            if (f == 0) continue;
            for (int c = 0; c < n; ++c) {
                a.at(r, c) -= f * a.at(col, c);
                inv.at(r, c) -= f * inv.at(col, c);
            }
        }
    }
    return inv;
}

} // namespace nsad
