#include "hamsec/ratlin.hpp"

namespace hamsec {

namespace {

// Row-echelon elimination; returns pivot columns. `rhs` (if non-null) is
// carried along.
std::vector<int> eliminate(RatMat& a, RatVec* rhs) {
    std::vector<int> pivots;
    if (a.empty()) return pivots;
    size_t rows = a.size(), cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t pr = r;
        while (pr < rows && a[pr][c] == 0) ++pr;
        if (pr == rows) continue;
        std::swap(a[pr], a[r]);
        if (rhs) std::swap((*rhs)[pr], (*rhs)[r]);
        Rat inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        if (rhs) (*rhs)[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            if (rhs) (*rhs)[i] -= f * (*rhs)[r];
        }
        pivots.push_back(int(c));
        ++r;
    }
    return pivots;
}

}  // namespace

int mat_rank(RatMat a) {
    return int(eliminate(a, nullptr).size());
}

Rat mat_det(RatMat a) {
    size_t n = a.size();
    if (n == 0) return 1;
    if (a[0].size() != n) throw error("mat_det: not square");
    Rat det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t pr = c;
        while (pr < n && a[pr][c] == 0) ++pr;
        if (pr == n) return 0;
        if (pr != c) {
            std::swap(a[pr], a[c]);
            det = -det;
        }
        det *= a[c][c];
        Rat inv = 1 / a[c][c];
        for (size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            Rat f = a[i][c] * inv;
            for (size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return det;
}

std::optional<RatMat> mat_inverse(RatMat a) {
    size_t n = a.size();
    if (n == 0) return RatMat{};
    if (a[0].size() != n) throw error("mat_inverse: not square");
    RatMat aug(n, RatVec(2 * n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
        aug[i][n + i] = 1;
    }
    auto pivots = eliminate(aug, nullptr);
    if (pivots.size() != n) return std::nullopt;
    RatMat inv(n, RatVec(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

std::optional<RatVec> mat_solve(RatMat a, RatVec b) {
    if (a.empty()) return RatVec{};
    size_t rows = a.size(), cols = a[0].size();
    if (b.size() != rows) throw error("mat_solve: size mismatch");
    auto pivots = eliminate(a, &b);
    // consistency: zero rows must have zero rhs
    for (size_t i = pivots.size(); i < rows; ++i)
        if (b[i] != 0) return std::nullopt;
    RatVec x(cols, 0);
    for (size_t r = 0; r < pivots.size(); ++r) x[size_t(pivots[r])] = b[r];
    return x;
}

std::vector<RatVec> mat_nullspace(RatMat a) {
    if (a.empty()) return {};
    size_t cols = a[0].size();
    auto pivots = eliminate(a, nullptr);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[size_t(c)] = true;
    std::vector<RatVec> basis;
    for (size_t fc = 0; fc < cols; ++fc) {
        if (is_pivot[fc]) continue;
        RatVec v(cols, 0);
        v[fc] = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            v[size_t(pivots[r])] = -a[r][fc];
        basis.push_back(std::move(v));
    }
    return basis;
}

Inertia sym_signature(RatMat a) {
    size_t n = a.size();
    Inertia out;
    // congruence diagonalization: apply each row operation to columns too
    for (size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            // find a usable pivot: a later diagonal entry, or merge a row
            // with a nonzero off-diagonal entry into row/col k
            size_t swp = k;
            for (size_t i = k + 1; i < n && swp == k; ++i)
                if (a[i][i] != 0) swp = i;
            if (swp != k) {
                std::swap(a[swp], a[k]);
                for (size_t i = 0; i < n; ++i) std::swap(a[i][swp], a[i][k]);
            } else {
                size_t j = k;
                for (size_t i = k + 1; i < n && j == k; ++i)
                    if (a[k][i] != 0) j = i;
                if (j == k) {
                    ++out.zero;
                    continue;
                }
                for (size_t i = 0; i < n; ++i) a[k][i] += a[j][i];
                for (size_t i = 0; i < n; ++i) a[i][k] += a[i][j];
            }
        }
        Rat piv = a[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0) continue;
            Rat f = a[i][k] / piv;
            for (size_t j2 = 0; j2 < n; ++j2) a[i][j2] -= f * a[k][j2];
            for (size_t j2 = 0; j2 < n; ++j2) a[j2][i] -= f * a[j2][k];
        }
        if (piv > 0) ++out.pos; else ++out.neg;
    }
    return out;
}

}  // namespace hamsec
