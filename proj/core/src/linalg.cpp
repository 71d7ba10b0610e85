#include "sunit/linalg.hpp"

#include <algorithm>

namespace sunit {

QMat q_identity(size_t n) {
    QMat m(n, QVec(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMat q_mul(const QMat& a, const QMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat c(n, QVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

QVec q_mul_vec(const QMat& a, const QVec& v) {
    QVec r(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    return r;
}

mpq_class q_det(QMat a) {
    size_t n = a.size();
    mpq_class det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) { std::swap(a[p], a[c]); det = -det; }
        det *= a[c][c];
        mpq_class inv = 1 / a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            mpq_class f = a[r][c] * inv;
            for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

size_t q_rank(QMat a) {
    size_t n = a.size(), m = a.empty() ? 0 : a[0].size(), rank = 0;
    for (size_t c = 0; c < m && rank < n; ++c) {
        size_t p = rank;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(a[p], a[rank]);
        mpq_class inv = 1 / a[rank][c];
        for (size_t r = rank + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            mpq_class f = a[r][c] * inv;
            for (size_t j = c; j < m; ++j) a[r][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::optional<QMat> q_inverse(const QMat& a) {
    size_t n = a.size();
    QMat w = a, inv = q_identity(n);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && w[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(w[p], w[c]);
        std::swap(inv[p], inv[c]);
        mpq_class piv = 1 / w[c][c];
        for (size_t j = 0; j < n; ++j) { w[c][j] *= piv; inv[c][j] *= piv; }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || w[r][c] == 0) continue;
            mpq_class f = w[r][c];
            for (size_t j = 0; j < n; ++j) { w[r][j] -= f * w[c][j]; inv[r][j] -= f * inv[c][j]; }
        }
    }
    return inv;
}

std::optional<QVec> q_solve(QMat a, QVec b) {
    size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    std::vector<size_t> pivot_col;
    size_t rank = 0;
    for (size_t c = 0; c < m && rank < n; ++c) {
        size_t p = rank;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(a[p], a[rank]);
        std::swap(b[p], b[rank]);
        mpq_class inv = 1 / a[rank][c];
        for (size_t j = c; j < m; ++j) a[rank][j] *= inv;
        b[rank] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            mpq_class f = a[r][c];
            for (size_t j = c; j < m; ++j) a[r][j] -= f * a[rank][j];
            b[r] -= f * b[rank];
        }
        pivot_col.push_back(c);
        ++rank;
    }
    for (size_t r = rank; r < n; ++r)
        if (b[r] != 0) return std::nullopt;
    QVec x(m, 0);
    for (size_t i = 0; i < rank; ++i) x[pivot_col[i]] = b[i];
    return x;
}

std::vector<QVec> q_kernel(QMat a) {
    size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    std::vector<long> pivot_of_col(m, -1);
    size_t rank = 0;
    for (size_t c = 0; c < m && rank < n; ++c) {
        size_t p = rank;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(a[p], a[rank]);
        mpq_class inv = 1 / a[rank][c];
        for (size_t j = c; j < m; ++j) a[rank][j] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            mpq_class f = a[r][c];
            for (size_t j = c; j < m; ++j) a[r][j] -= f * a[rank][j];
        }
        pivot_of_col[c] = (long)rank;
        ++rank;
    }
    std::vector<QVec> basis;
    for (size_t c = 0; c < m; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        QVec v(m, 0);
        v[c] = 1;
        for (size_t j = 0; j < m; ++j)
            if (pivot_of_col[j] >= 0) v[j] = -a[(size_t)pivot_of_col[j]][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

ZMat z_identity(size_t n) {
    ZMat m(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

ZMat z_mul(const ZMat& a, const ZMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    ZMat c(n, ZVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

// column HNF by integer column reduction; pivots positive, entries left of a
// pivot reduced into [0, pivot)
ZMat hnf_columns(const ZMat& a, ZMat* u_out) {
    size_t n = a.size(), m = a.empty() ? 0 : a[0].size();
    ZMat w = a;
    ZMat u = z_identity(m);
    size_t col = 0;
    for (size_t row = 0; row < n && col < m; ++row) {
        // gcd-reduce columns col..m-1 on this row
        while (true) {
            size_t jmin = m;
            for (size_t j = col; j < m; ++j) {
                if (w[row][j] != 0 && (jmin == m || abs(w[row][j]) < abs(w[row][jmin]))) jmin = j;
            }
            if (jmin == m) break; // row is zero from col onward
            if (jmin != col)
                for (size_t i = 0; i < n; ++i) std::swap(w[i][jmin], w[i][col]);
            if (jmin != col)
                for (size_t i = 0; i < m; ++i) std::swap(u[i][jmin], u[i][col]);
            bool clean = true;
            for (size_t j = col + 1; j < m; ++j) {
                if (w[row][j] == 0) continue;
                mpz_class q = w[row][j] / w[row][col]; // truncated division
                if (q != 0) {
                    for (size_t i = 0; i < n; ++i) w[i][j] -= q * w[i][col];
                    for (size_t i = 0; i < m; ++i) u[i][j] -= q * u[i][col];
                }
                if (w[row][j] != 0) clean = false;
            }
            if (clean) break;
        }
        if (w[row][col] == 0) continue;
        if (w[row][col] < 0) {
            for (size_t i = 0; i < n; ++i) w[i][col] = -w[i][col];
            for (size_t i = 0; i < m; ++i) u[i][col] = -u[i][col];
        }
        // reduce earlier columns against this pivot
        for (size_t j = 0; j < col; ++j) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), w[row][j].get_mpz_t(), w[row][col].get_mpz_t());
            if (q != 0) {
                for (size_t i = 0; i < n; ++i) w[i][j] -= q * w[i][col];
                for (size_t i = 0; i < m; ++i) u[i][j] -= q * u[i][col];
            }
        }
        ++col;
    }
    size_t rank = col;
    ZMat h(n, ZVec(rank, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < rank; ++j) h[i][j] = w[i][j];
    if (u_out) *u_out = u;
    return h;
}

ZMat z_kernel(const ZMat& a) {
    size_t m = a.empty() ? 0 : a[0].size();
    ZMat u;
    ZMat h = hnf_columns(a, &u);
    size_t rank = h.empty() ? 0 : h[0].size();
    // kernel = columns of U beyond the rank
    ZMat k(m, ZVec(m - rank, 0));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = rank; j < m; ++j) k[i][j - rank] = u[i][j];
    return k;
}

RInt ri_det(std::vector<std::vector<RInt>> a) {
    size_t n = a.size();
    long prec = n ? a[0][0].prec() : 64;
    RInt det = RInt::exact(1L, prec);
    for (size_t c = 0; c < n; ++c) {
        // pick the pivot whose enclosure is farthest from zero
        size_t best = n;
        double bestv = -1;
        for (size_t r = c; r < n; ++r) {
            if (a[r][c].contains_zero()) continue;
            double v = std::min(std::abs(a[r][c].lo_d()), std::abs(a[r][c].hi_d()));
            if (v > bestv) { bestv = v; best = r; }
        }
        if (best == n) {
            // every candidate pivot encloses 0: determinant enclosure must
            // include 0 (a singular matrix is consistent with the data)
            RInt z(prec);
            return z;
        }
        if (best != c) { std::swap(a[best], a[c]); det = -det; }
        det = det * a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c].contains_zero() && a[r][c].lo_d() == 0 && a[r][c].hi_d() == 0) continue;
            RInt f = a[r][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[r][j] = a[r][j] - f * a[c][j];
        }
    }
    return det;
}

std::optional<std::vector<std::vector<RInt>>> ri_inverse(std::vector<std::vector<RInt>> a) {
    size_t n = a.size();
    long prec = n ? a[0][0].prec() : 64;
    std::vector<std::vector<RInt>> inv(n, std::vector<RInt>(n, RInt::exact(0L, prec)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = RInt::exact(1L, prec);
    for (size_t c = 0; c < n; ++c) {
        size_t best = n;
        double bestv = -1;
        for (size_t r = c; r < n; ++r) {
            if (a[r][c].contains_zero()) continue;
            double v = std::min(std::abs(a[r][c].lo_d()), std::abs(a[r][c].hi_d()));
            if (v > bestv) { bestv = v; best = r; }
        }
        if (best == n) return std::nullopt;
        std::swap(a[best], a[c]);
        std::swap(inv[best], inv[c]);
        RInt piv = a[c][c];
        for (size_t j = 0; j < n; ++j) { a[c][j] = a[c][j] / piv; inv[c][j] = inv[c][j] / piv; }
        for (size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            RInt f = a[r][c];
            if (f.lo_d() == 0 && f.hi_d() == 0) continue;
            for (size_t j = 0; j < n; ++j) {
                a[r][j] = a[r][j] - f * a[c][j];
                inv[r][j] = inv[r][j] - f * inv[c][j];
            }
        }
    }
    return inv;
}

} // namespace sunit
