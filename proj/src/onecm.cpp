#include "daereg/onecm.hpp"

#include <algorithm>
#include <stdexcept>

#include "daereg/exactla.hpp"

namespace daereg {

SparseRep sparse_rep(const OneCMMatrix& a) {
    const int n = a.n, m = static_cast<int>(a.factors.size());
    SparseRep s;
    s.base = RatMatrix(n + m, n + m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s.base.at(i, j) = a.A0.at(i, j);
    for (int k = 0; k < m; ++k) {
        for (int i = 0; i < n; ++i) {
            s.base.at(i, n + k) = a.factors[k].b[i];
            s.base.at(n + k, i) = a.factors[k].c[i];
        }
        s.sym_cells.push_back({n + k, n + k});
    }
    return s;
}

LayeredMixedMatrix layered_sparse_rep(const OneCMMatrix& a) {
    const int n = a.n, m = static_cast<int>(a.factors.size());
    LayeredMixedMatrix lm;
    // columns: [0, m) unit block, [m, 2m) b block, [2m, 2m+n) A0 block
    lm.Q = RatMatrix(m + n, n + 2 * m);
    for (int k = 0; k < m; ++k) {
        lm.Q.at(k, k) = 1;
        for (int j = 0; j < n; ++j) lm.Q.at(k, 2 * m + j) = a.factors[k].c[j];
    }
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < m; ++k) lm.Q.at(m + i, m + k) = a.factors[k].b[i];
        for (int j = 0; j < n; ++j) lm.Q.at(m + i, 2 * m + j) = a.A0.at(i, j);
    }
    lm.t_rows = m;
    for (int k = 0; k < m; ++k) {
        lm.t_entries.push_back({k, k, k});
        lm.t_entries.push_back({k, m + k, m + k});
    }
    return lm;
}

RatMatrix bordered_matrix(const OneCMMatrix& a, const std::vector<int>& I) {
    const int n = a.n, m = static_cast<int>(a.factors.size());
    std::vector<char> in_i(m, 0);
    for (int k : I) in_i[k] = 1;
    std::vector<int> comp;
    for (int k = 0; k < m; ++k)
        if (!in_i[k]) comp.push_back(k);
    RatMatrix b(n + static_cast<int>(comp.size()), n + static_cast<int>(I.size()));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.at(i, j) = a.A0.at(i, j);
    for (size_t t = 0; t < I.size(); ++t)
        for (int i = 0; i < n; ++i) b.at(i, n + static_cast<int>(t)) = a.factors[I[t]].b[i];
    for (size_t t = 0; t < comp.size(); ++t)
        for (int j = 0; j < n; ++j) b.at(n + static_cast<int>(t), j) = a.factors[comp[t]].c[j];
    return b;
}

namespace {

std::vector<int> extract_index_set(const LMRankCert& cert, int m, int offset) {
    std::vector<char> mark(static_cast<size_t>(2 * m), 0);
    for (int c : cert.I)
        if (c < 2 * m) mark[c] = 1;
    std::vector<int> I;
    for (int k = 0; k < m; ++k)
        if (mark[k] && k + offset < 2 * m && mark[k + offset]) I.push_back(k);
    return I;
}

}  // namespace

OneCMRank rank_1cm(const OneCMMatrix& a) {
    const int n = a.n, m = static_cast<int>(a.factors.size());
    OneCMRank out;
    if (m == 0) {
        out.rank = rat_rank(a.A0);
        return out;
    }
    LayeredMixedMatrix lm = layered_sparse_rep(a);
    LMRankCert cert = lm_rank(lm);
    out.rank = cert.rank - 2 * m;
    if (out.rank < 0 || out.rank > n) throw std::logic_error("rank_1cm: layered sparse rank out of range");

    // Index extraction: k enters I when both of its paired columns are in the
    // certificate. The pairing offset in our block layout is m; the self-check
    // below guards the mapping and any layout mismatch.
    for (int offset : {m, n}) {
        std::vector<int> I = extract_index_set(cert, m, offset);
        if (rat_rank(bordered_matrix(a, I)) == out.rank) {
            out.I = std::move(I);
            return out;
        }
    }
    // Fallback: direct minimization over subsets (diagnostic path).
    out.used_fallback = true;
    if (m > 20) throw std::logic_error("rank_1cm: index extraction failed and m too large for direct search");
    for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
        std::vector<int> I;
        for (int k = 0; k < m; ++k)
            if (mask & (1UL << k)) I.push_back(k);
        if (rat_rank(bordered_matrix(a, I)) == out.rank) {
            out.I = std::move(I);
            return out;
        }
    }
    throw std::logic_error("rank_1cm: no index set attains the layered sparse rank");
}

std::optional<VanishingPair> vanishing_pair(const OneCMMatrix& a, const std::vector<int>& p,
                                            const std::vector<int>& q) {
    const int n = a.n, m = static_cast<int>(a.factors.size());
    if (static_cast<int>(p.size()) != n || static_cast<int>(q.size()) != n)
        throw std::invalid_argument("vanishing_pair: priority size mismatch");
    OneCMRank rk = rank_1cm(a);
    if (rk.rank == n) return std::nullopt;

    std::vector<char> in_i(m, 0);
    for (int k : rk.I) in_i[k] = 1;
    std::vector<int> comp;
    for (int k = 0; k < m; ++k)
        if (!in_i[k]) comp.push_back(k);

    // B[I]: n x |I|; rows eliminated along p.
    RatMatrix bi(n, static_cast<int>(rk.I.size()));
    for (size_t t = 0; t < rk.I.size(); ++t)
        for (int i = 0; i < n; ++i) bi.at(i, static_cast<int>(t)) = a.factors[rk.I[t]].b[i];
    PriorityElim ue = eliminate_rows_with_priority(bi, p);
    const std::vector<int>& s_rows = ue.zeroed;

    // C[[m]\I]^T: |comp| x n; columns eliminated along q.
    RatMatrix ct(static_cast<int>(comp.size()), n);
    for (size_t t = 0; t < comp.size(); ++t)
        for (int j = 0; j < n; ++j) ct.at(static_cast<int>(t), j) = a.factors[comp[t]].c[j];
    PriorityElim ve = eliminate_cols_with_priority(ct, q);
    const std::vector<int>& t_cols = ve.zeroed;

    // W: clear rows of (U A0 V)[S, T] mixing only S-rows, priorities p|S.
    RatMatrix uav = ue.E * a.A0 * ve.E;
    RatMatrix sub = uav.select(s_rows, t_cols);
    std::vector<int> sub_prio;
    for (int r : s_rows) sub_prio.push_back(p[r]);
    PriorityElim we = eliminate_rows_with_priority(sub, sub_prio);
    RatMatrix w = RatMatrix::identity(n);
    for (size_t x = 0; x < s_rows.size(); ++x)
        for (size_t y = 0; y < s_rows.size(); ++y)
            w.at(s_rows[x], s_rows[y]) = we.E.at(static_cast<int>(x), static_cast<int>(y));

    VanishingPair vp;
    vp.U = w * ue.E;
    vp.V = ve.E;
    vp.p = p;
    vp.q = q;
    for (int z : we.zeroed) vp.block_rows.push_back(s_rows[z]);
    std::sort(vp.block_rows.begin(), vp.block_rows.end());
    vp.block_cols = t_cols;

    // The certified block always has size exactly 2n - rank A.
    if (static_cast<long>(vp.block_rows.size() + vp.block_cols.size()) != 2L * n - rk.rank)
        throw std::logic_error("vanishing_pair: zero block size disagrees with 2n - rank");
    return vp;
}

PairValidation validate_vanishing_pair(const OneCMMatrix& a, const RatMatrix& u, const RatMatrix& v,
                                       const std::vector<int>& p, const std::vector<int>& q) {
    const int n = a.n;
    PairValidation res;
    if (u.rows() != n || u.cols() != n || v.rows() != n || v.cols() != n) {
        res.reason = "dimension mismatch";
        return res;
    }
    if (rat_rank(u) != n) {
        res.reason = "U singular";
        return res;
    }
    if (rat_rank(v) != n) {
        res.reason = "V singular";
        return res;
    }
    if (!is_triangular_along(u, p)) {
        res.reason = "U not triangular along p";
        return res;
    }
    if (!is_triangular_along(v, q)) {
        res.reason = "V not triangular along q";
        return res;
    }
    Support sup;
    sup.rows = sup.cols = n;
    RatMatrix a0 = u * a.A0 * v;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a0.at(i, j) != 0) sup.entries.push_back({i, j});
    for (const OneCMFactor& f : a.factors) {
        RatVec ub(n, Rat(0)), cv(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (u.at(i, k) != 0 && f.b[k] != 0) ub[i] += u.at(i, k) * f.b[k];
            }
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (f.c[k] != 0 && v.at(k, j) != 0) cv[j] += f.c[k] * v.at(k, j);
            }
        for (int i = 0; i < n; ++i) {
            if (ub[i] == 0) continue;
            for (int j = 0; j < n; ++j)
                if (cv[j] != 0) sup.entries.push_back({i, j});
        }
    }
    res.trank_uav = trank(sup).trank;
    if (res.trank_uav >= n) {
        res.reason = "term rank of U*A*V is " + std::to_string(res.trank_uav) + ", not below n";
        return res;
    }
    res.ok = true;
    return res;
}

}  // namespace daereg
