#include "daereg/matroid.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>

#include "daereg/exactla.hpp"

namespace daereg {

namespace {

// Kuhn's augmenting-path matching. adj[r] = columns adjacent to row r.
struct Matcher {
    int rows, cols;
    std::vector<std::vector<int>> adj;
    std::vector<int> row_match, col_match;  // -1 = free

    Matcher(int r, int c) : rows(r), cols(c), adj(r), row_match(r, -1), col_match(c, -1) {}

    bool try_augment(int r, std::vector<bool>& seen) {
        for (int c : adj[r]) {
            if (seen[c]) continue;
            seen[c] = true;
            if (col_match[c] < 0 || try_augment(col_match[c], seen)) {
                row_match[r] = c;
                col_match[c] = r;
                return true;
            }
        }
        return false;
    }

    long run() {
        long size = 0;
        for (int r = 0; r < rows; ++r) {
            std::vector<bool> seen(cols, false);
            if (try_augment(r, seen)) ++size;
        }
        return size;
    }
};

}  // namespace

TrankCert trank(const Support& s) {
    Matcher m(s.rows, s.cols);
    for (auto [r, c] : s.entries) {
        if (r < 0 || r >= s.rows || c < 0 || c >= s.cols) throw std::invalid_argument("trank: entry out of range");
        m.adj[r].push_back(c);
    }
    for (auto& a : m.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    TrankCert cert;
    cert.trank = m.run();
    // Konig: alternating reachability from unmatched rows; cover = unreached
    // rows + reached cols, zero block = reached rows x unreached cols.
    std::vector<bool> row_seen(s.rows, false), col_seen(s.cols, false);
    std::queue<int> bfs;
    for (int r = 0; r < s.rows; ++r)
        if (m.row_match[r] < 0) {
            row_seen[r] = true;
            bfs.push(r);
        }
    while (!bfs.empty()) {
        int r = bfs.front();
        bfs.pop();
        for (int c : m.adj[r]) {
            if (col_seen[c]) continue;
            col_seen[c] = true;
            int r2 = m.col_match[c];
            if (r2 >= 0 && !row_seen[r2]) {
                row_seen[r2] = true;
                bfs.push(r2);
            }
        }
    }
    for (int r = 0; r < s.rows; ++r)
        if (row_seen[r]) cert.block_rows.push_back(r);
    for (int c = 0; c < s.cols; ++c)
        if (!col_seen[c]) cert.block_cols.push_back(c);
    return cert;
}

Support LayeredMixedMatrix::support() const {
    Support s;
    s.rows = rows();
    s.cols = cols();
    for (int i = 0; i < Q.rows(); ++i)
        for (int j = 0; j < Q.cols(); ++j)
            if (Q.at(i, j) != 0) s.entries.push_back({i, j});
    for (const TEntry& e : t_entries) s.entries.push_back({Q.rows() + e.row, e.col});
    for (const auto& [r, c, v] : t_constants)
        if (v != 0) s.entries.push_back({Q.rows() + r, c});
    return s;
}

void LayeredMixedMatrix::validate() const {
    std::set<int> syms;
    for (const TEntry& e : t_entries) {
        if (e.row < 0 || e.row >= t_rows || e.col < 0 || e.col >= cols())
            throw std::invalid_argument("LayeredMixedMatrix: T entry out of range");
        if (!syms.insert(e.sym).second) throw std::invalid_argument("LayeredMixedMatrix: duplicate symbol in T part");
    }
}

long trank_of_columns(const LayeredMixedMatrix& a, const std::vector<int>& cols) {
    std::vector<int> colpos(a.cols(), -1);
    for (size_t k = 0; k < cols.size(); ++k) colpos[cols[k]] = static_cast<int>(k);
    Matcher m(a.t_rows, static_cast<int>(cols.size()));
    for (const auto& e : a.t_entries)
        if (colpos[e.col] >= 0) m.adj[e.row].push_back(colpos[e.col]);
    return m.run();
}

namespace {

// Exact solver for expressing a column in the span of the current basis
// columns. Supports cheap appends; callers rebuild after non-append changes.
class ColumnSolver {
public:
    ColumnSolver(const RatMatrix& q, const std::vector<int>& basis_cols) : q_(q) {
        for (int c : basis_cols) append(c);
    }

    const std::vector<int>& basis() const { return basis_; }

    // lambda with col = sum lambda_k * basis_k, or nullopt if independent.
    std::optional<RatVec> solve(int col) const {
        RatVec v = q_.col(col);
        RatVec lam(basis_.size(), Rat(0));
        reduce(v, lam);
        if (!is_zero_vec(v)) return std::nullopt;
        for (Rat& x : lam) x = -x;
        return lam;
    }

    void append(int col) {
        RatVec v = q_.col(col);
        RatVec lam(basis_.size(), Rat(0));
        reduce(v, lam);
        int piv = -1;
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) {
                piv = static_cast<int>(i);
                break;
            }
        if (piv < 0) throw std::logic_error("ColumnSolver: dependent append");
        for (auto& c : coef_) c.push_back(Rat(0));  // existing rows gain a slot
        lam.push_back(Rat(1));
        basis_.push_back(col);
        red_.push_back(std::move(v));
        coef_.push_back(std::move(lam));
        pivots_.push_back(piv);
    }

private:
    void reduce(RatVec& v, RatVec& lam) const {
        for (size_t k = 0; k < red_.size(); ++k) {
            if (v[pivots_[k]] == 0) continue;
            Rat f = v[pivots_[k]] / red_[k][pivots_[k]];
            for (size_t i = 0; i < v.size(); ++i) v[i] -= f * red_[k][i];
            for (size_t i = 0; i < std::min(lam.size(), coef_[k].size()); ++i) lam[i] -= f * coef_[k][i];
        }
    }

    const RatMatrix& q_;
    std::vector<int> basis_;
    std::vector<RatVec> red_, coef_;
    std::vector<int> pivots_;
};

// Transversal-matroid oracle over a fixed independent set: one alternating
// BFS answers both insertability and the fundamental circuit (the members
// whose matched row is alternately reachable from the query column).
class TransversalOracle {
public:
    TransversalOracle(const LayeredMixedMatrix& a, const std::vector<int>& s_t) : rows_(a.t_rows) {
        adj_.assign(a.cols(), {});
        for (const auto& e : a.t_entries) adj_[e.col].push_back(e.row);
        for (auto& v : adj_) std::sort(v.begin(), v.end());
        row_match_.assign(rows_, -1);
        for (int c : s_t) {
            std::vector<bool> seen(rows_, false);
            if (!augment(c, seen)) throw std::logic_error("TransversalOracle: dependent base set");
        }
    }

    // nullopt: s_t + col stays independent. Otherwise the circuit, ascending.
    std::optional<std::vector<int>> query(int col) const {
        std::vector<bool> row_seen(rows_, false);
        std::vector<int> stack{col}, reached_cols;
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            for (int r : adj_[c]) {
                if (row_seen[r]) continue;
                row_seen[r] = true;
                int c2 = row_match_[r];
                if (c2 < 0) return std::nullopt;  // free row: independent
                reached_cols.push_back(c2);
                stack.push_back(c2);
            }
        }
        std::sort(reached_cols.begin(), reached_cols.end());
        return reached_cols;
    }

private:
    bool augment(int c, std::vector<bool>& seen) {
        for (int r : adj_[c]) {
            if (seen[r]) continue;
            seen[r] = true;
            if (row_match_[r] < 0 || augment(row_match_[r], seen)) {
                row_match_[r] = c;
                return true;
            }
        }
        return false;
    }

    int rows_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> row_match_;
};

// State for the matroid-union augmentation over the column ground set:
// part 0 = linear matroid of Q's columns, part 1 = transversal matroid of T.
struct UnionState {
    const LayeredMixedMatrix& a;
    std::vector<int> s_q, s_t;  // disjoint independent sets, ascending
    std::vector<char> where;    // -1 none, 0 in s_q, 1 in s_t

    explicit UnionState(const LayeredMixedMatrix& lm) : a(lm), where(lm.cols(), -1) {}
};

void insert_sorted(std::vector<int>& v, int x) { v.insert(std::upper_bound(v.begin(), v.end(), x), x); }
void erase_value(std::vector<int>& v, int x) { v.erase(std::find(v.begin(), v.end(), x)); }

}  // namespace

LMRankCert lm_rank(const LayeredMixedMatrix& a) {
    a.validate();
    if (!a.t_constants.empty())
        throw std::invalid_argument("lm_rank: constants in the T part; not a layered mixed matrix");
    const int ncols = a.cols();
    UnionState st(a);
    std::optional<ColumnSolver> solver;  // persistent across plain appends

    // BFS over the exchange digraph from `sources`; applies the augmenting
    // swap chain if one exists, otherwise records the reachable set.
    auto search = [&](const std::vector<int>& sources, std::vector<int>* reach_out) -> bool {
        if (!solver) solver.emplace(a.Q, st.s_q);
        TransversalOracle tsolver(a, st.s_t);
        std::vector<int> parent(ncols, -1), parent_part(ncols, -1);
        std::vector<bool> visited(ncols, false);
        std::queue<int> bfs;
        for (int s : sources) {
            visited[s] = true;
            bfs.push(s);
        }
        int done_node = -1, done_part = -1;
        while (!bfs.empty() && done_node < 0) {
            int u = bfs.front();
            bfs.pop();
            for (int part = 0; part < 2 && done_node < 0; ++part) {
                if (st.where[u] == part) continue;
                std::vector<int> ckt;
                if (part == 0) {
                    auto lam = solver->solve(u);
                    if (!lam) {
                        done_node = u;
                        done_part = 0;
                        break;
                    }
                    for (size_t k = 0; k < lam->size(); ++k)
                        if ((*lam)[k] != 0) ckt.push_back(solver->basis()[k]);
                } else {
                    auto circuit = tsolver.query(u);
                    if (!circuit) {
                        done_node = u;
                        done_part = 1;
                        break;
                    }
                    ckt = std::move(*circuit);
                }
                for (int x : ckt) {
                    if (visited[x]) continue;
                    visited[x] = true;
                    parent[x] = u;
                    parent_part[x] = part;
                    bfs.push(x);
                }
            }
        }
        if (done_node < 0) {
            if (reach_out) {
                for (int c = 0; c < ncols; ++c)
                    if (visited[c]) reach_out->push_back(c);
            }
            return false;
        }
        // Walk back to the source, applying evictions and insertions. The
        // shortest-path property makes the simultaneous swap chain valid; the
        // certificate identity at the end of lm_rank re-verifies the result.
        bool q_evicted = false;
        int q_inserted = 0, q_inserted_node = -1;
        int u = done_node, part = done_part;
        for (;;) {
            int pu = parent[u];
            if (st.where[u] >= 0) {
                if (st.where[u] == 0) {
                    erase_value(st.s_q, u);
                    q_evicted = true;
                } else {
                    erase_value(st.s_t, u);
                }
            }
            if (part == 0) {
                insert_sorted(st.s_q, u);
                ++q_inserted;
                q_inserted_node = u;
            } else {
                insert_sorted(st.s_t, u);
            }
            st.where[u] = static_cast<char>(part);
            if (pu < 0) break;
            part = parent_part[u];  // pu was inserted into the part u just left room in
            u = pu;
        }
        if (q_evicted || q_inserted > 1) solver.reset();
        else if (q_inserted == 1) solver->append(q_inserted_node);
        return true;
    };

    std::vector<int> unplaced;
    for (int c = 0; c < ncols; ++c) {
        if (!search({c}, nullptr)) unplaced.push_back(c);
    }
    // One exact re-verification of the final state.
    if (rat_rank(a.Q.select_cols(st.s_q)) != static_cast<long>(st.s_q.size()))
        throw std::logic_error("lm_rank: Q part lost independence");
    if (trank_of_columns(a, st.s_t) != static_cast<long>(st.s_t.size()))
        throw std::logic_error("lm_rank: T part lost independence");
    LMRankCert cert;
    cert.rank = static_cast<long>(st.s_q.size() + st.s_t.size());
    if (unplaced.empty()) {
        cert.I.clear();  // rank Q[{}] + trank T[{}] + |C| = |C| = rank
    } else {
        std::vector<int> reach;
        if (search(unplaced, &reach)) throw std::logic_error("lm_rank: augmenting path found at certificate stage");
        cert.I = std::move(reach);
    }
    // The certificate must meet the rank identity exactly.
    long check = rat_rank(a.Q.select_cols(cert.I)) + trank_of_columns(a, cert.I) +
                 (static_cast<long>(ncols) - static_cast<long>(cert.I.size()));
    if (check != cert.rank) throw std::logic_error("lm_rank: certificate failed the rank identity");
    return cert;
}

}  // namespace daereg
