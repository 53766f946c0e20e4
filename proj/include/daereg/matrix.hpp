#pragma once

#include <cassert>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include "daereg/rational.hpp"

namespace daereg {

using RatVec = std::vector<Rat>;

// Dense matrix over exact rationals.
class RatMatrix {
public:
    RatMatrix() : rows_(0), cols_(0) {}
    RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("RatMatrix: negative dimension");
    }
    RatMatrix(std::initializer_list<std::initializer_list<long>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
        data_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("RatMatrix: ragged rows");
            for (long v : r) data_.emplace_back(v);
        }
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rat& at(int i, int j) {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return data_[static_cast<size_t>(i) * cols_ + j];
    }
    const Rat& at(int i, int j) const {
        assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
        return data_[static_cast<size_t>(i) * cols_ + j];
    }

    static RatMatrix identity(int n) {
        RatMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    bool is_zero() const {
        for (const Rat& v : data_)
            if (v != 0) return false;
        return true;
    }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    RatVec row(int i) const {
        RatVec r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }
    RatVec col(int j) const {
        RatVec c(rows_);
        for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    // Submatrix by explicit index lists.
    RatMatrix select(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        RatMatrix s(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
        for (size_t i = 0; i < row_idx.size(); ++i)
            for (size_t j = 0; j < col_idx.size(); ++j) s.at(static_cast<int>(i), static_cast<int>(j)) = at(row_idx[i], col_idx[j]);
        return s;
    }
    RatMatrix select_cols(const std::vector<int>& col_idx) const {
        std::vector<int> all(rows_);
        for (int i = 0; i < rows_; ++i) all[i] = i;
        return select(all, col_idx);
    }
    RatMatrix select_rows(const std::vector<int>& row_idx) const {
        std::vector<int> all(cols_);
        for (int j = 0; j < cols_; ++j) all[j] = j;
        return select(row_idx, all);
    }

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("RatMatrix: dimension mismatch in product");
        RatMatrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const Rat& aik = a.at(i, k);
                if (aik == 0) continue;
                for (int j = 0; j < b.cols_; ++j) {
                    if (b.at(k, j) == 0) continue;
                    c.at(i, j) += aik * b.at(k, j);
                }
            }
        return c;
    }
    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in sum");
        RatMatrix c(a.rows_, a.cols_);
        for (size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] + b.data_[i];
        return c;
    }
    friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RatMatrix: dimension mismatch in difference");
        RatMatrix c(a.rows_, a.cols_);
        for (size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
        return c;
    }
    friend RatMatrix operator*(const Rat& s, const RatMatrix& a) {
        RatMatrix c(a.rows_, a.cols_);
        for (size_t i = 0; i < a.data_.size(); ++i) c.data_[i] = s * a.data_[i];
        return c;
    }
    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::string to_string() const {
        std::string s;
        for (int i = 0; i < rows_; ++i) {
            s += i == 0 ? "[" : " ";
            for (int j = 0; j < cols_; ++j) {
                s += rat_to_string(at(i, j));
                if (j + 1 < cols_) s += " ";
            }
            s += i + 1 < rows_ ? "\n" : "]";
        }
        return s;
    }

private:
    int rows_, cols_;
    std::vector<Rat> data_;
};

// b * c^T for column vectors b, c.
inline RatMatrix outer(const RatVec& b, const RatVec& c) {
    RatMatrix m(static_cast<int>(b.size()), static_cast<int>(c.size()));
    for (size_t i = 0; i < b.size(); ++i) {
        if (b[i] == 0) continue;
        for (size_t j = 0; j < c.size(); ++j) m.at(static_cast<int>(i), static_cast<int>(j)) = b[i] * c[j];
    }
    return m;
}

inline bool is_zero_vec(const RatVec& v) {
    for (const Rat& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace daereg
