#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confspace/bigint.hpp"

namespace confspace {

/// Sparse matrix with arbitrary-precision integer entries. Entries are kept
/// sorted by (row, col) with no explicit zeros.
class SparseIntMatrix {
public:
    struct Entry {
        int row;
        int col;
        BigInt value;

        bool operator==(const Entry&) const = default;
    };

    SparseIntMatrix() = default;
    SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    /// Sums duplicate coordinates and drops zeros.
    static SparseIntMatrix from_triplets(int rows, int cols, const std::vector<Entry>& triplets) {
        for (const auto& e : triplets)
            if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
                throw std::out_of_range("matrix entry (" + std::to_string(e.row) + "," +
                                        std::to_string(e.col) + ") out of bounds");
        SparseIntMatrix m(rows, cols);
        m.entries_ = triplets;
        m.normalize();
        return m;
    }

    static SparseIntMatrix from_triplets(int rows, int cols, std::vector<Entry>&& triplets) {
        for (const auto& e : triplets)
            if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
                throw std::out_of_range("matrix entry (" + std::to_string(e.row) + "," +
                                        std::to_string(e.col) + ") out of bounds");
        SparseIntMatrix m(rows, cols);
        m.entries_ = std::move(triplets);
        m.normalize();
        return m;
    }

    static SparseIntMatrix identity(int k) {
        std::vector<Entry> t;
        for (int i = 0; i < k; ++i) t.push_back({i, i, 1});
        return from_triplets(k, k, t);
    }

    /// Row-major dense construction, mostly for tests.
    static SparseIntMatrix from_dense(const std::vector<std::vector<long long>>& rows) {
        int r = static_cast<int>(rows.size());
        int c = r ? static_cast<int>(rows.front().size()) : 0;
        std::vector<Entry> t;
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged rows");
            for (int j = 0; j < c; ++j)
                if (rows[i][j] != 0) t.push_back({i, j, BigInt(static_cast<long>(rows[i][j]))});
        }
        return from_triplets(r, c, t);
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    BigInt at(int r, int c) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(r, c),
                                   [](const Entry& e, const std::pair<int, int>& rc) {
                                       return std::make_pair(e.row, e.col) < rc;
                                   });
        if (it != entries_.end() && it->row == r && it->col == c) return it->value;
        return 0;
    }

    SparseIntMatrix transposed() const {
        std::vector<Entry> t;
        t.reserve(entries_.size());
        for (const auto& e : entries_) t.push_back({e.col, e.row, e.value});
        return from_triplets(cols_, rows_, t);
    }

    /// this * rhs
    SparseIntMatrix multiply(const SparseIntMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        std::vector<std::vector<const Entry*>> by_row(rhs.rows_);
        for (const auto& e : rhs.entries_) by_row[e.row].push_back(&e);
        std::map<std::pair<int, int>, BigInt> acc;
        for (const auto& e : entries_)
            for (const Entry* f : by_row[e.col]) acc[{e.row, f->col}] += e.value * f->value;
        SparseIntMatrix m(rows_, rhs.cols_);
        for (auto& [rc, v] : acc)
            if (v != 0) m.entries_.push_back({rc.first, rc.second, std::move(v)});
        return m;
    }

    bool operator==(const SparseIntMatrix&) const = default;

private:
    void normalize() {
        std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        std::size_t out = 0;
        for (std::size_t i = 0; i < entries_.size();) {
            std::size_t j = i + 1;
            BigInt v = std::move(entries_[i].value);
            while (j < entries_.size() && entries_[j].row == entries_[i].row &&
                   entries_[j].col == entries_[i].col)
                v += entries_[j++].value;
            if (v != 0) {
                entries_[out].row = entries_[i].row;
                entries_[out].col = entries_[i].col;
                entries_[out].value = std::move(v);
                ++out;
            }
            i = j;
        }
        entries_.resize(out);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Entry> entries_;
};

/// Sparse-triplet text format: header "rows cols nnz", then one
/// "row col value" line per entry, 0-indexed, decimal.
inline void write_triplets(std::ostream& os, const SparseIntMatrix& m) {
    os << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    for (const auto& e : m.entries()) os << e.row << ' ' << e.col << ' ' << e.value.get_str() << '\n';
}

inline SparseIntMatrix read_triplets(std::istream& is) {
    long long rows = -1, cols = -1, nnz = -1;
    if (!(is >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
        throw std::runtime_error("bad sparse-triplet header");
    std::vector<SparseIntMatrix::Entry> t;
    t.reserve(static_cast<std::size_t>(nnz));
    for (long long k = 0; k < nnz; ++k) {
        int r, c;
        std::string v;
        if (!(is >> r >> c >> v)) throw std::runtime_error("truncated sparse-triplet body");
        t.push_back({r, c, BigInt(v)});
    }
    return SparseIntMatrix::from_triplets(static_cast<int>(rows), static_cast<int>(cols), t);
}

}  // namespace confspace
