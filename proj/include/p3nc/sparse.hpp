#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace p3nc {

/// Compressed sparse row matrix. Column indices are sorted and unique
/// within each row. Built through CsrBuilder (symbolic pattern pass, then
/// numeric fill).
class CsrMatrix {
public:
    CsrMatrix() = default;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return col_idx_.size(); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double coeff(int r, int c) const {
        const int pos = find(r, c);
        return pos < 0 ? 0.0 : values_[pos];
    }

    void add(int r, int c, double v) {
        const int pos = find(r, c);
        if (pos < 0) throw std::runtime_error("CsrMatrix::add: entry outside pattern");
        values_[pos] += v;
    }

    /// y = A x
    void apply(const double* x, double* y, int threads = 1) const {
        auto rows_kernel = [&](int r0, int r1) {
            for (int r = r0; r < r1; ++r) {
                double s = 0.0;
                for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                    s += values_[p] * x[col_idx_[p]];
                y[r] = s;
            }
        };
        if (threads <= 1 || rows_ < 4 * threads) {
            rows_kernel(0, rows_);
            return;
        }
        std::vector<std::thread> pool;
        const int chunk = (rows_ + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int r0 = t * chunk;
            const int r1 = std::min(rows_, r0 + chunk);
            if (r0 < r1) pool.emplace_back(rows_kernel, r0, r1);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<double> apply(const std::vector<double>& x, int threads = 1) const {
        assert(static_cast<int>(x.size()) == cols_);
        std::vector<double> y(rows_);
        apply(x.data(), y.data(), threads);
        return y;
    }

    /// y = A^T x without forming the transpose.
    std::vector<double> apply_transpose(const std::vector<double>& x) const {
        assert(static_cast<int>(x.size()) == rows_);
        std::vector<double> y(cols_, 0.0);
        for (int r = 0; r < rows_; ++r) {
            const double xr = x[r];
            if (xr == 0.0) continue;
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                y[col_idx_[p]] += values_[p] * xr;
        }
        return y;
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(std::min(rows_, cols_), 0.0);
        for (int r = 0; r < static_cast<int>(d.size()); ++r) d[r] = coeff(r, r);
        return d;
    }

    /// max_ij |A_ij - A_ji| over the stored pattern (A must be square).
    double symmetry_error() const {
        double worst = 0.0;
        for (int r = 0; r < rows_; ++r)
            for (int p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
                worst = std::max(worst, std::abs(values_[p] - coeff(col_idx_[p], r)));
        return worst;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    friend class CsrBuilder;

    int find(int r, int c) const {
        const int* first = col_idx_.data() + row_ptr_[r];
        const int* last = col_idx_.data() + row_ptr_[r + 1];
        const int* it = std::lower_bound(first, last, c);
        if (it == last || *it != c) return -1;
        return static_cast<int>(it - col_idx_.data());
    }

    int rows_ = 0, cols_ = 0;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Two-pass CSR assembly: register index couplings first, then
/// finalize() the pattern and scatter numeric values.
class CsrBuilder {
public:
    CsrBuilder(int rows, int cols) : rows_(rows), cols_(cols), pattern_(rows) {}

    void reserve_row(int r, std::size_t n) { pattern_[r].reserve(n); }

    void add_pattern(int r, int c) { pattern_[r].push_back(c); }

    /// All pairs (r, c) for r in `rows`, c in `cols`.
    void add_clique(const std::vector<int>& rows, const std::vector<int>& cols) {
        for (int r : rows) {
            auto& row = pattern_[r];
            row.insert(row.end(), cols.begin(), cols.end());
        }
    }

    CsrMatrix finalize() {
        CsrMatrix m;
        m.rows_ = rows_;
        m.cols_ = cols_;
        m.row_ptr_.assign(rows_ + 1, 0);
        std::size_t total = 0;
        for (int r = 0; r < rows_; ++r) {
            auto& row = pattern_[r];
            std::sort(row.begin(), row.end());
            row.erase(std::unique(row.begin(), row.end()), row.end());
            total += row.size();
        }
        m.col_idx_.reserve(total);
        for (int r = 0; r < rows_; ++r) {
            m.row_ptr_[r] = static_cast<int>(m.col_idx_.size());
            m.col_idx_.insert(m.col_idx_.end(), pattern_[r].begin(), pattern_[r].end());
            pattern_[r].clear();
            pattern_[r].shrink_to_fit();
        }
        m.row_ptr_[rows_] = static_cast<int>(m.col_idx_.size());
        m.values_.assign(m.col_idx_.size(), 0.0);
        return m;
    }

private:
    int rows_, cols_;
    std::vector<std::vector<int>> pattern_;
};

/// Text export, one "row col value" line per stored entry (0-based),
/// preceded by "rows cols nnz".
inline void write_coordinate_format(const CsrMatrix& m, std::ostream& out) {
    out.precision(17);
    out << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
    for (int r = 0; r < m.rows(); ++r)
        for (int p = m.row_ptr()[r]; p < m.row_ptr()[r + 1]; ++p)
            out << r << " " << m.col_idx()[p] << " " << m.values()[p] << "\n";
}

}  // namespace p3nc
