#pragma once

/**
 * @file linalg.hpp
 * @brief Exact dense linear algebra over Q: incremental reduced row echelon
 *        form with payload tracking, null spaces, and small matrices.
 */

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace lambda_forge {

using Vec = std::vector<Rational>;

inline bool is_zero_vec(const Vec& v)
{
    for (const auto& x : v) {
        if (!x.is_zero()) {
            return false;
        }
    }
    return true;
}

/// a += q * b
inline void axpy(Vec& a, const Rational& q, const Vec& b)
{
    if (q.is_zero()) {
        return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!b[i].is_zero()) {
            a[i].add_product(q, b[i]);
        }
    }
}

/**
 * Reduced row echelon form built one row at a time.
 *
 * Each stored row r carries a payload p; the invariant is that r is the
 * image of p under whatever linear map the caller used when inserting
 * (row = image, payload = preimage), so reductions also yield preimages.
 * Rows are kept fully reduced: every pivot column is zero in all other rows.
 */
class RowReducer {
public:
    explicit RowReducer(std::size_t dim, std::size_t payload_dim = 0) : dim_(dim), payload_dim_(payload_dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }

    /// Inserts a row; returns true when it was independent of the stored ones.
    bool insert(Vec v, Vec payload = {})
    {
        check(v, payload);
        if (payload.empty()) {
            payload.assign(payload_dim_, Rational(0));
        }
        eliminate(v, payload);
        std::size_t pivot = dim_;
        for (std::size_t i = 0; i < dim_; ++i) {
            if (!v[i].is_zero()) {
                pivot = i;
                break;
            }
        }
        if (pivot == dim_) {
            return false;
        }
        Rational inv = Rational(1) / v[pivot];
        for (auto& x : v) {
            x *= inv;
        }
        for (auto& x : payload) {
            x *= inv;
        }
        // clear the new pivot column from existing rows
        for (auto& [p, row] : rows_) {
            Rational f = row.first[pivot];
            if (!f.is_zero()) {
                axpy(row.first, -f, v);
                axpy(row.second, -f, payload);
            }
        }
        rows_.emplace(pivot, std::make_pair(std::move(v), std::move(payload)));
        return true;
    }

    /// v minus its component along the row space, expressed through pivots: pivot coordinates become zero.
    Vec reduce(Vec v) const
    {
        Vec dummy;
        eliminate(v, dummy);
        return v;
    }

    /**
     * Splits v = residual + sum_p v_p row_p. Returns (residual, sum_p v_p payload_p).
     * The residual has zero pivot coordinates.
     */
    std::pair<Vec, Vec> reduce_with_payload(Vec v) const
    {
        Vec acc(payload_dim_, Rational(0));
        for (const auto& [p, row] : rows_) {
            Rational f = v[p];
            if (!f.is_zero()) {
                axpy(v, -f, row.first);
                axpy(acc, f, row.second);
            }
        }
        return {std::move(v), std::move(acc)};
    }

    bool contains(const Vec& v) const { return is_zero_vec(reduce(v)); }

    std::vector<std::size_t> pivots() const
    {
        std::vector<std::size_t> out;
        for (const auto& [p, row] : rows_) {
            out.push_back(p);
        }
        return out;
    }

    bool is_pivot(std::size_t column) const { return rows_.count(column) != 0; }

    /// Stored (row, payload) for a pivot column.
    const std::pair<Vec, Vec>& row(std::size_t pivot) const { return rows_.at(pivot); }

private:
    void check(const Vec& v, const Vec& payload) const
    {
        if (v.size() != dim_) {
            throw std::invalid_argument("row of length " + std::to_string(v.size()) + " inserted into reducer of width " +
                                        std::to_string(dim_));
        }
        if (!payload.empty() && payload.size() != payload_dim_) {
            throw std::invalid_argument("payload length mismatch");
        }
    }

    void eliminate(Vec& v, Vec& payload) const
    {
        for (const auto& [p, row] : rows_) {
            Rational f = v[p];
            if (!f.is_zero()) {
                axpy(v, -f, row.first);
                if (!payload.empty()) {
                    axpy(payload, -f, row.second);
                }
            }
        }
    }

    std::size_t dim_;
    std::size_t payload_dim_;
    std::map<std::size_t, std::pair<Vec, Vec>> rows_;
};

/// Dense row-major matrix over Q.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Rational(1);
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Vec row(std::size_t i) const { return Vec(a_.begin() + static_cast<long>(i * cols_), a_.begin() + static_cast<long>((i + 1) * cols_)); }

    Vec apply(const Vec& v) const
    {
        if (v.size() != cols_) {
            throw std::invalid_argument("matrix-vector size mismatch");
        }
        Vec out(rows_, Rational(0));
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!v[j].is_zero() && !(*this)(i, j).is_zero()) {
                    out[i].add_product((*this)(i, j), v[j]);
                }
            }
        }
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("matrix product size mismatch");
        }
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    c(i, j).add_product(a(i, k), b(k, j));
                }
            }
        }
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    std::size_t rank() const
    {
        RowReducer r(cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            r.insert(row(i));
        }
        return r.rank();
    }

    /// Basis of {v : M v = 0}, one vector per free column.
    std::vector<Vec> null_space() const
    {
        RowReducer r(cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            r.insert(row(i));
        }
        std::vector<Vec> basis;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (r.is_pivot(f)) {
                continue;
            }
            Vec v(cols_, Rational(0));
            v[f] = Rational(1);
            for (auto p : r.pivots()) {
                v[p] = -r.row(p).first[f];
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

    std::optional<Matrix> inverse() const
    {
        if (rows_ != cols_) {
            throw std::invalid_argument("inverse of a non-square matrix");
        }
        const std::size_t n = rows_;
        RowReducer r(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec e(n, Rational(0));
            e[i] = Rational(1);
            r.insert(row(i), e);
        }
        if (r.rank() != n) {
            return std::nullopt;
        }
        // row p of the RREF (= unit vector e_p) equals payload_p * M
        Matrix inv(n, n);
        for (std::size_t p = 0; p < n; ++p) {
            const auto& pay = r.row(p).second;
            for (std::size_t j = 0; j < n; ++j) {
                inv(p, j) = pay[j];
            }
        }
        return inv;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> a_;
};

} // namespace lambda_forge
