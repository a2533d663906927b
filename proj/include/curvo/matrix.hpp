#pragma once

// Dense matrices over the Gaussian rationals and the exact linear algebra
// used everywhere on the symbolic side: solving, nullspaces, cohomology of
// complexes, and splittings of exact sequences.
//
// Elimination is deterministic: pivots are chosen as the first nonzero entry
// scanning column-major (columns left to right, rows top to bottom). No
// magnitude-based pivoting ever happens, so representatives and particular
// solutions are reproducible across platforms.

#include "curvo/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace curvo {

class ExactMatrix {
public:
    ExactMatrix() = default;
    ExactMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
        return m;
    }
    static ExactMatrix zero(std::size_t r, std::size_t c) { return {r, c}; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

    ExactMatrix operator-() const {
        ExactMatrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = -data_[k];
        return r;
    }
    ExactMatrix& operator+=(const ExactMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    ExactMatrix& operator-=(const ExactMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    ExactMatrix& operator*=(const Scalar& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }
    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
    friend ExactMatrix operator*(const Scalar& s, ExactMatrix m) { return m *= s; }

    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
        ExactMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Scalar& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Scalar& bkj = b(k, j);
                    if (!bkj.is_zero()) r(i, j) += aik * bkj;
                }
            }
        return r;
    }

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

    ExactMatrix transpose() const {
        ExactMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    std::vector<Scalar> col(std::size_t j) const {
        std::vector<Scalar> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    static ExactMatrix from_columns(std::size_t rows, const std::vector<std::vector<Scalar>>& cols) {
        ExactMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw DimensionError("column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

private:
    void check_same_shape(const ExactMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Scalar> data_;
};

// Row echelon data of a matrix, computed by exact Gauss elimination with the
// first-nonzero pivot rule.
struct Echelon {
    ExactMatrix rref;               // fully reduced row echelon form
    std::vector<std::size_t> pivots;  // pivot column per nonzero row
    std::size_t rank() const { return pivots.size(); }
};

inline Echelon echelon_form(ExactMatrix m) {
    Echelon e;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m(piv, col).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(piv, j));
        Scalar inv = m(row, col).inv();
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            Scalar f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        e.pivots.push_back(col);
        ++row;
    }
    e.rref = std::move(m);
    return e;
}

inline std::size_t rank(const ExactMatrix& m) { return echelon_form(m).rank(); }

// Solves A x = b exactly. Returns nullopt when the system is inconsistent.
// Free variables of an underdetermined system are set to zero, which together
// with the pivot rule makes the returned solution deterministic.
inline std::optional<ExactMatrix> solve_linear_exact(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("solve: row count mismatch");
    ExactMatrix aug(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
    }
    Echelon e = echelon_form(std::move(aug));
    for (const std::size_t p : e.pivots)
        if (p >= a.cols()) return std::nullopt;  // pivot in the rhs block: inconsistent
    ExactMatrix x(a.cols(), b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.rref(r, a.cols() + j);
    return x;
}

// Basis of the kernel of A, one column per free variable, in column order.
inline ExactMatrix nullspace(const ExactMatrix& a) {
    Echelon e = echelon_form(a);
    std::vector<std::size_t> free_cols;
    {
        std::size_t pi = 0;
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (pi < e.pivots.size() && e.pivots[pi] == c)
                ++pi;
            else
                free_cols.push_back(c);
        }
    }
    ExactMatrix basis(a.cols(), free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t fc = free_cols[k];
        basis(fc, k) = Scalar(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.rref(r, fc);
    }
    return basis;
}

inline std::optional<ExactMatrix> inverse(const ExactMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("inverse of non-square matrix");
    auto x = solve_linear_exact(a, ExactMatrix::identity(a.rows()));
    if (!x) return std::nullopt;
    // solve() succeeding is not enough when a is rank deficient
    if ((a * *x) != ExactMatrix::identity(a.rows())) return std::nullopt;
    return x;
}

// Deterministically extends the column space of `cols` to all of K^rows by
// standard basis vectors, returning the chosen complement columns.
inline ExactMatrix extend_to_basis(const ExactMatrix& cols) {
    std::size_t n = cols.rows();
    ExactMatrix work = cols;
    std::vector<std::size_t> chosen;
    for (std::size_t e = 0; e < n && rank(work) < n; ++e) {
        ExactMatrix trial(n, work.cols() + 1);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < work.cols(); ++j) trial(i, j) = work(i, j);
        trial(e, work.cols()) = Scalar(1);
        if (rank(trial) > rank(work)) {
            work = std::move(trial);
            chosen.push_back(e);
        }
    }
    ExactMatrix comp(n, chosen.size());
    for (std::size_t k = 0; k < chosen.size(); ++k) comp(chosen[k], k) = Scalar(1);
    return comp;
}

struct NotExactError : std::runtime_error {
    explicit NotExactError(const std::string& msg) : std::runtime_error(msg) {}
};

// Splittings of a short exact sequence 0 -> A --i--> B --p--> C -> 0.
// Returns (r, s) with r*i = id_A, p*s = id_C and i*r + s*p = id_B.
struct Splitting {
    ExactMatrix retraction;  // r : B -> A
    ExactMatrix section;     // s : C -> B
};

inline Splitting choose_splittings(const ExactMatrix& inclusion, const ExactMatrix& projection) {
    const std::size_t dim_a = inclusion.cols(), dim_b = inclusion.rows(), dim_c = projection.rows();
    if (projection.cols() != dim_b) throw DimensionError("splitting: middle dimension mismatch");
    if (rank(inclusion) != dim_a) throw NotExactError("inclusion is not injective");
    if (rank(projection) != dim_c) throw NotExactError("projection is not surjective");
    ExactMatrix comp = projection * inclusion;
    if (!comp.is_zero()) throw NotExactError("projection * inclusion != 0");
    if (dim_b != dim_a + dim_c) throw NotExactError("sequence is not exact in the middle");

    // complement W of im(i) in B; p restricted to W is then an isomorphism onto C
    ExactMatrix w = extend_to_basis(inclusion);
    ExactMatrix basis(dim_b, dim_a + w.cols());
    for (std::size_t i = 0; i < dim_b; ++i) {
        for (std::size_t j = 0; j < dim_a; ++j) basis(i, j) = inclusion(i, j);
        for (std::size_t j = 0; j < w.cols(); ++j) basis(i, dim_a + j) = w(i, j);
    }
    auto basis_inv = inverse(basis);
    if (!basis_inv) throw NotExactError("failed to complement the image");

    // r = A-coordinates in the [i | W] basis
    ExactMatrix r(dim_a, dim_b), w_coords(w.cols(), dim_b);
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_b; ++j) r(i, j) = (*basis_inv)(i, j);
    for (std::size_t i = 0; i < w.cols(); ++i)
        for (std::size_t j = 0; j < dim_b; ++j) w_coords(i, j) = (*basis_inv)(dim_a + i, j);

    ExactMatrix pw = projection * w;  // C x dim_w, invertible
    auto pw_inv = inverse(pw);
    if (!pw_inv) throw NotExactError("complement does not map isomorphically onto the quotient");
    ExactMatrix s = w * *pw_inv;

    Splitting out{std::move(r), std::move(s)};
    if (out.retraction * inclusion != ExactMatrix::identity(dim_a))
        throw NotExactError("retraction identity failed");
    if (projection * out.section != ExactMatrix::identity(dim_c))
        throw NotExactError("section identity failed");
    if (inclusion * out.retraction + out.section * projection != ExactMatrix::identity(dim_b))
        throw NotExactError("direct sum identity failed");
    return out;
}

}  // namespace curvo
