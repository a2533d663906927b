#pragma once

// Finitely supported graded dimension vectors and exact cohomology of
// complexes of Gaussian-rational vector spaces.

#include "curvo/matrix.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvo {

struct NotAComplexError : std::runtime_error {
    explicit NotAComplexError(const std::string& msg) : std::runtime_error(msg) {}
};

class GradedSpace {
public:
    GradedSpace() = default;
    explicit GradedSpace(std::map<int, std::size_t> dims) {
        for (auto& [d, n] : dims)
            if (n > 0) dims_[d] = n;
    }

    std::size_t dim(int degree) const {
        auto it = dims_.find(degree);
        return it == dims_.end() ? 0 : it->second;
    }
    void set_dim(int degree, std::size_t n) {
        if (n == 0)
            dims_.erase(degree);
        else
            dims_[degree] = n;
    }
    std::size_t total_dim() const {
        std::size_t t = 0;
        for (auto& [d, n] : dims_) t += n;
        return t;
    }
    int min_degree() const { return dims_.empty() ? 0 : dims_.begin()->first; }
    int max_degree() const { return dims_.empty() ? 0 : dims_.rbegin()->first; }
    bool empty() const { return dims_.empty(); }
    const std::map<int, std::size_t>& dims() const { return dims_; }

    GradedSpace shifted(int by) const {
        GradedSpace s;
        for (auto& [d, n] : dims_) s.dims_[d + by] = n;
        return s;
    }

    friend bool operator==(const GradedSpace& a, const GradedSpace& b) { return a.dims_ == b.dims_; }

private:
    std::map<int, std::size_t> dims_;
};

// A complex of exact vector spaces: spaces.dim(n) with differentials
// d^n : X^n -> X^{n+1}. Missing differentials are zero maps.
struct ExactComplex {
    GradedSpace spaces;
    std::map<int, ExactMatrix> differentials;

    ExactMatrix differential(int n) const {
        auto it = differentials.find(n);
        if (it != differentials.end()) return it->second;
        return ExactMatrix::zero(spaces.dim(n + 1), spaces.dim(n));
    }
};

struct CohomologyDegree {
    std::size_t dimension = 0;
    // columns are cycle representatives; reduced against the image so the
    // classes are independent
    ExactMatrix representatives;
};

// Exact cohomology with representatives. dim H^n = dim ker d^n - rank d^{n-1};
// the representatives are the kernel basis vectors that stay independent
// modulo the image, chosen in kernel-basis order.
inline std::map<int, CohomologyDegree> complex_cohomology(const ExactComplex& cx) {
    // validate d*d = 0 first
    for (auto& [n, d] : cx.differentials) {
        if (d.rows() != cx.spaces.dim(n + 1) || d.cols() != cx.spaces.dim(n))
            throw DimensionError("differential shape disagrees with graded dimensions");
        ExactMatrix next = cx.differential(n + 1);
        if (!(next * d).is_zero()) throw NotAComplexError("d∘d != 0 at degree " + std::to_string(n));
    }

    std::map<int, CohomologyDegree> out;
    if (cx.spaces.empty()) return out;
    for (int n = cx.spaces.min_degree(); n <= cx.spaces.max_degree(); ++n) {
        std::size_t dim_n = cx.spaces.dim(n);
        if (dim_n == 0) continue;
        ExactMatrix ker = nullspace(cx.differential(n));
        ExactMatrix img_src = cx.differential(n - 1);

        // keep kernel columns that remain independent modulo the image
        std::vector<std::vector<Scalar>> kept;
        ExactMatrix span = img_src;
        for (std::size_t j = 0; j < ker.cols(); ++j) {
            ExactMatrix trial(dim_n, span.cols() + 1);
            for (std::size_t i = 0; i < dim_n; ++i) {
                for (std::size_t c = 0; c < span.cols(); ++c) trial(i, c) = span(i, c);
                trial(i, span.cols()) = ker(i, j);
            }
            if (rank(trial) > rank(span)) {
                span = std::move(trial);
                kept.push_back(ker.col(j));
            }
        }
        CohomologyDegree deg;
        deg.dimension = kept.size();
        deg.representatives = ExactMatrix::from_columns(dim_n, kept);
        out[n] = std::move(deg);
    }
    return out;
}

inline std::size_t cohomology_dim(const ExactComplex& cx, int n) {
    auto h = complex_cohomology(cx);
    auto it = h.find(n);
    return it == h.end() ? 0 : it->second.dimension;
}

}  // namespace curvo
