#pragma once

// Evaluator types for the numerical engine: charts, matrix-valued
// differential forms given as polynomial data, parametrized simplices, path
// families and Moore loop families. Everything works in double precision with
// complex matrices.

#include "curvo/quadrature.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace curvo {

using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using Cplx = std::complex<double>;

struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& m) : std::runtime_error(m) {}
};

// chart map U subset R^k -> R^d with optional analytic jacobian; missing
// jacobians fall back to central differences
struct ChartMap {
    int domain_dim = 0;
    int target_dim = 0;
    std::function<RVec(const RVec&)> eval;
    std::function<Eigen::MatrixXd(const RVec&)> jacobian;  // optional
    double fd_delta = 1e-4;

    Eigen::MatrixXd jac(const RVec& p) const {
        if (jacobian) return jacobian(p);
        Eigen::MatrixXd j(target_dim, domain_dim);
        for (int c = 0; c < domain_dim; ++c) {
            RVec pp = p, pm = p;
            pp[c] += fd_delta;
            pm[c] -= fd_delta;
            j.col(c) = (eval(pp) - eval(pm)) / (2.0 * fd_delta);
        }
        return j;
    }
};

// real multivariate polynomial: sum of coeff * prod x_i^{e_i}
struct Poly {
    struct Term {
        Cplx coeff;
        std::vector<int> exps;
    };
    std::vector<Term> terms;

    Cplx operator()(const RVec& x) const {
        Cplx acc = 0.0;
        for (const auto& t : terms) {
            Cplx v = t.coeff;
            for (std::size_t i = 0; i < t.exps.size(); ++i)
                for (int e = 0; e < t.exps[i]; ++e) v *= x[static_cast<int>(i)];
            acc += v;
        }
        return acc;
    }

    static Poly constant(Cplx c, int vars) {
        Poly p;
        p.terms.push_back({c, std::vector<int>(vars, 0)});
        return p;
    }
};

// matrix-valued differential k-form: evaluator on (point, k tangent vectors)
struct FormField {
    int form_degree = 0;
    int value_shift = 0;  // which graded Hom block the values land in
    int rows = 1, cols = 1;
    std::function<CMat(const RVec&, const std::vector<RVec>&)> eval;

    CMat operator()(const RVec& p, const std::vector<RVec>& tangents) const {
        if (static_cast<int>(tangents.size()) != form_degree)
            throw NumericsError("form evaluated on the wrong number of tangents");
        return eval(p, tangents);
    }
};

inline FormField zero_form(int degree, int rows, int cols) {
    FormField f;
    f.form_degree = degree;
    f.rows = rows;
    f.cols = cols;
    f.eval = [rows, cols](const RVec&, const std::vector<RVec>&) {
        return CMat::Zero(rows, cols);
    };
    return f;
}

// polynomial form: sum over terms of poly(x) dx_{i_1} ^ ... ^ dx_{i_k} * M
struct PolyFormTerm {
    Poly coeff;
    std::vector<int> axes;  // strictly increasing
    CMat matrix;
};

inline FormField poly_form(int degree, int rows, int cols, std::vector<PolyFormTerm> terms) {
    FormField f;
    f.form_degree = degree;
    f.rows = rows;
    f.cols = cols;
    f.eval = [terms = std::move(terms), degree, rows, cols](const RVec& p,
                                                            const std::vector<RVec>& tg) {
        CMat acc = CMat::Zero(rows, cols);
        Eigen::MatrixXcd minor(degree, degree);
        for (const auto& t : terms) {
            // alternating evaluation: det of the tangent components along axes
            for (int r = 0; r < degree; ++r)
                for (int c = 0; c < degree; ++c) minor(r, c) = tg[c][t.axes[r]];
            Cplx wedge = degree == 0 ? Cplx(1.0) : minor.determinant();
            acc += (t.coeff(p) * wedge) * t.matrix;
        }
        return acc;
    };
    return f;
}

// scalar shorthand builders on R^d
inline FormField scalar_1form(int d, std::vector<Poly> comps) {
    std::vector<PolyFormTerm> terms;
    for (int i = 0; i < d; ++i) terms.push_back({comps[i], {i}, CMat::Identity(1, 1)});
    return poly_form(1, 1, 1, std::move(terms));
}

inline FormField scalar_2form(int d, std::vector<std::pair<std::pair<int, int>, Poly>> comps) {
    std::vector<PolyFormTerm> terms;
    for (auto& [axes, p] : comps) terms.push_back({p, {axes.first, axes.second}, CMat::Identity(1, 1)});
    return poly_form(2, 1, 1, std::move(terms));
}

// superconnection data for a graded bundle on a chart: an ordinary connection
// 1-form plus form components shifting the grading, plus the scalar curvature
struct Superconnection {
    std::vector<int> fiber_dims;      // per degree, flattened total below
    FormField a1;                     // degree-1 connection form on the total fiber
    std::vector<FormField> components;  // degree-i, shift 1-i pieces, i != 1
    FormField h;                      // scalar 2-form

    int total_dim() const {
        int t = 0;
        for (int d : fiber_dims) t += d;
        return t;
    }
};

// family of paths over a parameter box U subset R^k:
//   (u, t) -> point, with tangent evaluators along t and along chosen frame
//   directions in U (defaults: central differences)
struct PathFamily {
    int params = 0;
    int dim = 0;
    std::function<RVec(const RVec&, double)> eval;
    std::function<RVec(const RVec&, double)> dt;                // optional
    std::function<RVec(const RVec&, double, int)> du;           // optional
    double fd_delta = 1e-4;

    RVec point(const RVec& u, double t) const { return eval(u, t); }
    RVec tangent_t(const RVec& u, double t) const {
        if (dt) return dt(u, t);
        return (eval(u, t + fd_delta) - eval(u, t - fd_delta)) / (2.0 * fd_delta);
    }
    RVec tangent_u(const RVec& u, double t, int j) const {
        if (du) return du(u, t, j);
        RVec up = u, um = u;
        up[j] += fd_delta;
        um[j] -= fd_delta;
        return (eval(up, t) - eval(um, t)) / (2.0 * fd_delta);
    }
};

// a single path as a degenerate family
inline PathFamily single_path(int dim, std::function<RVec(double)> eval,
                              std::function<RVec(double)> dt = nullptr) {
    PathFamily f;
    f.params = 0;
    f.dim = dim;
    f.eval = [eval = std::move(eval)](const RVec&, double t) { return eval(t); };
    if (dt) f.dt = [dt = std::move(dt)](const RVec&, double t) { return dt(t); };
    return f;
}

// parametrized simplex sigma : Delta^n -> R^d in time-ordered coordinates
struct SimplexMap {
    int n = 0;  // simplex dimension
    int dim = 0;
    std::function<RVec(const RVec&)> eval;
    std::function<Eigen::MatrixXd(const RVec&)> jacobian;  // optional
    double fd_delta = 1e-4;

    Eigen::MatrixXd jac(const RVec& t) const {
        if (jacobian) return jacobian(t);
        Eigen::MatrixXd j(dim, n);
        for (int c = 0; c < n; ++c) {
            RVec tp = t, tm = t;
            tp[c] += fd_delta;
            tm[c] -= fd_delta;
            j.col(c) = (eval(tp) - eval(tm)) / (2.0 * fd_delta);
        }
        return j;
    }
};

// time-ordered coordinates <-> barycentric coordinates
inline std::vector<double> tcoord_to_bary(const std::vector<double>& t) {
    const int n = static_cast<int>(t.size());
    std::vector<double> b(n + 1);
    b[0] = 1.0 - (n ? t[0] : 0.0);
    for (int j = 1; j < n; ++j) b[j] = t[j - 1] - t[j];
    if (n) b[n] = t[n - 1];
    return b;
}

inline std::vector<double> bary_to_tcoord(const std::vector<double>& b) {
    const int n = static_cast<int>(b.size()) - 1;
    std::vector<double> t(n);
    double acc = 0.0;
    for (int j = n; j >= 1; --j) {
        acc += b[j];
        t[j - 1] = acc;
    }
    return t;
}

// the sub-simplex of sigma spanned by the given strictly increasing vertex
// indices, as a parametrized simplex of lower dimension
inline SimplexMap subsimplex_map(const SimplexMap& sigma, std::vector<int> vertices) {
    SimplexMap out;
    out.n = static_cast<int>(vertices.size()) - 1;
    out.dim = sigma.dim;
    out.fd_delta = sigma.fd_delta;
    int big_n = sigma.n;
    out.eval = [sigma, vertices, big_n](const RVec& t) {
        std::vector<double> tv(t.data(), t.data() + t.size());
        std::vector<double> b = tcoord_to_bary(tv);
        std::vector<double> big_b(big_n + 1, 0.0);
        for (std::size_t j = 0; j < vertices.size(); ++j) big_b[vertices[j]] += b[j];
        std::vector<double> big_t = bary_to_tcoord(big_b);
        RVec arg(big_n);
        for (int i = 0; i < big_n; ++i) arg[i] = big_t[i];
        return sigma.eval(arg);
    };
    return out;
}

// polynomial simplex: components are polynomials in the time-ordered
// coordinates
inline SimplexMap poly_simplex(int n, int dim, std::vector<Poly> comps) {
    SimplexMap s;
    s.n = n;
    s.dim = dim;
    s.eval = [comps = std::move(comps), dim](const RVec& t) {
        RVec p(dim);
        for (int i = 0; i < dim; ++i) p[i] = comps[i](t).real();
        return p;
    };
    return s;
}

// Moore loop family over a parameter box: loops based at x0, given by an
// evaluator on [0, length(u)] that is constant near both ends
struct MooreLoopFamily {
    int params = 0;
    int dim = 0;
    std::function<RVec(const RVec&, double)> eval;   // t in [0, length(u)]
    std::function<double(const RVec&)> length;

    // unit-speed normalization (the alpha rescaling)
    PathFamily normalized() const {
        PathFamily f;
        f.params = params;
        f.dim = dim;
        f.eval = [*this](const RVec& u, double t) {
            double l = length(u);
            if (l <= 0.0) return eval(u, 0.0);
            return eval(u, t * l);
        };
        return f;
    }
};

}  // namespace curvo
