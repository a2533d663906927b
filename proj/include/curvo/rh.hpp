#pragma once

// The numerical side of the curved Riemann-Hilbert functor: integrating
// holonomy forms over simplices through the admissible cube-to-simplex maps,
// the scalar primitive s^sigma, the boundary-coherence and h-insertion
// residuals, the de Rham comparison, loop-space values, and homotopy-
// invariance transport.
//
// Conventions:
//   hol^sigma = (-1)^{n(n+1)/2} e^{s^sigma} hol'^sigma  on I^n for
//   sigma : Delta^{n+1} -> M, with d s^sigma = -hol'^sigma_h and
//   s^sigma(1,...,1) = 0 (computed along axis-parallel polylines; a second
//   polyline audits path independence).
//   DR(q)(sigma) = (-1)^{(n+1)n/2} integral of the transport-trivialized
//   pullback over the time-ordered simplex.

#include "curvo/chart.hpp"
#include "curvo/holonomy.hpp"
#include "curvo/quadrature.hpp"
#include "curvo/smiley.hpp"

#include <cmath>
#include <vector>

namespace curvo {

struct Resolution {
    int ode_steps = 200;
    int quad_order = 8;
};

// path family of a parametrized simplex through the admissible maps:
// parameters u in I^n, paths t -> sigma(smiley^n(t, u))
inline PathFamily smiley_family(const SimplexMap& sigma) {
    const int n = sigma.n - 1;
    PathFamily f;
    f.params = n;
    f.dim = sigma.dim;
    f.eval = [sigma, n](const RVec& u, double t) {
        RVec s = u;
        return sigma.eval(smiley_eval(n, t, s));
    };
    f.dt = [sigma, n](const RVec& u, double t) {
        RVec s = u;
        RVec pt = smiley_eval(n, t, s);
        return RVec(sigma.jac(pt) * smiley_jacobian(n, t, s).col(0));
    };
    f.du = [sigma, n](const RVec& u, double t, int j) {
        RVec s = u;
        RVec pt = smiley_eval(n, t, s);
        return RVec(sigma.jac(pt) * smiley_jacobian(n, t, s).col(j + 1));
    };
    return f;
}

// the scalar primitive: s(u) = - integral of hol'_h along an axis-parallel
// polyline from (1,...,1) to u; axis order ascending, the reversed order
// audits path independence
inline Cplx s_sigma(const FormField& h, const PathFamily& family, const RVec& u,
                    const Resolution& res, bool reverse_axes = false) {
    const int n = family.params;
    QuadRule q = gauss_legendre(res.quad_order);
    Cplx s = 0.0;
    RVec cur = RVec::Ones(n);
    for (int step = 0; step < n; ++step) {
        int j = reverse_axes ? n - 1 - step : step;
        Cplx seg = integrate_interval(
            [&](double tau) {
                RVec p = cur;
                p[j] = tau;
                return hol_h_value(h, family, p, j, 0.0, 1.0, res.ode_steps);
            },
            1.0, u[j], q);
        s -= seg;
        cur[j] = u[j];
    }
    return s;
}

// integral of the pullback of a 2-form over a parametrized 2-simplex
inline Cplx simplex_2form_integral(const FormField& h, const SimplexMap& sigma, int order) {
    QuadRule q = gauss_legendre(order);
    auto dT = [](const std::vector<double>& u, int j, int c) {
        // d (u_1...u_{j+1}) / d u_c, zero unless c <= j
        if (c > j) return 0.0;
        double v = 1.0;
        for (int l = 0; l <= j; ++l)
            if (l != c) v *= u[l];
        return v;
    };
    return integrate_cube(
        [&](const std::vector<double>& u) {
            std::vector<double> t = cube_to_simplex(u);
            RVec tv(2);
            tv << t[0], t[1];
            Eigen::MatrixXd js = sigma.jac(tv);
            std::vector<RVec> tg;
            for (int c = 0; c < 2; ++c) {
                RVec col(2);
                col << dT(u, 0, c), dT(u, 1, c);
                tg.push_back(RVec(js * col));
            }
            return h(sigma.eval(tv), tg)(0, 0);
        },
        2, q);
}

struct RhInput {
    std::vector<FormField> forms;        // f_1 .. f_m
    std::vector<FormField> connections;  // A_1 .. A_{m+1}
    std::vector<int> dims;
    FormField h;  // scalar 2-form
};

// hol^sigma integrated over the cube: the value of the Riemann-Hilbert
// functor on a composable tuple at a parametrized simplex. Zero when the form
// degree does not match the cube dimension.
inline CMat rh_value(const RhInput& in, const SimplexMap& sigma, const Resolution& res) {
    const int m = static_cast<int>(in.forms.size());
    int form_deg = -m;
    for (const auto& f : in.forms) form_deg += f.form_degree;
    int rows = in.dims.front(), cols = in.dims.back();
    if (sigma.n == 0) {
        if (m == 1 && in.forms[0].form_degree == 0)
            return in.forms[0](sigma.eval(RVec(0)), {});
        return CMat::Zero(rows, cols);
    }
    const int n = sigma.n - 1;
    if (form_deg != n) return CMat::Zero(rows, cols);
    PathFamily fam = smiley_family(sigma);
    QuadRule q = gauss_legendre(res.quad_order);
    std::vector<int> all;
    for (int j = 0; j < n; ++j) all.push_back(j);
    CMat val = integrate_cube(
        [&](const std::vector<double>& uv) {
            RVec u(n);
            for (int j = 0; j < n; ++j) u[j] = uv[j];
            HolonomyRequest req;
            req.chain = {in.forms, in.connections, in.dims};
            req.family = fam;
            req.params = u;
            req.contraction = all;
            req.s = 0.0;
            req.t = 1.0;
            req.steps = res.ode_steps;
            CMat holv = holonomy_form(req);
            Cplx w = std::exp(s_sigma(in.h, fam, u, res));
            return CMat(w * holv);
        },
        n, q);
    double sign = (static_cast<long>(n) * (n + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * val;
}

// parallel transport along the (i,j)-edge of a parametrized simplex
inline CMat edge_transport(const FormField& conn, const SimplexMap& sigma, int vi, int vj,
                           const Resolution& res) {
    SimplexMap edge = subsimplex_map(sigma, {vi, vj});
    PathFamily path;
    path.params = 0;
    path.dim = sigma.dim;
    path.eval = [edge](const RVec&, double t) {
        RVec tv(1);
        tv << t;
        return edge.eval(tv);
    };
    return parallel_transport(conn, path, RVec(0), 0.0, 1.0, res.ode_steps);
}

// boundary-coherence residual on a parametrized simplex: the cube-boundary
// integral of hol^sigma against the face/splitting sum
inline double coherence_residual(const RhInput& in, const SimplexMap& sigma, const Resolution& res) {
    const int m = static_cast<int>(in.forms.size());
    const int n = sigma.n - 1;
    PathFamily fam = smiley_family(sigma);
    QuadRule q = gauss_legendre(res.quad_order);
    double prefactor = (static_cast<long>(n) * (n + 1) / 2) % 2 == 0 ? 1.0 : -1.0;

    // LHS: sum_i (-1)^{i-1} [ integral over u_i = 1 minus integral over u_i = 0 ]
    CMat lhs = CMat::Zero(in.dims.front(), in.dims.back());
    for (int i = 0; i < n; ++i) {
        std::vector<int> dirs;
        for (int j = 0; j < n; ++j)
            if (j != i) dirs.push_back(j);
        for (int side = 0; side <= 1; ++side) {
            CMat face = integrate_cube(
                [&](const std::vector<double>& uv) {
                    RVec u(n);
                    int c = 0;
                    for (int j = 0; j < n; ++j) u[j] = (j == i) ? double(side) : uv[c++];
                    HolonomyRequest req;
                    req.chain = {in.forms, in.connections, in.dims};
                    req.family = fam;
                    req.params = u;
                    req.contraction = dirs;
                    req.s = 0.0;
                    req.t = 1.0;
                    req.steps = res.ode_steps;
                    CMat holv = holonomy_form(req);
                    Cplx w = std::exp(s_sigma(in.h, fam, u, res));
                    return CMat(prefactor * w * holv);
                },
                n - 1, q);
            double orient = (i % 2 == 0 ? 1.0 : -1.0) * (side == 1 ? 1.0 : -1.0);
            lhs += orient * face;
        }
    }

    // RHS per the face/splitting decomposition
    CMat rhs = CMat::Zero(in.dims.front(), in.dims.back());
    auto face_indices = [&](int omit) {
        std::vector<int> v;
        for (int j = 0; j <= n + 1; ++j)
            if (j != omit) v.push_back(j);
        return v;
    };
    for (int i = 1; i <= n; ++i) {
        SimplexMap face = subsimplex_map(sigma, face_indices(i));
        double sgn = ((n - i + 1) % 2 == 0) ? 1.0 : -1.0;
        rhs += sgn * rh_value(in, face, res);
    }
    for (int i = 1; i <= n; ++i) {
        std::vector<int> front, back;
        for (int j = 0; j <= i; ++j) front.push_back(j);
        for (int j = i; j <= n + 1; ++j) back.push_back(j);
        SimplexMap sig_front = subsimplex_map(sigma, front);
        SimplexMap sig_back = subsimplex_map(sigma, back);
        Cplx weight = std::exp(simplex_2form_integral(in.h, subsimplex_map(sigma, {0, i, n + 1}),
                                                      res.quad_order));
        double sgn = ((i + n) % 2 == 0) ? 1.0 : -1.0;
        for (int k = 1; k <= m - 1; ++k) {
            RhInput left{std::vector<FormField>(in.forms.begin(), in.forms.begin() + k),
                         std::vector<FormField>(in.connections.begin(), in.connections.begin() + k + 1),
                         std::vector<int>(in.dims.begin(), in.dims.begin() + k + 1), in.h};
            RhInput right{std::vector<FormField>(in.forms.begin() + k, in.forms.end()),
                          std::vector<FormField>(in.connections.begin() + k, in.connections.end()),
                          std::vector<int>(in.dims.begin() + k, in.dims.end()), in.h};
            rhs += (sgn * weight) * (rh_value(left, sig_back, res) * rh_value(right, sig_front, res));
        }
    }
    {
        std::vector<int> head;
        for (int j = 0; j <= n; ++j) head.push_back(j);
        SimplexMap sig_head = subsimplex_map(sigma, head);
        Cplx weight = std::exp(simplex_2form_integral(in.h, subsimplex_map(sigma, {0, n, n + 1}),
                                                      res.quad_order));
        rhs += weight * (edge_transport(in.connections.front(), sigma, n, n + 1, res) *
                         rh_value(in, sig_head, res));
    }
    {
        std::vector<int> tail;
        for (int j = 1; j <= n + 1; ++j) tail.push_back(j);
        SimplexMap sig_tail = subsimplex_map(sigma, tail);
        Cplx weight = std::exp(simplex_2form_integral(in.h, subsimplex_map(sigma, {0, 1, n + 1}),
                                                      res.quad_order));
        double sgn = ((n + 1) % 2 == 0) ? 1.0 : -1.0;
        rhs += (sgn * weight) *
               (rh_value(in, sig_tail, res) * edge_transport(in.connections.back(), sigma, 0, 1, res));
    }
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// residual of the h-insertion identity along a path family, contracted
// against the given frame directions
inline double hol_h_insertion_residual(const RhInput& in, const PathFamily& fam, const RVec& u,
                                       const std::vector<int>& contraction, const Resolution& res) {
    const int m = static_cast<int>(in.forms.size());
    CMat lhs = CMat::Zero(in.dims.front(), in.dims.back());
    for (int k = 1; k <= m + 1; ++k) {
        // insert h * 1_{E_k} before slot k
        std::vector<FormField> forms;
        std::vector<FormField> conns;
        std::vector<int> dims;
        forms.insert(forms.end(), in.forms.begin(), in.forms.begin() + (k - 1));
        int dk = in.dims[k - 1];
        FormField hk = in.h;
        hk.rows = hk.cols = dk;
        hk.eval = [h = in.h, dk](const RVec& p, const std::vector<RVec>& tg) {
            return CMat(h(p, tg)(0, 0) * CMat::Identity(dk, dk));
        };
        forms.push_back(hk);
        forms.insert(forms.end(), in.forms.begin() + (k - 1), in.forms.end());
        conns.insert(conns.end(), in.connections.begin(), in.connections.begin() + k);
        conns.insert(conns.end(), in.connections.begin() + (k - 1), in.connections.end());
        dims.insert(dims.end(), in.dims.begin(), in.dims.begin() + k);
        dims.insert(dims.end(), in.dims.begin() + (k - 1), in.dims.end());
        long expo = k - 1;
        for (int i = 1; i <= k - 1; ++i) expo += in.forms[i - 1].form_degree;
        HolonomyRequest req;
        req.chain = {forms, conns, dims};
        req.family = fam;
        req.params = u;
        req.contraction = contraction;
        req.steps = res.ode_steps;
        lhs += (expo % 2 == 0 ? 1.0 : -1.0) * holonomy_form(req);
    }
    // RHS: hol_h ^ hol_{f_1..f_m} as a wedge over the contraction set
    CMat rhs = CMat::Zero(in.dims.front(), in.dims.back());
    for (std::size_t pick = 0; pick < contraction.size(); ++pick) {
        Cplx hv = hol_h_value(in.h, fam, u, contraction[pick], 0.0, 1.0, res.ode_steps);
        std::vector<int> rest;
        for (std::size_t j = 0; j < contraction.size(); ++j)
            if (j != pick) rest.push_back(contraction[j]);
        HolonomyRequest req;
        req.chain = {in.forms, in.connections, in.dims};
        req.family = fam;
        req.params = u;
        req.contraction = rest;
        req.steps = res.ode_steps;
        double eps = (pick % 2 == 0) ? 1.0 : -1.0;  // sign of moving slot `pick` to the front
        rhs += (eps * hv) * holonomy_form(req);
    }
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// de Rham integration of a flat-Hom-bundle valued form over a simplex, with
// the canonical transport trivialization to the first-vertex fiber
inline CMat de_rham(const FormField& q_form, const FormField& conn_e, const FormField& conn_f,
                    const SimplexMap& sigma, const Resolution& res) {
    const int n = sigma.n;
    QuadRule q = gauss_legendre(res.quad_order);
    auto dT = [](const std::vector<double>& u, int j, int c) {
        if (c > j) return 0.0;
        double v = 1.0;
        for (int l = 0; l <= j; ++l)
            if (l != c) v *= u[l];
        return v;
    };
    CMat acc = CMat::Zero(q_form.rows, q_form.cols);
    if (n == 0) {
        if (q_form.form_degree == 0) acc = q_form(sigma.eval(RVec(0)), {});
        double sgn0 = 1.0;
        return sgn0 * acc;
    }
    acc = integrate_cube(
        [&](const std::vector<double>& u) {
            std::vector<double> t = cube_to_simplex(u);
            RVec tv(n);
            for (int i = 0; i < n; ++i) tv[i] = t[i];
            Eigen::MatrixXd js = sigma.jac(tv);
            std::vector<RVec> tg;
            for (int c = 0; c < n; ++c) {
                RVec col(n);
                for (int j = 0; j < n; ++j) col[j] = dT(u, j, c);
                tg.push_back(RVec(js * col));
            }
            CMat raw = q_form(sigma.eval(tv), tg);
            // straight segment from the point to the first vertex (origin)
            PathFamily seg;
            seg.params = 0;
            seg.dim = sigma.dim;
            seg.eval = [sigma, tv](const RVec&, double tau) { return sigma.eval(RVec((1.0 - tau) * tv)); };
            CMat pf = parallel_transport(conn_f, seg, RVec(0), 0.0, 1.0, res.ode_steps);
            CMat pe = parallel_transport(conn_e, seg, RVec(0), 0.0, 1.0, res.ode_steps);
            return CMat(pf * raw * pe.inverse());
        },
        n, q);
    double sign = (static_cast<long>(n + 1) * n / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * acc;
}

// primitive of a 2-form on a star-shaped chart: omega_p(v) = int_0^1 t h_{tp}(p, v) dt
inline Cplx poincare_primitive(const FormField& h, const RVec& p, const RVec& v, int order) {
    QuadRule q = gauss_legendre(order);
    return integrate_interval([&](double t) { return h(RVec(t * p), {p, v})(0, 0) * t; }, 0.0, 1.0, q);
}

}  // namespace curvo
