#pragma once

// Homotopy-invariance transport over M x I, loop-space holonomy over Moore
// loop families, and the torus bundle represented on its covering chart with
// gluing matrices applied at chart exits.

#include "curvo/holonomy.hpp"
#include "curvo/quadrature.hpp"
#include "curvo/rh.hpp"

#include <cmath>
#include <vector>

namespace curvo {

// the fiber-direction path families beta(x) = (t -> (x, t)) and its reverse
// on a chart R^d x I; the last coordinate is the interval
inline PathFamily beta_family(int d, bool reversed) {
    PathFamily f;
    f.params = d;
    f.dim = d + 1;
    f.eval = [d, reversed](const RVec& x, double t) {
        RVec p(d + 1);
        p.head(d) = x;
        p[d] = reversed ? 1.0 - t : t;
        return p;
    };
    f.dt = [d, reversed](const RVec&, double) {
        RVec v = RVec::Zero(d + 1);
        v[d] = reversed ? -1.0 : 1.0;
        return v;
    };
    f.du = [d](const RVec&, double, int j) { return RVec(RVec::Unit(d + 1, j)); };
    return f;
}

struct HomotopyTransportReport {
    double inverse_pt_residual = 0.0;     // beta^{-1} PT . beta PT - id
    double inverse_chain_residual = 0.0;  // the full composite sum at s = 1
    double omega_h_residual = 0.0;        // d(beta^* hol_h) against i1^*h - i0^*h
};

// checks the homotopy-invariance transport on a battery of base points;
// forms/connections live on the chart R^d x I
inline HomotopyTransportReport homotopy_transport(const RhInput& in, const std::vector<RVec>& grid,
                                                  const std::vector<int>& contraction,
                                                  const Resolution& res) {
    const int m = static_cast<int>(in.forms.size());
    const int d = static_cast<int>(grid.front().size());
    PathFamily beta = beta_family(d, false);
    PathFamily beta_inv = beta_family(d, true);
    HomotopyTransportReport rep;

    for (const RVec& x : grid) {
        // transports
        CMat ptf = parallel_transport(in.connections.front(), beta, x, 0.0, 1.0, res.ode_steps);
        CMat ptb = parallel_transport(in.connections.front(), beta_inv, x, 0.0, 1.0, res.ode_steps);
        rep.inverse_pt_residual = std::max(
            rep.inverse_pt_residual,
            (ptb * ptf - CMat::Identity(ptf.rows(), ptf.cols())).cwiseAbs().maxCoeff());

        if (m >= 1) {
            // sum_k (beta^{-1})^* hol_{f_1..f_k} . beta^* hol_{f_{k+1}..f_m},
            // evaluated as a wedge on the contraction directions
            CMat acc = CMat::Zero(in.dims.front(), in.dims.back());
            const unsigned nmask = 1u << contraction.size();
            for (int k = 0; k <= m; ++k) {
                HolonomyRequest left;
                left.chain = {std::vector<FormField>(in.forms.begin(), in.forms.begin() + k),
                              std::vector<FormField>(in.connections.begin(), in.connections.begin() + k + 1),
                              std::vector<int>(in.dims.begin(), in.dims.begin() + k + 1)};
                left.family = beta_inv;
                left.params = x;
                left.steps = res.ode_steps;
                HolonomyRequest right;
                right.chain = {std::vector<FormField>(in.forms.begin() + k, in.forms.end()),
                               std::vector<FormField>(in.connections.begin() + k, in.connections.end()),
                               std::vector<int>(in.dims.begin() + k, in.dims.end())};
                right.family = beta;
                right.params = x;
                right.steps = res.ode_steps;
                int dl = -k, dr = -(m - k);
                for (int i = 0; i < k; ++i) dl += in.forms[i].form_degree;
                for (int i = k; i < m; ++i) dr += in.forms[i].form_degree;
                if (dl < 0 || dr < 0) continue;
                for (unsigned sub = 0; sub < nmask; ++sub) {
                    if (holodetail::popcount(sub) != dl ||
                        holodetail::popcount((nmask - 1) & ~sub) != dr)
                        continue;
                    std::vector<int> li, ri;
                    for (std::size_t b = 0; b < contraction.size(); ++b)
                        ((sub >> b) & 1u ? li : ri).push_back(contraction[b]);
                    left.contraction = li;
                    right.contraction = ri;
                    double eps = holodetail::split_sign(sub, nmask - 1);
                    acc += eps * (holonomy_form(left) * holonomy_form(right));
                }
            }
            rep.inverse_chain_residual = std::max(rep.inverse_chain_residual,
                                                  acc.cwiseAbs().maxCoeff());
        }

        // d(omega_h) against i_1^* h - i_0^* h by central differences
        if (d >= 2) {
            double delta = 1e-4;
            auto omega = [&](const RVec& p, int j) {
                return hol_h_value(in.h, beta, p, j, 0.0, 1.0, res.ode_steps);
            };
            for (int i = 0; i < d; ++i)
                for (int j = i + 1; j < d; ++j) {
                    RVec xp = x, xm = x;
                    xp[i] += delta;
                    xm[i] -= delta;
                    Cplx di_oj = (omega(xp, j) - omega(xm, j)) / (2.0 * delta);
                    xp = x;
                    xm = x;
                    xp[j] += delta;
                    xm[j] -= delta;
                    Cplx dj_oi = (omega(xp, i) - omega(xm, i)) / (2.0 * delta);
                    RVec ei = RVec::Zero(d + 1), ej = RVec::Zero(d + 1);
                    ei[i] = 1.0;
                    ej[j] = 1.0;
                    RVec p1(d + 1), p0(d + 1);
                    p1.head(d) = x;
                    p1[d] = 1.0;
                    p0.head(d) = x;
                    p0[d] = 0.0;
                    Cplx expect = in.h(p1, {ei, ej})(0, 0) - in.h(p0, {ei, ej})(0, 0);
                    rep.omega_h_residual =
                        std::max(rep.omega_h_residual, std::abs(di_oj - dj_oi - expect));
                }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// loop-space values

struct LoopRepValue {
    CMat integral;  // integral over the simplex of tilde-hol
    Cplx h_tau = 0.0;  // the logarithmic curvature element, for 1-simplices
};

// tilde-hol^tau integrated over the parameter simplex of a Moore loop family;
// s^tau is integrated along straight segments to the (1,...,1) vertex
inline LoopRepValue loop_rep_value(const RhInput& in, const MooreLoopFamily& tau, int simplex_dim,
                                   const Resolution& res) {
    PathFamily fam = tau.normalized();
    const int n = simplex_dim;
    QuadRule q = gauss_legendre(res.quad_order);
    LoopRepValue out;
    out.integral = CMat::Zero(in.dims.front(), in.dims.back());

    auto hol_h_dir = [&](const RVec& u, int j) {
        return hol_h_value(in.h, fam, u, j, 0.0, 1.0, res.ode_steps);
    };
    auto s_tau = [&](const RVec& u) {
        // straight segment from the top vertex (1,...,1) to u
        Cplx s = 0.0;
        RVec corner = RVec::Ones(n);
        RVec dir = u - corner;
        s -= integrate_interval(
            [&](double tau_par) {
                RVec p = corner + tau_par * dir;
                Cplx acc = 0.0;
                for (int j = 0; j < n; ++j)
                    if (std::abs(dir[j]) > 0) acc += dir[j] * hol_h_dir(p, j);
                return acc;
            },
            0.0, 1.0, q);
        return s;
    };

    int form_deg = -static_cast<int>(in.forms.size());
    for (const auto& f : in.forms) form_deg += f.form_degree;
    if (in.forms.empty()) form_deg = 0;

    if (n == 0) {
        HolonomyRequest req;
        req.chain = {in.forms, in.connections, in.dims};
        req.family = fam;
        req.params = RVec(0);
        req.steps = res.ode_steps;
        out.integral = holonomy_form(req);
        return out;
    }

    if (form_deg == n) {
        std::vector<int> all;
        for (int j = 0; j < n; ++j) all.push_back(j);
        out.integral = integrate_simplex(
            [&](const std::vector<double>& tv) {
                RVec u(n);
                for (int i = 0; i < n; ++i) u[i] = tv[i];
                HolonomyRequest req;
                req.chain = {in.forms, in.connections, in.dims};
                req.family = fam;
                req.params = u;
                req.contraction = all;
                req.steps = res.ode_steps;
                CMat holv = holonomy_form(req);
                return CMat(std::exp(s_tau(u)) * holv);
            },
            n, q);
        double sign = (static_cast<long>(n) * (n + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        out.integral = sign * out.integral;
    }

    if (n == 1) {
        out.h_tau = -integrate_interval(
            [&](double u) {
                RVec uv(1);
                uv << u;
                return hol_h_dir(uv, 0);
            },
            0.0, 1.0, q);
    }
    return out;
}

// shuffle-coherence residual at p = q = 1: the two shuffle summands of the
// concatenated family against the deconcatenation products
inline double loop_shuffle_residual(const RhInput& in, const MooreLoopFamily& tau,
                                    const MooreLoopFamily& tau2, const Resolution& res) {
    if (in.forms.size() != 2) throw NumericsError("shuffle residual wants exactly two forms");
    // concatenation family over (u1, u2): tau(u1) * tau2(u2) (tau2 first)
    MooreLoopFamily conc;
    conc.params = 2;
    conc.dim = tau.dim;
    conc.eval = [tau, tau2](const RVec& u, double t) {
        RVec u1(1), u2(1);
        u1 << u[0];
        u2 << u[1];
        double l2 = tau2.length(u2);
        if (t <= l2) return tau2.eval(u2, t);
        return tau.eval(u1, t - l2);
    };
    conc.length = [tau, tau2](const RVec& u) {
        RVec u1(1), u2(1);
        u1 << u[0];
        u2 << u[1];
        return tau.length(u1) + tau2.length(u2);
    };

    // LHS: the two (1,1)-shuffles of the 2-simplex families (t1 >= t2):
    //   s_1 tau * s_0 tau2 : (t1, t2) -> tau(t1) * tau2(t2), sign +1
    //   s_0 tau * s_1 tau2 : (t1, t2) -> tau(t2) * tau2(t1), sign -1
    auto shuffled = [&](bool swap) {
        MooreLoopFamily f = conc;
        f.eval = [conc, swap](const RVec& t12, double t) {
            RVec u(2);
            u << (swap ? t12[1] : t12[0]), (swap ? t12[0] : t12[1]);
            return conc.eval(u, t);
        };
        f.length = [conc, swap](const RVec& t12) {
            RVec u(2);
            u << (swap ? t12[1] : t12[0]), (swap ? t12[0] : t12[1]);
            return conc.length(u);
        };
        return f;
    };
    CMat lhs = loop_rep_value(in, shuffled(false), 2, res).integral -
               loop_rep_value(in, shuffled(true), 2, res).integral;

    // RHS: (-1)^{pq} sum_k int tilde-hol^{tau}_{f_1..f_k} int tilde-hol^{tau2}_{f_{k+1}..f_2}
    CMat rhs = CMat::Zero(in.dims.front(), in.dims.back());
    for (int k = 0; k <= 2; ++k) {
        RhInput left{std::vector<FormField>(in.forms.begin(), in.forms.begin() + k),
                     std::vector<FormField>(in.connections.begin(), in.connections.begin() + k + 1),
                     std::vector<int>(in.dims.begin(), in.dims.begin() + k + 1), in.h};
        RhInput right{std::vector<FormField>(in.forms.begin() + k, in.forms.end()),
                      std::vector<FormField>(in.connections.begin() + k, in.connections.end()),
                      std::vector<int>(in.dims.begin() + k, in.dims.end()), in.h};
        rhs += loop_rep_value(left, tau, 1, res).integral *
               loop_rep_value(right, tau2, 1, res).integral;
    }
    rhs = -rhs;  // (-1)^{pq} with p = q = 1
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// the torus bundle on its covering chart

struct TorusBundle {
    CMat glue_a;  // deck matrix for x -> x + 1
    CMat glue_b;  // deck matrix for y -> y + 1
    FormField connection;  // on the cover R^2

    static TorusBundle standard(const CMat& a, const CMat& b) {
        TorusBundle t;
        t.glue_a = a;
        t.glue_b = b;
        int dim = static_cast<int>(a.rows());
        // connection form of d - i pi y dx
        t.connection.form_degree = 1;
        t.connection.rows = t.connection.cols = dim;
        t.connection.eval = [dim](const RVec& p, const std::vector<RVec>& tg) {
            Cplx val = Cplx(0.0, -M_PI) * p[1] * tg[0][0];
            return CMat(val * CMat::Identity(dim, dim));
        };
        return t;
    }
};

// transport along a lifted loop: ODE on the cover, then the deck correction
// for the net translation, with the phase of the gluing evaluated at the
// start point
inline CMat torus_transport(const TorusBundle& tb, const PathFamily& lift, const RVec& params,
                            int steps) {
    CMat ode = parallel_transport(tb.connection, lift, params, 0.0, 1.0, steps);
    RVec x0 = lift.point(params, 0.0), x1 = lift.point(params, 1.0);
    int p = static_cast<int>(std::lround(x1[0] - x0[0]));
    int qn = static_cast<int>(std::lround(x1[1] - x0[1]));
    CMat deck = CMat::Identity(ode.rows(), ode.cols());
    CMat ga = p >= 0 ? tb.glue_a : CMat(tb.glue_a.inverse());
    for (int i = 0; i < std::abs(p); ++i) deck = deck * ga;
    CMat gb = qn >= 0 ? tb.glue_b : CMat(tb.glue_b.inverse());
    for (int i = 0; i < std::abs(qn); ++i) deck = deck * gb;
    Cplx phase = std::exp(Cplx(0.0, M_PI) * static_cast<double>(qn) * x0[0]);
    return phase * deck * ode;
}

}  // namespace curvo
