#pragma once

// The smooth cube-to-simplex maps  I x I^n -> Delta^{n+1}  used to integrate
// holonomy over simplices, together with the audit of their axioms:
//   A2  integral compatibility (degree-1 maps)
//   A3  endpoint collapse to the bottom and top vertices
//   A4  rear cube faces factor through the inner simplex faces
//   A5  front cube faces split into front/rear faces of lower dimension
//
// Construction: a piecewise polynomial map ("frownie") reparametrized in the
// time coordinate by a smoothstep eta whose derivatives all vanish at the
// endpoints, applied on each subinterval [i/(n+1), (i+1)/(n+1)].
//
// eta is the normalized integral of exp(-1/(u(1-u))), tabulated at 4096 nodes
// with monotone cubic interpolation; its derivative is evaluated exactly.

#include "curvo/chart.hpp"
#include "curvo/quadrature.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace curvo {

class Smoothstep {
public:
    static const Smoothstep& instance() {
        static Smoothstep s;
        return s;
    }

    double operator()(double t) const {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        double x = t * kNodes;
        int i = std::min(static_cast<int>(x), kNodes - 1);
        double f = x - i;
        double h = 1.0 / kNodes;
        // cubic Hermite on [i, i+1] with the exact derivative at the knots
        double y0 = table_[i], y1 = table_[i + 1];
        double m0 = h * deriv(i * h), m1 = h * deriv((i + 1) * h);
        double f2 = f * f, f3 = f2 * f;
        return (2 * f3 - 3 * f2 + 1) * y0 + (f3 - 2 * f2 + f) * m0 + (-2 * f3 + 3 * f2) * y1 +
               (f3 - f2) * m1;
    }

    double deriv(double t) const {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        return std::exp(-1.0 / (t * (1.0 - t))) / norm_;
    }

    double inverse(double y) const {
        if (y <= 0.0) return 0.0;
        if (y >= 1.0) return 1.0;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            if ((*this)(mid) < y)
                lo = mid;
            else
                hi = mid;
        }
        return 0.5 * (lo + hi);
    }

private:
    static constexpr int kNodes = 4096;

    Smoothstep() {
        // cumulative integral of the bump by composite Simpson on the grid
        table_.assign(kNodes + 1, 0.0);
        norm_ = 1.0;
        auto bump = [](double u) {
            if (u <= 0.0 || u >= 1.0) return 0.0;
            return std::exp(-1.0 / (u * (1.0 - u)));
        };
        double h = 1.0 / kNodes;
        double acc = 0.0;
        for (int i = 0; i < kNodes; ++i) {
            double a = i * h, b = (i + 1) * h;
            acc += (b - a) / 6.0 * (bump(a) + 4.0 * bump(0.5 * (a + b)) + bump(b));
            table_[i + 1] = acc;
        }
        norm_ = acc;
        for (auto& v : table_) v /= norm_;
    }

    std::vector<double> table_;
    double norm_;
};

// eta conjugated onto each subinterval [i/(n+1), (i+1)/(n+1)]
inline double eta_n(int n, double t) {
    const Smoothstep& eta = Smoothstep::instance();
    double w = 1.0 / (n + 1);
    int i = std::min(static_cast<int>(t * (n + 1)), n);
    double local = (t - i * w) / w;
    return (i + eta(local)) * w;
}

inline double eta_n_deriv(int n, double t) {
    const Smoothstep& eta = Smoothstep::instance();
    double w = 1.0 / (n + 1);
    int i = std::min(static_cast<int>(t * (n + 1)), n);
    double local = (t - i * w) / w;
    return eta.deriv(local);
}

inline double eta_n_inverse(int n, double y) {
    const Smoothstep& eta = Smoothstep::instance();
    double w = 1.0 / (n + 1);
    int i = std::min(static_cast<int>(y * (n + 1)), n);
    double local = (y - i * w) / w;
    return (i + eta.inverse(local)) * w;
}

// the piecewise polynomial map I x I^n -> Delta^{n+1}; components of the
// image are time-ordered coordinates (t_1, ..., t_{n+1})
inline RVec frownie_eval(int n, double t, const RVec& s) {
    RVec out = RVec::Zero(n + 1);
    double w = 1.0 / (n + 1);
    int piece = std::min(static_cast<int>(t * (n + 1)), n);
    // base point: value at the left end of the current piece
    // piece 0 contributes t(n+1) * (1, s_1, s_1 s_2, ...)
    auto wvec = [&](int j) {  // component j (0-based) of (1, s_1, s_1 s_2, ...)
        double v = 1.0;
        for (int l = 0; l < j; ++l) v *= s[l];
        return v;
    };
    auto zvec = [&](int i, int j) {
        // z_i, 1-based piece index; first nonzero at component i (0-based i)
        if (j < i) return 0.0;
        double v = 1.0 - s[i - 1];
        for (int l = i; l < j; ++l) v *= s[l];
        return v;
    };
    if (piece == 0) {
        for (int j = 0; j <= n; ++j) out[j] = t * (n + 1) * wvec(j);
        return out;
    }
    double sc = t * (n + 1) - piece;
    for (int j = 0; j <= n; ++j) {
        double base = wvec(j);
        for (int i = 1; i < piece; ++i) base += zvec(i, j);
        out[j] = base + sc * zvec(piece, j);
    }
    return out;
}

// analytic jacobian of frownie with respect to (t, s_1..s_n)
inline Eigen::MatrixXd frownie_jacobian(int n, double t, const RVec& s) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n + 1, n + 1);
    int piece = std::min(static_cast<int>(t * (n + 1)), n);
    auto wvec = [&](int jj) {
        double v = 1.0;
        for (int l = 0; l < jj; ++l) v *= s[l];
        return v;
    };
    auto dwvec = [&](int jj, int k) {  // d w_j / d s_k, k 1-based
        if (k > jj) return 0.0;
        double v = 1.0;
        for (int l = 0; l < jj; ++l)
            if (l != k - 1) v *= s[l];
        return v;
    };
    auto zvec = [&](int i, int jj) {
        if (jj < i) return 0.0;
        double v = 1.0 - s[i - 1];
        for (int l = i; l < jj; ++l) v *= s[l];
        return v;
    };
    auto dzvec = [&](int i, int jj, int k) {  // d z_{i,j} / d s_k
        if (jj < i) return 0.0;
        if (k == i) {
            double v = -1.0;
            for (int l = i; l < jj; ++l) v *= s[l];
            return v;
        }
        if (k < i + 1 || k > jj) return 0.0;
        double v = 1.0 - s[i - 1];
        for (int l = i; l < jj; ++l)
            if (l != k - 1) v *= s[l];
        return v;
    };
    if (piece == 0) {
        for (int jj = 0; jj <= n; ++jj) {
            j(jj, 0) = (n + 1) * wvec(jj);
            for (int k = 1; k <= n; ++k) j(jj, k) = t * (n + 1) * dwvec(jj, k);
        }
        return j;
    }
    double sc = t * (n + 1) - piece;
    for (int jj = 0; jj <= n; ++jj) {
        j(jj, 0) = (n + 1) * zvec(piece, jj);
        for (int k = 1; k <= n; ++k) {
            double d = dwvec(jj, k);
            for (int i = 1; i < piece; ++i) d += dzvec(i, jj, k);
            d += sc * dzvec(piece, jj, k);
            j(jj, k) = d;
        }
    }
    return j;
}

// the admissible map: frownie reparametrized smoothly in t
inline RVec smiley_eval(int n, double t, const RVec& s) { return frownie_eval(n, eta_n(n, t), s); }

inline RVec smiley_eval(int n, const RVec& ts) {
    RVec s(n);
    for (int i = 0; i < n; ++i) s[i] = ts[i + 1];
    return smiley_eval(n, ts[0], s);
}

inline Eigen::MatrixXd smiley_jacobian(int n, double t, const RVec& s) {
    Eigen::MatrixXd j = frownie_jacobian(n, eta_n(n, t), s);
    j.col(0) *= eta_n_deriv(n, t);
    return j;
}

// ---------------------------------------------------------------------------
// axiom audit

struct AxiomReport {
    std::string axiom;
    int n = 0;
    double residual = 0.0;
};

// A2: integral compatibility against a battery of polynomial (n+1)-forms
inline AxiomReport audit_a2(int n, int order) {
    QuadRule q = gauss_legendre(order);
    double worst = 0.0;
    // battery: coefficient polynomials of degree <= 2 in single variables
    std::vector<Poly> coeffs;
    coeffs.push_back(Poly::constant(1.0, n + 1));
    for (int v = 0; v <= n; ++v)
        for (int e = 1; e <= 2; ++e) {
            Poly p;
            std::vector<int> exps(n + 1, 0);
            exps[v] = e;
            p.terms.push_back({Cplx(1.0), exps});
            coeffs.push_back(p);
        }
    std::vector<int> axes(n + 1);
    for (int i = 0; i <= n; ++i) axes[i] = i;
    for (const Poly& p : coeffs) {
        FormField omega = poly_form(n + 1, 1, 1, {{p, axes, CMat::Identity(1, 1)}});
        // pullback integral over I^{1+n}, piecewise in t over the smooth pieces
        double pull = 0.0;
        for (int piece = 0; piece <= n; ++piece) {
            double a = static_cast<double>(piece) / (n + 1), b = static_cast<double>(piece + 1) / (n + 1);
            pull += integrate_cube(
                        [&](const std::vector<double>& u) {
                            double t = a + (b - a) * u[0];
                            RVec s(n);
                            for (int i = 0; i < n; ++i) s[i] = u[i + 1];
                            Eigen::MatrixXd jac = smiley_jacobian(n, t, s);
                            std::vector<RVec> tg;
                            tg.push_back(jac.col(0) * (b - a));
                            for (int i = 0; i < n; ++i) tg.push_back(jac.col(i + 1));
                            RVec pt = smiley_eval(n, t, s);
                            return omega(pt, tg).real()(0, 0);
                        },
                        n + 1, q);
        }
        double direct = integrate_simplex(
            [&](const std::vector<double>& t) {
                RVec pt(n + 1);
                for (int i = 0; i <= n; ++i) pt[i] = t[i];
                std::vector<RVec> tg;
                for (int i = 0; i <= n; ++i) tg.push_back(RVec::Unit(n + 1, i));
                return omega(pt, tg).real()(0, 0);
            },
            n + 1, q);
        worst = std::max(worst, std::abs(pull - direct));
    }
    return {"A2", n, worst};
}

inline AxiomReport audit_a3(int n, int samples) {
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
        RVec s(n);
        for (int i = 0; i < n; ++i) s[i] = std::fmod(0.37 * (k + 1) + 0.59 * (i + 1), 1.0);
        RVec at0 = smiley_eval(n, 0.0, s);
        RVec at1 = smiley_eval(n, 1.0, s);
        worst = std::max(worst, at0.cwiseAbs().maxCoeff());
        worst = std::max(worst, (at1 - RVec::Ones(n + 1)).cwiseAbs().maxCoeff());
    }
    return {"A3", n, worst};
}

// rear-face reparametrization for A4 (the piecewise-linear map conjugated by
// the smoothsteps)
inline double a4_phi(int n, int i, double t) {
    double y = eta_n(n, t);
    double phi;
    if (y <= static_cast<double>(i) / (n + 1))
        phi = (n + 1.0) / n * y;
    else if (y <= static_cast<double>(i + 1) / (n + 1))
        phi = static_cast<double>(i) / n;
    else
        phi = (n + 1.0) / n * y - 1.0 / n;
    return eta_n_inverse(n - 1, phi);
}

// duplicate coordinate i (1-based) of a time-ordered simplex point
inline RVec q_face(int i, const RVec& t) {
    const int n = static_cast<int>(t.size());
    RVec out(n + 1);
    if (i == 0) {
        out[0] = 1.0;
        for (int j = 0; j < n; ++j) out[j + 1] = t[j];
        return out;
    }
    if (i == n + 1) {
        for (int j = 0; j < n; ++j) out[j] = t[j];
        out[n] = 0.0;
        return out;
    }
    for (int j = 0; j < i; ++j) out[j] = t[j];
    out[i] = t[i - 1];
    for (int j = i; j < n; ++j) out[j + 1] = t[j];
    return out;
}

inline AxiomReport audit_a4(int n, int grid) {
    double worst = 0.0;
    for (int i = 1; i <= n; ++i) {
        for (int gt = 0; gt <= grid; ++gt) {
            double t = static_cast<double>(gt) / grid;
            for (int gu = 0; gu <= grid; ++gu) {
                RVec s(n);
                for (int k = 0; k < n; ++k)
                    s[k] = std::fmod(0.17 + 0.61 * gu + 0.29 * k, 1.0);
                s[i - 1] = 1.0;  // rear face R_i
                RVec lhs = smiley_eval(n, t, s);
                RVec s_red(n - 1);
                for (int k = 0, c = 0; k < n; ++k)
                    if (k != i - 1) s_red[c++] = s[k];
                RVec inner = smiley_eval(n - 1, a4_phi(n, i, t), s_red);
                RVec rhs = q_face(i, inner);
                worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
            }
        }
    }
    return {"A4", n, worst};
}

inline AxiomReport audit_a5(int n, int grid) {
    double worst = 0.0;
    for (int i = 1; i <= n; ++i) {
        double cut = static_cast<double>(i) / (n + 1);
        for (int gt = 0; gt <= grid; ++gt) {
            for (int gu = 0; gu <= grid; ++gu) {
                RVec s(n);
                for (int k = 0; k < n; ++k)
                    s[k] = std::fmod(0.23 + 0.47 * gu + 0.31 * k, 1.0);
                s[i - 1] = 0.0;  // front face F_i
                // front part
                {
                    double t = cut * gt / grid;
                    RVec lhs = smiley_eval(n, t, s);
                    double psi_arg = eta_n(n, t) / cut;  // sc: [0, cut] -> I
                    double psi = eta_n_inverse(i - 1, psi_arg);
                    RVec s_front(i - 1);
                    for (int k = 0; k < i - 1; ++k) s_front[k] = s[k];
                    RVec inner = smiley_eval(i - 1, psi, s_front);
                    RVec rhs = RVec::Zero(n + 1);  // front-face embedding
                    for (int k = 0; k < i; ++k) rhs[k] = inner[k];
                    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
                }
                // rear part
                {
                    double t = cut + (1.0 - cut) * gt / grid;
                    RVec lhs = smiley_eval(n, t, s);
                    double psi_arg = (eta_n(n, t) - cut) / (1.0 - cut);
                    double psi = eta_n_inverse(n - i, psi_arg);
                    RVec s_rear(n - i);
                    for (int k = 0; k < n - i; ++k) s_rear[k] = s[i + k];
                    RVec inner = smiley_eval(n - i, psi, s_rear);
                    RVec rhs = RVec::Ones(n + 1);  // rear-face embedding
                    for (int k = 0; k < n - i + 1; ++k) rhs[i + k] = inner[k];
                    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
                }
            }
        }
    }
    return {"A5", n, worst};
}

}  // namespace curvo
