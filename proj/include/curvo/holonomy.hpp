#pragma once

// Parallel transport and holonomy forms along path families, computed as a
// joint fixed-step RK4 pass over the triangular system
//
//   d/dt PT_i(s,t)        = -A_i(gamma') PT_i
//   d/dt hol_{f_a..f_b}   = -A_a(gamma') hol_{f_a..f_b}
//                           + (-1)^{|f_a|} [i_t f_a ^ hol_{f_{a+1}..f_b}]
//
// with hol(t,t) = 0 and the empty chain standing for the parallel transport.
// The forms carry only parameter-space legs (their i_t, i_s contractions
// vanish), so the state holds, for every contiguous subchain, the values on
// every subset of the requested contraction directions.

#include "curvo/chart.hpp"

#include <map>
#include <vector>

namespace curvo {

struct HolonomyChain {
    std::vector<FormField> forms;        // f_1 .. f_m
    std::vector<FormField> connections;  // A_1 .. A_{m+1} (degree-1, matrix)
    std::vector<int> dims;               // fiber dims d_1 .. d_{m+1}
};

inline FormField zero_connection(int dim) { return zero_form(1, dim, dim); }

struct HolonomyRequest {
    HolonomyChain chain;
    PathFamily family;
    RVec params;                 // point of the parameter box
    std::vector<int> contraction;  // frame indices, ascending
    double s = 0.0, t = 1.0;
    int steps = 200;
};

namespace holodetail {

// sign of splitting the ordered set S into (I, S \ I), both ascending
inline int split_sign(unsigned mask_i, unsigned mask_s) {
    int sign = 1;
    // count inversions: elements of I that come after elements of S \ I
    for (unsigned a = 0; a < 32; ++a) {
        if (!(mask_i & (1u << a))) continue;
        for (unsigned b = 0; b < a; ++b)
            if ((mask_s & (1u << b)) && !(mask_i & (1u << b))) sign = -sign;
    }
    return sign;
}

inline int popcount(unsigned x) {
    int c = 0;
    while (x) {
        c += x & 1u;
        x >>= 1;
    }
    return c;
}

struct State {
    // key: (a, b, mask) with 1 <= a <= b+1 <= m+1; a == b+1 is the transport
    std::map<std::tuple<int, int, unsigned>, CMat> vals;
};

}  // namespace holodetail

// Joint solve; returns the values of every subchain. The full request value
// is hol_{f_1..f_m}(s,t) contracted with the chosen directions.
class HolonomySolver {
public:
    explicit HolonomySolver(const HolonomyRequest& req) : r_(req) {
        const int m = static_cast<int>(r_.chain.forms.size());
        nmask_ = 1u << r_.contraction.size();
        // initial values at t = s
        for (int a = 1; a <= m + 1; ++a) {
            st_.vals[{a, a - 1, 0u}] = CMat::Identity(r_.chain.dims[a - 1], r_.chain.dims[a - 1]);
            for (int b = a; b <= m; ++b) {
                int needed = 0;
                for (int i = a; i <= b; ++i) needed += r_.chain.forms[i - 1].form_degree - 1;
                for (unsigned mask = 0; mask < nmask_; ++mask)
                    if (holodetail::popcount(mask) == needed)
                        st_.vals[{a, b, mask}] = CMat::Zero(r_.chain.dims[a - 1], r_.chain.dims[b]);
            }
        }
    }

    void run() {
        const int steps = r_.steps;
        const double h = (r_.t - r_.s) / steps;
        for (int k = 0; k < steps; ++k) {
            double tau = r_.s + k * h;
            rk4_step(tau, h);
        }
    }

    const CMat& value(int a, int b, unsigned mask) const { return st_.vals.at({a, b, mask}); }

    CMat full_value() const {
        const int m = static_cast<int>(r_.chain.forms.size());
        if (m == 0) return value(1, 0, 0u);
        return value(1, m, nmask_ - 1);
    }

    CMat transport(int bundle) const { return value(bundle, bundle - 1, 0u); }

private:
    struct Snapshot {
        RVec point;
        RVec dt;
        std::vector<RVec> frame;
    };

    Snapshot snap(double tau) const {
        Snapshot s;
        s.point = r_.family.point(r_.params, tau);
        s.dt = r_.family.tangent_t(r_.params, tau);
        for (int j : r_.contraction) s.frame.push_back(r_.family.tangent_u(r_.params, tau, j));
        return s;
    }

    holodetail::State derivative(const holodetail::State& y, double tau) const {
        Snapshot sn = snap(tau);
        const int m = static_cast<int>(r_.chain.forms.size());
        holodetail::State d;
        // connection values at this instant
        std::vector<CMat> conn(m + 1);
        for (int i = 0; i <= m; ++i) conn[i] = r_.chain.connections[i](sn.point, {sn.dt});
        for (auto& [key, val] : y.vals) {
            auto [a, b, mask] = key;
            CMat der = -conn[a - 1] * val;
            if (b >= a) {
                const FormField& fa = r_.chain.forms[a - 1];
                const int k = fa.form_degree;
                if (k >= 1) {
                    double sgn_fa = (fa.form_degree % 2 == 0) ? 1.0 : -1.0;
                    // iterate subsets I of the mask with |I| = k - 1
                    for (unsigned sub = mask;; sub = (sub - 1) & mask) {
                        if (holodetail::popcount(sub) == k - 1) {
                            std::vector<RVec> tg{sn.dt};
                            for (unsigned bit = 0; bit < 32; ++bit)
                                if (sub & (1u << bit)) tg.push_back(sn.frame[bit]);
                            auto it = y.vals.find({a + 1, b, mask & ~sub});
                            if (it != y.vals.end()) {
                                double eps = holodetail::split_sign(sub, mask);
                                der += (sgn_fa * eps) * (fa(sn.point, tg) * it->second);
                            }
                        }
                        if (sub == 0) break;
                    }
                }
            }
            if (!der.allFinite()) throw NumericsError("non-finite value in the holonomy system");
            d.vals[key] = std::move(der);
        }
        return d;
    }

    static holodetail::State axpy(const holodetail::State& y, double c, const holodetail::State& d) {
        holodetail::State out = y;
        for (auto& [key, val] : d.vals) out.vals[key] += c * val;
        return out;
    }

    void rk4_step(double tau, double h) {
        holodetail::State k1 = derivative(st_, tau);
        holodetail::State k2 = derivative(axpy(st_, 0.5 * h, k1), tau + 0.5 * h);
        holodetail::State k3 = derivative(axpy(st_, 0.5 * h, k2), tau + 0.5 * h);
        holodetail::State k4 = derivative(axpy(st_, h, k3), tau + h);
        for (auto& [key, val] : st_.vals)
            val += (h / 6.0) * (k1.vals[key] + 2.0 * k2.vals[key] + 2.0 * k3.vals[key] + k4.vals[key]);
    }

    HolonomyRequest r_;
    holodetail::State st_;
    unsigned nmask_;
};

// parallel transport of a single connection along a path: solves
// dP/dtau = -A(gamma(tau))(gamma'(tau)) P with P(s) = id
inline CMat parallel_transport(const FormField& connection, const PathFamily& path, const RVec& params,
                               double s, double t, int steps) {
    HolonomyRequest req;
    req.chain.connections = {connection};
    req.chain.dims = {connection.rows};
    req.family = path;
    req.params = params;
    req.s = s;
    req.t = t;
    req.steps = steps;
    HolonomySolver solver(req);
    solver.run();
    return solver.full_value();
}

inline CMat holonomy_form(const HolonomyRequest& req) {
    HolonomySolver solver(req);
    solver.run();
    return solver.full_value();
}

// hol of the scalar 2-form h (trivial line bundle, zero connection),
// contracted with one frame direction
inline Cplx hol_h_value(const FormField& h, const PathFamily& family, const RVec& params,
                        int direction, double s, double t, int steps) {
    HolonomyRequest req;
    req.chain.forms = {h};
    req.chain.connections = {zero_connection(1), zero_connection(1)};
    req.chain.dims = {1, 1};
    req.family = family;
    req.params = params;
    req.contraction = {direction};
    req.s = s;
    req.t = t;
    req.steps = steps;
    return holonomy_form(req)(0, 0);
}

}  // namespace curvo
