#pragma once

// Gauss-Legendre quadrature on intervals, tensor products over cubes, and
// simplex integration through the order-preserving cube parametrization
//   t_j = u_1 u_2 ... u_j ,   dt = prod_j u_j^{n-j} du
// of the time-ordered simplex 1 >= t_1 >= ... >= t_n >= 0.

#include <cmath>
#include <functional>
#include <vector>

namespace curvo {

struct QuadRule {
    std::vector<double> nodes;    // on [0,1]
    std::vector<double> weights;  // summing to 1
};

// nodes via Newton iteration on the Legendre polynomial; deterministic
inline QuadRule gauss_legendre(int order) {
    QuadRule r;
    r.nodes.resize(order);
    r.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[order - 1 - i] = 0.5 * (1.0 + x);
        r.weights[order - 1 - i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

// integral over [a,b]
template <class F>
auto integrate_interval(const F& f, double a, double b, const QuadRule& q)
    -> decltype(f(0.0) * 0.0) {
    auto acc = f(a + (b - a) * q.nodes[0]) * ((b - a) * q.weights[0]);
    for (std::size_t i = 1; i < q.nodes.size(); ++i)
        acc += f(a + (b - a) * q.nodes[i]) * ((b - a) * q.weights[i]);
    return acc;
}

// tensor-product integral over the unit cube [0,1]^n; f takes the node vector
template <class F>
auto integrate_cube(const F& f, int n, const QuadRule& q) -> decltype(f(std::vector<double>())) {
    std::vector<double> u(n, 0.0);
    using R = decltype(f(u));
    bool first = true;
    R acc{};
    std::vector<int> idx(n, 0);
    for (;;) {
        double w = 1.0;
        for (int j = 0; j < n; ++j) {
            u[j] = q.nodes[idx[j]];
            w *= q.weights[idx[j]];
        }
        if (first) {
            acc = f(u) * w;
            first = false;
        } else {
            acc += f(u) * w;
        }
        int j = n - 1;
        while (j >= 0 && ++idx[j] == static_cast<int>(q.nodes.size())) idx[j--] = 0;
        if (j < 0) break;
    }
    return acc;
}

// cube point -> time-ordered simplex point, with the jacobian factor
inline std::vector<double> cube_to_simplex(const std::vector<double>& u) {
    std::vector<double> t(u.size());
    double prod = 1.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        prod *= u[j];
        t[j] = prod;
    }
    return t;
}

inline double cube_to_simplex_jacobian(const std::vector<double>& u) {
    double j = 1.0;
    const int n = static_cast<int>(u.size());
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n - 1 - i; ++k) j *= u[i];
    return j;
}

// integral of a scalar/matrix function over the time-ordered simplex
template <class F>
auto integrate_simplex(const F& f, int n, const QuadRule& q) -> decltype(f(std::vector<double>())) {
    return integrate_cube(
        [&](const std::vector<double>& u) { return f(cube_to_simplex(u)) * cube_to_simplex_jacobian(u); },
        n, q);
}

inline double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

}  // namespace curvo
