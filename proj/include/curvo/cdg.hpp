#pragma once

// Interface for concrete curved dg-category instances. An instance owns a
// finite list of objects; morphisms are coefficient vectors against an
// explicit basis of each graded Hom space, so every identity of the theory
// becomes a finite exact computation.
//
// Hom spaces live in degrees 0..max_degree(); everything beyond the window is
// the zero space, and the operations treat it that way (the truncation is the
// quotient by morphisms of degree above the window).

#include "curvo/matrix.hpp"
#include "curvo/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvo {

struct CompositionError : std::runtime_error {
    explicit CompositionError(const std::string& m) : std::runtime_error(m) {}
};
struct SplitError : std::runtime_error {
    explicit SplitError(const std::string& m) : std::runtime_error(m) {}
};

struct Morphism {
    int src = 0, dst = 0, degree = 0;
    std::vector<Scalar> coeffs;

    bool is_zero() const {
        for (const auto& c : coeffs)
            if (!c.is_zero()) return false;
        return true;
    }
};

class CdgInstance {
public:
    virtual ~CdgInstance() = default;

    virtual std::size_t object_count() const = 0;
    virtual int zero_object() const = 0;
    virtual int max_degree() const = 0;
    virtual std::size_t hom_dim(int src, int dst, int degree) const = 0;

    virtual Morphism nabla(const Morphism& f) const = 0;
    virtual Morphism compose(const Morphism& g, const Morphism& f) const = 0;
    virtual Morphism identity(int obj) const = 0;
    virtual Morphism curvature(int obj) const = 0;

    // fibered structure: objects are families of vector spaces over a fixed
    // finite index set, and degree-0 morphisms are exactly the families of
    // fiberwise linear maps.
    virtual std::size_t fiber_count() const = 0;
    virtual std::size_t fiber_dim(int obj, std::size_t fiber) const = 0;
    virtual ExactMatrix deg0_block(const Morphism& f, std::size_t fiber) const = 0;
    virtual Morphism deg0_from_blocks(int src, int dst, const std::vector<ExactMatrix>& blocks) const = 0;

    // Object surgery for strictification / transfer. The returned blocks are
    // the canonical fiberwise maps: the inclusion new -> old for a subobject,
    // the projection old -> new for a quotient.
    struct SurgeryResult {
        int object;
        std::vector<ExactMatrix> blocks;
    };
    virtual SurgeryResult subobject(int obj, const std::vector<ExactMatrix>& inclusion_cols) = 0;
    virtual SurgeryResult quotient_object(int obj, const std::vector<ExactMatrix>& killed_cols) = 0;
    virtual int twist_object(int obj, const Morphism& a) = 0;

    Morphism zero_morphism(int src, int dst, int degree) const {
        Morphism m;
        m.src = src;
        m.dst = dst;
        m.degree = degree;
        m.coeffs.assign(hom_dim(src, dst, degree), Scalar(0));
        return m;
    }

    Morphism basis_morphism(int src, int dst, int degree, std::size_t index) const {
        Morphism m = zero_morphism(src, dst, degree);
        m.coeffs.at(index) = Scalar(1);
        return m;
    }

protected:
    void check_composable(const Morphism& g, const Morphism& f) const {
        if (f.dst != g.src) throw CompositionError("object mismatch in composition");
    }
};

inline Morphism operator+(Morphism a, const Morphism& b) {
    if (a.src != b.src || a.dst != b.dst || a.degree != b.degree)
        throw DimensionError("morphism sum: incompatible types");
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] += b.coeffs[i];
    return a;
}
inline Morphism operator-(Morphism a, const Morphism& b) {
    if (a.src != b.src || a.dst != b.dst || a.degree != b.degree)
        throw DimensionError("morphism difference: incompatible types");
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) a.coeffs[i] -= b.coeffs[i];
    return a;
}
inline Morphism operator*(const Scalar& s, Morphism m) {
    for (auto& c : m.coeffs) c *= s;
    return m;
}
inline Morphism operator-(Morphism m) {
    for (auto& c : m.coeffs) c = -c;
    return m;
}

// deterministic counter-based randomness; the same seed yields the same
// stream on every platform
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // small integers in [lo, hi]
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    Scalar rational(long span = 3, long max_den = 2) {
        long num = range(-span, span);
        long den = range(1, max_den);
        return Scalar(num, den);
    }
    Scalar gaussian_rational(long span = 3, long max_den = 2) {
        return rational(span, max_den) + Scalar(0, 1) * GaussianRational(rational(span, max_den));
    }
    double real(double lo = -1.0, double hi = 1.0) {
        return lo + (hi - lo) * static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

inline Morphism random_morphism(const CdgInstance& inst, int src, int dst, int degree, SplitMix& rng,
                                bool complex_entries = true) {
    Morphism m = inst.zero_morphism(src, dst, degree);
    for (auto& c : m.coeffs) c = complex_entries ? rng.gaussian_rational() : rng.rational();
    return m;
}

}  // namespace curvo
