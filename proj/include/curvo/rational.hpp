#pragma once

// Exact scalars for the symbolic side of the library: Gaussian rationals,
// i.e. numbers a + b*i with a, b arbitrary-precision rationals. All field
// operations are exact; nothing in this header ever rounds.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace curvo {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

// a + b*i with rational a, b. cpp_rational keeps itself in reduced form with
// positive denominator, so the invariants of the scalar type hold by
// construction.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long v) : re_(v) {}  // NOLINT: implicit by design
    GaussianRational(long num, long den) : re_(BigRational(num, den)) {
        if (den == 0) throw std::invalid_argument("zero denominator");
    }
    GaussianRational(BigRational re, BigRational im = 0)
        : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return GaussianRational(0, BigRational(1)); }
    GaussianRational(BigRational re, bool) = delete;

    const BigRational& real() const { return re_; }
    const BigRational& imag() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        BigRational r = re_ * o.re_ - im_ * o.im_;
        BigRational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw std::domain_error("division by zero");
        BigRational n = o.re_ * o.re_ + o.im_ * o.im_;
        BigRational r = (re_ * o.re_ + im_ * o.im_) / n;
        BigRational i = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational conj() const { return {re_, -im_}; }

    GaussianRational inv() const {
        GaussianRational one(1);
        return one / *this;
    }

    double to_double_real() const { return static_cast<double>(re_); }
    double to_double_imag() const { return static_cast<double>(im_); }

    std::string str() const {
        std::ostringstream os;
        os << *this;
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& q) {
        if (q.im_.is_zero()) return os << q.re_;
        if (q.re_.is_zero()) return os << q.im_ << "i";
        return os << q.re_ << (q.im_ < 0 ? "" : "+") << q.im_ << "i";
    }

private:
    BigRational re_ = 0;
    BigRational im_ = 0;
};

using Scalar = GaussianRational;

inline Scalar sign_pow(long e) { return (e % 2 == 0) ? Scalar(1) : Scalar(-1); }

}  // namespace curvo
