#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

namespace prolong {

// Exact element of Q(i).
struct Coeff {
    mpq_class re{0}, im{0};

    Coeff() = default;
    Coeff(long v) : re(v) {}
    Coeff(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

    static Coeff I() { return Coeff(0, 1); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    Coeff operator-() const { return Coeff(-re, -im); }
    Coeff& operator+=(const Coeff& o) { re += o.re; im += o.im; return *this; }
    Coeff& operator-=(const Coeff& o) { re -= o.re; im -= o.im; return *this; }
    Coeff& operator*=(const Coeff& o) {
        mpq_class r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = r;
        return *this;
    }
    Coeff inverse() const;
    Coeff& operator/=(const Coeff& o) { return *this *= o.inverse(); }

    friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
    friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
    friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
    friend Coeff operator/(Coeff a, const Coeff& b) { return a /= b; }
    friend bool operator==(const Coeff& a, const Coeff& b) { return a.re == b.re && a.im == b.im; }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
    std::string str() const;
};

}  // namespace prolong
