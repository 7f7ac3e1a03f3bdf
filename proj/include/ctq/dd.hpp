// dd.hpp
// Minimal double-double arithmetic: an unevaluated sum of two doubles giving
// ~31 significant decimal digits. Used by the objective kernel, where
// P = p^2 - |N|^2 cancels to ~1e-32 at collapse bases and plain double noise
// (~1e-16 under the square root) would show up as ~1e-8 in the objective.
#pragma once

#include <cmath>

namespace ctq::dd {

struct Double2 {
    double hi = 0.0;
    double lo = 0.0;
};

inline Double2 two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// requires |a| >= |b|
inline Double2 quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline Double2 two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Double2 from(double a) { return {a, 0.0}; }

inline Double2 add(Double2 a, Double2 b) {
    Double2 s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Double2 add(Double2 a, double b) {
    Double2 s = two_sum(a.hi, b);
    s.lo += a.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Double2 neg(Double2 a) { return {-a.hi, -a.lo}; }

inline Double2 sub(Double2 a, Double2 b) { return add(a, neg(b)); }

inline Double2 mul(Double2 a, Double2 b) {
    Double2 p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline Double2 mul(Double2 a, double b) {
    Double2 p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

inline Double2 sqr(Double2 a) { return mul(a, a); }

inline double to_double(Double2 a) { return a.hi + a.lo; }

// Complex number with double-double components.
struct Complex2 {
    Double2 re, im;
};

inline Complex2 cadd(Complex2 a, Complex2 b) { return {add(a.re, b.re), add(a.im, b.im)}; }
inline Complex2 csub(Complex2 a, Complex2 b) { return {sub(a.re, b.re), sub(a.im, b.im)}; }

inline Complex2 cmul(Complex2 a, Complex2 b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)),
            add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline Complex2 cscale(Complex2 a, double s) { return {mul(a.re, s), mul(a.im, s)}; }

// |z|^2
inline Double2 cnorm(Complex2 a) { return add(sqr(a.re), sqr(a.im)); }

}  // namespace ctq::dd
