#pragma once

#include <gmpxx.h>

#include <string>

#include "dj/error.hpp"

namespace dj {

using Rat = mpq_class;

inline std::string rat_str(const Rat& q) { return q.get_str(); }

// Element of Q(i). Field operations are exact; division by zero throws.
struct GQ {
    Rat re{0};
    Rat im{0};

    GQ() = default;
    GQ(long n) : re(n) {}
    GQ(const Rat& r) : re(r) {}
    GQ(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

    static GQ i() { return GQ(Rat(0), Rat(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    GQ operator-() const { return GQ(-re, -im); }
    GQ operator+(const GQ& o) const { return GQ(re + o.re, im + o.im); }
    GQ operator-(const GQ& o) const { return GQ(re - o.re, im - o.im); }
    GQ operator*(const GQ& o) const { return GQ(re * o.re - im * o.im, re * o.im + im * o.re); }

    GQ inv() const {
        Rat n = re * re + im * im;
        if (n == 0) fail(Errc::DivisionByZero, "inverse of 0 in Q(i)");
        return GQ(re / n, -im / n);
    }
    GQ operator/(const GQ& o) const { return *this * o.inv(); }

    GQ& operator+=(const GQ& o) { re += o.re; im += o.im; return *this; }
    GQ& operator-=(const GQ& o) { re -= o.re; im -= o.im; return *this; }
    GQ& operator*=(const GQ& o) { *this = *this * o; return *this; }

    bool operator==(const GQ& o) const { return re == o.re && im == o.im; }
    bool operator!=(const GQ& o) const { return !(*this == o); }

    // Deterministic total order (used only for canonical printing/tie-breaks).
    bool operator<(const GQ& o) const {
        if (re != o.re) return re < o.re;
        return im < o.im;
    }
};

// Renders "0", "2", "-1/3", "i", "-i", "2*i", "1+i", "1-2/3*i".
inline std::string gq_str(const GQ& v) {
    if (v.is_zero()) return "0";
    std::string out;
    if (v.re != 0) out += rat_str(v.re);
    if (v.im != 0) {
        if (v.im == 1) out += out.empty() ? "i" : "+i";
        else if (v.im == -1) out += "-i";
        else {
            if (!out.empty() && v.im > 0) out += "+";
            out += rat_str(v.im) + "*i";
        }
    }
    return out;
}

} // namespace dj
