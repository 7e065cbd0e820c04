#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace nlpc {

/// Truncated Taylor series in one variable. Coefficient k holds f^(k)(x0)/k!,
/// so derivatives carry the 1/k! factor already.
template <std::size_t Order>
struct Jet {
    std::array<double, Order + 1> c{};

    Jet() = default;
    Jet(double value) { c[0] = value; }  // NOLINT(google-explicit-constructor)

    static Jet variable(double x0) {
        Jet j(x0);
        if constexpr (Order >= 1) j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }
    double operator[](std::size_t k) const { return c[k]; }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k <= Order; ++k) c[k] += o.c[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k <= Order; ++k) c[k] -= o.c[k];
        return *this;
    }
    Jet& operator*=(double s) {
        for (auto& v : c) v *= s;
        return *this;
    }
    Jet operator-() const {
        Jet r = *this;
        r *= -1.0;
        return r;
    }
};

template <std::size_t N> Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <std::size_t N> Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <std::size_t N> Jet<N> operator+(Jet<N> a, double s) { a.c[0] += s; return a; }
template <std::size_t N> Jet<N> operator+(double s, Jet<N> a) { a.c[0] += s; return a; }
template <std::size_t N> Jet<N> operator-(Jet<N> a, double s) { a.c[0] -= s; return a; }
template <std::size_t N> Jet<N> operator-(double s, const Jet<N>& a) { return (-a) + s; }
template <std::size_t N> Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <std::size_t N> Jet<N> operator*(double s, Jet<N> a) { return a *= s; }
template <std::size_t N> Jet<N> operator/(Jet<N> a, double s) { return a *= (1.0 / s); }

template <std::size_t N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    for (std::size_t k = 0; k <= N; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j <= k; ++j) s += a.c[j] * b.c[k - j];
        r.c[k] = s;
    }
    return r;
}

template <std::size_t N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
    Jet<N> r;
    for (std::size_t k = 0; k <= N; ++k) {
        double s = a.c[k];
        for (std::size_t j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
        r.c[k] = s / b.c[0];
    }
    return r;
}

template <std::size_t N>
Jet<N> operator/(double s, const Jet<N>& b) {
    return Jet<N>(s) / b;
}

template <std::size_t N>
Jet<N> sqrt(const Jet<N>& a) {
    Jet<N> r;
    r.c[0] = std::sqrt(a.c[0]);
    for (std::size_t k = 1; k <= N; ++k) {
        double s = a.c[k];
        for (std::size_t j = 1; j < k; ++j) s -= r.c[j] * r.c[k - j];
        r.c[k] = s / (2.0 * r.c[0]);
    }
    return r;
}

// Overloads so generic code can call value()/sqrt() on plain doubles too.
inline double value(double x) { return x; }
template <std::size_t N> double value(const Jet<N>& j) { return j.value(); }
using std::sqrt;

}  // namespace nlpc
