#ifndef CONFLUENT_CORE_HPP
#define CONFLUENT_CORE_HPP

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace confluent {

// Any floating-point-like type with std::numeric_limits and ADL math functions
// (std floating types, boost::multiprecision fixed-precision numbers, ...).
template <class T>
concept Real = std::numeric_limits<T>::is_specialized && !std::numeric_limits<T>::is_integer &&
               requires(T a, T b) {
                   { a + b };
                   { a * b };
                   { a / b };
                   { a < b } -> std::convertible_to<bool>;
               };

enum class Method { direct_series, transformed_series, asymptotic, closed_form, quadrature };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::direct_series: return "direct_series";
        case Method::transformed_series: return "transformed_series";
        case Method::asymptotic: return "asymptotic";
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
    }
    return "unknown";
}

template <Real T = double>
struct EvalResult {
    T value{0};
    T abs_err_est{0};
    long work = 0;
    Method method = Method::direct_series;
};

// ---------------------------------------------------------------------------
// errors

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class PoleError : public DomainError {
public:
    PoleError(const std::string& what, double at) : DomainError(what), at_(at) {}
    double at() const noexcept { return at_; }

private:
    double at_;
};

class IntegerDifferenceError : public DomainError {
public:
    using DomainError::DomainError;
};

class ZeroDenominatorError : public DomainError {
public:
    ZeroDenominatorError(const std::string& what, long index) : DomainError(what), index_(index) {}
    long index() const noexcept { return index_; }

private:
    long index_;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, long work)
        : std::runtime_error(what), best_(best_estimate), work_(work) {}
    double best_estimate() const noexcept { return best_; }
    long work() const noexcept { return work_; }

private:
    double best_;
    long work_;
};

template <Real T = double>
struct SeriesControl {
    T rel_tol = std::numeric_limits<T>::epsilon();
    long max_terms = 100000;

    void validate() const {
        if (!(rel_tol > T(0) && rel_tol < T(1)))
            throw DomainError("SeriesControl: rel_tol must lie in (0, 1)");
        if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
    }
};

// ---------------------------------------------------------------------------
// constants and elementary helpers

template <Real T>
double to_double(const T& v) {
    return static_cast<double>(v);
}

template <Real T>
const T& pi_v() {
    if constexpr (std::is_floating_point_v<T>) {
        static const T v = std::numbers::pi_v<T>;
        return v;
    } else {
        using std::atan;
        static const T v = 4 * atan(T(1));
        return v;
    }
}

template <Real T>
T eps_v() {
    return std::numeric_limits<T>::epsilon();
}

template <Real T>
T round_half_away(const T& z) {
    using std::floor;
    return z < T(0) ? -floor(-z + T(0.5)) : floor(z + T(0.5));
}

// True when z lies within tol of one of 0, -1, -2, ...
template <Real T>
bool near_nonpositive_integer(const T& z, double tol = 1e-12) {
    using std::abs;
    if (z > T(tol)) return false;
    return abs(z - round_half_away(z)) <= T(tol);
}

// sin(pi z) with exact argument reduction; exact zeros at integers.
template <Real T>
T sinpi(const T& z) {
    using std::sin;
    using std::cos;
    const T n = round_half_away(z);
    const T r = z - n;  // exact, |r| <= 1/2
    if (r == T(0)) return T(0);
    T s;
    const T ar = r < T(0) ? -r : r;
    if (ar == T(0.5)) s = T(1);
    else if (ar <= T(0.25)) s = sin(pi_v<T>() * ar);
    else s = cos(pi_v<T>() * (T(0.5) - ar));
    if (r < T(0)) s = -s;
    const long long parity = static_cast<long long>(to_double(n)) % 2;
    return parity == 0 ? s : -s;
}

// cos(pi z); exact zeros at half-integers.
template <Real T>
T cospi(const T& z) {
    using std::sin;
    using std::cos;
    const T n = round_half_away(z);
    const T r = z - n;
    const T ar = r < T(0) ? -r : r;
    T c;
    if (ar == T(0.5)) c = T(0);
    else if (ar <= T(0.25)) c = cos(pi_v<T>() * ar);
    else c = sin(pi_v<T>() * (T(0.5) - ar));
    const long long parity = static_cast<long long>(to_double(n)) % 2;
    return parity == 0 ? c : -c;
}

// ---------------------------------------------------------------------------
// Pi(z) = Gamma(z + 1)

namespace detail {

template <Real T>
bool finite(const T& v) {
    using std::isfinite;
    return isfinite(v);
}

inline constexpr std::pair<std::int64_t, std::int64_t> bernoulli_even[] = {
    {1, 6},
    {-1, 30},
    {1, 42},
    {-1, 30},
    {5, 66},
    {-691, 2730},
    {7, 6},
    {-3617, 510},
    {43867, 798},
    {-174611, 330},
    {854513, 138},
    {-236364091, 2730},
    {8553103, 6},
    {-23749461029LL, 870},
    {8615841276005LL, 14322},
    {-7709321041217LL, 510},
    {2577687858367LL, 6},
};

template <Real T>
double stirling_shift() {
    const int d = std::numeric_limits<T>::digits10;
    return d <= 20 ? 12.0 : 1.2 * d;
}

// log Gamma(w) for w >= stirling_shift
template <Real T>
T stirling_log_gamma(const T& w) {
    using std::log;
    using std::abs;
    static const T half_log_2pi = log(2 * pi_v<T>()) / 2;
    T sum = (w - T(0.5)) * log(w) - w + half_log_2pi;
    const T w2 = w * w;
    T wp = w;  // w^(2k-1)
    for (std::size_t k = 1; k <= std::size(bernoulli_even); ++k) {
        const auto [num, den] = bernoulli_even[k - 1];
        const T term = T(num) / (T(den) * T(2 * k) * T(2 * k - 1) * wp);
        sum += term;
        if (abs(term) <= eps_v<T>() * abs(sum) / 16) break;
        wp *= w2;
    }
    return sum;
}

// Gamma(w) and log|Gamma(w)| for w > 0
template <Real T>
T log_gamma_pos(const T& w) {
    using std::ceil;
    using std::log;
    if constexpr (std::is_floating_point_v<T>) {
        // libm gamma is ulp-accurate; lgamma writes the global signgam
        if (w < T(170)) return log(std::tgamma(w));
    }
    const T w0 = T(stirling_shift<T>());
    if (!(w < w0)) return stirling_log_gamma(w);
    const long n = static_cast<long>(to_double(ceil(w0 - w)));
    T prod = w;
    for (long i = 1; i < n; ++i) prod *= (w + T(i));
    return stirling_log_gamma(w + T(n)) - log(prod);
}

template <Real T>
T gamma_pos(const T& w) {
    using std::ceil;
    using std::exp;
    using std::floor;
    if constexpr (std::is_floating_point_v<T>) return std::tgamma(w);
    const T w0 = T(stirling_shift<T>());
    if (w == floor(w) && w <= T(40)) {
        T f = T(1);
        for (T k = T(2); k < w; k += T(1)) f *= k;
        return f;
    }
    if (!(w < w0)) return exp(stirling_log_gamma(w));
    const long n = static_cast<long>(to_double(ceil(w0 - w)));
    T prod = w;
    for (long i = 1; i < n; ++i) prod *= (w + T(i));
    return exp(stirling_log_gamma(w + T(n))) / prod;
}

template <Real T>
void throw_if_pole(const T& z, const char* who) {
    if (near_nonpositive_integer(T(z + T(1))))
        throw PoleError(std::string(who) + ": pole of Pi at z = " + std::to_string(to_double(z)),
                        to_double(z));
}

}  // namespace detail

template <Real T>
struct SignedLog {
    T log_abs{0};
    int sign = 1;  // -1, +1; 0 denotes an exact zero
};

template <Real T>
T pi_fn(const T& z) {
    detail::throw_if_pole(z, "pi_fn");
    const T w = z + T(1);
    if (!(w < T(0.5))) return detail::gamma_pos(w);
    // reflection: Gamma(w) Gamma(1 - w) = pi / sin(pi w)
    return pi_v<T>() / (sinpi(w) * detail::gamma_pos(T(T(1) - w)));
}

template <Real T>
T reciprocal_pi(const T& z) {
    const T w = z + T(1);
    if (near_nonpositive_integer(w)) return T(0);
    if (!(w < T(0.5))) {
        const T g = detail::gamma_pos(w);
        return T(1) / g;
    }
    return sinpi(w) * detail::gamma_pos(T(T(1) - w)) / pi_v<T>();
}

template <Real T>
SignedLog<T> log_pi_abs(const T& z) {
    using std::abs;
    using std::log;
    detail::throw_if_pole(z, "log_pi_abs");
    const T w = z + T(1);
    if (!(w < T(0.5))) return {detail::log_gamma_pos(w), 1};
    const T s = sinpi(w);
    return {log(pi_v<T>()) - log(abs(s)) - detail::log_gamma_pos(T(T(1) - w)), s < T(0) ? -1 : 1};
}

// Product of powers and Pi factors kept as (log magnitude, sign) so that ratios
// such as Pi(b - a - 1) / Pi(b - 1) * x^a never overflow in between.
template <Real T>
class LogProduct {
public:
    LogProduct& mul(const T& v) {
        using std::abs;
        using std::log;
        if (v == T(0)) sign_ = 0;
        if (sign_ == 0) return *this;
        if (v < T(0)) sign_ = -sign_;
        log_abs_ += log(abs(v));
        return *this;
    }
    // x^e for x > 0
    LogProduct& mul_pow(const T& x, const T& e) {
        using std::log;
        if (sign_ != 0) log_abs_ += e * log(x);
        return *this;
    }
    LogProduct& mul_pi(const T& z) {
        const SignedLog<T> l = log_pi_abs(z);
        if (sign_ != 0) {
            log_abs_ += l.log_abs;
            sign_ *= l.sign;
        }
        return *this;
    }
    // 1/Pi(z); exact zero at the poles of Pi
    LogProduct& div_pi(const T& z) {
        if (near_nonpositive_integer(T(z + T(1)))) {
            sign_ = 0;
            return *this;
        }
        const SignedLog<T> l = log_pi_abs(z);
        if (sign_ != 0) {
            log_abs_ -= l.log_abs;
            sign_ *= l.sign;
        }
        return *this;
    }

    bool is_zero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    const T& log_abs() const { return log_abs_; }

    T value() const {
        using std::exp;
        return sign_ == 0 ? T(0) : T(sign_) * exp(log_abs_);
    }
    // product * v without forming the product on its own
    T times(const T& v) const {
        using std::abs;
        using std::exp;
        using std::log;
        if (sign_ == 0 || v == T(0)) return T(0);
        const T s = v < T(0) ? T(-sign_) : T(sign_);
        return s * exp(log_abs_ + log(abs(v)));
    }

private:
    T log_abs_{0};
    int sign_ = 1;
};

// ---------------------------------------------------------------------------
// Finite-difference weights (Fornberg) for derivative `order` at x0 on nodes.

inline std::vector<double> fd_weights(const std::vector<double>& nodes, double x0, int order) {
    const std::size_t n = nodes.size();
    if (order < 0 || static_cast<std::size_t>(order) >= n)
        throw DomainError("fd_weights: need more nodes than the derivative order");
    const std::size_t m = static_cast<std::size_t>(order);
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = mn; k >= 1; --k)
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = mn; k >= 1; --k)
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][m];
    return w;
}

// Central stencil nodes -p..p scaled by h.
inline std::vector<double> central_nodes(int points, double h) {
    if (points < 3 || points % 2 == 0) throw DomainError("central_nodes: need an odd count >= 3");
    std::vector<double> nodes;
    for (int i = -(points / 2); i <= points / 2; ++i) nodes.push_back(i * h);
    return nodes;
}

}  // namespace confluent

#endif
