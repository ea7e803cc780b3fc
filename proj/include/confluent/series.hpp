#ifndef CONFLUENT_SERIES_HPP
#define CONFLUENT_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "core.hpp"

namespace confluent {

template <Real T = double>
struct PhiParams {
    T alpha{0};
    T beta{1};
    T x{0};

    void validate() const {
        if (!detail::finite(alpha) || !detail::finite(beta) || !detail::finite(x))
            throw DomainError("phi: parameters must be finite");
        if (near_nonpositive_integer(beta))
            throw PoleError("phi: beta must not be zero or a negative integer", to_double(beta));
    }
};

namespace detail {

// Sums 1 + t_1 + t_2 + ... where t_{n+1} = t_n * ratio(n).
template <Real T, class Ratio>
EvalResult<T> sum_by_ratio(Ratio&& ratio, const SeriesControl<T>& c, const char* who) {
    using std::abs;
    c.validate();
    T term = T(1);
    T sum = T(1);
    T weighted_abs = T(1);  // sum of (n+1)|t_n|, a bound on accumulated rounding
    int small_run = 0;
    long n = 0;
    while (n < c.max_terms) {
        term *= ratio(n);
        ++n;
        sum += term;
        weighted_abs += T(n + 1) * abs(term);
        if (abs(term) <= c.rel_tol * abs(sum)) {
            if (++small_run >= 3) break;
        } else {
            small_run = 0;
        }
    }
    if (small_run < 3)
        throw ConvergenceError(std::string(who) + ": max_terms reached before the stopping rule fired",
                               to_double(sum), n);
    using std::isfinite;
    if (!isfinite(sum))
        throw ConvergenceError(std::string(who) + ": sum overflowed", to_double(sum), n);
    // tail after the last included term, assuming the final ratio keeps decreasing
    const T r = abs(ratio(n));
    T tail = abs(term);
    if (r < T(1)) tail = std::max(tail, abs(term) * r / (T(1) - r));
    EvalResult<T> out;
    out.value = sum;
    out.abs_err_est = tail + 2 * eps_v<T>() * weighted_abs;
    out.work = n;
    out.method = Method::direct_series;
    return out;
}

}  // namespace detail

// phi(alpha, beta, x) = sum alpha^(k) x^k / (beta^(k) k!)
template <Real T>
EvalResult<T> phi(const PhiParams<T>& p, const SeriesControl<T>& c = {}) {
    p.validate();
    if (p.x == T(0) || p.alpha == T(0)) return {T(1), T(0), 0, Method::direct_series};
    return detail::sum_by_ratio<T>(
        [&](long n) {
            const T k = T(n);
            return (p.alpha + k) * p.x / ((p.beta + k) * (k + T(1)));
        },
        c, "phi");
}

// psi(alpha, x) = sum x^k / (alpha^(k) k!)
template <Real T>
EvalResult<T> psi(const T& alpha, const T& x, const SeriesControl<T>& c = {}) {
    if (near_nonpositive_integer(alpha))
        throw PoleError("psi: alpha must not be zero or a negative integer", to_double(alpha));
    if (x == T(0)) return {T(1), T(0), 0, Method::direct_series};
    return detail::sum_by_ratio<T>(
        [&](long n) {
            const T k = T(n);
            return x / ((alpha + k) * (k + T(1)));
        },
        c, "psi");
}

// ---------------------------------------------------------------------------
// chi(alpha, beta, x) = sum (-1)^k alpha^(k) beta^(k) / (k! x^k), semiconvergent

template <Real T = double>
struct ChiPartialSums {
    T alpha{0};
    T beta{0};
    T x{1};
    std::vector<T> terms;
    std::vector<T> partials;
    std::vector<T> log_abs_terms;  // -inf for exact zeros
    long k_opt = 0;
};

namespace detail {

template <Real T>
T chi_ratio(const T& alpha, const T& beta, const T& x, long k) {
    const T kk = T(k);
    return -(alpha + kk) * (beta + kk) / ((kk + T(1)) * x);
}

// Appends terms k = first..kmax by the running recurrence, moving to log space
// once the magnitude leaves [tiny, huge].
template <Real T>
void extend_chi(ChiPartialSums<T>& s, long kmax) {
    using std::abs;
    using std::exp;
    using std::log;
    const T huge = T(1e300);
    const T tiny = T(1e-300);
    if (s.terms.empty()) {
        s.terms.push_back(T(1));
        s.partials.push_back(T(1));
        s.log_abs_terms.push_back(T(0));
        s.k_opt = 0;
    }
    for (long k = static_cast<long>(s.terms.size()); k <= kmax; ++k) {
        const T prev = s.terms.back();
        const T prev_log = s.log_abs_terms.back();
        const T r = chi_ratio(s.alpha, s.beta, s.x, k - 1);
        T term;
        T lg;
        if (prev == T(0) && !(prev_log > -std::numeric_limits<T>::infinity())) {
            term = T(0);
            lg = -std::numeric_limits<T>::infinity();
        } else if (r == T(0)) {
            term = T(0);
            lg = -std::numeric_limits<T>::infinity();
        } else {
            lg = prev_log + log(abs(r));
            const bool neg = (prev < T(0)) != (r < T(0));
            if (abs(prev) < huge && abs(prev) > tiny) {
                term = prev * r;
            } else {
                term = exp(lg);
                if (neg) term = -term;
            }
        }
        s.terms.push_back(term);
        s.log_abs_terms.push_back(lg);
        s.partials.push_back(s.partials.back() + term);
        if (lg < s.log_abs_terms[static_cast<std::size_t>(s.k_opt)]) s.k_opt = k;
    }
}

}  // namespace detail

template <Real T>
ChiPartialSums<T> chi_partial(const T& alpha, const T& beta, const T& x, long kmax) {
    if (!(x > T(0))) throw DomainError("chi_partial: x must be > 0");
    if (kmax < 1) throw DomainError("chi_partial: kmax must be >= 1");
    ChiPartialSums<T> s;
    s.alpha = alpha;
    s.beta = beta;
    s.x = x;
    detail::extend_chi(s, kmax);
    return s;
}

template <Real T = double>
struct ChiBracket {
    T lower{0};
    T upper{0};
    long k_opt = 0;
    T bound_first_omitted{0};  // |t_(k_opt+1)|
    T bound_printed{0};        // (k_opt+1) |t_(k_opt+1)|, the displayed bound for k_opt+1 terms
    T estimate{0};             // partial sum through k_opt
    bool degenerate = false;
    std::string warning;

    T midpoint() const { return (lower + upper) / 2; }
    T half_width() const { return (upper - lower) / 2; }
};

// Optimal truncation of chi. Terms are generated until they grow monotonically
// (ratio >= 1 past the minimum of the ratio function).
template <Real T>
ChiBracket<T> chi_eval_optimal(const T& alpha, const T& beta, const T& x, long budget = 1000000) {
    using std::abs;
    if (!(alpha > T(0)) || !(beta > T(0)) || !(x > T(0)))
        throw DomainError("chi_eval_optimal: requires alpha > 0, beta > 0, x > 0");
    ChiPartialSums<T> s;
    s.alpha = alpha;
    s.beta = beta;
    s.x = x;
    ChiBracket<T> b;
    // ratio magnitude f(k) = (alpha+k)(beta+k)/((k+1)x)
    auto f = [&](long k) { return abs(detail::chi_ratio(alpha, beta, x, k)); };
    long k = 0;
    while (true) {
        if (k + 1 >= budget) {
            b.degenerate = true;
            b.warning = "term budget reached before the terms started growing";
            break;
        }
        if (f(k) >= T(1) && f(k + 1) >= f(k)) break;
        ++k;
    }
    detail::extend_chi(s, k + 1);
    const auto ko = static_cast<std::size_t>(s.k_opt);
    b.k_opt = s.k_opt;
    const T a0 = s.partials[ko];
    const T a1 = s.partials[ko + 1];
    // endpoints are rounded partial sums; widen by their accumulated rounding
    T mass = T(0);
    for (std::size_t i = 0; i <= ko + 1; ++i) mass += abs(s.terms[i]);
    const T pad = T(s.k_opt + 2) * eps_v<T>() * mass;
    b.lower = std::min(a0, a1) - pad;
    b.upper = std::max(a0, a1) + pad;
    b.estimate = a0;
    b.bound_first_omitted = abs(s.terms[ko + 1]);
    b.bound_printed = T(s.k_opt + 1) * b.bound_first_omitted;
    return b;
}

// ---------------------------------------------------------------------------
// Coefficient recurrences of the third-order equation
//   (alpha+k) A_k + gamma (k+1) A_{k+1} - (k+1)(k+2)(k+2-beta) A_{k+2} = 0
//   (alpha+beta+k) B_k + gamma (beta+k+1) B_{k+1} - (beta+k+1)(beta+k+2)(k+2) B_{k+2} = 0

enum class CoeffKind { A_seq, B_seq };

template <Real T = double>
struct CoeffSeq {
    CoeffKind kind = CoeffKind::A_seq;
    std::vector<T> coeffs;
    T alpha{0};
    T beta{0};
    T gamma{0};

    // largest |relation residual| over k (relative to the largest term in it)
    T max_relation_residual() const {
        using std::abs;
        T worst = T(0);
        const auto n = static_cast<long>(coeffs.size());
        for (long k = -1; k + 2 < n; ++k) {
            const T kk = T(k);
            auto at = [&](long i) { return i < 0 ? T(0) : coeffs[static_cast<std::size_t>(i)]; };
            T t0, t1, t2;
            if (kind == CoeffKind::A_seq) {
                if (k < 0) continue;
                t0 = (alpha + kk) * at(k);
                t1 = gamma * (kk + 1) * at(k + 1);
                t2 = -(kk + 1) * (kk + 2) * (kk + 2 - beta) * at(k + 2);
            } else {
                t0 = (alpha + beta + kk) * at(k);
                t1 = gamma * (beta + kk + 1) * at(k + 1);
                t2 = -(beta + kk + 1) * (beta + kk + 2) * (kk + 2) * at(k + 2);
                if (k < 0) {
                    // k = -1 reads gamma beta B_0 - beta (beta+1) B_1 = 0, divided by beta
                    t0 = T(0);
                    t1 = gamma * at(0);
                    t2 = -(beta + 1) * at(1);
                }
            }
            const T scale = std::max({abs(t0), abs(t1), abs(t2), std::numeric_limits<T>::min()});
            worst = std::max(worst, abs(t0 + t1 + t2) / scale);
        }
        return worst;
    }
};

template <Real T>
CoeffSeq<T> coeff_recurrence(CoeffKind kind, const T& alpha, const T& beta, const T& gamma,
                             const std::vector<T>& seeds, long n) {
    using std::abs;
    if (n < 0) throw DomainError("coeff_recurrence: n must be >= 0");
    CoeffSeq<T> out;
    out.kind = kind;
    out.alpha = alpha;
    out.beta = beta;
    out.gamma = gamma;
    auto& c = out.coeffs;
    auto zero = [](const T& d) { return abs(d) <= T(1e-300); };
    if (kind == CoeffKind::A_seq) {
        if (seeds.size() != 2) throw DomainError("coeff_recurrence: A_seq needs seeds (A_0, A_1)");
        c.push_back(seeds[0]);
        if (n >= 1) c.push_back(seeds[1]);
        for (long k = 0; k + 2 <= n; ++k) {
            const T kk = T(k);
            const T den = (kk + 1) * (kk + 2) * (kk + 2 - beta);
            if (zero(den))
                throw ZeroDenominatorError("coeff_recurrence: zero denominator at index " + std::to_string(k + 2),
                                           k + 2);
            c.push_back(((alpha + kk) * c[static_cast<std::size_t>(k)] +
                         gamma * (kk + 1) * c[static_cast<std::size_t>(k + 1)]) /
                        den);
        }
    } else {
        if (seeds.size() != 1) throw DomainError("coeff_recurrence: B_seq needs the seed B_0");
        c.push_back(seeds[0]);
        if (n >= 1) {
            const T den = beta + 1;
            if (zero(den)) throw ZeroDenominatorError("coeff_recurrence: zero denominator at index 1", 1);
            c.push_back(gamma * c[0] / den);
        }
        for (long k = 0; k + 2 <= n; ++k) {
            const T kk = T(k);
            const T den = (beta + kk + 1) * (beta + kk + 2) * (kk + 2);
            if (zero(den))
                throw ZeroDenominatorError("coeff_recurrence: zero denominator at index " + std::to_string(k + 2),
                                           k + 2);
            c.push_back(((alpha + beta + kk) * c[static_cast<std::size_t>(k)] +
                         gamma * (beta + kk + 1) * c[static_cast<std::size_t>(k + 1)]) /
                        den);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gauss series at argument 1 and at argument -1 (third parameter a - b + 1)

// F(c, a, b, 1) = sum c^(n) a^(n) / (b^(n) n!), convergent for b - a - c > 0
template <Real T>
T gauss_2f1_at_1(const T& c, const T& a, const T& b) {
    if (!(b - a - c > T(0)))
        throw DomainError("gauss_2f1_at_1: divergent unless b - a - c > 0");
    if (near_nonpositive_integer(b))
        throw PoleError("gauss_2f1_at_1: b must not be zero or a negative integer", to_double(b));
    if (a == T(0) || c == T(0)) return T(1);
    LogProduct<T> p;
    p.mul_pi(T(b - 1)).mul_pi(T(b - a - c - 1)).div_pi(T(b - a - 1)).div_pi(T(b - c - 1));
    return p.value();
}

// F(alpha, beta, alpha - beta + 1, -1)
template <Real T>
T kummer_2f1_at_minus1(const T& alpha, const T& beta) {
    using std::sqrt;
    if (beta == T(0) || alpha == T(0)) return T(1);
    if (near_nonpositive_integer(T(alpha - beta + 1)))
        throw PoleError("kummer_2f1_at_minus1: third parameter alpha - beta + 1 is a pole",
                        to_double(T(alpha - beta + 1)));
    LogProduct<T> p;
    p.mul_pow(T(2), -alpha).mul(sqrt(pi_v<T>())).mul_pi(T(alpha - beta));
    p.div_pi(T(alpha / 2 - beta)).div_pi(T((alpha - 1) / 2));
    return p.value();
}

}  // namespace confluent

#endif
