#ifndef CONFLUENT_TRANSFORMS_HPP
#define CONFLUENT_TRANSFORMS_HPP

#include <cmath>
#include <optional>

#include "core.hpp"
#include "series.hpp"

namespace confluent {

template <Real T = double>
struct PhiRewrite {
    T scale{1};
    PhiParams<T> q;
};

// phi(a, b, x) = e^x phi(b - a, b, -x)
template <Real T>
PhiRewrite<T> kummer_first(const PhiParams<T>& p) {
    using std::exp;
    p.validate();
    return {exp(p.x), PhiParams<T>{p.beta - p.alpha, p.beta, -p.x}};
}

enum class Branch { plus, minus };

// psi(a, x) = e^(-+2 sqrt x) phi(a - 1/2, 2a - 1, +-4 sqrt x)
template <Real T>
PhiRewrite<T> psi_as_phi(const T& alpha, const T& x, Branch sign = Branch::minus) {
    using std::exp;
    using std::sqrt;
    if (x < T(0)) throw DomainError("psi_as_phi: x must be >= 0");
    const T b = 2 * alpha - 1;
    if (near_nonpositive_integer(b))
        throw PoleError("psi_as_phi: 2 alpha - 1 must not be zero or a negative integer", to_double(b));
    const T s = sign == Branch::plus ? T(1) : T(-1);
    const T r = sqrt(x);
    return {exp(-2 * s * r), PhiParams<T>{alpha - T(0.5), b, 4 * s * r}};
}

template <Real T = double>
struct PsiRewrite {
    T scale{1};
    T psi_alpha{1};
    T psi_x{0};
};

// phi(a, 2a, x) = e^(x/2) psi(a + 1/2, x^2/16)
template <Real T>
PsiRewrite<T> phi_2a_as_psi(const T& alpha, const T& x) {
    using std::exp;
    const T a = alpha + T(0.5);
    if (near_nonpositive_integer(a))
        throw PoleError("phi_2a_as_psi: alpha + 1/2 must not be zero or a negative integer", to_double(a));
    return {exp(x / 2), a, x * x / 16};
}

template <Real T>
EvalResult<T> stable_phi(const PhiParams<T>& p, const SeriesControl<T>& c = {}) {
    using std::abs;
    p.validate();
    if (p.x < T(0) && p.beta - p.alpha > T(0)) {
        const PhiRewrite<T> k = kummer_first(p);
        EvalResult<T> r = phi(k.q, c);
        r.value *= k.scale;
        r.abs_err_est = r.abs_err_est * k.scale + eps_v<T>() * abs(r.value);
        r.method = Method::transformed_series;
        return r;
    }
    return phi(p, c);
}

// chi by the convergent two-phi form:
//   x^a Pi(b-a-1)/Pi(b-1) phi(a, a-b+1, x) + x^b Pi(a-b-1)/Pi(a-1) phi(b, b-a+1, x)
template <Real T>
EvalResult<T> chi_via_phi(const T& alpha, const T& beta, const T& x, const SeriesControl<T>& c = {}) {
    using std::abs;
    if (!(x > T(0))) throw DomainError("chi_via_phi: x must be > 0");
    const T d = alpha - beta;
    if (abs(d - round_half_away(d)) <= T(1e-6))
        throw IntegerDifferenceError("chi_via_phi: alpha - beta is (within 1e-6 of) an integer");
    EvalResult<T> out;
    out.method = Method::transformed_series;
    T magnitude = T(0);
    auto add = [&](const T& p1, const T& p2, const T& pi_num, const T& pi_den, const T& b) {
        LogProduct<T> pre;
        pre.mul_pow(x, p1).mul_pi(pi_num).div_pi(pi_den);
        if (pre.is_zero()) return;
        const EvalResult<T> f = phi(PhiParams<T>{p2, b, x}, c);
        const T term = pre.times(f.value);
        // prefactor rounding grows with the size of its logarithm
        const T pre_rel = eps_v<T>() * (abs(pre.log_abs()) + T(16));
        out.value += term;
        out.abs_err_est += abs(term) * pre_rel + abs(pre.times(f.abs_err_est));
        out.work += f.work;
        magnitude += abs(term);
    };
    add(alpha, alpha, T(beta - alpha - 1), T(beta - 1), T(alpha - beta + 1));
    add(beta, beta, T(alpha - beta - 1), T(alpha - 1), T(beta - alpha + 1));
    out.abs_err_est += 2 * eps_v<T>() * magnitude;
    return out;
}

// chi from whichever representation carries the smaller error estimate:
// the two-phi form (when alpha - beta is not an integer) or the midpoint of the
// optimal-truncation bracket (when alpha, beta > 0).
template <Real T>
EvalResult<T> chi_value(const T& alpha, const T& beta, const T& x, const SeriesControl<T>& c = {}) {
    using std::abs;
    if (!(x > T(0))) throw DomainError("chi_value: x must be > 0");
    std::optional<EvalResult<T>> best;
    const T d = alpha - beta;
    if (abs(d - round_half_away(d)) > T(1e-6)) best = chi_via_phi(alpha, beta, x, c);
    if (alpha > T(0) && beta > T(0)) {
        const ChiBracket<T> b = chi_eval_optimal(alpha, beta, x);
        if (!b.degenerate) {
            EvalResult<T> r;
            r.value = b.midpoint();
            r.abs_err_est = b.half_width() + T(b.k_opt + 2) * eps_v<T>() * abs(r.value);
            r.work = b.k_opt + 2;
            r.method = Method::asymptotic;
            if (!best || r.abs_err_est < best->abs_err_est) best = r;
        }
    }
    if (!best) throw DomainError("chi_value: no representation applies (alpha - beta integer and alpha or beta <= 0)");
    return *best;
}

}  // namespace confluent

#endif
