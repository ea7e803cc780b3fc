#ifndef CONFLUENT_QUADRATURE_HPP
#define CONFLUENT_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "core.hpp"
#include "integral_spec.hpp"

namespace confluent {

template <Real T = double>
struct QuadResult {
    T value{0};
    T abs_err_est{0};
    long n_evals = 0;
    bool converged = false;
    bool slow_decay = false;
};

inline constexpr long quad_max_evals = 1L << 21;

namespace detail {

template <Real T>
T de_t_cap() {
    using std::asinh;
    using std::log;
    // far enough that a folded endpoint power as weak as u^0.02 has decayed below eps
    return asinh(-log(eps_v<T>()) * 2 / pi_v<T>() / T(0.02));
}

// Trapezoidal rule in t on a doubly-exponentially decaying node function, with
// level doubling. node(t) returns integrand * dx/dt, or 0 outside the range.
template <Real T, class Node>
QuadResult<T> de_trapezoid(Node&& node, const T& abs_tol, const T& rel_tol, long max_evals) {
    using std::abs;
    using std::max;
    QuadResult<T> r;
    const T h0 = T(0.5);
    const T cap = de_t_cap<T>();
    const T tiny = eps_v<T>() / 8;

    T max_c = T(0);
    T abs_sum = T(0);
    T sum = node(T(0));
    ++r.n_evals;
    max_c = abs(sum);
    abs_sum = abs(sum);
    long j_hi = 0;
    long j_lo = 0;
    for (int dir : {1, -1}) {
        int quiet = 0;
        for (long j = 1;; ++j) {
            const T t = T(dir * j) * h0;
            if (abs(t) > cap) break;
            const T c = node(t);
            ++r.n_evals;
            sum += c;
            abs_sum += abs(c);
            max_c = max(max_c, abs(c));
            (dir > 0 ? j_hi : j_lo) = dir * j;
            if (abs(c) <= tiny * max_c) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        }
    }
    const T t_lo = T(j_lo) * h0;
    const T t_hi = T(j_hi) * h0;

    T h = h0;
    T estimate = h * sum;
    int stagnant = 0;
    for (int level = 1;; ++level) {
        const T hn = h / 2;
        T add = T(0);
        long count = 0;
        for (T t = t_lo + hn; t < t_hi; t += h) {
            const T c = node(t);
            add += c;
            abs_sum += abs(c);
            ++count;
        }
        r.n_evals += count;
        const T next = estimate / 2 + hn * add;
        const T diff = abs(next - estimate);
        estimate = next;
        h = hn;
        const T err = 4 * diff;
        const T floor = 16 * eps_v<T>() * h * abs_sum;
        const T target = max(abs_tol, rel_tol * abs(estimate));
        if (!finite(estimate)) break;
        if (level >= 3 && err <= target) {
            r.converged = true;
            r.abs_err_est = max(err, floor);
            if (r.abs_err_est > target) r.abs_err_est = target;
            break;
        }
        // successive differences below rounding: nothing more to gain
        if (level >= 3 && diff <= floor) {
            if (++stagnant >= 2) {
                r.abs_err_est = max(err, floor);
                r.converged = r.abs_err_est <= target;
                break;
            }
        } else {
            stagnant = 0;
        }
        if (r.n_evals + 2 * count > max_evals) {
            r.abs_err_est = err;
            break;
        }
    }
    r.value = estimate;
    if (!finite(r.value)) {
        r.converged = false;
        r.abs_err_est = std::numeric_limits<T>::infinity();
    }
    return r;
}

// int_a^b f(x, x - a, b - x) dx, tanh-sinh
template <Real T, class F>
QuadResult<T> tanh_sinh(F&& f, const T& a, const T& b, const T& abs_tol, const T& rel_tol,
                        long max_evals = quad_max_evals) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    using std::abs;
    const T len = b - a;
    const T half_pi = pi_v<T>() / 2;
    auto node = [&](const T& t) -> T {
        const T s = half_pi * sinh(t);
        const T q = exp(-2 * abs(s));
        const T d = len * q / (1 + q);
        if (d == T(0)) return T(0);
        const T w = len * pi_v<T>() * cosh(t) * q / ((1 + q) * (1 + q));
        T v;
        if (t < T(0)) v = f(T(a + d), d, T(len - d));
        else v = f(T(b - d), T(len - d), d);
        return v * w;
    };
    return de_trapezoid<T>(node, abs_tol, rel_tol, max_evals);
}

// int_a^inf f(u) du with u = a + exp(pi/2 sinh t)
template <Real T, class F>
QuadResult<T> exp_sinh(F&& f, const T& a, const T& abs_tol, const T& rel_tol, long max_evals = quad_max_evals) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    using std::abs;
    const T half_pi = pi_v<T>() / 2;
    auto node = [&](const T& t) -> T {
        const T e = exp(half_pi * sinh(t));
        if (!finite(e) || e == T(0)) return T(0);
        const T v = f(T(a + e)) * e * half_pi * cosh(t);
        if (!finite(v) && abs(t) > T(3)) return T(0);
        return v;
    };
    return de_trapezoid<T>(node, abs_tol, rel_tol, max_evals);
}

// int_0^inf u^sigma g(u) du with the power folded into the map u = exp(pi/2 sinh t)
template <Real T, class G>
QuadResult<T> exp_sinh_folded(G&& g, const T& sigma, const T& abs_tol, const T& rel_tol,
                              long max_evals = quad_max_evals) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    using std::abs;
    const T half_pi = pi_v<T>() / 2;
    auto node = [&](const T& t) -> T {
        const T s = half_pi * sinh(t);
        const T u = exp(s);
        if (!finite(u)) return T(0);
        const T gv = g(u);
        if (gv == T(0)) return T(0);
        const T v = exp((sigma + 1) * s) * gv * half_pi * cosh(t);
        if (!finite(v) && abs(t) > T(3)) return T(0);
        return v;
    };
    return de_trapezoid<T>(node, abs_tol, rel_tol, max_evals);
}

template <Real T>
QuadResult<T> combine(const QuadResult<T>& a, const QuadResult<T>& b) {
    QuadResult<T> r;
    r.value = a.value + b.value;
    r.abs_err_est = a.abs_err_est + b.abs_err_est;
    r.n_evals = a.n_evals + b.n_evals;
    r.converged = a.converged && b.converged;
    r.slow_decay = a.slow_decay || b.slow_decay;
    return r;
}

template <Real T>
QuadResult<T> scaled(QuadResult<T> r, const T& factor) {
    using std::abs;
    r.value *= factor;
    r.abs_err_est *= abs(factor);
    return r;
}

// Gauss-Legendre nodes/weights on [-1, 1]
template <Real T, int n>
const std::pair<std::vector<T>, std::vector<T>>& gauss_legendre_rule() {
    static const auto rule = [] {
        using std::abs;
        using std::cos;
        std::vector<T> xs(static_cast<std::size_t>(n)), ws(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            T z = cos(pi_v<T>() * (T(i) + T(0.75)) / (T(n) + T(0.5)));
            T dp{0};
            for (int it = 0; it < 100; ++it) {
                T p0 = T(1);
                T p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const T p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / T(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = T(n) * (z * p1 - p0) / (z * z - 1);
                const T dz = p1 / dp;
                z -= dz;
                if (abs(dz) <= 4 * eps_v<T>()) break;
            }
            {
                T p0 = T(1);
                T p1 = z;
                for (int k = 2; k <= n; ++k) {
                    const T p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / T(k);
                    p0 = p1;
                    p1 = p2;
                }
                dp = T(n) * (z * p1 - p0) / (z * z - 1);
            }
            xs[static_cast<std::size_t>(i)] = z;
            ws[static_cast<std::size_t>(i)] = 2 / ((1 - z * z) * dp * dp);
        }
        return std::make_pair(xs, ws);
    }();
    return rule;
}

}  // namespace detail

// ---------------------------------------------------------------------------

template <Real T>
QuadResult<T> integrate_semi_infinite(const IntegralSpec<T>& spec, const T& abs_tol, const T& rel_tol) {
    using std::abs;
    using std::min;
    if (spec.kind != IntegralKind::semi_infinite)
        throw DomainError("integrate_semi_infinite: spec is not semi_infinite");
    QuadResult<T> r;
    if (spec.essential_scale) {
        const T s = *spec.essential_scale;
        if (!(s > T(0))) throw DomainError("integrate_semi_infinite: essential scale must be > 0");
        const T u0 = min(T(1), s);
        const auto& f = spec.integrand;
        const QuadResult<T> right = detail::exp_sinh<T>(f, u0, abs_tol / 2, rel_tol);
        // u = s / w maps (0, u0] onto [s/u0, inf)
        auto g = [&](const T& w) -> T {
            const T u = s / w;
            if (u == T(0)) return T(0);
            return f(u) * s / (w * w);
        };
        const QuadResult<T> left = detail::exp_sinh<T>(g, T(s / u0), abs_tol / 2, rel_tol);
        r = detail::combine(left, right);
    } else {
        if (!(spec.endpoint_exponent > T(-1)))
            throw DomainError("integrate_semi_infinite: endpoint exponent must exceed -1");
        if (spec.smooth)
            r = detail::exp_sinh_folded<T>(spec.smooth, spec.endpoint_exponent, abs_tol, rel_tol);
        else
            r = detail::exp_sinh_folded<T>(spec.integrand, T(0), abs_tol, rel_tol);
    }
    const T target = std::max(abs_tol, rel_tol * abs(r.value));
    r.converged = r.converged && r.abs_err_est <= target;
    return detail::scaled(r, spec.prefactor);
}

namespace detail {

// One phase term of the t = tan v form:
//   int_0^inf t^p (1+t^2)^(-(p+q+2)/2) sin(w t + g atan t + phi) dt
template <Real T>
struct OscTerm {
    T p, q, w, g, phi;

    T amplitude(const T& t) const {
        using std::pow;
        return pow(t, p) * pow(T(1) + t * t, -(p + q + 2) / 2);
    }
    T phase(const T& t) const {
        using std::atan;
        return w * t + g * atan(t) + phi;
    }
    T value(const T& t) const {
        using std::sin;
        return amplitude(t) * sin(phase(t));
    }
    T dphase(const T& t) const { return w + g / (1 + t * t); }

    // t > lo with phase(t) = target, phase increasing on [lo, inf)
    T invert(const T& target, const T& lo) const {
        using std::abs;
        T a = lo;
        T step = pi_v<T>() / w;
        T b = lo + step;
        while (phase(b) < target) {
            a = b;
            step *= 2;
            b = a + step;
        }
        T t = (a + b) / 2;
        for (int it = 0; it < 200; ++it) {
            const T fv = phase(t) - target;
            if (fv > T(0)) b = t;
            else a = t;
            const T d = dphase(t);
            T tn = d > T(0) ? t - fv / d : (a + b) / 2;
            if (!(tn > a && tn < b)) tn = (a + b) / 2;
            if (abs(tn - t) <= 4 * eps_v<T>() * abs(tn) || b - a <= 4 * eps_v<T>() * abs(b)) {
                t = tn;
                break;
            }
            t = tn;
        }
        return t;
    }
};

template <Real T>
QuadResult<T> oscillatory_term(const OscTerm<T>& term, const T& abs_tol, const T& rel_tol) {
    using std::abs;
    using std::isfinite;
    using std::ceil;
    using std::max;
    using std::min;
    using std::sqrt;
    QuadResult<T> r;
    const T sub_rel = max(rel_tol / 100, 64 * eps_v<T>());
    const T sub_abs = abs_tol / 100;
    auto f = [&](const T& t, const T&, const T&) { return term.value(t); };

    // monotone phase beyond t_m
    const T t_m = sqrt(max(T(0), -term.g / term.w - 1));
    const T t_s = max(t_m, T(1));
    const T k0 = ceil(term.phase(t_s) / pi_v<T>());
    T z = term.invert(k0 * pi_v<T>(), t_s);
    if (term.phase(t_s) == k0 * pi_v<T>()) z = t_s;

    // head [0, z]: first piece carries the t^p endpoint
    QuadResult<T> head;
    {
        const T first = min(T(1), z);
        head = tanh_sinh<T>([&](const T&, const T& dl, const T&) { return term.value(dl); }, T(0), first,
                            sub_abs, sub_rel);
        T a = first;
        while (a < z) {
            const T b = min(z, a + T(1));
            head = combine(head, tanh_sinh<T>(f, a, b, sub_abs, sub_rel));
            a = b;
        }
    }

    // lobes between consecutive phase zeros, averaged partial sums
    constexpr int max_lobes = 4000;
    constexpr int max_avg = 40;
    std::vector<T> partials;
    T lobe_err = T(0);
    long evals = head.n_evals;
    T zk = z;
    T k = k0;
    T running = T(0);
    T prev_est = T(0);
    T err = std::numeric_limits<T>::infinity();
    int good = 0;
    bool converged = false;
    std::vector<T> work;
    for (int n = 0; n < max_lobes; ++n) {
        const T zn = term.invert((k + 1) * pi_v<T>(), zk);
        const QuadResult<T> lobe = tanh_sinh<T>(f, zk, zn, sub_abs / 10, sub_rel);
        evals += lobe.n_evals;
        lobe_err += lobe.abs_err_est;
        running += lobe.value;
        partials.push_back(running);
        zk = zn;
        k += 1;

        const int m = std::min<int>(static_cast<int>(partials.size()), max_avg);
        work.assign(partials.end() - m, partials.end());
        for (int level = 1; level < m; ++level)
            for (int i = 0; i + level < m; ++i) work[static_cast<std::size_t>(i)] =
                (work[static_cast<std::size_t>(i)] + work[static_cast<std::size_t>(i + 1)]) / 2;
        const T est = work[0];
        if (n >= 1) {
            err = 4 * abs(est - prev_est);
            const T target = max(abs_tol, rel_tol * abs(head.value + est));
            if (n >= 10 && err <= target) {
                if (++good >= 2) {
                    converged = true;
                    prev_est = est;
                    break;
                }
            } else {
                good = 0;
            }
        }
        prev_est = est;
    }
    r.value = head.value + prev_est;
    r.abs_err_est = err + head.abs_err_est + lobe_err;
    r.n_evals = evals;
    // single pieces may stall below their share; the accumulated estimate decides
    r.converged = converged && isfinite(r.value) && r.abs_err_est <= max(abs_tol, rel_tol * abs(r.value));
    return r;
}

// The same term integrated in v on [0, pi/2] when the frequency vanishes.
template <Real T>
QuadResult<T> zero_frequency_term(const IntegralSpec<T>& spec, const PhaseTerm<T>& ph, const T& abs_tol,
                                  const T& rel_tol) {
    using std::cos;
    using std::pow;
    using std::sin;
    auto f = [&](const T& v, const T& dl, const T& dr) {
        const T arg = ph.slope * v + ph.offset;
        const T tr = ph.trig == Trig::cos ? cos(arg) : sin(arg);
        return pow(sin(dl), spec.sin_power) * pow(sin(dr), spec.cos_power) * tr;
    };
    return scaled(tanh_sinh<T>(f, T(0), T(pi_v<T>() / 2), abs_tol, rel_tol), ph.weight);
}

}  // namespace detail

// Strategy: t = tan v turns each phase term into an algebraically decaying
// oscillatory integral on (0, inf), summed lobe by lobe between phase zeros.
template <Real T>
QuadResult<T> integrate_tan_oscillatory(const IntegralSpec<T>& spec, const T& abs_tol, const T& rel_tol) {
    using std::abs;
    if (spec.kind != IntegralKind::tan_oscillatory)
        throw DomainError("integrate_tan_oscillatory: spec is not tan_oscillatory");
    if (!(spec.sin_power > T(-2)))
        throw DomainError("integrate_tan_oscillatory: sin exponent must exceed -2");
    QuadResult<T> total;
    total.converged = true;
    const auto n_terms = static_cast<T>(std::max<std::size_t>(1, spec.phases.size()));
    for (const auto& ph : spec.phases) {
        if (ph.frequency < T(0)) throw DomainError("integrate_tan_oscillatory: frequency must be >= 0");
        QuadResult<T> r;
        if (ph.frequency == T(0)) {
            r = detail::zero_frequency_term(spec, ph, abs_tol / n_terms, rel_tol);
        } else {
            detail::OscTerm<T> term{spec.sin_power, spec.cos_power, ph.frequency, ph.slope,
                                    ph.offset + (ph.trig == Trig::cos ? pi_v<T>() / 2 : T(0))};
            r = detail::scaled(detail::oscillatory_term(term, abs_tol / n_terms, rel_tol), ph.weight);
        }
        total = detail::combine(total, r);
    }
    // terms that cancel or vanish cannot meet a relative share of their own
    total.converged = detail::finite(total.value) && total.abs_err_est <= std::max(abs_tol, rel_tol * abs(total.value));
    total.slow_decay = spec.sin_power + spec.cos_power + 2 <= T(1);
    return detail::scaled(total, spec.prefactor);
}

// Fallback: adaptive Gauss-Legendre directly in v on [0, pi/2).
template <Real T>
QuadResult<T> integrate_tan_oscillatory_direct(const IntegralSpec<T>& spec, const T& abs_tol, const T& rel_tol,
                                               long max_evals = quad_max_evals) {
    using std::abs;
    using std::max;
    if (spec.kind != IntegralKind::tan_oscillatory)
        throw DomainError("integrate_tan_oscillatory_direct: spec is not tan_oscillatory");
    const auto& [xs, ws] = detail::gauss_legendre_rule<T, 20>();
    const T half_pi = pi_v<T>() / 2;
    QuadResult<T> r;
    auto panel = [&](const T& a, const T& b) {
        const T mid = (a + b) / 2;
        const T rad = (b - a) / 2;
        T s{0};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const T off = rad * xs[i];
            const T v = mid + off;
            // pi/2 - v measured from the right end of the panel keeps precision near pi/2
            const T rest = (half_pi - b) + (rad - off);
            s += ws[i] * spec.oscillatory_v(v, rest);
        }
        r.n_evals += static_cast<long>(xs.size());
        return s * rad;
    };
    struct Piece {
        T a, b, whole;
        int depth;
    };
    std::vector<Piece> stack{{T(0), half_pi, panel(T(0), half_pi), 0}};
    T total{0};
    T err{0};
    bool ok = true;
    T scale = abs(stack.front().whole);
    while (!stack.empty()) {
        const Piece p = stack.back();
        stack.pop_back();
        const T m = (p.a + p.b) / 2;
        const T left = panel(p.a, m);
        const T right = panel(m, p.b);
        const T diff = abs(left + right - p.whole);
        scale = max(scale, abs(left + right));
        const T local = max(abs_tol, rel_tol * scale) * (p.b - p.a) / half_pi;
        if (diff <= local || p.depth >= 60 || r.n_evals > max_evals) {
            if (diff > local) ok = false;
            total += left + right;
            err += diff;
            continue;
        }
        stack.push_back({p.a, m, left, p.depth + 1});
        stack.push_back({m, p.b, right, p.depth + 1});
    }
    r.value = total;
    r.abs_err_est = err;
    r.converged = ok && err <= max(abs_tol, rel_tol * abs(total));
    r.slow_decay = spec.sin_power + spec.cos_power + 2 <= T(1);
    return detail::scaled(r, spec.prefactor);
}

template <Real T>
QuadResult<T> integrate(const IntegralSpec<T>& spec, const T& abs_tol, const T& rel_tol) {
    return spec.kind == IntegralKind::semi_infinite ? integrate_semi_infinite(spec, abs_tol, rel_tol)
                                                    : integrate_tan_oscillatory(spec, abs_tol, rel_tol);
}

}  // namespace confluent

#endif
