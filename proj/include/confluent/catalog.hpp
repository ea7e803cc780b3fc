#ifndef CONFLUENT_CATALOG_HPP
#define CONFLUENT_CATALOG_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "integral_spec.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "transforms.hpp"

namespace confluent {

class UnknownIdentityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum ParamUse : unsigned { use_alpha = 1u, use_beta = 2u, use_gamma = 4u, use_x = 8u };

// Tolerances used whenever an identity's right side is itself an integral.
inline constexpr double partner_abs_tol = 1e-14;
inline constexpr double partner_rel_tol = 1e-13;

namespace detail {

template <Real T>
void add_term(EvalResult<T>& acc, const LogProduct<T>& pre, const EvalResult<T>& f) {
    using std::abs;
    if (pre.is_zero()) return;
    const T term = pre.times(f.value);
    acc.value += term;
    acc.abs_err_est += abs(term) * eps_v<T>() * (abs(pre.log_abs()) + T(16)) + abs(pre.times(f.abs_err_est));
    acc.work += f.work;
}

template <Real T>
EvalResult<T> closed(const T& v, const T& rel = T(32)) {
    using std::abs;
    return {v, rel * eps_v<T>() * abs(v), 0, Method::closed_form};
}

inline double dist_to_int(double z) { return std::abs(z - std::round(z)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// closed forms shared by several identities

// Pi(a-1) psi(1-a, x) + Pi(-a-1) x^a psi(1+a, x)
template <Real T>
EvalResult<T> exp_tail_closed_form(const T& alpha, const T& x, const SeriesControl<T>& c = {}) {
    EvalResult<T> r{T(0), T(0), 0, Method::closed_form};
    LogProduct<T> p1;
    p1.mul_pi(T(alpha - 1));
    detail::add_term(r, p1, psi(T(1 - alpha), x, c));
    LogProduct<T> p2;
    p2.mul_pi(T(-alpha - 1)).mul_pow(x, alpha);
    detail::add_term(r, p2, psi(T(1 + alpha), x, c));
    return r;
}

// int_0^pi/2 cos^(a-1) v cos(x/2 tan v + b v) dv
template <Real T>
EvalResult<T> cos_family_closed_form(const T& alpha, const T& beta, const T& x, const SeriesControl<T>& c = {}) {
    using std::abs;
    using std::exp;
    EvalResult<T> r{T(0), T(0), 0, Method::closed_form};
    const T pi = pi_v<T>();
    LogProduct<T> a;
    a.mul(pi).mul_pi(T(alpha - 1)).mul_pow(T(2), -alpha).div_pi(T((alpha - beta - 1) / 2));
    a.div_pi(T((alpha + beta - 1) / 2)).mul(exp(-x / 2));
    if (!a.is_zero()) detail::add_term(r, a, stable_phi(PhiParams<T>{(beta - alpha + 1) / 2, 1 - alpha, x}, c));
    LogProduct<T> b;
    b.mul(-pi).mul(cospi(T((alpha - beta) / 2))).mul_pow(T(2), -alpha).mul(T(1) / sinpi(alpha));
    b.div_pi(alpha).mul_pow(x, alpha).mul(exp(-x / 2));
    if (!b.is_zero()) detail::add_term(r, b, stable_phi(PhiParams<T>{(beta + alpha + 1) / 2, 1 + alpha, x}, c));
    return r;
}

// ---------------------------------------------------------------------------
// integrand builders

// (x^a / Pi(a-1)) int_0^inf u^(a-1) e^(-ux) (1+u)^(-b) du
template <Real T>
IntegralSpec<T> laplace_spec(std::string id, const T& power, const T& damping, const T& x, const T& prefactor) {
    using std::exp;
    using std::pow;
    IntegralSpec<T> s;
    s.id = std::move(id);
    s.kind = IntegralKind::semi_infinite;
    s.prefactor = prefactor;
    s.endpoint_exponent = power;
    s.smooth = [x, damping](const T& u) { return exp(-u * x) * pow(T(1) + u, -damping); };
    s.integrand = [x, damping, power](const T& u) { return pow(u, power) * exp(-u * x) * pow(T(1) + u, -damping); };
    s.formula = "u^p e^(-ux) (1+u)^(-m)";
    return s;
}

template <Real T>
IntegralSpec<T> normalized_laplace_spec(std::string id, const T& alpha, const T& beta, const T& x) {
    using std::pow;
    return laplace_spec<T>(std::move(id), T(alpha - 1), beta, x, T(pow(x, alpha) * reciprocal_pi(T(alpha - 1))));
}

// sin^(a-1) v cos^(b-1) v * phases, on [0, pi/2)
template <Real T>
IntegralSpec<T> tan_spec(std::string id, const T& a, const T& b, std::vector<PhaseTerm<T>> phases, const T& prefactor) {
    IntegralSpec<T> s;
    s.id = std::move(id);
    s.kind = IntegralKind::tan_oscillatory;
    s.prefactor = prefactor;
    s.sin_power = a - 1;
    s.cos_power = b - 1;
    s.phases = std::move(phases);
    s.formula = "sin^(a-1) v cos^(b-1) v trig(c tan v + g v + o)";
    return s;
}

template <Real T>
PhaseTerm<T> phase(Trig trig, const T& frequency, const T& slope, const T& offset = T(0), const T& weight = T(1)) {
    return PhaseTerm<T>{weight, trig, frequency, slope, offset};
}

// ---------------------------------------------------------------------------
// registry

struct Variant {
    std::string label;
    std::function<IntegralSpec<double>(const Params&)> lhs;
    std::function<EvalResult<double>(const Params&, const SeriesControl<double>&)> rhs;
};

struct Identity {
    std::string id;
    std::string statement;
    unsigned uses = 0;
    IntegralKind kind = IntegralKind::semi_infinite;
    bool zero_truth = false;
    // empty when params satisfy the domain, else the violated predicate
    std::function<std::string(const Params&)> violation;
    std::vector<Variant> variants;
    int adopted = 0;
};

namespace detail {

using Checks = std::vector<std::pair<bool, const char*>>;

inline std::string first_violation(const Checks& checks) {
    for (const auto& [ok, what] : checks)
        if (!ok) return what;
    return {};
}

inline bool off_int(double z) { return dist_to_int(z) >= 1e-3; }

inline EvalResult<double> partner(const IntegralSpec<double>& spec) {
    const QuadResult<double> q = integrate(spec, partner_abs_tol, partner_rel_tol);
    return {q.value, q.abs_err_est, q.n_evals, Method::quadrature};
}

inline std::vector<Identity> build_registry() {
    const double pi = pi_v<double>();
    using C = Trig;
    std::vector<Identity> reg;
    auto single = [](std::function<IntegralSpec<double>(const Params&)> lhs,
                     std::function<EvalResult<double>(const Params&, const SeriesControl<double>&)> rhs) {
        return std::vector<Variant>{{"canonical", std::move(lhs), std::move(rhs)}};
    };

    // u^(a-1) e^(-u) e^(-x/u)
    auto eq12_lhs = [](const Params& p) {
        const double a = p.alpha;
        const double x = p.x;
        IntegralSpec<double> s;
        s.id = "eq12";
        s.kind = IntegralKind::semi_infinite;
        s.endpoint_exponent = a - 1;
        s.essential_scale = x;
        s.integrand = [a, x](double u) { return std::exp((a - 1) * std::log(u) - u - x / u); };
        s.formula = "u^(alpha-1) e^(-u) e^(-x/u)";
        return s;
    };
    auto eq12_rhs = [](const Params& p, const SeriesControl<double>& c) {
        return exp_tail_closed_form(p.alpha, p.x, c);
    };
    auto eq12_dom = [](const Params& p) {
        return first_violation({{p.x > 0, "x > 0"}, {off_int(p.alpha), "alpha at least 1e-3 from an integer"}});
    };
    reg.push_back({"eq12", "int u^(a-1) e^(-u) e^(-x/u) du = Pi(a-1) psi(1-a,x) + Pi(-a-1) x^a psi(1+a,x)",
                   use_alpha | use_x, IntegralKind::semi_infinite, false, eq12_dom, single(eq12_lhs, eq12_rhs)});

    auto lap_lhs = [](std::string id) {
        return [id](const Params& p) { return normalized_laplace_spec<double>(id, p.alpha, p.beta, p.x); };
    };
    reg.push_back({"eq13",
                   "(x^a/Pi(a-1)) int u^(a-1) e^(-ux) (1+u)^(-b) du = x^a Pi(b-a-1)/Pi(b-1) phi(a,a-b+1,x) + "
                   "x^b Pi(a-b-1)/Pi(a-1) phi(b,b-a+1,x)",
                   use_alpha | use_beta | use_x, IntegralKind::semi_infinite, false,
                   [](const Params& p) {
                       return first_violation({{p.x > 0, "x > 0"},
                                               {p.alpha > 0, "alpha > 0"},
                                               {off_int(p.alpha - p.beta), "alpha - beta at least 1e-3 from an integer"}});
                   },
                   single(lap_lhs("eq13"), [](const Params& p, const SeriesControl<double>& c) {
                       auto r = chi_via_phi(p.alpha, p.beta, p.x, c);
                       r.method = Method::closed_form;
                       return r;
                   })});
    reg.push_back({"eq14", "(x^a/Pi(a-1)) int u^(a-1) e^(-ux) (1+u)^(-b) du = (x^b/Pi(b-1)) int u^(b-1) e^(-ux) (1+u)^(-a) du",
                   use_alpha | use_beta | use_x, IntegralKind::semi_infinite, false,
                   [](const Params& p) {
                       return first_violation({{p.x > 0, "x > 0"}, {p.alpha > 0, "alpha > 0"}, {p.beta > 0, "beta > 0"}});
                   },
                   single(lap_lhs("eq14"), [](const Params& p, const SeriesControl<double>&) {
                       return partner(normalized_laplace_spec<double>("eq14", p.beta, p.alpha, p.x));
                   })});
    reg.push_back({"eq15", "(x^a/Pi(a-1)) int u^(a-1) e^(-ux) (1+u)^(-b) du = chi(a,b,x)",
                   use_alpha | use_beta | use_x, IntegralKind::semi_infinite, false,
                   [](const Params& p) {
                       return first_violation(
                           {{p.x > 0, "x > 0"},
                            {p.alpha > 0, "alpha > 0"},
                            {p.beta > 0 || off_int(p.alpha - p.beta), "beta > 0 or alpha - beta off the integers"}});
                   },
                   single(lap_lhs("eq15"), [](const Params& p, const SeriesControl<double>& c) {
                       return chi_value(p.alpha, p.beta, p.x, c);
                   })});
    reg.push_back({"eq17",
                   "2^(2a+1) sqrt(pi) x^a e^(-2 sqrt x)/Pi(a-1/2) int (u+u^2)^(a-1/2) e^(-4u sqrt x) du = "
                   "Pi(a-1) psi(1-a,x) + Pi(-a-1) x^a psi(1+a,x)",
                   use_alpha | use_x, IntegralKind::semi_infinite, false,
                   [](const Params& p) {
                       return first_violation({{p.x > 0, "x > 0"},
                                               {p.alpha > -0.5, "alpha > -1/2"},
                                               {off_int(p.alpha), "alpha at least 1e-3 from an integer"}});
                   },
                   single(
                       [](const Params& p) {
                           const double a = p.alpha;
                           const double r = std::sqrt(p.x);
                           const double pre = std::pow(2.0, 2 * a + 1) * std::sqrt(pi_v<double>()) * std::pow(p.x, a) *
                                              std::exp(-2 * r) * reciprocal_pi(a - 0.5);
                           IntegralSpec<double> s;
                           s.id = "eq17";
                           s.kind = IntegralKind::semi_infinite;
                           s.prefactor = pre;
                           s.endpoint_exponent = a - 0.5;
                           s.smooth = [a, r](double u) { return std::pow(1 + u, a - 0.5) * std::exp(-4 * u * r); };
                           s.integrand = [a, r](double u) { return std::pow(u + u * u, a - 0.5) * std::exp(-4 * u * r); };
                           s.formula = "(u+u^2)^(alpha-1/2) e^(-4u sqrt x)";
                           return s;
                       },
                       eq12_rhs)});
    reg.push_back({"eq18", "int e^(-u^2) e^(-x/u^2) du = (sqrt(pi)/2) e^(-2 sqrt x)", use_x,
                   IntegralKind::semi_infinite, false,
                   [](const Params& p) { return first_violation({{p.x > 0, "x > 0"}}); },
                   single(
                       [](const Params& p) {
                           const double x = p.x;
                           IntegralSpec<double> s;
                           s.id = "eq18";
                           s.kind = IntegralKind::semi_infinite;
                           s.essential_scale = std::sqrt(x);
                           s.integrand = [x](double u) { return std::exp(-u * u - x / (u * u)); };
                           s.formula = "e^(-u^2 - x/u^2)";
                           return s;
                       },
                       [](const Params& p, const SeriesControl<double>&) {
                           return closed(std::sqrt(pi_v<double>()) / 2 * std::exp(-2 * std::sqrt(p.x)));
                       })});
    reg.push_back({"laplace_cosine_lemma",
                   "int u^(l-1) e^(-u/2) cos(u tan(v)/2 + b v) du = 2^l Pi(l-1) cos^l v cos((l+b) v)  "
                   "[l = alpha, b = beta, v = gamma]",
                   use_alpha | use_beta | use_gamma, IntegralKind::semi_infinite, false,
                   [](const Params& p) {
                       return first_violation({{p.alpha > 0, "alpha (lambda) > 0"},
                                               {std::abs(p.gamma) < pi_v<double>() / 2, "|gamma (v)| < pi/2"}});
                   },
                   single(
                       [](const Params& p) {
                           const double l = p.alpha;
                           const double b = p.beta;
                           const double v = p.gamma;
                           const double tv = std::tan(v) / 2;
                           IntegralSpec<double> s;
                           s.id = "laplace_cosine_lemma";
                           s.kind = IntegralKind::semi_infinite;
                           s.endpoint_exponent = l - 1;
                           s.smooth = [=](double u) { return std::exp(-u / 2) * std::cos(u * tv + b * v); };
                           s.integrand = [=](double u) {
                               return std::pow(u, l - 1) * std::exp(-u / 2) * std::cos(u * tv + b * v);
                           };
                           s.formula = "u^(lambda-1) e^(-u/2) cos(u tan(v)/2 + beta v)";
                           return s;
                       },
                       [](const Params& p, const SeriesControl<double>&) {
                           const double l = p.alpha;
                           const double v = p.gamma;
                           return closed(std::pow(2.0, l) * pi_fn(l - 1) * std::pow(std::cos(v), l) *
                                         std::cos((l + p.beta) * v));
                       })});

    // cos^(a-1) family
    auto cos_dom = [](const Params& p) {
        return first_violation({{p.x > 0, "x > 0"}, {p.alpha > 0, "alpha > 0"}});
    };
    reg.push_back({"eq24",
                   "int cos^(a-1) v cos(x/2 tan v + b v) dv = pi Pi(a-1) e^(-x/2) phi((b-a+1)/2,1-a,x) / "
                   "(2^a Pi((a-b-1)/2) Pi((a+b-1)/2)) - pi cos((a-b)pi/2) x^a e^(-x/2) phi((b+a+1)/2,1+a,x) / "
                   "(2^a sin(a pi) Pi(a))",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, false,
                   [](const Params& p) {
                       return first_violation({{p.x > 0, "x > 0"},
                                               {p.alpha > 0, "alpha > 0"},
                                               {off_int(p.alpha), "alpha at least 1e-3 from an integer"}});
                   },
                   single(
                       [](const Params& p) {
                           return tan_spec<double>("eq24", 1, p.alpha, {phase(C::cos, p.x / 2, p.beta)}, 1);
                       },
                       [](const Params& p, const SeriesControl<double>& c) {
                           return cos_family_closed_form(p.alpha, p.beta, p.x, c);
                       })});
    reg.push_back({"eq25", "int cos^(a-1) v cos(x tan v - (a+1) v) dv = pi x^a e^(-x) / Pi(a)", use_alpha | use_x,
                   IntegralKind::tan_oscillatory, false, cos_dom,
                   single(
                       [](const Params& p) {
                           return tan_spec<double>("eq25", 1, p.alpha, {phase(C::cos, p.x, -(p.alpha + 1))}, 1);
                       },
                       [pi](const Params& p, const SeriesControl<double>&) {
                           return closed(pi * std::pow(p.x, p.alpha) * std::exp(-p.x) / pi_fn(p.alpha));
                       })});
    reg.push_back({"eq26", "int cos^(a-1) v cos(x tan v + (a+1) v) dv = 0", use_alpha | use_x,
                   IntegralKind::tan_oscillatory, true, cos_dom,
                   single(
                       [](const Params& p) {
                           return tan_spec<double>("eq26", 1, p.alpha, {phase(C::cos, p.x, p.alpha + 1)}, 1);
                       },
                       [](const Params&, const SeriesControl<double>&) { return closed(0.0); })});
    reg.push_back({"eq27", "int cos^(a-1) v cos(x tan v) cos((a+1) v) dv = pi x^a e^(-x) / (2 Pi(a))",
                   use_alpha | use_x, IntegralKind::tan_oscillatory, false, cos_dom,
                   single(
                       [](const Params& p) {
                           const double s = p.alpha + 1;
                           return tan_spec<double>(
                               "eq27", 1, p.alpha, {phase(C::cos, p.x, s, 0.0, 0.5), phase(C::cos, p.x, -s, 0.0, 0.5)}, 1);
                       },
                       [pi](const Params& p, const SeriesControl<double>&) {
                           return closed(pi * std::pow(p.x, p.alpha) * std::exp(-p.x) / (2 * pi_fn(p.alpha)));
                       })});
    reg.push_back({"eq28", "int cos^(a-1) v sin(x tan v) sin((a+1) v) dv = pi x^a e^(-x) / (2 Pi(a))",
                   use_alpha | use_x, IntegralKind::tan_oscillatory, false, cos_dom,
                   single(
                       [](const Params& p) {
                           const double s = p.alpha + 1;
                           return tan_spec<double>(
                               "eq28", 1, p.alpha, {phase(C::cos, p.x, -s, 0.0, 0.5), phase(C::cos, p.x, s, 0.0, -0.5)}, 1);
                       },
                       [pi](const Params& p, const SeriesControl<double>&) {
                           return closed(pi * std::pow(p.x, p.alpha) * std::exp(-p.x) / (2 * pi_fn(p.alpha)));
                       })});
    reg.push_back({"eq29", "int cos^(a-1) v cos(x tan v + (a-1) v) dv = pi e^(-x) / 2^a", use_alpha | use_x,
                   IntegralKind::tan_oscillatory, false, cos_dom,
                   single(
                       [](const Params& p) {
                           return tan_spec<double>("eq29", 1, p.alpha, {phase(C::cos, p.x, p.alpha - 1)}, 1);
                       },
                       [pi](const Params& p, const SeriesControl<double>&) {
                           return closed(pi * std::exp(-p.x) * std::pow(2.0, -p.alpha));
                       })});
    reg.push_back({"eq31",
                   "(2 Pi(a-1/2)/sqrt(pi)) int cos^(2a-1) v cos(2 sqrt(x) tan v) dv = "
                   "Pi(a-1) psi(1-a,x) + Pi(-a-1) x^a psi(1+a,x)",
                   use_alpha | use_x, IntegralKind::tan_oscillatory, false,
                   [](const Params& p) {
                       return first_violation({{p.x > 0, "x > 0"},
                                               {p.alpha > 0, "alpha > 0"},
                                               {off_int(p.alpha), "alpha at least 1e-3 from an integer"}});
                   },
                   single(
                       [](const Params& p) {
                           const double pre = 2 * pi_fn(p.alpha - 0.5) / std::sqrt(pi_v<double>());
                           return tan_spec<double>("eq31", 1, 2 * p.alpha, {phase(C::cos, 2 * std::sqrt(p.x), 0.0)}, pre);
                       },
                       eq12_rhs)});

    // Laplace integral against the cos family with shifted parameters
    auto half_tan = [](const Params& p, double pre) {
        const double a = p.alpha;
        const double b = p.beta;
        return tan_spec<double>("eq33", 1, a - b, {phase(C::cos, p.x / 2, a + b - 1)}, pre * std::pow(2.0, a - b - 1));
    };
    {
        Identity id{"eq33",
                    "int u^(b-1) e^(-ux) (1+u)^(-a) du = (2 e^(x/2) / sin(b pi)) int (2 cos v)^(a-b-1) "
                    "cos(x/2 tan v + (a+b-1) v) dv",
                    use_alpha | use_beta | use_x,
                    IntegralKind::semi_infinite,
                    false,
                    [](const Params& p) {
                        return first_violation({{p.x > 0, "x > 0"},
                                                {p.beta > 0, "beta > 0"},
                                                {p.alpha - p.beta > 0, "alpha - beta > 0"},
                                                {off_int(p.beta), "beta at least 1e-3 from an integer"}});
                    },
                    {},
                    2};
        for (int e = 0; e < 2; ++e) {
            for (int k = 0; k < 2; ++k) {
                const std::string label = std::string(e == 0 ? "u^b" : "u^(b-1)") + ", " +
                                          (k == 0 ? "2 e^(x/2)/sin(b pi)" : "e^x/sin(b pi)");
                id.variants.push_back(
                    {label,
                     [e](const Params& p) {
                         return laplace_spec<double>("eq33", e == 0 ? p.beta : p.beta - 1, p.alpha, p.x, 1.0);
                     },
                     [k, half_tan](const Params& p, const SeriesControl<double>&) {
                         const double scale = (k == 0 ? 2 * std::exp(p.x / 2) : std::exp(p.x)) / sinpi(p.beta);
                         return partner(half_tan(p, scale));
                     }});
            }
        }
        reg.push_back(std::move(id));
    }
    reg.push_back({"eq34",
                   "(2 Pi(-b) e^(x/2) x^b / pi) int (2 cos v)^(a-b-1) cos(x/2 tan v + (a+b-1) v) dv = chi(a,b,x)",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, false,
                   [](const Params& p) {
                       return first_violation({{p.x > 0, "x > 0"},
                                               {p.beta > 0, "beta > 0"},
                                               {p.alpha - p.beta > 0, "alpha - beta > 0"},
                                               {off_int(p.beta), "beta at least 1e-3 from an integer"}});
                   },
                   single(
                       [half_tan](const Params& p) {
                           auto s = half_tan(p, 2 * pi_fn(-p.beta) * std::exp(p.x / 2) * std::pow(p.x, p.beta) /
                                                    pi_v<double>());
                           s.id = "eq34";
                           return s;
                       },
                       [](const Params& p, const SeriesControl<double>& c) {
                           return chi_value(p.alpha, p.beta, p.x, c);
                       })});

    // sin^(a-1) cos^(b-1) family
    auto sc_dom = [](const Params& p) {
        return first_violation({{p.x > 0, "x > 0"},
                                {p.alpha > 0, "alpha > 0"},
                                {p.beta > 0, "beta > 0"},
                                {off_int(p.beta), "beta at least 1e-3 from an integer"},
                                {off_int(p.alpha + p.beta) || p.alpha + p.beta > 0, "alpha + beta not a pole"}});
    };
    auto sc = [](const std::string& id, const Params& p, std::vector<PhaseTerm<double>> ph, double pre = 1) {
        return tan_spec<double>(id, p.alpha, p.beta, std::move(ph), pre);
    };
    auto eq42_lhs = [sc](const Params& p) { return sc("eq42", p, {phase(C::cos, p.x, p.alpha + p.beta)}); };
    auto eq42_rhs = [](bool pi_alpha) {
        return [pi_alpha](const Params& p, const SeriesControl<double>& c) {
            const double a = p.alpha;
            const double b = p.beta;
            EvalResult<double> r{0, 0, 0, Method::closed_form};
            LogProduct<double> p1;
            p1.mul(cospi(a / 2)).mul_pi(pi_alpha ? a : a - 1).mul_pi(b - 1).div_pi(a + b - 1);
            if (!p1.is_zero()) add_term(r, p1, stable_phi(PhiParams<double>{a, 1 - b, p.x}, c));
            LogProduct<double> p2;
            p2.mul_pow(p.x, b).mul(cospi(a / 2)).mul_pi(-b - 1);
            if (!p2.is_zero()) add_term(r, p2, stable_phi(PhiParams<double>{a + b, 1 + b, p.x}, c));
            return r;
        };
    };
    reg.push_back({"eq42",
                   "int sin^(a-1) v cos^(b-1) v cos(x tan v + (a+b) v) dv = cos(a pi/2) Pi(a-1) Pi(b-1)/Pi(a+b-1) "
                   "phi(a,1-b,x) + x^b cos(a pi/2) Pi(-b-1) phi(a+b,1+b,x)",
                   use_alpha | use_beta | use_x,
                   IntegralKind::tan_oscillatory,
                   false,
                   sc_dom,
                   {{"Pi(a-1)", eq42_lhs, eq42_rhs(false)}, {"Pi(a)", eq42_lhs, eq42_rhs(true)}},
                   0});
    reg.push_back({"eq43",
                   "cos(a pi/2) int sin^(a-1) v cos^(b-1) v sin(x tan v + (a+b) v) dv = sin(a pi/2) int sin^(a-1) v "
                   "cos^(b-1) v cos(x tan v + (a+b) v) dv",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, false, sc_dom,
                   single(
                       [sc](const Params& p) {
                           return sc("eq43", p, {phase(C::sin, p.x, p.alpha + p.beta)}, cospi(p.alpha / 2));
                       },
                       [sc](const Params& p, const SeriesControl<double>&) {
                           return partner(sc("eq43", p, {phase(C::cos, p.x, p.alpha + p.beta)}, sinpi(p.alpha / 2)));
                       })});
    reg.push_back({"eq44", "int sin^(a-1) v cos^(b-1) v sin(x tan v + (a+b) v - a pi/2) dv = 0",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, true, sc_dom,
                   single(
                       [sc, pi](const Params& p) {
                           return sc("eq44", p, {phase(C::sin, p.x, p.alpha + p.beta, -p.alpha * pi / 2)});
                       },
                       [](const Params&, const SeriesControl<double>&) { return closed(0.0); })});
    reg.push_back({"eq45", "int cos^(b-1) v sin(x tan v + b v) / sin v dv = pi/2", use_beta | use_x,
                   IntegralKind::tan_oscillatory, false,
                   [](const Params& p) { return first_violation({{p.x > 0, "x > 0"}, {p.beta > 0, "beta > 0"}}); },
                   single(
                       [](const Params& p) {
                           return tan_spec<double>("eq45", 0, p.beta, {phase(C::sin, p.x, p.beta)}, 1);
                       },
                       [pi](const Params&, const SeriesControl<double>&) { return closed(pi / 2); })});
    {
        auto lhs46 = [](bool pi_alpha) {
            return [pi_alpha](const Params& p) {
                const double a = p.alpha;
                const double b = p.beta;
                LogProduct<double> pre;
                pre.mul(cospi(a / 2)).mul_pi(pi_alpha ? a : a - 1).div_pi(a + b - 1).mul_pow(p.x, b);
                return laplace_spec<double>("eq46", a + b - 1, a, p.x, pre.value());
            };
        };
        auto rhs46 = [eq42_lhs](const Params& p, const SeriesControl<double>&) { return partner(eq42_lhs(p)); };
        reg.push_back({"eq46",
                       "cos(a pi/2) Pi(a-1)/Pi(a+b-1) x^b int u^(a+b-1) e^(-ux) (1+u)^(-a) du = int sin^(a-1) v "
                       "cos^(b-1) v cos(x tan v + (a+b) v) dv",
                       use_alpha | use_beta | use_x,
                       IntegralKind::semi_infinite,
                       false,
                       sc_dom,
                       {{"Pi(a-1)", lhs46(false), rhs46}, {"Pi(a)", lhs46(true), rhs46}},
                       0});
    }
    auto neg_family = [](bool sine) {
        return [sine](const Params& p, const SeriesControl<double>& c) {
            const double a = p.alpha;
            const double b = p.beta;
            EvalResult<double> r{0, 0, 0, Method::closed_form};
            LogProduct<double> p1;
            p1.mul(sine ? -sinpi(a / 2) : cospi(a / 2)).mul_pi(a - 1).mul_pi(b - 1).div_pi(a + b - 1);
            if (!p1.is_zero()) add_term(r, p1, stable_phi(PhiParams<double>{a, 1 - b, -p.x}, c));
            LogProduct<double> p2;
            p2.mul_pow(p.x, b).mul(sine ? -sinpi(a / 2 + b) : cospi(a / 2 + b)).mul_pi(-b - 1);
            if (!p2.is_zero()) add_term(r, p2, stable_phi(PhiParams<double>{a + b, 1 + b, -p.x}, c));
            return r;
        };
    };
    reg.push_back({"eq47",
                   "int sin^(a-1) v cos^(b-1) v cos(x tan v - (a+b) v) dv = cos(a pi/2) Pi(a-1) Pi(b-1)/Pi(a+b-1) "
                   "phi(a,1-b,-x) + x^b cos((a/2+b) pi) Pi(-b-1) phi(a+b,1+b,-x)",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, false, sc_dom,
                   single([sc](const Params& p) { return sc("eq47", p, {phase(C::cos, p.x, -(p.alpha + p.beta))}); },
                          neg_family(false))});
    reg.push_back({"eq48",
                   "int sin^(a-1) v cos^(b-1) v sin(x tan v - (a+b) v) dv = -sin(a pi/2) Pi(a-1) Pi(b-1)/Pi(a+b-1) "
                   "phi(a,1-b,-x) - x^b sin((a/2+b) pi) Pi(-b-1) phi(a+b,1+b,-x)",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, false, sc_dom,
                   single([sc](const Params& p) { return sc("eq48", p, {phase(C::sin, p.x, -(p.alpha + p.beta))}); },
                          neg_family(true))});
    reg.push_back({"eq49",
                   "int sin^(a-1) v cos^(b-1) v sin(x tan v - (a+b) v + (a/2+b) pi) dv = "
                   "pi Pi(a-1) phi(a,1-b,-x) / (Pi(-b) Pi(a+b-1))",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, false, sc_dom,
                   single(
                       [sc, pi](const Params& p) {
                           return sc("eq49", p,
                                     {phase(C::sin, p.x, -(p.alpha + p.beta), (p.alpha / 2 + p.beta) * pi)});
                       },
                       [pi](const Params& p, const SeriesControl<double>& c) {
                           EvalResult<double> r{0, 0, 0, Method::closed_form};
                           LogProduct<double> pre;
                           pre.mul(pi).mul_pi(p.alpha - 1).div_pi(-p.beta).div_pi(p.alpha + p.beta - 1);
                           add_term(r, pre, stable_phi(PhiParams<double>{p.alpha, 1 - p.beta, -p.x}, c));
                           return r;
                       })});
    reg.push_back({"eq50",
                   "int sin^(a-1) v cos^(b-1) v sin(x tan v - (a+b) v + a pi/2) dv = pi x^b phi(a+b,1+b,-x) / Pi(b)",
                   use_alpha | use_beta | use_x, IntegralKind::tan_oscillatory, false, sc_dom,
                   single(
                       [sc, pi](const Params& p) {
                           return sc("eq50", p, {phase(C::sin, p.x, -(p.alpha + p.beta), p.alpha * pi / 2)});
                       },
                       [pi](const Params& p, const SeriesControl<double>& c) {
                           EvalResult<double> r{0, 0, 0, Method::closed_form};
                           LogProduct<double> pre;
                           pre.mul(pi).mul_pow(p.x, p.beta).div_pi(p.beta);
                           add_term(r, pre, stable_phi(PhiParams<double>{p.alpha + p.beta, 1 + p.beta, -p.x}, c));
                           return r;
                       })});
    return reg;
}

}  // namespace detail

inline const std::vector<Identity>& identities() {
    static const std::vector<Identity> reg = detail::build_registry();
    return reg;
}

inline std::vector<std::string> registry() {
    std::vector<std::string> keys;
    for (const auto& i : identities()) keys.push_back(i.id);
    return keys;
}

inline const Identity& identity(std::string_view id) {
    for (const auto& i : identities())
        if (i.id == id) return i;
    throw UnknownIdentityError("unknown identity: " + std::string(id));
}

inline const Variant& select_variant(const Identity& ident, std::optional<int> variant) {
    const int v = variant.value_or(ident.adopted);
    if (v < 0 || v >= static_cast<int>(ident.variants.size()))
        throw DomainError(ident.id + ": no variant " + std::to_string(v));
    return ident.variants[static_cast<std::size_t>(v)];
}

inline void check_domain(const Identity& ident, const Params& p) {
    const std::string bad = ident.violation(p);
    if (!bad.empty()) throw DomainError(ident.id + ": domain requires " + bad);
}

inline IntegralSpec<double> lhs_spec(std::string_view id, const Params& p, std::optional<int> variant = {}) {
    const Identity& ident = identity(id);
    check_domain(ident, p);
    IntegralSpec<double> s = select_variant(ident, variant).lhs(p);
    s.id = ident.id;
    s.params = p;
    return s;
}

inline EvalResult<double> rhs_eval(std::string_view id, const Params& p, const SeriesControl<double>& c = {},
                                   std::optional<int> variant = {}) {
    const Identity& ident = identity(id);
    check_domain(ident, p);
    return select_variant(ident, variant).rhs(p, c);
}

}  // namespace confluent

#endif
