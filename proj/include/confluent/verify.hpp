#ifndef CONFLUENT_VERIFY_HPP
#define CONFLUENT_VERIFY_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "core.hpp"
#include "quadrature.hpp"
#include "series.hpp"
#include "transforms.hpp"

namespace confluent {

struct Tolerance {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
};

struct GridSpec {
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> gamma;
    std::vector<double> x;
    std::optional<Tolerance> tolerance;
};

// Grid points of an identity in enumeration order (alpha, beta, gamma, x
// nested outermost to innermost); unused parameters stay 0.
inline std::vector<Params> enumerate(const Identity& ident, const GridSpec& g) {
    auto axis = [&](unsigned bit, const std::vector<double>& v) {
        return (ident.uses & bit) ? v : std::vector<double>{0.0};
    };
    std::vector<Params> pts;
    for (double a : axis(use_alpha, g.alpha))
        for (double b : axis(use_beta, g.beta))
            for (double c : axis(use_gamma, g.gamma))
                for (double x : axis(use_x, g.x)) pts.push_back({a, b, c, x});
    return pts;
}

// Checks a grid against an identity's domain (x > 0 and pole distance among
// the predicates); throws DomainError naming the first offending point.
inline void validate_grid(const Identity& ident, const GridSpec& g) {
    auto need = [&](unsigned bit, const std::vector<double>& v, const char* name) {
        if ((ident.uses & bit) && v.empty())
            throw DomainError(ident.id + ": grid needs values for " + name);
        for (double d : v)
            if (!std::isfinite(d)) throw DomainError(ident.id + ": non-finite grid value for " + name);
    };
    need(use_alpha, g.alpha, "alpha");
    need(use_beta, g.beta, "beta");
    need(use_gamma, g.gamma, "gamma");
    need(use_x, g.x, "x");
    for (const Params& p : enumerate(ident, g)) {
        const std::string bad = ident.violation(p);
        if (!bad.empty()) {
            std::ostringstream os;
            os << ident.id << ": grid point (alpha=" << p.alpha << ", beta=" << p.beta << ", gamma=" << p.gamma
               << ", x=" << p.x << ") violates " << bad;
            throw DomainError(os.str());
        }
    }
}

// ---------------------------------------------------------------------------
// manifest: default grids, tolerances and variant probe grids

struct ManifestEntry {
    std::string id;
    GridSpec grid;
};

inline const std::vector<ManifestEntry>& manifest() {
    static const std::vector<ManifestEntry> m = [] {
        const std::vector<double> x3{0.5, 1, 2};
        const GridSpec sc{{0.8, 1.2}, {0.6, 1.4}, {}, x3, {}};
        std::vector<ManifestEntry> e{
            {"eq12", {{-0.75, -0.25, 0.25, 0.75, 1.5}, {}, {}, {0.5, 1, 4}, {}}},
            {"eq13", {{0.3, 1.7}, {0.5, 1.25}, {}, {0.5, 2, 5}, {}}},
            {"eq14", {{0.5, 1.25, 2}, {0.5, 1.25, 2}, {}, {0.5, 2}, {}}},
            {"eq15", {{0.5, 1, 2}, {0.5, 1, 2}, {}, {10, 20, 40}, {}}},
            {"eq17", {{0.25, 0.75}, {}, {}, {0.5, 1, 4}, {}}},
            {"eq18", {{}, {}, {}, {0.1, 1, 10}, Tolerance{1e-12, 1e-10}}},
            {"laplace_cosine_lemma", {{0.5, 1.5, 2.5}, {-0.5, 0.3}, {0.3, 0.7, 1.1}, {}, {}}},
            {"eq24", {{0.5, 1.5, 2.5}, {-0.7, 0.3, 1.2}, {}, x3, {}}},
            {"eq25", {{0.5, 1.5}, {}, {}, {0.5, 2}, {}}},
            {"eq26", {{0.5, 1.4, 1.5, 2.5}, {}, {}, {0.5, 2}, Tolerance{1e-8, 0}}},
            {"eq27", {{0.5, 1.5}, {}, {}, x3, {}}},
            {"eq28", {{0.5, 1.5}, {}, {}, x3, {}}},
            {"eq29", {{0.5, 1, 1.5, 2.5}, {}, {}, x3, {}}},
            {"eq31", {{0.25, 0.75}, {}, {}, {0.5, 1, 4}, {}}},
            {"eq33", {{1.3, 2.2}, {0.4, 0.7}, {}, x3, {}}},
            {"eq34", {{1.3, 2.2}, {0.4, 0.7}, {}, x3, {}}},
            {"eq42", sc},
            {"eq43", {sc.alpha, sc.beta, {}, x3, Tolerance{1e-9, 0}}},
            {"eq44", {sc.alpha, sc.beta, {}, x3, Tolerance{1e-8, 0}}},
            {"eq45", {{}, {0.4, 0.7, 1.5}, {}, {0.5, 1.3, 3}, {}}},
            {"eq46", sc},
            {"eq47", sc},
            {"eq48", sc},
            {"eq49", sc},
            {"eq50", sc},
        };
        return e;
    }();
    return m;
}

inline const GridSpec& default_grid(std::string_view id) {
    for (const auto& e : manifest())
        if (e.id == id) return e.grid;
    throw UnknownIdentityError("no default grid for identity: " + std::string(id));
}

// Probe grids used to adjudicate competing variants.
inline const std::vector<ManifestEntry>& variant_probe_grids() {
    static const std::vector<ManifestEntry> m{
        {"eq33", {{1.3, 2.2}, {0.4, 0.7}, {}, {0.5, 1, 2}, {}}},
        {"eq42", {{0.8, 1.2}, {0.6, 1.4}, {}, {0.5, 1, 2}, {}}},
        {"eq46", {{0.8, 1.2}, {0.6, 1.4}, {}, {0.5, 1, 2}, {}}},
    };
    return m;
}

inline constexpr double variant_adoption_threshold = 1e-6;

// ---------------------------------------------------------------------------
// identity reports

struct IdentityReport {
    std::string id;
    int variant = 0;
    Params params;
    double lhs = 0;
    double rhs = 0;
    double abs_residual = 0;
    double rel_residual = 0;
    bool pass = false;
    double lhs_err_est = 0;
    double rhs_err_est = 0;
    double abs_tol = 0;
    double rel_tol = 0;
    bool converged = false;
    std::string reason;

    static bool decide(bool converged, double abs_residual, double lhs, double rhs, double lhs_err, double rhs_err,
                       double abs_tol, double rel_tol) {
        const double bound =
            std::max({abs_tol, rel_tol * std::max(std::abs(lhs), std::abs(rhs)), lhs_err + rhs_err});
        return converged && abs_residual <= bound;
    }
    bool recompute_pass() const {
        return decide(converged, abs_residual, lhs, rhs, lhs_err_est, rhs_err_est, abs_tol, rel_tol);
    }
};

struct RunOptions {
    std::optional<int> variant;
    unsigned threads = 0;  // 0: hardware concurrency
};

inline Tolerance tolerance_for(std::string_view id, const GridSpec& grid) {
    if (grid.tolerance) return *grid.tolerance;
    for (const auto& e : manifest())
        if (e.id == id && e.grid.tolerance) return *e.grid.tolerance;
    return {};
}

inline IdentityReport evaluate_point(const Identity& ident, const Params& p, const Tolerance& tol,
                                     std::optional<int> variant) {
    IdentityReport r;
    r.id = ident.id;
    r.variant = variant.value_or(ident.adopted);
    r.params = p;
    r.abs_tol = tol.abs_tol;
    r.rel_tol = tol.rel_tol;
    try {
        const IntegralSpec<double> spec = lhs_spec(ident.id, p, variant);
        const double q_rel = std::min(1e-12, tol.rel_tol > 0 ? tol.rel_tol / 100 : 1e-12);
        const double q_abs = std::min(1e-14, tol.abs_tol / 100);
        const QuadResult<double> q = integrate(spec, q_abs, q_rel);
        const EvalResult<double> rhs = rhs_eval(ident.id, p, {}, variant);
        r.lhs = q.value;
        r.rhs = rhs.value;
        r.lhs_err_est = q.abs_err_est;
        r.rhs_err_est = rhs.abs_err_est;
        r.converged = q.converged;
        r.abs_residual = std::abs(r.lhs - r.rhs);
        const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
        r.rel_residual = scale > 0 ? r.abs_residual / scale : 0.0;
        r.pass = r.recompute_pass();
        if (!q.converged) r.reason = "quadrature did not converge";
        else if (!r.pass) r.reason = "residual exceeds tolerance";
    } catch (const std::exception& e) {
        r.converged = false;
        r.pass = false;
        r.lhs = r.rhs = r.abs_residual = r.rel_residual = std::nan("");
        r.reason = e.what();
    }
    return r;
}

// One report per grid point, in enumeration order; points may run concurrently.
inline std::vector<IdentityReport> run_identity_grid(std::string_view id, const GridSpec& grid,
                                                     const RunOptions& opt = {}) {
    const Identity& ident = identity(id);
    const std::vector<Params> pts = enumerate(ident, grid);
    const Tolerance tol = tolerance_for(id, grid);
    std::vector<IdentityReport> out(pts.size());
    unsigned n = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(std::max<std::size_t>(1, pts.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < pts.size(); i = next++) out[i] = evaluate_point(ident, pts[i], tol, opt.variant);
    };
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    return out;
}

// ---------------------------------------------------------------------------
// ODE residuals by finite differences

struct OdeResidual {
    double residual = 0;
    bool degenerate = false;  // the solution vanishes identically at the stencil
};

namespace detail {

// Samples are kept in long double: the closed forms cancel terms of size
// e^(2 sqrt x), and second differences divide that rounding by h^2.
template <class F>
std::vector<long double> sample(F&& f, double x, const std::vector<double>& offsets) {
    std::vector<long double> v;
    v.reserve(offsets.size());
    for (double o : offsets) v.push_back(f(static_cast<long double>(x) + o));
    return v;
}

inline long double apply(const std::vector<double>& w, const std::vector<long double>& v) {
    long double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * v[i];
    return s;
}

}  // namespace detail

// |y + (a-1) y' - x y''| / |y| with y the closed form of the exponential-tail integral
inline OdeResidual ode_residual_eq9(double alpha, double x, double h = 1e-3) {
    if (!(x > 2 * h)) throw DomainError("ode_residual_eq9: requires x > 2h");
    if (std::abs(alpha - std::round(alpha)) < 1e-12) throw PoleError("ode_residual_eq9: alpha is an integer", alpha);
    const auto nodes = central_nodes(5, h);
    const auto y = detail::sample(
        [&](long double t) { return exp_tail_closed_form<long double>(alpha, t).value; }, x, nodes);
    const long double y0 = y[2];
    const long double d1 = detail::apply(fd_weights(nodes, 0, 1), y);
    const long double d2 = detail::apply(fd_weights(nodes, 0, 2), y);
    return {static_cast<double>(std::abs(y0 + (alpha - 1) * d1 - x * d2) / std::abs(y0)), false};
}

enum class Source { closed_form, quadrature };

// |(x + 2b) z + 4(a-1) z' - 4x z''| / |z| for z = int cos^(a-1) v cos(x/2 tan v + b v) dv
inline OdeResidual ode_residual_eq21(double alpha, double beta, double x, double h = 1e-3,
                                     Source source = Source::closed_form) {
    if (!(x > 2 * h)) throw DomainError("ode_residual_eq21: requires x > 2h");
    auto z = [&](long double t) -> long double {
        if (source == Source::closed_form) return cos_family_closed_form<long double>(alpha, beta, t).value;
        const auto spec = tan_spec<double>("eq24", 1, alpha, {phase(Trig::cos, static_cast<double>(t) / 2, beta)}, 1);
        return integrate(spec, 1e-16, 1e-14).value;
    };
    const auto nodes = central_nodes(5, h);
    const auto v = detail::sample(z, x, nodes);
    long double vmax = 0;
    for (long double e : v) vmax = std::max(vmax, std::abs(e));
    if (vmax == 0) return {0, true};
    const long double d1 = detail::apply(fd_weights(nodes, 0, 1), v);
    const long double d2 = detail::apply(fd_weights(nodes, 0, 2), v);
    return {static_cast<double>(std::abs((x + 2 * beta) * v[2] + 4 * (alpha - 1) * d1 - 4 * x * d2) / std::abs(v[2])),
            false};
}

// |a y + (g + x) y' + (b-2) y'' - x y'''| / |y| for
// y = int sin^(a-1) v cos^(b-1) v cos(x tan v + g v) dv by quadrature
inline OdeResidual ode_residual_eq35(double alpha, double beta, double gamma, double x, double h = 5e-3,
                                     int stencil_points = 7) {
    if (!(x > 3 * h)) throw DomainError("ode_residual_eq35: requires x > 3h");
    auto y = [&](long double t) -> long double {
        const auto spec = tan_spec<double>("eq35", alpha, beta, {phase(Trig::cos, static_cast<double>(t), gamma)}, 1);
        return integrate(spec, 1e-16, 1e-14).value;
    };
    const auto nodes = central_nodes(stencil_points, h);
    const auto v = detail::sample(y, x, nodes);
    const long double y0 = v[static_cast<std::size_t>(stencil_points / 2)];
    if (y0 == 0) return {0, true};
    const long double d1 = detail::apply(fd_weights(nodes, 0, 1), v);
    const long double d2 = detail::apply(fd_weights(nodes, 0, 2), v);
    const long double d3 = detail::apply(fd_weights(nodes, 0, 3), v);
    return {static_cast<double>(std::abs(alpha * y0 + (gamma + x) * d1 + (beta - 2) * d2 - x * d3) / std::abs(y0)),
            false};
}

// ---------------------------------------------------------------------------
// bracketing of the semiconvergent series against the integral reference

class ReferenceQualityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <Real T = double>
struct BracketRow {
    long k = 0;
    T term{0};
    T partial{0};
    int side = 0;  // sign of partial - reference; 0 when not resolved by the reference error
    bool within_first_omitted = false;
    bool within_printed = false;
};

template <Real T = double>
struct BracketReport {
    T alpha{0};
    T beta{0};
    T x{0};
    T reference{0};
    T reference_err{0};
    ChiBracket<T> bracket;
    std::vector<BracketRow<T>> rows;  // k = 0 .. k_opt
    bool alternation = false;
    bool first_omitted_bound = false;
    bool printed_bound = false;
    bool degenerate = false;
    std::string sharper;  // "first_omitted", "printed" or "equal"

    bool pass() const { return degenerate || (alternation && first_omitted_bound && printed_bound); }
};

template <Real T>
BracketReport<T> check_bracket(const T& alpha, const T& beta, const T& x) {
    using std::abs;
    if (alpha < T(0) || !(beta > T(0)) || !(x > T(0)))
        throw DomainError("check_bracket: requires alpha >= 0, beta > 0, x > 0");
    BracketReport<T> rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.x = x;
    if (alpha == T(0) || alpha * beta / x <= eps_v<T>()) {
        // every correction carries alpha: the partial sums are all 1
        rep.degenerate = true;
        rep.reference = T(1);
        rep.alternation = rep.first_omitted_bound = rep.printed_bound = true;
        rep.sharper = "equal";
        rep.bracket.lower = rep.bracket.upper = rep.bracket.estimate = T(1);
        rep.rows.push_back({0, T(1), T(1), 0, true, true});
        return rep;
    }
    rep.bracket = chi_eval_optimal(alpha, beta, x);
    const long ko = rep.bracket.k_opt;
    const ChiPartialSums<T> s = chi_partial(alpha, beta, x, ko + 1);
    const T t_next = abs(s.terms[static_cast<std::size_t>(ko + 1)]);

    const IntegralSpec<T> spec = normalized_laplace_spec<T>("eq15", alpha, beta, x);
    const QuadResult<T> q = integrate_semi_infinite(spec, T(t_next / 1000), T(eps_v<T>() * 64));
    rep.reference = q.value;
    rep.reference_err = q.abs_err_est;
    if (!q.converged || q.abs_err_est > t_next / 10)
    {
        char msg[160];
        std::snprintf(msg, sizeof msg, "check_bracket: reference error %.3g exceeds 0.1 * first omitted term %.3g",
                      to_double(q.abs_err_est), to_double(t_next));
        throw ReferenceQualityError(msg);
    }

    rep.alternation = rep.first_omitted_bound = rep.printed_bound = true;
    int prev_side = 0;
    for (long k = 0; k <= ko; ++k) {
        const auto i = static_cast<std::size_t>(k);
        BracketRow<T> row;
        row.k = k;
        row.term = s.terms[i];
        row.partial = s.partials[i];
        const T diff = row.partial - rep.reference;
        if (abs(diff) > rep.reference_err) row.side = diff > T(0) ? 1 : -1;
        const T next = abs(s.terms[i + 1]);
        row.within_first_omitted = abs(diff) <= next + rep.reference_err;
        row.within_printed = abs(diff) <= T(k + 1) * next + rep.reference_err;
        if (row.side == 0 || (k > 0 && row.side != -prev_side)) rep.alternation = false;
        rep.first_omitted_bound = rep.first_omitted_bound && row.within_first_omitted;
        rep.printed_bound = rep.printed_bound && row.within_printed;
        prev_side = row.side;
        rep.rows.push_back(row);
    }
    rep.sharper = ko == 0 ? "equal" : "first_omitted";
    return rep;
}

// ---------------------------------------------------------------------------
// variant adoption

struct VariantRow {
    std::string id;
    int variant = 0;
    std::string label;
    double worst_rel_residual = 0;
    bool qualifies = false;
    bool excluded = false;
};

enum class Adoption { adopted, ambiguous, none };

inline const char* to_string(Adoption a) {
    switch (a) {
        case Adoption::adopted: return "adopted";
        case Adoption::ambiguous: return "ambiguous";
        case Adoption::none: return "none";
    }
    return "unknown";
}

struct VariantResolution {
    std::map<std::string, int> adopted;  // every registry key; single-variant ids map to 0
    std::map<std::string, Adoption> status;
    std::vector<VariantRow> table;

    bool ok() const {
        return std::all_of(status.begin(), status.end(), [](const auto& kv) { return kv.second == Adoption::adopted; });
    }
};

class VariantResolutionError : public std::runtime_error {
public:
    VariantResolutionError(const std::string& what, VariantResolution r)
        : std::runtime_error(what), resolution_(std::move(r)) {}
    const VariantResolution& resolution() const noexcept { return resolution_; }

private:
    VariantResolution resolution_;
};

// `without` removes (id, variant) pairs from consideration.
inline VariantResolution resolve_variants(const std::vector<std::pair<std::string, int>>& without = {}) {
    VariantResolution res;
    for (const Identity& ident : identities()) {
        if (ident.variants.size() <= 1) {
            res.adopted[ident.id] = 0;
            continue;
        }
        const GridSpec* probe = nullptr;
        for (const auto& e : variant_probe_grids())
            if (e.id == ident.id) probe = &e.grid;
        if (!probe) throw DomainError(ident.id + ": no probe grid");
        std::vector<int> passing;
        for (int v = 0; v < static_cast<int>(ident.variants.size()); ++v) {
            VariantRow row{ident.id, v, ident.variants[static_cast<std::size_t>(v)].label, 0, false, false};
            row.excluded = std::find(without.begin(), without.end(), std::make_pair(ident.id, v)) != without.end();
            if (!row.excluded) {
                RunOptions opt;
                opt.variant = v;
                for (const IdentityReport& r : run_identity_grid(ident.id, *probe, opt)) {
                    const double rr = r.converged ? r.rel_residual : std::numeric_limits<double>::infinity();
                    row.worst_rel_residual = std::max(row.worst_rel_residual, std::isnan(rr) ? INFINITY : rr);
                }
                row.qualifies = row.worst_rel_residual <= variant_adoption_threshold;
                if (row.qualifies) passing.push_back(v);
            }
            res.table.push_back(row);
        }
        if (passing.size() == 1) {
            res.adopted[ident.id] = passing.front();
            res.status[ident.id] = Adoption::adopted;
        } else {
            res.status[ident.id] = passing.empty() ? Adoption::none : Adoption::ambiguous;
        }
    }
    return res;
}

inline const VariantResolution& require_unambiguous(const VariantResolution& r) {
    for (const auto& [id, st] : r.status) {
        if (st == Adoption::ambiguous) throw VariantResolutionError(id + ": several variants qualify", r);
        if (st == Adoption::none) throw VariantResolutionError(id + ": no variant qualifies", r);
    }
    return r;
}

}  // namespace confluent

#endif
