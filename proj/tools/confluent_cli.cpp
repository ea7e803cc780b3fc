#include <CLI11.hpp>

#include <confluent/catalog.hpp>
#include <confluent/multiprecision.hpp>
#include <confluent/series.hpp>
#include <confluent/transforms.hpp>
#include <confluent/verify.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace cf = confluent;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw UsageError("not a finite decimal: '" + s + "'");
    return v;
}

// "a,b,c" or "start:step:count"
std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::size_t pos = 0;
        for (std::size_t c; (c = s.find(':', pos)) != std::string::npos; pos = c + 1) parts.push_back(s.substr(pos, c - pos));
        parts.push_back(s.substr(pos));
        if (parts.size() != 3) throw UsageError("range must be start:step:count: '" + s + "'");
        const double start = parse_real(parts[0]);
        const double step = parse_real(parts[1]);
        const double count = parse_real(parts[2]);
        if (count < 1 || count != std::floor(count) || count > 1e6) throw UsageError("bad range count in '" + s + "'");
        for (long i = 0; i < static_cast<long>(count); ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::size_t pos = 0;
    for (std::size_t c; (c = s.find(',', pos)) != std::string::npos; pos = c + 1) out.push_back(parse_real(s.substr(pos, c - pos)));
    out.push_back(parse_real(s.substr(pos)));
    return out;
}

enum class Format { table, csv, records };

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void print(Format f, std::ostream& os) const {
        if (f == Format::records) {
            for (const auto& r : rows) {
                bool first = true;
                for (std::size_t i = 0; i < columns.size(); ++i) {
                    if (r[i].empty()) continue;
                    os << (first ? "" : " ") << columns[i] << '=' << quoted(r[i]);
                    first = false;
                }
                os << '\n';
            }
            return;
        }
        if (f == Format::csv) {
            auto line = [&](const std::vector<std::string>& r) {
                for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
                os << '\n';
            };
            line(columns);
            for (const auto& r : rows) line(r);
            return;
        }
        std::vector<std::size_t> w(columns.size());
        for (std::size_t i = 0; i < columns.size(); ++i) {
            w[i] = columns[i].size();
            for (const auto& r : rows) w[i] = std::max(w[i], r[i].size());
        }
        auto line = [&](const std::vector<std::string>& r) {
            std::string s;
            for (std::size_t i = 0; i < r.size(); ++i) {
                s += r[i];
                if (i + 1 < r.size()) s += std::string(w[i] - r[i].size() + 2, ' ');
            }
            os << s << '\n';
        };
        line(columns);
        for (const auto& r : rows) line(r);
    }

    static std::string quoted(const std::string& v) {
        if (v.find_first_of(" \"=") == std::string::npos) return v;
        std::string q = "\"";
        for (char c : v) q += c == '"' ? std::string("\\\"") : std::string(1, c);
        return q + "\"";
    }
    static std::string csv_field(const std::string& v) {
        if (v.find_first_of(",\"\n") == std::string::npos) return v;
        std::string q = "\"";
        for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
};

const std::map<std::string, Format> format_names{{"table", Format::table}, {"csv", Format::csv}, {"records", Format::records}};

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string function;
    std::string alpha, beta, x;
    std::string mode = "auto";
    long kmax = 10;
};

int cmd_eval(const EvalArgs& a, Format fmt) {
    const double alpha = parse_real(a.alpha);
    const double x = parse_real(a.x);
    Table t;
    if (a.function == "psi") {
        const auto r = cf::psi(alpha, x);
        t.columns = {"function", "alpha", "x", "value", "abs_err_est", "method", "work"};
        t.rows.push_back({"psi", num(alpha), num(x), num(r.value), num(r.abs_err_est), cf::to_string(r.method),
                          std::to_string(r.work)});
        t.print(fmt, std::cout);
        return 0;
    }
    if (a.beta.empty()) throw UsageError(a.function + " needs --beta");
    const double beta = parse_real(a.beta);
    if (a.function == "phi") {
        const auto r = cf::stable_phi(cf::PhiParams<double>{alpha, beta, x});
        t.columns = {"function", "alpha", "beta", "x", "value", "abs_err_est", "method", "work"};
        t.rows.push_back({"phi", num(alpha), num(beta), num(x), num(r.value), num(r.abs_err_est),
                          cf::to_string(r.method), std::to_string(r.work)});
        t.print(fmt, std::cout);
        return 0;
    }
    // chi
    if (a.mode == "optimal") {
        const auto b = cf::chi_eval_optimal(alpha, beta, x);
        t.columns = {"function", "alpha", "beta", "x", "value", "abs_err_est", "method", "work", "lower", "upper",
                     "k_opt", "bound_first_omitted", "bound_printed", "warning"};
        t.rows.push_back({"chi", num(alpha), num(beta), num(x), num(b.midpoint()), num(b.half_width()), "asymptotic",
                          std::to_string(b.k_opt + 2), num(b.lower), num(b.upper), std::to_string(b.k_opt),
                          num(b.bound_first_omitted), num(b.bound_printed), b.warning});
    } else if (a.mode == "partial") {
        const auto s = cf::chi_partial(alpha, beta, x, a.kmax);
        t.columns = {"k", "term", "partial"};
        for (std::size_t k = 0; k < s.partials.size(); ++k)
            t.rows.push_back({std::to_string(k), num(s.terms[k]), num(s.partials[k])});
    } else {
        const auto r = a.mode == "phi" ? cf::chi_via_phi(alpha, beta, x) : cf::chi_value(alpha, beta, x);
        t.columns = {"function", "alpha", "beta", "x", "value", "abs_err_est", "method", "work"};
        t.rows.push_back({"chi", num(alpha), num(beta), num(x), num(r.value), num(r.abs_err_est),
                          cf::to_string(r.method), std::to_string(r.work)});
    }
    t.print(fmt, std::cout);
    return 0;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string id;
    bool all = false;
    std::string alpha, beta, gamma, x;
    std::optional<double> abs_tol, rel_tol;
    std::optional<int> variant;
    unsigned threads = 0;
};

void add_reports(Table& t, const std::vector<cf::IdentityReport>& reports) {
    for (const auto& r : reports) {
        const cf::Identity& ident = cf::identity(r.id);
        auto p = [&](unsigned bit, double v) { return (ident.uses & bit) ? num(v) : std::string(); };
        t.rows.push_back({r.id, std::to_string(r.variant), p(cf::use_alpha, r.params.alpha),
                          p(cf::use_beta, r.params.beta), p(cf::use_gamma, r.params.gamma), p(cf::use_x, r.params.x),
                          num(r.lhs), num(r.rhs), num(r.abs_residual), num(r.rel_residual), num(r.lhs_err_est),
                          num(r.rhs_err_est), r.pass ? "pass" : "fail", r.reason});
    }
}

int cmd_verify(const VerifyArgs& a, Format fmt) {
    if (a.all == !a.id.empty()) throw UsageError("verify needs exactly one of an identity key or --all");
    std::vector<std::string> ids = a.all ? cf::registry() : std::vector<std::string>{a.id};
    Table t;
    t.columns = {"id", "variant", "alpha", "beta", "gamma", "x", "lhs", "rhs", "abs_residual", "rel_residual",
                 "lhs_err_est", "rhs_err_est", "pass", "reason"};
    bool all_pass = true;
    for (const auto& id : ids) {
        const cf::Identity& ident = cf::identity(id);
        cf::GridSpec g = cf::default_grid(id);
        if (!a.alpha.empty()) g.alpha = parse_list(a.alpha);
        if (!a.beta.empty()) g.beta = parse_list(a.beta);
        if (!a.gamma.empty()) g.gamma = parse_list(a.gamma);
        if (!a.x.empty()) g.x = parse_list(a.x);
        if (a.abs_tol || a.rel_tol) {
            cf::Tolerance tol = cf::tolerance_for(id, g);
            if (a.abs_tol) tol.abs_tol = *a.abs_tol;
            if (a.rel_tol) tol.rel_tol = *a.rel_tol;
            g.tolerance = tol;
        }
        if (a.variant && (*a.variant < 0 || *a.variant >= static_cast<int>(ident.variants.size())))
            throw UsageError(id + " has no variant " + std::to_string(*a.variant));
        cf::validate_grid(ident, g);
        cf::RunOptions opt;
        opt.variant = a.variant;
        opt.threads = a.threads;
        const auto reports = cf::run_identity_grid(id, g, opt);
        for (const auto& r : reports) all_pass = all_pass && r.pass;
        add_reports(t, reports);
    }
    t.print(fmt, std::cout);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct BracketArgs {
    std::string alpha, beta, x;
    long kmax = -1;
    int digits = 16;
};

template <class T>
int bracket_as(const BracketArgs& a, Format fmt) {
    using std::abs;
    const T alpha(parse_real(a.alpha)), beta(parse_real(a.beta)), x(parse_real(a.x));
    if (!(x > T(0))) throw cf::DomainError("bracket: x must be > 0");
    const cf::BracketReport<T> rep = cf::check_bracket(alpha, beta, x);
    const long ko = rep.bracket.k_opt;
    const long kmax = a.kmax >= 0 ? a.kmax : (rep.degenerate ? 8 : ko + 1);
    const auto s = cf::chi_partial(alpha, beta, x, std::max(1L, kmax));
    Table t;
    t.columns = {"k", "term", "partial", "sign"};
    for (long k = 0; k <= kmax; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const T diff = s.partials[i] - rep.reference;
        const char* sign = abs(diff) <= rep.reference_err ? "0" : (diff > T(0) ? "+" : "-");
        t.rows.push_back({std::to_string(k), num(cf::to_double(s.terms[i])), num(cf::to_double(s.partials[i])), sign});
    }
    t.print(fmt, std::cout);
    if (fmt == Format::table) {
        std::cout << "reference " << num(cf::to_double(rep.reference)) << " +- " << num(cf::to_double(rep.reference_err))
                  << "\nk_opt " << ko << (rep.degenerate ? " (degenerate)" : "") << "\nalternation "
                  << (rep.alternation ? "holds" : "fails") << "\nfirst_omitted_bound "
                  << (rep.first_omitted_bound ? "holds" : "fails") << "\nprinted_bound "
                  << (rep.printed_bound ? "holds" : "fails") << "\nsharper " << rep.sharper << '\n';
    }
    return rep.pass() ? 0 : 1;
}

int cmd_bracket(const BracketArgs& a, Format fmt) {
    if (a.digits == 50) return bracket_as<cf::real50>(a, fmt);
    return bracket_as<double>(a, fmt);
}

// ---------------------------------------------------------------------------

int cmd_resolve(const std::vector<std::string>& without_args, Format fmt) {
    std::vector<std::pair<std::string, int>> without;
    for (const auto& w : without_args) {
        const auto c = w.rfind(':');
        if (c == std::string::npos) throw UsageError("--without expects id:variant, got '" + w + "'");
        const std::string id = w.substr(0, c);
        cf::identity(id);
        const double v = parse_real(w.substr(c + 1));
        if (v != std::floor(v) || v < 0) throw UsageError("bad variant index in '" + w + "'");
        without.emplace_back(id, static_cast<int>(v));
    }
    const cf::VariantResolution res = cf::resolve_variants(without);
    Table t;
    t.columns = {"id", "variant", "label", "worst_rel_residual", "qualifies", "status"};
    for (const auto& r : res.table) {
        const auto st = res.status.at(r.id);
        const bool adopted = st == cf::Adoption::adopted && res.adopted.at(r.id) == r.variant;
        t.rows.push_back({r.id, std::to_string(r.variant), r.label, r.excluded ? "" : num(r.worst_rel_residual),
                          r.excluded ? "excluded" : (r.qualifies ? "yes" : "no"),
                          adopted ? "adopted" : (st == cf::Adoption::adopted ? "rejected" : cf::to_string(st))});
    }
    t.print(fmt, std::cout);
    for (const auto& [id, st] : res.status)
        if (st != cf::Adoption::adopted) std::cerr << "resolve: " << id << ": " << cf::to_string(st) << '\n';
    return res.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Confluent hypergeometric series, integral identities and their numerical verification"};
    app.require_subcommand(1);
    std::string format = "table";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "records"}))
        ->capture_default_str();

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Evaluate phi, psi or chi");
    eval->add_option("function", ev.function)->required()->check(CLI::IsMember({"phi", "psi", "chi"}));
    eval->add_option("--alpha", ev.alpha)->required();
    eval->add_option("--beta", ev.beta);
    eval->add_option("--x", ev.x)->required();
    eval->add_option("--mode", ev.mode, "chi: auto, optimal, partial or phi")
        ->check(CLI::IsMember({"auto", "optimal", "partial", "phi"}));
    eval->add_option("--kmax", ev.kmax, "chi partial sums up to this index")->check(CLI::PositiveNumber);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Check catalog identities on a grid");
    verify->add_option("id", va.id, "Identity key");
    verify->add_flag("--all", va.all, "Every identity on its default grid");
    verify->add_option("--alpha", va.alpha, "Comma list or start:step:count");
    verify->add_option("--beta", va.beta);
    verify->add_option("--gamma", va.gamma);
    verify->add_option("--x", va.x);
    verify->add_option("--abs-tol", va.abs_tol);
    verify->add_option("--rel-tol", va.rel_tol);
    verify->add_option("--variant", va.variant);
    verify->add_option("--threads", va.threads, "0 uses every core");

    BracketArgs ba;
    auto* bracket = app.add_subcommand("bracket", "Partial sums of chi against the integral reference");
    bracket->add_option("--alpha", ba.alpha)->required();
    bracket->add_option("--beta", ba.beta)->required();
    bracket->add_option("--x", ba.x)->required();
    bracket->add_option("--kmax", ba.kmax);
    bracket->add_option("--digits", ba.digits, "Working precision")->check(CLI::IsMember({16, 50}));

    std::vector<std::string> without;
    auto* resolve = app.add_subcommand("resolve", "Adjudicate competing identity variants");
    resolve->add_option("--without", without, "Drop a candidate, as id:variant")->delimiter(',');

    for (auto* sub : {eval, verify, bracket, resolve})
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "records"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const Format fmt = format_names.at(format);
    try {
        if (*eval) return cmd_eval(ev, fmt);
        if (*verify) return cmd_verify(va, fmt);
        if (*bracket) return cmd_bracket(ba, fmt);
        return cmd_resolve(without, fmt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const cf::UnknownIdentityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << '\n';
        return 1;
    }
}
