#include <confluent/multiprecision.hpp>
#include <confluent/verify.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace confluent;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool identical(const IdentityReport& a, const IdentityReport& b) {
    return a.id == b.id && a.variant == b.variant && same_bits(a.params.alpha, b.params.alpha) &&
           same_bits(a.params.beta, b.params.beta) && same_bits(a.params.gamma, b.params.gamma) &&
           same_bits(a.params.x, b.params.x) && same_bits(a.lhs, b.lhs) && same_bits(a.rhs, b.rhs) &&
           same_bits(a.abs_residual, b.abs_residual) && same_bits(a.rel_residual, b.rel_residual) &&
           same_bits(a.lhs_err_est, b.lhs_err_est) && same_bits(a.rhs_err_est, b.rhs_err_est) && a.pass == b.pass &&
           a.converged == b.converged && a.reason == b.reason;
}

}  // namespace

TEST(Grid, ValidationRejectsBadPoints) {
    GridSpec g{{0.5}, {}, {}, {0.0, 1.0}, {}};
    EXPECT_THROW(validate_grid(identity("eq12"), g), DomainError);
    g.x = {1.0};
    EXPECT_NO_THROW(validate_grid(identity("eq12"), g));
    g.alpha = {1.0005};  // within 1e-3 of a pole of Pi(-a-1)
    EXPECT_THROW(validate_grid(identity("eq12"), g), DomainError);
    g.alpha = {};
    EXPECT_THROW(validate_grid(identity("eq12"), g), DomainError);
    EXPECT_THROW(default_grid("eq99"), UnknownIdentityError);
}

TEST(Grid, EnumerationOrder) {
    const GridSpec g{{1, 2}, {3, 4}, {7}, {5, 6}, {}};
    const auto pts = enumerate(identity("eq42"), g);
    ASSERT_EQ(pts.size(), 8u);
    EXPECT_EQ(pts[0].alpha, 1);
    EXPECT_EQ(pts[0].x, 5);
    EXPECT_EQ(pts[1].x, 6);
    EXPECT_EQ(pts[2].beta, 4);
    EXPECT_EQ(pts[4].alpha, 2);
    EXPECT_EQ(pts[0].gamma, 0);  // unused parameter
}

TEST(Manifest, CoversRegistry) {
    for (const auto& id : registry()) EXPECT_NO_THROW(validate_grid(identity(id), default_grid(id))) << id;
}

TEST(RunGrid, ExpInverseSquareAtTightTolerance) {
    const auto reports = run_identity_grid("eq18", GridSpec{{}, {}, {}, {0.1, 1, 10}, {}});
    ASSERT_EQ(reports.size(), 3u);
    for (const auto& r : reports) {
        EXPECT_TRUE(r.pass);
        EXPECT_EQ(r.rel_tol, 1e-10);
        EXPECT_LE(r.rel_residual, 1e-10);
    }
}

TEST(RunGrid, SymmetricPointHasNoResidual) {
    const auto reports = run_identity_grid("eq14", GridSpec{{0.5, 2}, {0.5, 2}, {}, {1.5}, {}});
    EXPECT_LE(reports[0].abs_residual, 1e-15);
    EXPECT_LE(reports[3].abs_residual, 1e-15);
    for (const auto& r : reports) EXPECT_TRUE(r.pass);
}

TEST(RunGrid, LaplaceAsymptoticRegressionValue) {
    const auto r = run_identity_grid("eq15", GridSpec{{1}, {1}, {}, {10}, {}}).at(0);
    EXPECT_NEAR(r.lhs, 0.91563333939788082, 1e-13);
    EXPECT_NEAR(r.rhs, 0.915633, 1e-4);
    EXPECT_TRUE(r.pass);
}

TEST(RunGrid, DomainViolationBecomesFailedReport) {
    const auto reports = run_identity_grid("eq12", GridSpec{{0.5, 1.0, 0.75}, {}, {}, {1}, {}});
    ASSERT_EQ(reports.size(), 3u);
    EXPECT_TRUE(reports[0].pass);
    EXPECT_FALSE(reports[1].pass);
    EXPECT_FALSE(reports[1].reason.empty());
    EXPECT_TRUE(reports[2].pass);
}

TEST(RunGrid, ToleranceOverride) {
    const auto r = run_identity_grid("eq29", GridSpec{{1.5}, {}, {}, {1}, Tolerance{1e-30, 1e-30}}).at(0);
    EXPECT_EQ(r.abs_tol, 1e-30);
    EXPECT_EQ(r.rel_tol, 1e-30);
    EXPECT_EQ(r.pass, r.recompute_pass());
}

TEST(RunGrid, ReportsAreSelfConsistent) {
    for (const auto& id : registry())
        for (const auto& r : run_identity_grid(id, default_grid(id))) {
            EXPECT_EQ(r.pass, r.recompute_pass()) << id;
            if (std::isfinite(r.lhs)) {
                EXPECT_EQ(r.abs_residual, std::abs(r.lhs - r.rhs));
            }
        }
}

TEST(RunGrid, CleanIdentitiesPassEverywhere) {
    for (const char* id : {"eq12", "eq14", "eq15", "eq17", "eq18", "eq25", "eq26", "eq27", "eq28", "eq29", "eq31",
                           "eq43", "eq44", "eq45", "eq49", "eq50", "laplace_cosine_lemma"})
        for (const auto& r : run_identity_grid(id, default_grid(id)))
            EXPECT_TRUE(r.pass) << id << " " << r.params.alpha << " " << r.params.beta << " " << r.params.x << " "
                                << r.reason;
}

TEST(RunGrid, DeterministicAcrossRunsAndThreads) {
    for (const char* id : {"eq12", "eq24", "eq42", "eq15"}) {
        RunOptions one;
        one.threads = 1;
        RunOptions many;
        many.threads = 8;
        const auto a = run_identity_grid(id, default_grid(id), one);
        const auto b = run_identity_grid(id, default_grid(id), many);
        const auto c = run_identity_grid(id, default_grid(id), many);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_TRUE(identical(a[i], b[i])) << id << " " << i;
            EXPECT_TRUE(identical(b[i], c[i])) << id << " " << i;
        }
    }
}

TEST(Ode, ExponentialTailSecondOrder) {
    for (double x : {1.0, 4.0}) {
        EXPECT_LE(ode_residual_eq9(0.5, x, 1e-3).residual, 1e-6) << x;
        EXPECT_LE(ode_residual_eq9(0.5, x, 5e-4).residual, 1e-6) << x;
    }
    // refinement helps only while truncation dominates; at x = 4 sampling noise / h^2 does
    EXPECT_LE(ode_residual_eq9(0.5, 1.0, 5e-4).residual, ode_residual_eq9(0.5, 1.0, 1e-3).residual + 1e-9);
    EXPECT_LE(ode_residual_eq9(0.3, 2.0).residual, 1e-6);
    EXPECT_THROW(ode_residual_eq9(2.0, 1.0), PoleError);
    EXPECT_THROW(ode_residual_eq9(0.5, 1e-3), DomainError);
}

TEST(Ode, CosineFamilySecondOrder) {
    const double r = ode_residual_eq21(1.5, 0.5, 1.0, 1e-3).residual;
    EXPECT_LE(r, 1e-5);
    EXPECT_LE(ode_residual_eq21(1.5, 0.5, 1.0, 5e-4).residual, r + 1e-9);
    EXPECT_LE(ode_residual_eq21(1.5, 0.5, 1.0, 1e-3, Source::quadrature).residual, 1e-5);
    const auto d = ode_residual_eq21(2.0, 3.0, 1.0);
    EXPECT_TRUE(d.degenerate);
    EXPECT_EQ(d.residual, 0.0);
}

TEST(Ode, SinCosFamilyThirdOrder) {
    for (double g : {2.0, -2.0}) {
        EXPECT_LE(ode_residual_eq35(1.5, 0.5, g, 1.0).residual, 1e-4) << g;
        EXPECT_LE(ode_residual_eq35(1.5, 0.5, g, 1.0, 5e-3, 9).residual, 1e-4) << g;
    }
    EXPECT_THROW(ode_residual_eq35(1.5, 0.5, 2.0, 1e-2), DomainError);
}

TEST(Ode, ThirdDerivativeStencilsAgree) {
    const double h = 5e-3, x = 1.0;
    const auto n9 = central_nodes(9, h);
    std::vector<long double> y;
    for (double o : n9) {
        const auto s = tan_spec<double>("t", 1.5, 0.5, {phase(Trig::cos, x + o, 2.0)}, 1);
        y.push_back(integrate(s, 1e-16, 1e-14).value);
    }
    const auto w9 = fd_weights(n9, 0, 3);
    const auto w7 = fd_weights(central_nodes(7, h), 0, 3);
    long double d9 = 0, d7 = 0;
    for (int i = 0; i < 9; ++i) d9 += w9[i] * y[i];
    for (int i = 0; i < 7; ++i) d7 += w7[i] * y[i + 1];
    EXPECT_LE(std::abs(d9 - d7), 1e-5 * std::abs(d9));
}

TEST(Bracket, UnitParametersAtTen) {
    const auto rep = check_bracket(1.0, 1.0, 10.0);
    EXPECT_TRUE(rep.alternation);
    EXPECT_TRUE(rep.first_omitted_bound);
    EXPECT_TRUE(rep.pass());
    EXPECT_NEAR(rep.reference, 0.91563333939788082, 1e-14);
    EXPECT_EQ(rep.sharper, "first_omitted");
    EXPECT_EQ(rep.rows.size(), 10u);
}

TEST(Bracket, PrintedBoundLooserByAboutK) {
    const auto rep = check_bracket(0.5, 0.5, 20.0);
    EXPECT_TRUE(rep.first_omitted_bound);
    EXPECT_TRUE(rep.printed_bound);
    const double ratio = rep.bracket.bound_printed / rep.bracket.bound_first_omitted;
    EXPECT_EQ(ratio, static_cast<double>(rep.bracket.k_opt + 1));
}

TEST(Bracket, ZeroAlphaIsDegenerate) {
    const auto rep = check_bracket(0.0, 1.5, 3.0);
    EXPECT_TRUE(rep.degenerate);
    EXPECT_TRUE(rep.pass());
    for (const auto& row : rep.rows) EXPECT_EQ(row.partial, 1.0);
    EXPECT_THROW(check_bracket(1.0, 1.0, -1.0), DomainError);
}

// double cannot resolve a first omitted term of 1e-16 and must say so
TEST(Bracket, ReferenceQualityInDouble) {
    EXPECT_THROW(check_bracket(1.0, 1.0, 40.0), ReferenceQualityError);
}

TEST(Bracket, AlternationOnGridAtFiftyDigits) {
    const std::vector<double> ab{0.25, 0.5, 1.0, 1.5, 2.0};
    for (double a : ab)
        for (double b : ab)
            for (double m : {1.0, 1.5, 2.0}) {
                const double x = m * 2 * (a + 1) * (b + 1);
                const auto rep = check_bracket(real50(a), real50(b), real50(x));
                EXPECT_TRUE(rep.alternation) << a << " " << b << " " << x;
                EXPECT_TRUE(rep.first_omitted_bound) << a << " " << b << " " << x;
                EXPECT_TRUE(rep.printed_bound) << a << " " << b << " " << x;
            }
}

TEST(Variants, AdoptionMatchesGoldenFile) {
    const auto res = require_unambiguous(resolve_variants());
    std::ifstream in(std::string(GOLDEN_DIR) + "/variants.golden");
    ASSERT_TRUE(in);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string id, label;
        int v = -1;
        ls >> id >> v;
        std::getline(ls >> std::ws, label);
        EXPECT_EQ(res.adopted.at(id), v) << id;
        EXPECT_EQ(identity(id).variants.at(v).label, label);
        EXPECT_EQ(identity(id).adopted, v);
        ++rows;
    }
    EXPECT_EQ(rows, 3);
    for (const auto& row : res.table)
        if (row.variant == res.adopted.at(row.id)) {
            EXPECT_LE(row.worst_rel_residual, variant_adoption_threshold);
        }
    EXPECT_EQ(res.adopted.at("eq12"), 0);
}

TEST(Variants, RemovingTheWinnerFailsLoudly) {
    const auto res = resolve_variants({{"eq33", 2}});
    EXPECT_FALSE(res.ok());
    EXPECT_EQ(res.status.at("eq33"), Adoption::none);
    EXPECT_EQ(res.status.at("eq42"), Adoption::adopted);
    try {
        require_unambiguous(res);
        FAIL();
    } catch (const VariantResolutionError& e) {
        EXPECT_NE(std::string(e.what()).find("eq33"), std::string::npos);
        EXPECT_EQ(e.resolution().table.size(), res.table.size());
    }
}
