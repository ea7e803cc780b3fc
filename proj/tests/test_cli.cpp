#include <confluent/verify.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// stdout is captured, stderr discarded
Run run(const std::string& args) {
    const std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

// minimal CSV row split with double-quote escaping
std::vector<std::string> csv_row(const std::string& line) {
    std::vector<std::string> f(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                f.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                f.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            f.emplace_back();
        } else {
            f.back() += c;
        }
    }
    return f;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Cli, EvalFunctions) {
    auto r = run("eval phi --alpha 2 --beta 2 --x 1 --format records");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("value=2.71828182845904"), std::string::npos) << r.out;
    r = run("eval psi --alpha 0.5 --x 1 --format records");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("value=3.76219569108"), std::string::npos) << r.out;
    r = run("eval chi --alpha 1 --beta 1 --x 10 --mode optimal --format records");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("k_opt=9"), std::string::npos);
    EXPECT_NE(r.out.find("lower="), std::string::npos);
    EXPECT_NE(r.out.find("upper="), std::string::npos);
    r = run("eval chi --alpha 1 --beta 1 --x 10 --mode partial --kmax 4 --format csv");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 6u);
}

TEST(Cli, ExitCodeContract) {
    EXPECT_EQ(run("verify eq18 --x 0.1,1,10").code, 0);
    EXPECT_EQ(run("verify eq29 --alpha 1.5 --x 1 --rel-tol 1e-30 --abs-tol 1e-30").code, 1);
    EXPECT_EQ(run("verify no-such-id").code, 2);
    EXPECT_EQ(run("eval phi --alpha 1 --beta -2 --x 1").code, 2);
    EXPECT_EQ(run("eval phi --alpha abc --beta 1 --x 1").code, 2);
    EXPECT_EQ(run("bracket --alpha 1 --beta 1 --x -1").code, 2);
    EXPECT_EQ(run("verify eq12 --alpha 1 --x 1").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, ErrorsStayOffStdout) {
    const auto r = run("verify no-such-id");
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, VerifyLines) {
    auto r = run("verify eq18 --x 0.1,1,10 --format csv");
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 4u);
    for (std::size_t i = 1; i < l.size(); ++i) EXPECT_EQ(csv_row(l[i]).at(12), "pass");
    r = run("verify eq44 --alpha 1.2 --beta 0.8 --x 1 --format csv");
    EXPECT_EQ(r.code, 0);
    const auto row = csv_row(lines(r.out).at(1));
    EXPECT_LE(std::abs(std::strtod(row.at(6).c_str(), nullptr)), 1e-8);
    r = run("verify eq12 --alpha 0.25:0.5:2 --x 1 --format records");
    EXPECT_EQ(lines(r.out).size(), 2u);
    EXPECT_NE(r.out.find("alpha=0.75"), std::string::npos);
}

TEST(Cli, CsvRoundTripsReportFields) {
    const auto r = run("verify eq12 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto l = lines(r.out);
    const auto reports = confluent::run_identity_grid("eq12", confluent::default_grid("eq12"));
    ASSERT_EQ(l.size(), reports.size() + 1);
    const auto header = csv_row(l[0]);
    EXPECT_EQ(header.at(6), "lhs");
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto f = csv_row(l[i + 1]);
        const auto& rep = reports[i];
        auto d = [&](int k) { return std::strtod(f.at(k).c_str(), nullptr); };
        EXPECT_EQ(f[0], rep.id);
        EXPECT_TRUE(same_bits(d(2), rep.params.alpha));
        EXPECT_TRUE(f[3].empty());
        EXPECT_TRUE(same_bits(d(5), rep.params.x));
        EXPECT_TRUE(same_bits(d(6), rep.lhs));
        EXPECT_TRUE(same_bits(d(7), rep.rhs));
        EXPECT_TRUE(same_bits(d(8), rep.abs_residual));
        EXPECT_TRUE(same_bits(d(9), rep.rel_residual));
        EXPECT_TRUE(same_bits(d(10), rep.lhs_err_est));
        EXPECT_TRUE(same_bits(d(11), rep.rhs_err_est));
        EXPECT_EQ(f[12], rep.pass ? "pass" : "fail");
    }
}

TEST(Cli, BracketTable) {
    auto r = run("bracket --alpha 1 --beta 1 --x 10 --format csv");
    EXPECT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_GE(l.size(), 11u);
    for (int k = 0; k <= 9; ++k) EXPECT_EQ(csv_row(l[k + 1]).at(3), k % 2 == 0 ? "+" : "-");
    r = run("bracket --alpha 0 --beta 1 --x 10 --format csv");
    EXPECT_EQ(r.code, 0);
    for (std::size_t i = 1; i < lines(r.out).size(); ++i) EXPECT_EQ(csv_row(lines(r.out)[i]).at(2), "1");
    EXPECT_EQ(run("bracket --alpha 1 --beta 1 --x 40").code, 1);
    EXPECT_EQ(run("bracket --alpha 1 --beta 1 --x 40 --digits 50").code, 0);
}

TEST(Cli, Resolve) {
    auto r = run("resolve");
    EXPECT_EQ(r.code, 0);
    for (const char* id : {"eq33", "eq42", "eq46"}) EXPECT_NE(r.out.find(id), std::string::npos);
    r = run("resolve --format csv");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 9u);
    EXPECT_EQ(csv_row(lines(r.out)[0]).size(), 6u);
    EXPECT_EQ(run("resolve --without eq33:2").code, 1);
    EXPECT_EQ(run("resolve --without bogus:1").code, 2);
}
