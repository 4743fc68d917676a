#include "cli/cli.hpp"
#include "cli/json_io.hpp"
#include "cli/literal.hpp"

#include "resurge/solvers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace resurge;
using namespace resurge::cli;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
    Json doc() const { return Json::parse(out); }
};

CliRun run_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST(SeriesLiteral, Grammar)
{
    FormalSeries a = parse_series_literal("1/10*z^-2 - 0.05*z^-3", Variable::z, 5);
    EXPECT_EQ(a.min_order(), 2);
    EXPECT_EQ(a.truncation_order(), 5);
    EXPECT_EQ(a.coeff_exact(2), CQ(Rational(1, 10)));
    EXPECT_EQ(a.coeff_exact(3), CQ(Rational(-1, 20)));
    EXPECT_EQ(a.coeff_exact(4), CQ());

    FormalSeries b = parse_series_literal("z^-2 + (1/2-3i)*z^-4 + 2 - z^-2", Variable::z, 0);
    EXPECT_EQ(b.min_order(), 0);
    EXPECT_EQ(b.coeff_exact(0), CQ(Rational(2)));
    EXPECT_EQ(b.coeff_exact(2), CQ());
    EXPECT_EQ(b.coeff_exact(4), CQ(Rational(1, 2), Rational(-3)));
    EXPECT_EQ(b.truncation_order(), 4);

    EXPECT_TRUE(parse_series_literal("0", Variable::z, 7).is_zero());
    EXPECT_EQ(parse_series_literal("1e-3*z^-2", Variable::z, 3).coeff_exact(2), CQ(Rational(1, 1000)));
    EXPECT_EQ(parse_series_literal("z", Variable::z, 3).min_order(), -1);

    FormalSeries t = parse_series_literal("t^2 - 1/3*t", Variable::b, 4);
    EXPECT_EQ(t.coeff_exact(1), CQ(Rational(-1, 3)));
    EXPECT_EQ(t.coeff_exact(2), CQ(Rational(1)));

    for (const char* bad : {"", "2z", "z^-", "1/*z", "(1+i*z", "z^1.5", "t^-1", "3 4"})
        EXPECT_THROW(parse_series_literal(bad, bad[0] == 't' ? Variable::b : Variable::z, 4), std::invalid_argument)
            << bad;
    EXPECT_THROW(parse_series_literal("t^2", Variable::z, 4), std::invalid_argument);
}

TEST(SeriesJson, RoundTrip)
{
    FormalSeries x0 = solve_henon(30);
    EXPECT_EQ(series_from_json(Json::parse(series_to_json(x0).dump())), x0);
    FormalSeries f = x0.to_float(128);
    EXPECT_EQ(series_from_json(Json::parse(series_to_json(f).dump())), f);
}

TEST(Cli, SolveHenonGolden)
{
    CliRun r = run_cli({"solve", "henon", "--order", "10"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    Json d = r.doc();
    const Json& c = d["result"]["x0"]["coeffs"];
    EXPECT_EQ(c[0], "-6");
    EXPECT_EQ(c[2], "15/2");
    EXPECT_EQ(c[4], "-663/40");
    EXPECT_TRUE(d["result"]["checks"]["equation"].get<bool>());
    EXPECT_TRUE(d["result"]["checks"]["sign_alternation"].get<bool>());
    EXPECT_EQ(d["config"]["order"], 10);
    EXPECT_EQ(d["schema"], kSchemaId);
}

TEST(Cli, SolveHenonLin)
{
    CliRun r = run_cli({"solve", "henon-lin", "--order", "12"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    Json d = r.doc();
    const Json& p2 = d["result"]["phi2"];
    EXPECT_EQ(p2["min_order"], -4);
    EXPECT_EQ(p2["coeffs"][0], "1/84");
    EXPECT_EQ(p2["coeffs"][2], "17/840");
    EXPECT_EQ(p2["coeffs"][4], "-17/2240");
    EXPECT_TRUE(d["result"]["checks"]["wronskian_is_one"].get<bool>());
    EXPECT_TRUE(d["result"]["checks"]["phi2_equation"].get<bool>());
}

TEST(Cli, OtherSolvers)
{
    for (std::vector<std::string> args : {
             std::vector<std::string>{"solve", "linear1", "--a", "z^-2", "--order", "12"},
             {"solve", "linear2", "--b", "z^-3 + 1/2*z^-5", "--order", "12"},
             {"solve", "abel", "--a", "1/10*z^-2", "--offset", "3/10", "--order", "10"},
             {"solve", "formal-integral", "--order-b", "2", "--order", "20"},
             {"solve", "cohomological", "--beta", "t^2", "--order", "6"},
         }) {
        CliRun r = run_cli(args);
        ASSERT_EQ(r.code, exit_code::ok) << args[1] << ": " << r.err;
        for (auto& [k, v] : r.doc()["result"]["checks"].items())
            if (v.is_boolean())
                EXPECT_TRUE(v.get<bool>()) << args[1] << " " << k;
    }
    Json coh = run_cli({"solve", "cohomological", "--beta", "t^2", "--order", "6"}).doc();
    EXPECT_EQ(coh["result"]["gamma"][0], "-1/12");
    EXPECT_EQ(coh["result"]["gamma"][1], "1/240");
    // psi_1 = -t^2/12
    EXPECT_EQ(coh["result"]["psi"][0]["coeffs"][0], "-1/12");
    EXPECT_EQ(coh["result"]["psi"][0]["min_order"], 2);

    Json zero = run_cli({"solve", "abel", "--a", "0"}).doc();
    EXPECT_TRUE(zero["result"]["phi"]["coeffs"].empty());
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run_cli({"solve", "henon", "--order", "0"}).code, exit_code::invalid_args);
    EXPECT_EQ(run_cli({"solve", "henon", "--order", "1"}).code, exit_code::invalid_args);
    EXPECT_EQ(run_cli({"solve"}).code, exit_code::invalid_args);
    EXPECT_EQ(run_cli({"frobnicate"}).code, exit_code::invalid_args);
    EXPECT_EQ(run_cli({"solve", "abel", "--a", "z^-"}).code, exit_code::invalid_args);
    EXPECT_EQ(run_cli({"sum", "--format", "csv"}).code, exit_code::invalid_args);
    // rho != 0 case is out of scope and rejected by the solver
    EXPECT_EQ(run_cli({"solve", "abel", "--a", "z^-1"}).code, exit_code::invalid_args);
    // Laplace sum across the Stokes direction pi/2
    EXPECT_EQ(run_cli({"sum", "--solver", "linear1", "--a", "z^-2", "--z", "5", "--theta", "1.5707963"}).code,
              exit_code::solver_error);
    CliRun b = run_cli({"sum", "--solver", "henon", "--z", "1e9", "--budget", "10"});
    EXPECT_EQ(b.code, exit_code::budget);
    EXPECT_EQ(b.doc()["error"]["code"], 4);
    EXPECT_EQ(run_cli({"--help"}).code, exit_code::ok);
}

TEST(Cli, SumLinearMatchesClosedForm)
{
    // phi(z+1) - phi(z) = z^-2 has the Borel sum -psi'(z) = -trigamma(z); at z = 5 the
    // trigamma value is pi^2/6 - sum_{k<5} 1/k^2.
    CliRun r = run_cli({"sum", "--solver", "linear1", "--a", "z^-2", "--z", "5", "--order", "60", "--prec", "128"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    Json d = r.doc();
    double trigamma = M_PI * M_PI / 6 - (1 + 1 / 4.0 + 1 / 9.0 + 1 / 16.0);
    EXPECT_NEAR(std::stod(d["result"]["value_re"].get<std::string>()), -trigamma, 1e-14);
    EXPECT_NEAR(std::stod(d["result"]["value_im"].get<std::string>()), 0, 1e-14);
}

TEST(Cli, StokesLinear)
{
    CliRun r = run_cli({"stokes", "linear", "--a", "z^-2", "--m", "3"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    Json A = r.doc()["result"]["A"];
    ASSERT_EQ(A.size(), 3u);
    for (int m = 1; m <= 3; ++m) {
        EXPECT_EQ(A[m - 1]["m"], m);
        EXPECT_NEAR(std::stod(A[m - 1]["re"].get<std::string>()), 4 * M_PI * M_PI * m, 1e-12);
    }
    EXPECT_EQ(A[1]["exact"], "-2*L^2");
}

TEST(Cli, VerifyAlien)
{
    CliRun r = run_cli({"verify", "alien", "--max-grade", "6"});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    Json d = r.doc();
    ASSERT_EQ(d["result"]["grades"].size(), 6u);
    for (const auto& g : d["result"]["grades"])
        EXPECT_TRUE(g["pass"].get<bool>());
    EXPECT_EQ(run_cli({"verify", "alien", "--max-grade", "0"}).code, exit_code::invalid_args);
    EXPECT_EQ(run_cli({"verify", "roundtrip", "--m", "4"}).code, exit_code::ok);
    EXPECT_EQ(run_cli({"verify", "residuals", "--order", "30", "--order-b", "2"}).code, exit_code::ok);
}

TEST(Cli, ConfigFileAndOverrides)
{
    const std::string path = ::testing::TempDir() + "resurge_cli_config.json";
    {
        std::ofstream f(path);
        f << R"({"order": 12, "precision_bits": 160})";
    }
    CliRun r = run_cli({"solve", "henon", "--config", path});
    ASSERT_EQ(r.code, exit_code::ok) << r.err;
    Json d = r.doc();
    EXPECT_EQ(d["config"]["order"], 12);
    EXPECT_EQ(d["config"]["precision_bits"], 160);
    EXPECT_EQ(d["result"]["x0"]["truncation_order"], 12);
    // flags win over the file
    EXPECT_EQ(run_cli({"solve", "henon", "--config", path, "--order", "8"}).doc()["config"]["order"], 8);

    ::setenv("RESURGE_CONFIG", path.c_str(), 1);
    EXPECT_EQ(run_cli({"solve", "henon"}).doc()["config"]["order"], 12);
    ::unsetenv("RESURGE_CONFIG");

    for (const char* bad : {R"({"order": -3})", R"({"tol": 0})", R"({"unknown": 1})", R"({"format": "xml"})",
                            R"({"order": "ten"})", "not json"}) {
        std::ofstream(path) << bad;
        EXPECT_EQ(run_cli({"solve", "henon", "--config", path}).code, exit_code::invalid_args) << bad;
    }
    EXPECT_EQ(run_cli({"solve", "henon", "--config", "/nonexistent/config.json"}).code, exit_code::invalid_args);
}

TEST(Cli, CsvOutput)
{
    CliRun r = run_cli({"solve", "henon", "--order", "6", "--format", "csv"});
    ASSERT_EQ(r.code, exit_code::ok);
    std::istringstream in(r.out);
    std::string echo, header, row;
    std::getline(in, echo);
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(echo.substr(0, 2), "# ");
    EXPECT_EQ(Json::parse(echo.substr(2))["config"]["format"], "csv");
    EXPECT_EQ(header, "series,order,re,im");
    EXPECT_EQ(row, "x0,2,-6,0");

    CliRun p = run_cli({"export-plot", "--kind", "gamma-hat", "--points", "2", "--m-max", "200", "--format", "csv"});
    ASSERT_EQ(p.code, exit_code::ok) << p.err;
    EXPECT_NE(p.out.find("M,abs_error\n100,"), std::string::npos);
}

TEST(Cli, DeterministicAcrossRunsAndThreads)
{
    std::vector<std::string> args{"stokes", "horn", "--a", "1/10*z^-2", "--m", "1", "--samples", "16", "--prec", "128"};
    CliRun a = run_cli(args);
    ASSERT_EQ(a.code, exit_code::ok) << a.err;
    EXPECT_EQ(run_cli(args).out, a.out);
    args.insert(args.end(), {"--threads", "4"});
    CliRun b = run_cli(args);
    ASSERT_EQ(b.code, exit_code::ok);
    EXPECT_EQ(b.doc()["result"].dump(), a.doc()["result"].dump());
    EXPECT_EQ(b.doc()["config"]["threads"], 4);
}

TEST(Cli, OutputFile)
{
    const std::string path = ::testing::TempDir() + "resurge_cli_out.json";
    CliRun r = run_cli({"solve", "henon", "--order", "4", "--output", path});
    ASSERT_EQ(r.code, exit_code::ok);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    Json d = Json::parse(f);
    EXPECT_EQ(d["result"]["x0"]["coeffs"][0], "-6");
}
