#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tori;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    static fs::path d = [] {
        fs::path p = fs::temp_directory_path() / ("tori_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return d;
}

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args)
{
    std::string cmd = std::string(TORI_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = ::popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t k = std::fread(buf, 1, sizeof buf, p))
        out.append(buf, k);
    int status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

} // namespace

TEST(CertificateFormat, RoundTripIsByteIdentical)
{
    for (const auto& id : catalog_ids()) {
        auto e = catalog_entry(id);
        std::string a = emit_certificate(make_certificate(e.data, {{"catalog_id", id}}));
        auto c = parse_certificate(a);
        EXPECT_EQ(emit_certificate(c), a) << id;
        EXPECT_TRUE(verify_certificate(c).verified()) << id;
        EXPECT_TRUE(c.exact());
    }
}

TEST(CertificateFormat, ScalarEncodings)
{
    auto e = catalog_entry("ex-rank5");
    auto j = certificate_to_json(make_certificate(e.data));
    EXPECT_EQ(j["format_version"], 1);
    EXPECT_EQ(j["kind"], "homogeneous");
    EXPECT_EQ(j["Q"][0][0], "1/1");
    ASSERT_TRUE(j["Q"][0][1].is_object());
    EXPECT_EQ(j["Q"][0][1]["minpoly"], json({"-10801", "0", "1"}));
    EXPECT_EQ(j["Y"][3], json({6, 12, -15}));
    EXPECT_EQ(format_double(1.0), "1.0");
    EXPECT_EQ(parse_double(format_double(0.1)), 0.1);
}

TEST(CertificateFormat, FloatingAndGeneralRoundTrip)
{
    auto d = cast_data<double>(catalog_entry("cubic-s7-b").data);
    auto c = make_certificate(d);
    auto text = emit_certificate(c);
    auto p = parse_certificate(text);
    EXPECT_EQ(p.mode, ScalarMode::floating);
    EXPECT_EQ(emit_certificate(p), text);
    EXPECT_TRUE(verify_certificate(p).verified());

    PythagoreanParams P;
    P.R1 = 0.01;
    auto F = pythagorean_family(P);
    auto g = make_general_certificate(F.gram, F.Q, F.Y);
    auto gt = emit_certificate(g);
    auto gp = parse_certificate(gt);
    EXPECT_EQ(emit_certificate(gp), gt);
    EXPECT_TRUE(verify_certificate(gp).verified());
}

TEST(CertificateFormat, MalformedInputsRaiseParseError)
{
    EXPECT_THROW(parse_certificate("{"), ParseError);
    EXPECT_THROW(parse_certificate("[]"), ParseError);
    auto text = emit_certificate(make_certificate(catalog_entry("clifford-3").data));
    auto j = json::parse(text);
    j["format_version"] = 2;
    EXPECT_THROW(certificate_from_json(j), ParseError);
    j = json::parse(text);
    j["Q"][0][1] = "1/0";
    EXPECT_THROW(certificate_from_json(j), ParseError);
    j = json::parse(text);
    j["weights"].erase(0);
    EXPECT_THROW(certificate_from_json(j), ParseError);
}

TEST(CertificateFormat, ReportJsonHasResidualStrings)
{
    auto r = verify_matrix_data(cast_data<double>(catalog_entry("clifford-3").data));
    auto j = report_to_json(r);
    EXPECT_EQ(j["verdict"], "verified");
    ASSERT_FALSE(j["residuals"].empty());
    EXPECT_TRUE(j["residuals"][0]["value"].is_string());
}

TEST(Cli, CatalogListAndUnknownId)
{
    auto r = cli("catalog --list");
    EXPECT_EQ(r.code, 0);
    int lines = 0;
    for (char ch : r.out)
        lines += ch == '\n';
    EXPECT_EQ(lines, 6);
    EXPECT_EQ(cli("catalog nope").code, 64);
    EXPECT_EQ(cli("frobnicate").code, 64);
}

TEST(Cli, VerifyExitCodes)
{
    auto dir = scratch_dir();
    auto good = dir / "ex-rank5.json";
    ASSERT_EQ(cli("catalog ex-rank5 --out " + good.string()).code, 0);
    EXPECT_EQ(cli("verify " + good.string()).code, 0);
    auto jr = cli("verify " + good.string() + " --format json");
    EXPECT_EQ(jr.code, 0);
    EXPECT_NE(jr.out.find("\"verdict\": \"verified\""), std::string::npos);

    auto j = json::parse(slurp(good));
    j["weights"][0] = "1/10";
    auto bad = dir / "tampered.json";
    write(bad, j.dump(2));
    auto r = cli("verify " + bad.string());
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("flat"), std::string::npos);

    auto trunc = dir / "trunc.json";
    write(trunc, slurp(good).substr(0, 80));
    EXPECT_EQ(cli("verify " + trunc.string()).code, 65);
    EXPECT_EQ(cli("verify " + (dir / "missing.json").string()).code, 65);
    EXPECT_EQ(cli("verify").code, 64);
}

TEST(Cli, VerifyIndeterminateAndToleranceFlag)
{
    auto dir = scratch_dir();
    auto d = cast_data<double>(catalog_entry("clifford-3").data);
    d.weights[0] += 5e-9, d.weights[1] -= 5e-9;
    auto f = dir / "near.json";
    write(f, emit_certificate(make_certificate(d)));
    EXPECT_EQ(cli("verify " + f.string()).code, 2);
    EXPECT_EQ(cli("verify --tol 1e-8 " + f.string()).code, 0);
    EXPECT_EQ(cli("verify --exact " + f.string()).code, 64);
    EXPECT_EQ(cli("verify " + f.string() + " --format yaml").code, 64);
}

TEST(Cli, ConstructCommands)
{
    auto dir = scratch_dir();
    auto y = dir / "exrank5Y.txt";
    write(y, "1 0 0 6 6\n0 1 0 12 9\n0 0 1 -15 -12\n");
    auto out = dir / "pencil.json";
    auto r = cli("construct pencil --Y " + y.string() + " --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("extension degree 2"), std::string::npos);
    auto built = parse_certificate(slurp(out));
    auto cat = catalog_entry("ex-rank5");
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            EXPECT_NEAR(built.Qx(i, k).to_double(), cat.data.Q(i, k).to_double(), 1e-8);
    for (int j = 0; j < 5; ++j)
        EXPECT_NEAR(built.wx[j].to_double(), cat.data.weights[j].to_double(), 1e-8);

    auto rat = dir / "rational.json";
    EXPECT_EQ(cli("construct rational --gram I3 --seed 1 --out " + rat.string()).code, 0);
    EXPECT_EQ(cli("verify " + rat.string()).code, 0);

    auto br = dir / "bryant.json";
    auto b = cli("construct bryant --mn 1 3 --rho 0 --out " + br.string());
    EXPECT_EQ(b.code, 0);
    EXPECT_NE(b.out.find("sphere S^5"), std::string::npos);
    EXPECT_EQ(parse_certificate(slurp(br)).N, 3);
    EXPECT_EQ(cli("construct bryant --mn 1 3 --rho 1").code, 2);
    EXPECT_EQ(cli("construct bryant --mn 1 3").code, 64);

    auto py = dir / "pyth.json";
    EXPECT_EQ(cli("construct pythagorean --triple 3 4 5 --R1 0.01 --out " + py.string()).code, 0);
    EXPECT_EQ(cli("verify " + py.string()).code, 0);
    EXPECT_EQ(cli("construct pythagorean --triple 3 4 6").code, 2);

    auto g = dir / "indef.txt";
    write(g, "1 0\n0 -1\n");
    EXPECT_EQ(cli("construct rational --gram " + g.string()).code, 2);
}

TEST(Cli, EnumerateCommands)
{
    auto dir = scratch_dir();
    auto r = cli("enumerate --gram I3 --target 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("3 classes"), std::string::npos);
    auto g = dir / "pyth_gram.txt";
    write(g, "1/3 0 0\n0 2/75 0\n0 0 2/75\n");
    auto p = cli("enumerate --gram " + g.string() + " --target 1");
    EXPECT_NE(p.out.find("12 classes"), std::string::npos);
    auto s = cli("enumerate --gram I2 --spectrum 3");
    EXPECT_EQ(s.code, 0);
    EXPECT_NE(s.out.find("1/1 39.47841760435743 4"), std::string::npos);
    auto bad = dir / "indef2.txt";
    write(bad, "1 2\n2 1\n");
    EXPECT_EQ(cli("enumerate --gram " + bad.string() + " --shortest").code, 2);
    EXPECT_EQ(cli("enumerate --gram I2").code, 64);
}

TEST(Cli, ReduceCommand)
{
    auto dir = scratch_dir();
    auto h = dir / "pyth_h.json";
    write(h, emit_certificate(make_certificate(pythagorean_family({}).homogeneous())));
    auto out = dir / "pyth_r.json";
    auto r = cli("reduce " + h.string() + " --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("S^23 ->"), std::string::npos);
    EXPECT_LE(parse_certificate(slurp(out)).N, 6);

    auto q = dir / "quartic.json";
    ASSERT_EQ(cli("catalog quartic-s7 --out " + q.string()).code, 0);
    auto q2 = dir / "quartic_r.json";
    EXPECT_EQ(cli("reduce " + q.string() + " --out " + q2.string()).code, 0);
    EXPECT_EQ(slurp(q), slurp(q2));

    auto j = json::parse(slurp(q));
    j["weights"][0] = "1/2";
    auto bad = dir / "quartic_bad.json";
    write(bad, j.dump());
    EXPECT_EQ(cli("reduce " + bad.string()).code, 1);
}
