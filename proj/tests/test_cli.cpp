#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exitCode;
    std::string out;
};

RunResult run(const std::string& args, bool mergeStderr = true) {
    const std::string cmd =
        std::string(SHIFTMETRIC_CLI_PATH) + " " + args + (mergeStderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe))
        out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("heights: quadratic far out in the shift locus") {
    const auto r = run("heights '{\"degree\":2,\"coeffs\":[[1000000,0]]}' --tol 1e-9");
    CHECK(r.exitCode == 0);
    // 0.5 log(1e6) = 6.9077...
    CHECK(r.out.find("6.90") != std::string::npos);
    CHECK(r.out.find("\"shiftLocus\":true") != std::string::npos);
}

TEST_CASE("heights: z^3 is flagged as outside the shift locus") {
    const auto r = run("heights '{\"degree\":3,\"coeffs\":[[0,0],[0,0]]}'");
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("\"shiftLocus\":false") != std::string::npos);
    CHECK(r.out.find("not shift locus") != std::string::npos);
}

TEST_CASE("heights: malformed JSON exits 2 with a parse error") {
    const auto r = run("heights '{\"degree\":2,'");
    CHECK(r.exitCode == 2);
    CHECK(r.out.find("parse error") != std::string::npos);
}

TEST_CASE("entropy: uniform log3 lengths have unit entropy") {
    const auto r = run("entropy --lengths log3,log3");
    CHECK(r.exitCode == 0);
    CHECK(std::stod(r.out) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("entropy: spectral method on the 4-petal rose") {
    const auto r = run("entropy --lengths 1,1,1,1 --method spectral");
    CHECK(r.exitCode == 0);
    CHECK(std::stod(r.out) == doctest::Approx(std::log(7.0)).epsilon(1e-9));
}

TEST_CASE("entropy: method disagreement is detected") {
    const auto r = run("entropy --lengths 1,1 --inject-bias 1e-3");
    CHECK(r.exitCode == 1);
    CHECK(r.out.find("disagree") != std::string::npos);
}

TEST_CASE("norm: tangent projection yields a positive norm") {
    const auto r = run("norm --lengths 1,2,0.5,1.3 --vector 1,-1,0.5,0");
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("\"normSq\":") != std::string::npos);
}

TEST_CASE("distance: identical endpoints are at distance zero") {
    const auto r = run("distance --heightsA 2,1 --heightsB 2,1");
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("\"upperBound\":0.0") != std::string::npos);
    CHECK(r.out.find("upper-bound") != std::string::npos);
}

TEST_CASE("distance: symmetric within optimizer tolerance") {
    const auto a = run("distance --heightsA 2,1 --heightsB 3,1.7 --refine 1");
    const auto b = run("distance --heightsA 3,1.7 --heightsB 2,1 --refine 1");
    CHECK(a.exitCode == 0);
    CHECK(b.exitCode == 0);
    auto value = [](const std::string& s) {
        const auto pos = s.find("\"upperBound\":");
        return std::stod(s.substr(pos + 13));
    };
    CHECK(value(a.out) == doctest::Approx(value(b.out)).epsilon(1e-3));
}

TEST_CASE("distance: refinement never raises the bound") {
    auto value = [](const std::string& s) {
        const auto pos = s.find("\"upperBound\":");
        return std::stod(s.substr(pos + 13));
    };
    const auto r0 = run("distance --heightsA 2,1 --heightsB 4,1.3 --refine 0");
    const auto r2 = run("distance --heightsA 2,1 --heightsB 4,1.3 --refine 2");
    CHECK(r0.exitCode == 0);
    CHECK(r2.exitCode == 0);
    CHECK(value(r2.out) <= value(r0.out) * (1.0 + 1e-12));
}

TEST_CASE("regimes: divergent family is reported as such") {
    const auto r = run("regimes --family '{\"D\":3,\"regime\":\"h2=h1/log\"}' "
                       "--kgrid 8,16,32,64,128,256,512,1024 --out /dev/null");
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("\"classification\":\"divergent-consistent\"") != std::string::npos);
    CHECK(r.out.find("\"caseTag\":\"2c\"") != std::string::npos);
}

TEST_CASE("sweep-s2: sample refinement moves estimates by less than 5%") {
    const auto a = run("sweep-s2 --levels 0.5 --samples 32 --out /tmp/sm_ref_a.csv");
    const auto b = run("sweep-s2 --levels 0.5 --samples 64 --out /tmp/sm_ref_b.csv");
    CHECK(a.exitCode == 0);
    CHECK(b.exitCode == 0);
    auto value = [](const std::string& csv) {
        const auto nl = csv.find('\n');
        const auto c1 = csv.find(',', nl);
        return std::stod(csv.substr(c1 + 1));
    };
    const double va = value(slurp("/tmp/sm_ref_a.csv"));
    const double vb = value(slurp("/tmp/sm_ref_b.csv"));
    CHECK(std::abs(va - vb) <= 0.05 * std::max(va, vb));
}

TEST_CASE("output does not depend on the worker count") {
    const auto one = run("sweep-s2 --levels 0.7 --samples 16 --out /tmp/sm_t1.csv",
                         true);
    CHECK(one.exitCode == 0);
    const std::string cmd = std::string("SHIFTMETRIC_THREADS=4 ") + SHIFTMETRIC_CLI_PATH +
                            " sweep-s2 --levels 0.7 --samples 16 --out /tmp/sm_t4.csv 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(slurp("/tmp/sm_t1.csv") == slurp("/tmp/sm_t4.csv"));
}

TEST_CASE("regimes: deterministic byte-identical CSV") {
    const std::string fam = "'{\"D\":3,\"regime\":\"h2=a*h1\",\"a\":0.5}'";
    const std::string grid = "--kgrid 16,64,256,1024";
    const auto r1 = run("regimes --family " + fam + " " + grid +
                        " --out /tmp/sm_regimes_1.csv --json /tmp/sm_regimes_1.json");
    const auto r2 = run("regimes --family " + fam + " " + grid +
                        " --out /tmp/sm_regimes_2.csv --json /tmp/sm_regimes_2.json");
    CHECK(r1.exitCode == 0);
    CHECK(r2.exitCode == 0);
    const auto csv1 = slurp("/tmp/sm_regimes_1.csv");
    CHECK(csv1 == slurp("/tmp/sm_regimes_2.csv"));
    CHECK(csv1.rfind("k,h1,h2,entropy,", 0) == 0);
    CHECK(slurp("/tmp/sm_regimes_1.json").find("Cauchy-consistent") != std::string::npos);
}

TEST_CASE("sweep-s2: csv header contract and determinism") {
    const auto r = run("sweep-s2 --levels 0.5 --samples 8 --out /tmp/sm_sweep.csv");
    CHECK(r.exitCode == 0);
    const auto csv = slurp("/tmp/sm_sweep.csv");
    CHECK(csv.rfind("h,length,samples\n", 0) == 0);
    CHECK(csv.find("0.5,") != std::string::npos);

    const auto r2 = run("sweep-s2 --levels 0.5 --samples 8 --out /tmp/sm_sweep2.csv");
    CHECK(r2.exitCode == 0);
    CHECK(csv == slurp("/tmp/sm_sweep2.csv"));
}

TEST_CASE("length inputs accept the JSON array format") {
    const auto r = run("entropy --lengths '[1.0986122886681098,1.0986122886681098]'");
    CHECK(r.exitCode == 0);
    CHECK(std::stod(r.out) == doctest::Approx(1.0).epsilon(1e-9));
    // extended entries via the "inf" string drop out exactly
    const auto e = run("entropy --lengths '[1.0,2.0,\"inf\",\"inf\"]' --method spectral");
    CHECK(e.exitCode == 0);
    const auto sub = run("entropy --lengths 1,2 --method spectral");
    CHECK(std::stod(e.out) == doctest::Approx(std::stod(sub.out)).epsilon(1e-12));
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("entropy").exitCode == 2);          // missing required option
    CHECK(run("nonsense-subcommand").exitCode == 2);
    CHECK(run("sweep-s2 --levels -1,2").exitCode == 2); // negative level
}
