#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "prolate/run_config.hpp"

using namespace prolate;
namespace fs = std::filesystem;
using io::json;

namespace
{

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("prolate_io_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(PROLATE_CLI) + " " + args + " >/dev/null 2>&1";
    const int status      = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
    {
        out.push_back(l);
    }
    return out;
}

} // namespace

TEST_CASE("operator round trip")
{
    const auto dir = scratch("operator");
    for (const auto& op : {prolate_operator(64, 0.2), periodic_prolate_operator(32, 16, 5),
                           prolate_operator_2d(4, 6, 0.25, 0.1)})
    {
        io::save_operator(op, dir / "op.json");
        const auto back = io::load_operator(dir / "op.json");
        CHECK(back.size() == op.size());
        CHECK(back.is_separable() == op.is_separable());
        CHECK(back.group().kind == op.group().kind);
        CHECK((back.dense() - op.dense()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("decomposition round trip is bit exact")
{
    const auto dir = scratch("decomposition");
    for (const auto& op : {prolate_operator(64, 0.2), toeplitz_from_symbol(Symbol<double>::constant(1.0), 8),
                           prolate_operator_2d(3, 4, 0.2, 0.3)})
    {
        const auto dec = eig_hermitian(op);
        io::persist_decomposition(dec, dir / "dec.json");
        const auto back = io::load_decomposition(dir / "dec.json");
        CHECK(back.eigenvalues.size() == dec.eigenvalues.size());
        CHECK((back.eigenvalues.array() == dec.eigenvalues.array()).all());
        CHECK((back.eigenvectors.array() == dec.eigenvectors.array()).all());
        CHECK(back.trace == dec.trace);
        CHECK(back.shape == dec.shape);
    }
}

TEST_CASE("truncated decomposition file is a parse error")
{
    const auto dir = scratch("truncated");
    io::persist_decomposition(eig_hermitian(prolate_operator(16, 0.2)), dir / "dec.json");
    const std::string text = slurp(dir / "dec.json");
    io::write_text(dir / "cut.json", text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(io::load_decomposition(dir / "cut.json"), ParseError);
    try
    {
        io::load_decomposition(dir / "cut.json");
    }
    catch (const ParseError& e)
    {
        CHECK(exit_code_for(e) == exit_code::io);
    }
    CHECK_THROWS_AS(io::load_decomposition(dir / "missing.json"), IoError);

    io::write_text(dir / "wrong.json", R"({"format": "prolate.decomposition", "version": 1})");
    CHECK_THROWS_AS(io::load_decomposition(dir / "wrong.json"), ParseError);
}

TEST_CASE("complex CSV parsing")
{
    const auto dir = scratch("csv");
    io::write_text(dir / "a.csv", "re,im\n1,2\n-0.5,0\n3e-1,4\n");
    const auto v = io::read_complex_csv(dir / "a.csv");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == std::complex<double>(1, 2));
    CHECK(v[2] == std::complex<double>(0.3, 4));

    io::write_text(dir / "b.csv", "1\n2\n3\n");
    CHECK(io::read_complex_csv(dir / "b.csv").size() == 3);

    io::write_text(dir / "c.csv", "1\nx\n3\n");
    CHECK_THROWS_AS(io::read_complex_csv(dir / "c.csv"), ParseError);

    CHECK(io::format_double(0.1) == "0.10000000000000001");
    CHECK(lines(io::eigenvalues_csv(RealVector<double>::Constant(2, 0.5)))[0] == "index,eigenvalue");
}

TEST_CASE("config validation")
{
    const json good = json::parse(R"({"task": "study", "sizes": [64, 128],
        "problem": {"group": "Z", "window": {"kind": "block", "size": 64},
                    "band": {"kind": "symmetric", "W": 0.2}},
        "tolerances": {"trace": 1e-8}, "params": {"metric": "trace"}})");
    const auto cfg = parse_config(good);
    CHECK(cfg.task == Task::Study);
    CHECK(cfg.sizes == std::vector<Index>{64, 128});
    CHECK(cfg.seed == 20170523u);

    auto bad     = good;
    bad["sizes"] = {128, 64};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad                        = good;
    bad["tolerances"]["trace"] = -1.0;
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad         = good;
    bad["task"] = "nonsense";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    bad                           = good;
    bad["problem"]["band"]["W"]   = 0.7;
    CHECK_THROWS(parse_config(bad));
    CHECK(parse_task("multitaper") == Task::Multitaper);
    CHECK(to_string(Task::Szego) == "szego");
}

TEST_CASE("eigs task writes descending eigenvalues")
{
    const json j = json::parse(R"({"task": "eigs",
        "problem": {"group": "Z", "window": {"kind": "block", "size": 8},
                    "band": {"kind": "symmetric", "W": 0.25}}})");
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run_config(parse_config(j), out, err) == exit_code::ok);
    const auto rows = lines(out.str());
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "index,eigenvalue");
    double prev = 2;
    double sum  = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        const double v = std::stod(rows[i].substr(rows[i].find(',') + 1));
        CHECK(v <= prev);
        prev = v;
        sum += v;
    }
    CHECK(sum == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("study task is reproducible byte for byte")
{
    const auto dir = scratch("study");
    json j         = json::parse(R"({"task": "study", "sizes": [64, 128],
        "problem": {"group": "Z", "window": {"kind": "block", "size": 64},
                    "band": {"kind": "symmetric", "W": 0.2}},
        "params": {"metric": "trace"}})");
    const auto rows = run_study(parse_config(j));
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows)
    {
        CHECK(r.metric == "trace");
        CHECK(r.abs_gap < 1e-8 * static_cast<double>(r.n));
        CHECK(!r.violated);
    }

    std::ostringstream sink;
    j["out"] = (dir / "a").string();
    CHECK(run_config(parse_config(j), sink, sink) == exit_code::ok);
    j["out"] = (dir / "b").string();
    CHECK(run_config(parse_config(j), sink, sink) == exit_code::ok);
    const std::string a = slurp(dir / "a" / "study.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(dir / "b" / "study.csv"));
    CHECK(lines(a)[0] == "N,metric,lhs,rhs,abs_gap");
}

TEST_CASE("tolerance violations exit with the numeric code")
{
    const json j = json::parse(R"({"task": "study", "sizes": [64],
        "problem": {"group": "Z", "window": {"kind": "block", "size": 64},
                    "band": {"kind": "symmetric", "W": 0.2}},
        "tolerances": {"trace": 1e-30}, "params": {"metric": "trace"}})");
    std::ostringstream out;
    std::ostringstream err;
    const auto rows = run_study(parse_config(j));
    // the exact trace is 25.6; a gap of zero would not violate
    if (rows[0].abs_gap > 0)
    {
        CHECK(run_config(parse_config(j), out, err) == exit_code::numeric);
        CHECK(!err.str().empty());
    }
    else
    {
        CHECK(run_config(parse_config(j), out, err) == exit_code::ok);
    }
}

TEST_CASE("command line exit codes")
{
    const auto dir = scratch("cli");
    const std::string out = " --out " + (dir / "run").string();
    CHECK(run_cli("eigs -n 8 -W 0.25" + out) == 0);
    CHECK(fs::exists(dir / "run" / "eigs.csv"));
    CHECK(run_cli("build -n 16 -W 0.2" + out) == 0);
    CHECK(fs::exists(dir / "run" / "operator.json"));

    CHECK(run_cli("") == 2);
    CHECK(run_cli("eigs --bogus") == 2);
    CHECK(run_cli("eigs -n 8 -W 0.9") == 2);
    CHECK(run_cli("eigs --config " + (dir / "nope.json").string()) == 4);

    io::write_text(dir / "cut.json", R"({"task": "eigs", "problem": {"group": )");
    CHECK(run_cli("eigs --config " + (dir / "cut.json").string()) == 4);

    // a saved decomposition cut in half cannot feed a solve
    io::persist_decomposition(eig_hermitian(prolate_operator(16, 0.2)), dir / "dec.json");
    const std::string text = slurp(dir / "dec.json");
    io::write_text(dir / "half.json", text.substr(0, text.size() / 2));
    io::write_text(dir / "rhs.csv", "1\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n0\n");
    CHECK(run_cli("solve --operator " + (dir / "half.json").string() + " --rhs " + (dir / "rhs.csv").string()) != 0);

    CHECK(run_cli("study --metric trace --sizes 64,128 -n 64 -W 0.2 --tol trace=1e-8" + out) == 0);
    CHECK(run_cli("approx --theorem 4 -n 128 -W 0.1 --eps 0.01" + out) == 0);
    CHECK(run_cli("solve -n 16 -W 0.2 --rank 16 --rhs " + (dir / "rhs.csv").string() + out) == 3);
}
