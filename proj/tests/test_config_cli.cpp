#include <doctest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sshbp/cli.hpp"
#include "sshbp/config.hpp"
#include "sshbp/errors.hpp"

using namespace sshbp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / ("sshbp_test_" + name + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small lattice keeps the CLI tests fast.
std::vector<std::string> small(std::vector<std::string> args)
{
    for (const char* a : {"--n_sites", "21"})
        args.emplace_back(a);
    return args;
}

} // namespace

TEST_CASE("config text parsing")
{
    const ConfigText t = ConfigText::parse("# comment\n  gamma = 7.5  # trailing\n\nband=idler\n");
    CHECK(t.get("gamma") == "7.5");
    CHECK(t.get("band") == "idler");
    const RunConfig cfg = apply_config(t);
    CHECK(cfg.lattice.gamma == 7.5);
    CHECK(cfg.band == Band::idler);
    CHECK_THROWS_AS(ConfigText::parse("no equals sign\n"), ValidationError);
}

TEST_CASE("unknown keys and bad values name the field")
{
    try {
        apply_config(ConfigText::parse("gama = 1\n"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "gama");
    }
    try {
        apply_config(ConfigText::parse("n_sites = many\n"));
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "n_sites");
    }
    RunConfig cfg;
    cfg.delta = 0.7;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("serialization round trip preserves the hash")
{
    RunConfig cfg;
    cfg.delta = 0.25;
    cfg.checkpoint_fractions = {0.1, 0.3};
    cfg.disorder_model = DisorderModel::position_shift;
    cfg.lattice.band(Band::signal).t_long = 12345.678;
    const RunConfig back = apply_config(ConfigText::parse(serialize(cfg)));
    CHECK(serialize(back) == serialize(cfg));
    CHECK(config_hash(back) == config_hash(cfg));
    CHECK(config_hash(cfg) != config_hash(RunConfig{}));
    CHECK(config_hash(RunConfig{}).size() == 16);
}

TEST_CASE("every key is serialized")
{
    const std::string text = serialize(RunConfig{});
    for (const auto& key : config_keys())
        CHECK(text.find(key + " = ") != std::string::npos);
}

TEST_CASE("lattice-only config")
{
    const LatticeSpec spec = lattice_from_config(ConfigText::parse("n_sites = 11\n"));
    CHECK(spec.n_sites == 11);
    CHECK_THROWS_AS(lattice_from_config(ConfigText::parse("delta = 0.1\n")), ValidationError);
}

TEST_CASE("shipped config matches the built-in defaults")
{
    const RunConfig cfg = apply_config(ConfigText::load(SSHBP_SOURCE_DIR "/configs/default.config"));
    CHECK(config_hash(cfg) == config_hash(RunConfig{}));
}

TEST_CASE("eigenmodes writes self-describing files")
{
    TempDir tmp("eig");
    const Result r = run(small({"eigenmodes", "--out", tmp.path.string()}));
    REQUIRE(r.code == 0);
    for (const char* f : {"eigenmodes.csv", "localized_modes.csv", "eigenmodes.resolved.config"})
        CHECK(fs::exists(tmp.path / f));
    const std::string csv = slurp(tmp.path / "eigenmodes.csv");
    CHECK(csv.rfind("# sshbp ", 0) == 0);
    CHECK(csv.find("# config_hash: ") != std::string::npos);
    CHECK(csv.find("# master_seed: 20220101") != std::string::npos);
    CHECK(csv.find(",topological,") != std::string::npos);
    const RunConfig resolved = apply_config(ConfigText::load(tmp.path / "eigenmodes.resolved.config"));
    CHECK(resolved.lattice.n_sites == 21);
}

TEST_CASE("invalid configuration exits 2 and leaves nothing behind")
{
    TempDir tmp("bad");
    const Result r = run({"biphoton", "--n_sites", "20", "--out", tmp.path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("n_sites") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.path));

    const Result unknown = run({"frobnicate"});
    CHECK(unknown.code == 2);
    const Result missing = run({"eigenmodes", "--config", (tmp.path / "nope.config").string()});
    CHECK(missing.code == 2);
}

TEST_CASE("runtime failure removes partial outputs")
{
    TempDir tmp("partial");
    const Result r = run(small({"biphoton", "--z_panels", "1", "--out", tmp.path.string()}));
    CHECK(r.code == 1);
    CHECK(r.err.find("panels") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp.path));
}

TEST_CASE("help exits cleanly")
{
    const Result r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("paper-repro") != std::string::npos);
}

TEST_CASE("reruns are byte identical")
{
    TempDir a("rerun_a"), b("rerun_b");
    REQUIRE(run(small({"biphoton", "--out", a.path.string()})).code == 0);
    REQUIRE(run(small({"biphoton", "--out", b.path.string()})).code == 0);
    int files = 0;
    for (const auto& entry : fs::directory_iterator(a.path)) {
        CHECK(slurp(entry.path()) == slurp(b.path / entry.path().filename()));
        ++files;
    }
    CHECK(files == 8);
}

TEST_CASE("single clean realization has zero standard error")
{
    TempDir tmp("ens");
    REQUIRE(run(small({"ensemble", "--delta", "0", "--n", "1", "--out", tmp.path.string()})).code == 0);
    const auto j = nlohmann::json::parse(slurp(tmp.path / "ensemble_summary.json"));
    REQUIRE(j["deltas"].size() == 1);
    for (const char* key : {"p_TpTp", "p_Tr1Tr2", "p_Tr2Tr1", "p_Tr1Tr1", "p_Tr2Tr2", "p_TpTr_any", "residual"})
        CHECK(j["deltas"][0][key]["stderr"].get<double>() == 0.0);
}

TEST_CASE("schmidt on a count file")
{
    TempDir tmp("counts");
    fs::create_directories(tmp.path);
    {
        std::ofstream f(tmp.path / "counts.csv");
        f << "# synthetic\n4,0\n0,1\n";
    }
    const fs::path out = tmp.path / "out";
    REQUIRE(run({"schmidt", "--counts", (tmp.path / "counts.csv").string(), "--out", out.string()}).code == 0);
    const auto j = nlohmann::json::parse(slurp(out / "schmidt.json"));
    CHECK(j["counts"]["leading"][1].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("output root comes from the environment")
{
    TempDir tmp("root");
    ::setenv(cli::kOutputRootEnv, tmp.path.string().c_str(), 1);
    REQUIRE(run(small({"pump", "--pump_steps", "4"})).code == 0);
    ::unsetenv(cli::kOutputRootEnv);
    CHECK(fs::exists(tmp.path / "pump" / "pump.csv"));
}

TEST_CASE("paper-repro writes every dataset")
{
    TempDir tmp("repro");
    const Result r = run(small({"paper-repro", "--n_realizations", "2", "--sweep_realizations", "2", "--delta_grid",
                                "0.1,0.3", "--sweep_delta_grid", "0,0.2", "--out", tmp.path.string()}));
    REQUIRE(r.code == 0);
    for (const char* f : {"eigenmodes.csv", "pump.csv", "biphoton_A.csv", "biphoton_B.csv", "biphoton_C.csv",
                          "correlation_d0.csv", "correlation_d0.2.csv", "correlation_d0.4.csv", "populations.csv",
                          "populations.json", "schmidt.csv", "ensemble.csv", "ensemble_summary.json", "sweep.csv",
                          "sweep_summary.json", "paper-repro.resolved.config"})
        CHECK_MESSAGE(fs::exists(tmp.path / f), f);
}
