#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "percmon/config.hpp"
#include "percmon/io.hpp"
#include "percmon/scenario.hpp"

using namespace percmon;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(PERCMON_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("percmon_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("config parsing") {
    RunConfig cfg;
    SUBCASE("known keys update the right fields") {
        cfg.apply("grid.cell_size", "0.2");
        cfg.apply("sensor.tau_tp", "0.9");
        cfg.apply("scenario.kind", "intersection");
        cfg.apply("sweep.sigmas", "0, 0.1, 0.2");
        CHECK(cfg.grid.cell_size == 0.2);
        CHECK(cfg.sensor.tau_tp == 0.9);
        CHECK(cfg.scenario.kind == ScenarioKind::Intersection);
        CHECK(cfg.sweep_sigmas.size() == 3);
    }
    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(cfg.apply("grid.cellsize", "0.2"), ConfigError);
        CHECK_THROWS_AS(cfg.apply("nonsense", "1"), ConfigError);
    }
    SUBCASE("bad values are rejected") {
        CHECK_THROWS_AS(cfg.apply("grid.cell_size", "abc"), ConfigError);
        CHECK_THROWS_AS(cfg.apply("scenario.n_pedestrians", "2.5"), ConfigError);
        CHECK_THROWS_AS(cfg.apply("inject.inward", "maybe"), ConfigError);
    }
    SUBCASE("seed propagates to the scenario") {
        cfg.apply("seed", "42");
        CHECK(cfg.scenario.seed == 42);
    }
    SUBCASE("config file with comments") {
        TempDir dir;
        const fs::path file = dir.path / "run.cfg";
        std::ofstream out(file);
        out << "# monitor configuration\n"
            << "grid.cell_size = 0.2\n"
            << "plaus.gamma_plaus = 1.5  # relaxed\n"
            << "\n";
        out.close();
        cfg.apply_file(file.string());
        CHECK(cfg.grid.cell_size == 0.2);
        CHECK(cfg.plausibility.gamma_plaus == 1.5);
    }
    SUBCASE("overrides") {
        cfg.apply_overrides({"grid.extent=50", "grid.cell_size=0.25"});
        CHECK(cfg.grid.extent == 50.0);
        CHECK_THROWS_AS(cfg.apply_overrides({"grid.extent"}), ConfigError);
    }
}

TEST_CASE("table defaults") {
    const RunConfig cfg;
    CHECK(cfg.grid.extent == 100.0);
    CHECK(cfg.grid.cell_size == 0.5);
    CHECK(cfg.sensor.tau_tp == 0.8);
    CHECK(cfg.sensor.tau_fn == 0.8);
    CHECK(cfg.sensor.delta_safe == 0.1);
    CHECK(cfg.sensor.gamma_sens == 3.0);
    CHECK(cfg.plausibility.a_acc == 7.0);
    CHECK(cfg.plausibility.a_br == -7.0);
    CHECK(cfg.plausibility.omega_max == doctest::Approx(M_PI / 2.0 / 0.2));
    CHECK(cfg.plausibility.dtheta_default == doctest::Approx(10.0 * M_PI / 180.0));
    CHECK(cfg.plausibility.gamma_plaus == 1.0);
}

TEST_CASE("object stream files round trip") {
    TempDir dir;
    ScenarioConfig cfg;
    cfg.n_pedestrians = 3;
    cfg.duration = 1.0;
    const ScenarioResult world = generate_scenario(cfg);
    const std::string path = (dir.path / "objects.jsonl").string();
    write_object_jsonl(world.objects, path);
    const auto back = read_object_jsonl(path);
    REQUIRE(back.size() == world.objects.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].id == world.objects[i].id);
        CHECK(back[i].x == world.objects[i].x);
        CHECK(back[i].theta == world.objects[i].theta);
        CHECK(back[i].dv == world.objects[i].dv);
    }

    const std::string ego_path = (dir.path / "ego.jsonl").string();
    write_ego_jsonl(world.ego, ego_path);
    const auto ego_back = read_ego_jsonl(ego_path);
    REQUIRE(ego_back.size() == world.ego.size());
    CHECK(ego_back.back().t == world.ego.back().t);
}

TEST_CASE("ledger files round trip, speed entries carry dv") {
    TempDir dir;
    std::vector<InjectedError> ledger;
    InjectedError a;
    a.frame = 3;
    a.object_id = 7;
    a.kind = ErrorKind::SpeedTransient;
    a.magnitude = 3.0;
    a.dv_applied = 3.0;
    ledger.push_back(a);
    InjectedError b;
    b.frame = 4;
    b.object_id = 8;
    b.kind = ErrorKind::PositionRandom;
    b.magnitude = 1.0;
    b.dx_applied = 0.6;
    b.dy_applied = 0.8;
    ledger.push_back(b);
    const std::string path = (dir.path / "ledger.jsonl").string();
    write_ledger_jsonl(ledger, path);
    const auto back = read_ledger_jsonl(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].kind == ErrorKind::SpeedTransient);
    CHECK(back[0].dv_applied == 3.0);
    CHECK(back[1].dx_applied == 0.6);
}

TEST_CASE("cli pipeline") {
    TempDir dir;
    const std::string base = " --out " + dir.str() +
                             " --seed 3"
                             " --set scenario.duration=2"
                             " --set scenario.n_pedestrians=4";

    REQUIRE(run_cli("scenario" + base) == 0);
    REQUIRE(fs::exists(dir.path / "objects.jsonl"));
    REQUIRE(fs::exists(dir.path / "ego.jsonl"));

    const std::string objects = (dir.path / "objects.jsonl").string();
    const std::string ego = (dir.path / "ego.jsonl").string();
    REQUIRE(run_cli("lidar --objects " + objects + " --ego " + ego + base) == 0);
    REQUIRE(fs::exists(dir.path / "cloud.csv"));

    REQUIRE(run_cli("inject --objects " + objects + " --ego " + ego + base +
                    " --set inject.kind=position_permanent"
                    " --set inject.magnitude=1.0") == 0);
    REQUIRE(fs::exists(dir.path / "injected.jsonl"));
    REQUIRE(fs::exists(dir.path / "ledger.jsonl"));

    REQUIRE(run_cli("monitor --objects " + (dir.path / "injected.jsonl").string() +
                    " --gt " + objects + " --clouds " +
                    (dir.path / "cloud.csv").string() + " --ego " + ego + base +
                    " --dump-grid 0") == 0);
    REQUIRE(fs::exists(dir.path / "sensor_verdicts.jsonl"));
    REQUIRE(fs::exists(dir.path / "plausibility_verdicts.jsonl"));
    REQUIRE(fs::exists(dir.path / "fn_cells.jsonl"));
    REQUIRE(fs::exists(dir.path / "grid_0.csv"));
    CHECK(slurp(dir.path / "grid_0.csv").rfind("ix,iy,p\n", 0) == 0);

    REQUIRE(run_cli("sweep" + base + " --set sweep.experiment=noise" +
                    " --set sweep.sigmas=0,0.1") == 0);
    REQUIRE(fs::exists(dir.path / "metrics.csv"));
    const std::string metrics = slurp(dir.path / "metrics.csv");
    CHECK(metrics.rfind("scenario,check,error_kind,magnitude,rate,tp,fp,fn,precision,"
                        "recall,false_alarm_rate\n", 0) == 0);

    SUBCASE("rerunning with the same seed gives byte-identical outputs") {
        TempDir dir2;
        const std::string base2 = " --out " + dir2.str() +
                                  " --seed 3"
                                  " --set scenario.duration=2"
                                  " --set scenario.n_pedestrians=4";
        REQUIRE(run_cli("scenario" + base2) == 0);
        REQUIRE(run_cli("lidar --objects " + (dir2.path / "objects.jsonl").string() +
                        " --ego " + (dir2.path / "ego.jsonl").string() + base2) == 0);
        REQUIRE(run_cli("inject --objects " + (dir2.path / "objects.jsonl").string() +
                        " --ego " + (dir2.path / "ego.jsonl").string() + base2 +
                        " --set inject.kind=position_permanent"
                        " --set inject.magnitude=1.0") == 0);
        CHECK(slurp(dir2.path / "objects.jsonl") == slurp(dir.path / "objects.jsonl"));
        CHECK(slurp(dir2.path / "ego.jsonl") == slurp(dir.path / "ego.jsonl"));
        CHECK(slurp(dir2.path / "cloud.csv") == slurp(dir.path / "cloud.csv"));
        CHECK(slurp(dir2.path / "injected.jsonl") == slurp(dir.path / "injected.jsonl"));
        CHECK(slurp(dir2.path / "ledger.jsonl") == slurp(dir.path / "ledger.jsonl"));
    }
}

TEST_CASE("cli rejects invalid configuration with a nonzero exit") {
    TempDir dir;
    CHECK(run_cli("scenario --out " + dir.str() + " --set inject.rate=1.5"
                  " --set inject.kind=position_random") == 0);  // unused by scenario
    const int code = run_cli(
        "inject --objects /nonexistent.jsonl --set inject.rate=1.5"
        " --set inject.kind=position_random --out " + dir.str());
    CHECK(code != 0);

    // unknown key
    CHECK(run_cli("scenario --out " + dir.str() + " --set grid.bogus=1") == 2);
}
