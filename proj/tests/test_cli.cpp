#include "support.hpp"

#include "windsynth/ingest.hpp"

#include <json.hpp>

#include <cstdlib>
#include <sys/wait.h>

using test_support::read_file;
using test_support::TempDir;

namespace {

const std::string kCli = WINDSYNTH_CLI_PATH;

// Runs the CLI with `args`, capturing stdout and stderr into `log`.
int cli(const std::string& args, const std::string& log)
{
    const std::string cmd = "'" + kCli + "' " + args + " > '" + log + "' 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct Scenario {
    TempDir dir{"cli"};
    std::string data = dir.file("data");
    std::string log = dir.file("log.txt");

    Scenario()
    {
        REQUIRE(cli("synth --years 2 --n-plants 5 --seed 3 --out '" + data + "'", log) == 0);
    }
    std::string in(const std::string& name) const { return data + "/" + name; }
};

const std::string kFast = " --epochs 2 --hidden 8 --batch-size 64 ";

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("help lists every flag with its default")
{
    TempDir dir("cli");
    auto log = dir.file("h.txt");
    REQUIRE(cli("run --help", log) == 0);
    auto text = read_file(log);
    for (const char* flag : {"--variant", "--hidden", "--seed", "--years", "--block", "--jobs", "--obs", "--pred",
             "--wind", "--plants", "--capacity", "--curve", "--out", "--config"}) {
        if (std::string(flag) == "--pred")
            continue; // evaluate/report only
        CAPTURE(flag);
        CHECK(text.find(flag) != std::string::npos);
    }
    CHECK(text.find("[42]") != std::string::npos);
    CHECK(text.find("[mlm2]") != std::string::npos);
    CHECK(text.find("[2]") != std::string::npos);
    for (const char* cmd : {"synth", "subset", "train", "predict", "evaluate", "report", "dump-features"}) {
        CAPTURE(cmd);
        CHECK(cli(std::string(cmd) + " --help", log) == 0);
    }
    REQUIRE(cli("evaluate --help", log) == 0);
    CHECK(read_file(log).find("--pred") != std::string::npos);
}

TEST_CASE("usage errors exit 1, data errors exit 2")
{
    TempDir dir("cli");
    auto log = dir.file("e.txt");
    CHECK(cli("", log) == 1);
    CHECK(cli("frobnicate", log) == 1);
    CHECK(cli("run --no-such-flag", log) == 1);
    CHECK(cli("evaluate --obs x.csv", log) == 1);
    CHECK(cli("run --variant mlm9 --wind w.csv", log) == 1);
    CHECK(cli("run --hidden 0 --wind w.csv", log) == 1);
    CHECK(cli("evaluate --obs /nonexistent.csv --pred /nonexistent.csv", log) == 2);
    CHECK(read_file(log).find("IoError") != std::string::npos);

    auto bad = test_support::write_file(dir, "bad.csv", "timestamp,cf\n2010-01-01T00:00Z,0.1\n2010-01-01T02:00Z,0.2\n");
    CHECK(cli("evaluate --obs '" + bad + "' --pred '" + bad + "'", log) == 2);
    CHECK(read_file(log).find("NonContiguousAxis") != std::string::npos);
    CHECK(read_file(log).find("bad.csv:3") != std::string::npos);
}

TEST_CASE("synth, evaluate fixed point, subset, features, train and predict")
{
    Scenario s;
    for (const char* f : {"wind.csv", "plants.csv", "generation.csv", "capacity.csv", "curve.csv", "observed_cf.csv",
             "run.cfg"})
        CHECK(test_support::fs::exists(s.in(f)));

    REQUIRE(cli("evaluate --obs '" + s.in("observed_cf.csv") + "' --pred '" + s.in("observed_cf.csv") + "' --out '" +
                    s.dir.file("self.json") + "'",
                s.log) == 0);
    auto j = nlohmann::json::parse(read_file(s.dir.file("self.json")));
    CHECK(j["metrics"]["correlation"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["metrics"]["nmae"].get<double>() == 0.0);
    CHECK(read_file(s.log).find("nmae         0.000000") != std::string::npos);

    // generation / capacity route gives the same capacity factors
    auto cf = windsynth::ingest::to_capacity_factors(windsynth::ingest::parse_generation_csv(s.in("generation.csv")),
        windsynth::ingest::parse_capacity_csv(s.in("capacity.csv")));
    auto obs = windsynth::ingest::parse_cf_csv(s.in("observed_cf.csv"));
    REQUIRE(cf.size() == obs.size());
    for (std::size_t i = 0; i < cf.size(); i += 101)
        CHECK(cf.values[i] == doctest::Approx(obs.values[i]).epsilon(1e-12));

    REQUIRE(cli("subset --variant mlm2 --wind '" + s.in("wind.csv") + "' --plants '" + s.in("plants.csv") +
                    "' --out '" + s.dir.file("subset.csv") + "'",
                s.log) == 0);
    CHECK(read_file(s.dir.file("subset.csv")).rfind("index,lon,lat\n", 0) == 0);
    CHECK(cli("subset --variant mlm2 --wind '" + s.in("wind.csv") + "'", s.log) == 2); // no plants

    REQUIRE(cli("dump-features --variant mlm1 --years 2010 --wind '" + s.in("wind.csv") + "' --out '" +
                    s.dir.file("f.csv") + "'",
                s.log) == 0);
    CHECK(read_file(s.log).find("8760 rows x 259 columns") != std::string::npos);

    const std::string model = s.dir.file("m.bin");
    // the shared config's `out` names a results directory, so train still needs its own
    CHECK(cli("train --config '" + s.in("run.cfg") + "' --years 2010" + kFast, s.log) == 1);
    REQUIRE(cli("train --config '" + s.in("run.cfg") + "' --years 2010" + kFast + "--out '" + model + "'", s.log) == 0);
    REQUIRE(cli("predict --model '" + model + "' --wind '" + s.in("wind.csv") + "' --years 2011 --out '" +
                    s.dir.file("p.csv") + "'",
                s.log) == 0);
    auto pred = windsynth::ingest::parse_cf_csv(s.dir.file("p.csv"));
    CHECK(pred.size() == 8760u);
    CHECK(windsynth::format_timestamp(pred.axis.start()) == "2011-01-01T00:00Z");
}

TEST_CASE("run is reproducible, honours flag precedence and selects among sizes")
{
    Scenario s;
    const std::string cfg = " --config '" + s.in("run.cfg") + "'";
    const std::string r1 = s.dir.file("r1"), r2 = s.dir.file("r2");
    REQUIRE(cli("run" + cfg + kFast + "--out '" + r1 + "'", s.log) == 0);
    REQUIRE(cli("run" + cfg + kFast + "--jobs 2 --out '" + r2 + "'", s.log) == 0);
    for (const char* f : {"prediction.csv", "report.json", "table2.csv", "table3.csv", "table4.csv", "provenance.csv"}) {
        CAPTURE(f);
        auto a = read_file(r1 + "/" + f);
        CHECK_FALSE(a.empty());
        CHECK(a == read_file(r2 + "/" + f));
    }
    // --epochs 2 overrides the config file's value
    auto prov = read_file(r1 + "/provenance.csv");
    CHECK(prov.find(",2\n") != std::string::npos);
    CHECK(prov.find(",40\n") == std::string::npos);
    auto report = nlohmann::json::parse(read_file(r1 + "/report.json"));
    CHECK(report["period"]["hours"] == 17520);
    CHECK(report["run"]["block"] == "1");

    const std::string r3 = s.dir.file("r3");
    REQUIRE(cli("run" + cfg + " --epochs 2 --hidden 6,8 --curve '" + s.in("curve.csv") + "' --out '" + r3 + "'",
                s.log) == 0);
    auto t2 = read_file(r3 + "/table2.csv");
    CHECK(t2.find("mlm2-6,") != std::string::npos);
    CHECK(t2.find("mlm2-8,") != std::string::npos);
    CHECK(t2.find("powercurve,") != std::string::npos);
    CHECK(test_support::fs::exists(r3 + "/prediction_mlm2-6.csv"));
    CHECK(read_file(s.log).find("selected     mlm2-") != std::string::npos);

    REQUIRE(cli("report --obs '" + s.in("observed_cf.csv") + "' --pred '" + r1 + "/prediction.csv' --out '" +
                    s.dir.file("rep") + "'",
                s.log) == 0);
    CHECK(read_file(s.dir.file("rep/report.json")).size() > 1000u);

    auto bad_cfg = test_support::write_file(s.dir, "bad.cfg", "colour = blue\n");
    CHECK(cli("run --config '" + bad_cfg + "'", s.log) == 2);
    CHECK(read_file(s.log).find("InvalidConfig") != std::string::npos);
}

TEST_SUITE_END();
