#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = THOOPS_CLI_PATH;
const std::string kFixtures = THOOPS_FIXTURE_DIR;

int run(const std::string& args) {
    const std::string cmd = "'" + kCli + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Scratch {
    fs::path dir;
    explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("thoops_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& f) const { return "'" + (dir / f).string() + "'"; }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage exit codes") {
    CHECK(run("--help") == 0);
    CHECK(run("") == 1);
    CHECK(run("no-such-command") == 1);
    CHECK(run("decompose") == 1);
    CHECK(run("decompose /no/such/file --rank 2 --out /tmp/x") == 1);
}

TEST_CASE("bad values are usage errors, bad files are data errors") {
    Scratch s("codes");
    {
        std::ofstream bad((s.dir / "bad.tensor").string());
        bad << "dims 2 2\n";
    }
    CHECK(run("decompose " + (s / "bad.tensor") + " --rank 2 --out " + (s / "m")) == 2);
    CHECK(run("ingest --out " + (s / "t")) == 1);
    CHECK(run("ingest --shots '" + kFixtures + "/shots_sample.csv' --coord-unit yards --out " + (s / "t")) == 1);
    CHECK(run("ingest --shots '" + kFixtures + "/shots_sample.csv' --out " + (s / "t")) == 0);
    CHECK(run("decompose " + (s / "t") + " --rank 0 --out " + (s / "m")) == 1);
    CHECK(run("select-rank " + (s / "t") + " --grid 3:1 --out " + (s / "sel")) == 1);
    {
        std::ofstream q((s.dir / "bad.query").string());
        q << "nowhere:1\n";
    }
    CHECK(run("decompose " + (s / "t") + " --rank 2 --max-iters 20 --out " + (s / "m")) == 0);
    CHECK(run("query --model " + (s / "m") + " --query " + (s / "bad.query") +
              " --entity-mode 1 --spatial-mode 2 --temporal-mode 3 --out " + (s / "q")) == 2);
    CHECK(run("query --model " + (s / "m") + " --query " + (s / "bad.query") +
              " --entity-mode 1 --spatial-mode 1 --temporal-mode 3 --out " + (s / "q")) == 1);
}

TEST_CASE("shot pipeline writes artifacts and manifests") {
    Scratch s("shots");
    REQUIRE(run("ingest --shots '" + kFixtures + "/shots_sample.csv' --out " + (s / "shots.tensor")) == 0);
    REQUIRE(run("decompose " + (s / "shots.tensor") + " --rank 3 --seed 4 --max-iters 200 --out " +
                (s / "shots.model")) == 0);
    CHECK(run("diagnose " + (s / "shots.tensor") + " --model " + (s / "shots.model") + " --out " + (s / "diag")) == 0);
    CHECK(run("diagnose " + (s / "shots.tensor") + " --grid 1:2 --max-iters 50 --method reference --out " +
              (s / "diag2")) == 0);
    CHECK(run("cluster --model " + (s / "shots.model") + " --K 5 --out " + (s / "clusters.csv")) == 0);
    CHECK(run("synth --model " + (s / "shots.model") + " --events 200 --seed 2 --out " + (s / "synth.csv")) == 0);
    for (const char* f : {"shots.tensor", "shots.model", "diag", "diag2", "clusters.csv", "synth.csv"}) {
        CHECK(fs::exists(s.dir / f));
        CHECK(fs::exists(s.dir / (std::string(f) + ".manifest")));
    }
    const std::string manifest = slurp(s.dir / "shots.model.manifest");
    CHECK(manifest.find("command decompose") != std::string::npos);
    CHECK(manifest.find("seed 4") != std::string::npos);
    CHECK(manifest.find("input tensor shots.tensor fnv1a64:") != std::string::npos);
    CHECK(slurp(s.dir / "diag").rfind("F score truncated\n3 ", 0) == 0);
    CHECK(slurp(s.dir / "clusters.csv").rfind("entity_id,cluster,r_1,r_2,r_3\n", 0) == 0);
}

TEST_CASE("tracking pipeline answers the bundled query") {
    Scratch s("tracking");
    REQUIRE(run("ingest --tracking '" + kFixtures + "/tracking_sample.jsonl' --out " + (s / "poss.tensor")) == 0);
    REQUIRE(run("decompose " + (s / "poss.tensor") + " --rank 4 --seed 1 --max-iters 200 --out " +
                (s / "poss.model")) == 0);
    REQUIRE(run("query --model " + (s / "poss.model") + " --query '" + kFixtures +
                "/corner_three.query' --theta 0.3 --out " + (s / "hits")) == 0);
    const std::string hits = slurp(s.dir / "hits");
    CHECK(hits.find("entity score component\n") != std::string::npos);
    CHECK(slurp(s.dir / "hits.manifest").find("config theta 0.29999999999999999") != std::string::npos);
}

TEST_CASE("select-rank reports a chosen rank") {
    Scratch s("select");
    REQUIRE(run("ingest --shots '" + kFixtures + "/shots_sample.csv' --out " + (s / "t")) == 0);
    CHECK(run("select-rank " + (s / "t") + " --grid 2,3 --K 4 --restarts 2 --max-iters 50 --out " + (s / "sel")) == 0);
    const std::string sel = slurp(s.dir / "sel");
    CHECK(sel.rfind("# raw maxS ", 0) == 0);
    CHECK(sel.find("\n# chosen ") != std::string::npos);
}

}
