#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

#ifndef LAXKIT_CLI_BIN
#error "LAXKIT_CLI_BIN must be defined by the build"
#endif

std::string cli() { return LAXKIT_CLI_BIN; }

int run(const std::string& args) {
    const std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

const char* kCybeConfig = R"([verify]
check = cybe
family = yangian
n = 2
samples = 40
tolerance = 1e-11

[run]
seed = 99
)";

}  // namespace

TEST_CASE("exit-code contract") {
    const std::string dir = "cli_scratch";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) FAIL("cannot create scratch dir");
    write_file(dir + "/ok.cfg", kCybeConfig);

    // 0: check passes.
    CHECK(run("verify cybe --config " + dir + "/ok.cfg --out " + dir + "/ok.csv") == 0);

    // 1: tolerance failure on the deliberate non-solution fixture.
    write_file(dir + "/fail.cfg", R"([verify]
check = cybe
family = permutation-fixture
n = 2
samples = 10
tolerance = 1e-11

[run]
seed = 99
)");
    CHECK(run("verify cybe --config " + dir + "/fail.cfg --out " + dir + "/fail.csv") == 1);

    // 2: config errors (missing file, malformed file, bad expression).
    CHECK(run("verify cybe --config " + dir + "/missing.cfg") == 2);
    write_file(dir + "/broken.cfg", "[verify\ncheck = cybe\n");
    CHECK(run("verify cybe --config " + dir + "/broken.cfg") == 2);
    write_file(dir + "/badexpr.cfg", R"([model]
kind = dst
sites = 4

[run]
dt = 1e-3
steps = 5
seed = 1

[init]
x = "sin("
X = "0"
)");
    CHECK(run("simulate --config " + dir + "/badexpr.cfg") == 2);

    // 2: usage errors.
    CHECK(run("verify cybe") == 2);
    CHECK(run("frobnicate --config " + dir + "/ok.cfg") == 2);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    const std::string dir = "cli_scratch";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) FAIL("cannot create scratch dir");
    write_file(dir + "/det.cfg", R"([model]
kind = dst
sites = 4

[run]
dt = 1e-3
steps = 50
scheme = rk4
seed = 4242
sample_every = 10

[init]
random = yes

[output]
format = csv
)");
    CHECK(run("simulate --config " + dir + "/det.cfg --out " + dir + "/a.csv") == 0);
    CHECK(run("simulate --config " + dir + "/det.cfg --out " + dir + "/b.csv") == 0);
    const std::string a = slurp(dir + "/a.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(dir + "/b.csv"));

    // JSON rendering is deterministic too.
    CHECK(run("simulate --config " + dir + "/det.cfg --out " + dir + "/a.json --format json") == 0);
    CHECK(run("simulate --config " + dir + "/det.cfg --out " + dir + "/b.json --format json") == 0);
    const std::string aj = slurp(dir + "/a.json");
    CHECK(!aj.empty());
    CHECK(aj == slurp(dir + "/b.json"));

    // A different seed changes the bytes.
    CHECK(run("simulate --config " + dir + "/det.cfg --out " + dir + "/c.csv --seed 777") == 0);
    CHECK(a != slurp(dir + "/c.csv"));
}

TEST_CASE("manifest carries the config hash and seed") {
    const std::string dir = "cli_scratch";
    if (std::system(("mkdir -p " + dir).c_str()) != 0) FAIL("cannot create scratch dir");
    write_file(dir + "/man.cfg", kCybeConfig);
    CHECK(run("verify cybe --config " + dir + "/man.cfg --out " + dir + "/man.csv") == 0);
    const std::string man = slurp(dir + "/man.csv.manifest.json");
    CHECK(man.find("config_sha256") != std::string::npos);
    CHECK(man.find("\"seed\": 99") != std::string::npos);
    CHECK(man.find("\"results\"") != std::string::npos);
    CHECK(man.find("pass=1") != std::string::npos);
}
