#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* p = std::getenv("INVMED_BIN");
    REQUIRE_MESSAGE(p != nullptr, "INVMED_BIN must point at the CLI binary");
    return p;
}

int run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
    const int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("invmed_cli_test_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("phantom + heatmap round trip, constant and zero mappings") {
    TempDir td;
    REQUIRE(run("phantom --kind two_gauss --magnitude 0.1 --n 33 --out " + (td / "q.fld")) == 0);
    REQUIRE(run("heatmap --field " + (td / "q.fld") + " --out " + (td / "q.pgm")) == 0);
    const std::string pgm = slurp(td / "q.pgm");
    CHECK(pgm.substr(0, 3) == "P5\n");
    CHECK(pgm.size() > std::size_t(33) * 33);
    const std::string side = slurp(td / "q.pgm.json");
    CHECK(side.find("\"part\": \"real\"") != std::string::npos);
    CHECK(side.find("\"max\"") != std::string::npos);
}

TEST_CASE("phantom generation is deterministic byte for byte") {
    TempDir td;
    const std::string args =
        "phantom --kind mixture --magnitude 0.2 --n 33 --seed 42 --out ";
    REQUIRE(run(args + (td / "a.fld")) == 0);
    REQUIRE(run(args + (td / "b.fld")) == 0);
    const std::string a = slurp(td / "a.fld"), b = slurp(td / "b.fld");
    CHECK(!a.empty());
    CHECK(a == b);
    REQUIRE(run("phantom --kind mixture --magnitude 0.2 --n 33 --seed 43 --out " +
                (td / "c.fld")) == 0);
    CHECK(slurp(td / "c.fld") != a);
}

TEST_CASE("randomized commands without --seed fail with a usage error") {
    TempDir td;
    CHECK(run("phantom --kind mixture --magnitude 0.2 --n 33 --out " + (td / "x.fld")) != 0);
    CHECK(run("measure --phantom two_gauss --k 10 --fine-n 33 --coarse-n 17 --M 2 --N 4 "
              "--snr-db 5 --out " +
              (td / "x.msr")) != 0);
    const std::string err = slurp("cli_stderr.txt");
    CHECK(err.find("--seed") != std::string::npos);
    std::remove("cli_stdout.txt");
    std::remove("cli_stderr.txt");
}

TEST_CASE("measurement synthesis re-runs are byte-identical") {
    TempDir td;
    const std::string args =
        "measure --phantom two_gauss --magnitude 0.1 --k 12 --fine-n 65 --coarse-n 33 "
        "--M 3 --N 6 --snr-db 5 --seed 7 --out ";
    REQUIRE(run(args + (td / "a.msr")) == 0);
    REQUIRE(run(args + (td / "b.msr")) == 0);
    const std::string a = slurp(td / "a.msr");
    CHECK(!a.empty());
    CHECK(a == slurp(td / "b.msr"));
}

TEST_CASE("invert consumes measurements and emits field plus csv log") {
    TempDir td;
    REQUIRE(run("measure --phantom two_gauss --magnitude 0.1 --k 12 --fine-n 65 "
                "--coarse-n 33 --M 4 --N 8 --out " +
                (td / "d.msr")) == 0);
    REQUIRE(run("invert --data " + (td / "d.msr") + " --n 33 --max-iter 3 --out-prefix " +
                (td / "rec")) == 0);
    CHECK(fs::exists(td / "rec.fld"));
    const std::string log = slurp(td / "rec_log.csv");
    CHECK(log.rfind("iter,J,grad_norm,rel_err,n_fev,elapsed_s", 0) == 0);
    // Mismatched --k is rejected before any compute.
    CHECK(run("invert --data " + (td / "d.msr") + " --k 99 --n 33 --out-prefix " +
              (td / "bad")) != 0);

    REQUIRE(run("metrics --rec " + (td / "rec.fld") + " --truth " + (td / "rec.fld")) == 0);
    const std::string out = slurp("cli_stdout.txt");
    CHECK(out.find("\"rel_err\":0.0") != std::string::npos);
    std::remove("cli_stdout.txt");
    std::remove("cli_stderr.txt");
}

TEST_CASE("experiment runs reproduce their artifacts byte-identically") {
    TempDir td;
    const std::string common =
        "experiment simple --n 33 --fine-n 65 --M 3 --N 6 --max-iter 2 --k 12 --out ";
    REQUIRE(run(common + (td / "e1")) == 0);
    REQUIRE(run(common + (td / "e2")) == 0);
    for (const std::string f : {"truth.fld", "data.msr", "rec.fld", "config.json"}) {
        CHECK(!slurp((td / "e1") + "/" + f).empty());
        CHECK(slurp((td / "e1") + "/" + f) == slurp((td / "e2") + "/" + f));
    }
    const std::string summary = slurp((td / "e1") + "/summary.json");
    for (const std::string key :
         {"phantom", "k", "snr_db", "rel_err", "ssim", "n_fev", "elapsed_s"})
        CHECK(summary.find("\"" + key + "\"") != std::string::npos);
}

TEST_CASE("unknown experiment and bad files give single-line errors") {
    TempDir td;
    CHECK(run("experiment nonsense --out " + (td / "x")) != 0);
    std::string err = slurp("cli_stderr.txt");
    CHECK(err.find("error:") != std::string::npos);
    CHECK(std::count(err.begin(), err.end(), '\n') == 1);

    std::ofstream(td / "garbage.fld") << "not a field";
    CHECK(run("heatmap --field " + (td / "garbage.fld") + " --out " + (td / "g.pgm")) != 0);
    std::remove("cli_stdout.txt");
    std::remove("cli_stderr.txt");
}

TEST_CASE("heatmap requires --part for complex fields") {
    TempDir td;
    REQUIRE(run("phantom --kind two_gauss --magnitude 0.1 --n 33 --out " + (td / "q.fld")) == 0);
    REQUIRE(run("forward --q " + (td / "q.fld") + " --k 12 --solver neumann --L 2 --out " +
                (td / "us.fld")) == 0);
    CHECK(run("heatmap --field " + (td / "us.fld") + " --out " + (td / "u.pgm")) != 0);
    CHECK(run("heatmap --field " + (td / "us.fld") + " --part abs --out " + (td / "u.pgm")) ==
          0);
    const std::string side = slurp(td / "u.pgm.json");
    CHECK(side.find("\"part\": \"abs\"") != std::string::npos);
    std::remove("cli_stdout.txt");
    std::remove("cli_stderr.txt");
}
