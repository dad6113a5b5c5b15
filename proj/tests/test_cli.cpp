// Runs the command-line tool on small configurations and reads its CSV output back.

#include "sqed/csv.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using sqed::CsvTable;
using sqed::read_csv;

namespace {

const char* kStack = R"("stack": {
    "core": {"radius_um": 1.0, "index": [1.5, 2e-4]},
    "layers": [
      {"thickness_um": 0.12, "index": [3.58, 1e-3]}, {"thickness_um": 0.30, "index": [1.46, 3e-3]},
      {"thickness_um": 0.12, "index": [3.58, 1e-3]}, {"thickness_um": 0.30, "index": [1.46, 3e-3]},
      {"thickness_um": 0.12, "index": [3.58, 1e-3]}]},
  "atoms": [{"position_um": 0.9}, {"position_um": 1.1}])";

struct Run {
    int exit_code = -1;
    std::string log;
};

class Workspace {
public:
    explicit Workspace(const std::string& name) : dir_(fs::temp_directory_path() / ("sqed_cli_" + name)) {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Workspace() { fs::remove_all(dir_); }

    fs::path write_config(const std::string& body) const {
        const fs::path p = dir_ / "config.json";
        std::ofstream(p) << body;
        return p;
    }

    Run run(const std::string& args, const std::string& out = "out") const {
        const fs::path log = dir_ / "log.txt";
        const std::string cmd = std::string("\"") + SQED_CLI_PATH + "\" " + args + " --out \"" + (dir_ / out).string() +
                                "\" > \"" + log.string() + "\" 2>&1";
        const int status = std::system(cmd.c_str());
        Run r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        std::ifstream in(log);
        std::stringstream ss;
        ss << in.rdbuf();
        r.log = ss.str();
        return r;
    }

    Run run_config(const std::string& body, const std::string& command, const std::string& out = "out") const {
        return run("--config \"" + write_config(body).string() + "\" " + command, out);
    }

    fs::path out(const std::string& file, const std::string& sub = "out") const { return dir_ / sub / file; }

private:
    fs::path dir_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("spectrum writes three spectra, the resonance and a radial map") {
    Workspace ws("spectrum");
    const std::string cfg = std::string("{") + kStack +
                            R"(, "frequency_window": {"f_min_thz": 205, "f_max_thz": 225, "samples": 81},
                              "radial_map": {"r_min_um": 0.1, "samples": 20}})";
    const Run r = ws.run_config(cfg, "spectrum");
    INFO(r.log);
    REQUIRE(r.exit_code == 0);
    CHECK(r.log.find("peak_frequency_thz=215.0") != std::string::npos);
    CHECK(r.log.find("n=3 TE") != std::string::npos);
    for (const char* f : {"spectrum_a1_a1.csv", "spectrum_a1_a2.csv", "spectrum_a2_a2.csv"}) {
        const CsvTable t = read_csv(ws.out(f));
        CHECK(t.header == std::vector<std::string>{"frequency_hz", "im_g_phiphi"});
        CHECK(t.rows.size() >= 81);
        const auto freq = t.values("frequency_hz");
        for (std::size_t i = 1; i < freq.size(); ++i) CHECK(freq[i] > freq[i - 1]);
    }
    const auto self = read_csv(ws.out("spectrum_a1_a1.csv")).values("im_g_phiphi");
    for (double v : self) CHECK(v > 0.0);
    const CsvTable radial = read_csv(ws.out("radial_map.csv"));
    CHECK(radial.rows.size() == 20);
    CHECK(radial.values("radius_m").back() < 1.96e-6);
}

TEST_CASE("spectrum with two samples skips the resonance search") {
    Workspace ws("two");
    const std::string cfg =
        std::string("{") + kStack + R"(, "frequency_window": {"f_min_thz": 200, "f_max_thz": 280, "samples": 2}})";
    const Run r = ws.run_config(cfg, "spectrum");
    INFO(r.log);
    REQUIRE(r.exit_code == 0);
    const CsvTable t = read_csv(ws.out("spectrum_a1_a1.csv"));
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == 200e12);
    CHECK(t.rows[1][0] == 280e12);
    CHECK_FALSE(fs::exists(ws.out("radial_map.csv")));
}

TEST_CASE("vacuum has no resonance and exits with a numerics error") {
    Workspace ws("vacuum");
    const Run r = ws.run("--config \"" SQED_CONFIG_DIR "/vacuum.json\" spectrum");
    INFO(r.log);
    CHECK(r.exit_code == 2);
    CHECK(r.log.find("no strict interior maximum") != std::string::npos);
}

TEST_CASE("configuration and usage errors exit with 1") {
    Workspace ws("errors");
    CHECK(ws.run_config(R"({"bogus": 1})", "surface").exit_code == 1);
    CHECK(ws.run_config("{ not json", "surface").exit_code == 1);
    CHECK(ws.run("--config /nonexistent.json surface").exit_code == 1);
    CHECK(ws.run_config("{}", "").exit_code == 1);
    CHECK(ws.run_config("{}", "evolve --mode sideways").exit_code == 1);
    // Spectrum without a stack.
    CHECK(ws.run_config("{}", "spectrum").exit_code == 1);
    // The factored solver needs a rank-one coupling matrix.
    CHECK(ws.run_config(R"({"dynamics": {"gbar": [[0.01, 0.012], [0.012, 0.04]]}})", "evolve --mode factored")
              .exit_code == 1);
}

TEST_CASE("factored trajectory conserves the norm and shows plateaus") {
    Workspace ws("factored");
    const Run r = ws.run("--config \"" SQED_CONFIG_DIR "/reference.json\" evolve --mode factored");
    INFO(r.log);
    REQUIRE(r.exit_code == 0);
    const CsvTable t = read_csv(ws.out("trajectory_factored.csv"));
    CHECK(t.rows.size() == 4000);
    CHECK(t.values("tau").back() == 200.0);
    const std::size_t c1r = t.column("re_c1"), c1i = t.column("im_c1"), c2r = t.column("re_c2"),
                      c2i = t.column("im_c2"), c3r = t.column("re_c3"), c3i = t.column("im_c3");
    int plateau = 0;
    for (const auto& row : t.rows) {
        const double norm = row[c1r] * row[c1r] + row[c1i] * row[c1i] + row[c2r] * row[c2r] + row[c2i] * row[c2i] +
                            row[c3r] * row[c3r] + row[c3i] * row[c3i];
        CHECK(std::abs(norm - 1.0) < 1e-9);
        const double c = 2.0 * std::hypot(row[c1r], row[c1i]) * std::hypot(row[c2r], row[c2i]);
        CHECK(std::abs(c - row[t.column("concurrence")]) < 1e-12);
        if (c * c > 0.5) ++plateau;
    }
    CHECK(plateau > 0.3 * static_cast<double>(t.rows.size()));
}

TEST_CASE("runs are byte-identical") {
    Workspace ws("determinism");
    const std::string cfg = std::string("{") + kStack +
                            R"(, "frequency_window": {"f_min_thz": 210, "f_max_thz": 220, "samples": 21},
                               "radial_map": {"enabled": false},
                               "dynamics": {"chi1": 0.254, "chi2": 0.151, "samples": 500},
                               "surface": {"chi1_samples": 11, "chi2_samples": 11}})";
    for (const char* cmd : {"spectrum", "couplings", "evolve --mode general", "surface"}) {
        CAPTURE(cmd);
        const Run a = ws.run_config(cfg, cmd, "a");
        const Run b = ws.run_config(cfg, std::string(cmd) + " --seedless", "b");
        REQUIRE(a.exit_code == 0);
        REQUIRE(b.exit_code == 0);
        CHECK(a.log == b.log);
        for (const auto& entry : fs::directory_iterator(ws.out("", "a")))
            CHECK(slurp(entry.path()) == slurp(ws.out(entry.path().filename().string(), "b")));
    }
}

TEST_CASE("uncoupled general run keeps a constant concurrence") {
    Workspace ws("uncoupled");
    const Run r = ws.run_config(R"({"dynamics": {"gbar": [[0, 0], [0, 0]], "samples": 50}})", "evolve --mode general");
    INFO(r.log);
    REQUIRE(r.exit_code == 0);
    for (double c : read_csv(ws.out("trajectory_general.csv")).values("concurrence")) CHECK(c == 0.0);
}

TEST_CASE("lindblad trajectory stays a valid state") {
    Workspace ws("lindblad");
    const Run r = ws.run_config(R"({"dynamics": {"chi1": 0.254, "chi2": 0.151, "lambda0": 0, "tau_max": 20, "samples": 41},
                                    "dissipation": {"gamma1_omega_at": 0.02, "dt": 1e-2, "dump_states": true}})",
                                "evolve --mode lindblad");
    INFO(r.log);
    REQUIRE(r.exit_code == 0);
    const CsvTable t = read_csv(ws.out("trajectory_lindblad.csv"));
    CHECK(t.rows.size() == 41);
    for (double v : t.values("trace")) CHECK(std::abs(v - 1.0) < 1e-8);
    for (double v : t.values("min_eigenvalue")) CHECK(v >= -1e-8);
    CHECK(t.values("concurrence").front() == 0.0);
    CHECK(read_csv(ws.out("lindblad_states.csv")).rows.size() == 41);
}

TEST_CASE("surface output") {
    Workspace ws("surface");
    SUBCASE("single node") {
        const Run r = ws.run_config(R"({"dynamics": {"chi1": 0.2, "chi2": 0.1},
            "surface": {"chi1_min": 0.3, "chi1_max": 0.3, "chi1_samples": 1, "chi2_min": 0.5, "chi2_max": 0.5, "chi2_samples": 1}})",
                                    "surface");
        INFO(r.log);
        REQUIRE(r.exit_code == 0);
        const CsvTable t = read_csv(ws.out("surface.csv"));
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0][0] == 0.3);
        CHECK(t.rows[0][1] == 0.5);
    }
    SUBCASE("resonant grid has zero edges") {
        const Run r = ws.run("--config \"" SQED_CONFIG_DIR "/general_coupling.json\" surface");
        INFO(r.log);
        REQUIRE(r.exit_code == 0);
        const CsvTable t = read_csv(ws.out("surface.csv"));
        CHECK(t.rows.size() == 101 * 101);
        for (const auto& row : t.rows)
            if (row[0] == 0.0 || row[1] == 0.0) CHECK(row[2] == 0.0);
    }
}

TEST_CASE("couplings from the stack") {
    Workspace ws("couplings");
    const std::string cfg = std::string("{") + kStack + R"(, "green": {"coupling_frequency_thz": 243.0}})";
    const Run r = ws.run_config(cfg, "couplings");
    INFO(r.log);
    REQUIRE(r.exit_code == 0);
    const CsvTable t = read_csv(ws.out("couplings.csv"));
    REQUIRE(t.rows.size() == 1);
    CHECK(t.values("frequency_hz")[0] == 243e12);
    CHECK(t.values("g11")[0] > 0.0);
    CHECK(r.log.find("n=4 TE") != std::string::npos);
}
