#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qecp/io.hpp"
#include "qecp/state.hpp"

using namespace qecp;
using Catch::Approx;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int exit_code = -1;
    std::string stdout_text;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "qecp_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

Invocation run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const std::string cmd =
        std::string("\"") + QECP_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    Invocation inv;
    inv.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    inv.stdout_text = read_file(out.string());
    return inv;
}

}  // namespace

TEST_CASE("float formatting") {
    CHECK(fmt_g(1.0, 12) == "1");
    CHECK(fmt_g(-0.0, 12) == "0");
    CHECK(fmt_g(0.1, 17) == "0.10000000000000001");
    CHECK(csv_float(2.0 / 3.0) == "0.666666666667");
    // 17 significant digits round-trip
    std::mt19937_64 eng(4);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 200; ++i) {
        const double x = nd(eng) * std::pow(10.0, (i % 13) - 6);
        CHECK(std::stod(json_float(x)) == x);
    }
}

TEST_CASE("state JSON round-trip") {
    std::mt19937_64 eng(21);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 20; ++rep) {
        AmplitudeMap m;
        std::uniform_int_distribution<int> mode(0, 2);
        for (int t = 0; t < 5; ++t)
            m[BasisLabel{mode(eng), mode(eng)}] += Cx{nd(eng), nd(eng)};
        const PureState s(std::vector<Register>{{"a", 3}, {"b", 3}}, std::move(m));

        const json j = json::parse(state_to_json(s));
        REQUIRE(j["registers"].size() == 2);
        CHECK(j["registers"][0]["name"] == "a");
        CHECK(j["registers"][0]["dim"] == 3);
        AmplitudeMap rebuilt;
        for (const auto& item : j["amps"]) {
            BasisLabel label;
            for (const auto& idx : item["idx"]) label.push_back(idx.get<int>());
            rebuilt[label] = Cx{item["re"].get<double>(), item["im"].get<double>()};
        }
        const PureState back(std::vector<Register>{{"a", 3}, {"b", 3}}, std::move(rebuilt));
        REQUIRE(back.term_count() == s.term_count());
        for (const auto& [label, amp] : s.amps()) CHECK(back.amplitude(label) == amp);
    }
}

TEST_CASE("cli enumerate") {
    const Invocation inv = run_cli("enumerate --coeffs 0.57735026918962576,0.57735026918962576,0.57735026918962576");
    REQUIRE(inv.exit_code == 0);
    const json j = json::parse(inv.stdout_text);
    CHECK(j["sum"].get<double>() == Approx(1.0).margin(1e-12));
    bool found = false;
    for (const auto& b : j["branches"]) {
        if (b["class"] == "MAXIMAL") {
            found = true;
            CHECK(b["probability"].get<double>() == Approx(2.0 / 9.0).margin(1e-12));
            CHECK(b["coefficient"] == "abg");
            CHECK(b["branch"][0] == 1);
            CHECK(b["branch"][1] == 3);
        }
    }
    CHECK(found);
}

TEST_CASE("cli validation failures exit with code 2") {
    CHECK(run_cli("enumerate --coeffs 1,1,1").exit_code == 2);
    CHECK(run_cli("enumerate --coeffs nonsense").exit_code == 2);
    CHECK(run_cli("run --trials 10").exit_code == 2);  // missing --output
    CHECK(run_cli("tables --which 7 --data-dir x").exit_code == 2);
    CHECK(run_cli("bogus-subcommand").exit_code == 2);
}

TEST_CASE("cli enumerate csv format") {
    const Invocation inv = run_cli("enumerate --format csv");
    REQUIRE(inv.exit_code == 0);
    CHECK(inv.stdout_text.rfind("branch_p,branch_q,coefficient,probability,class\n", 0) == 0);
    CHECK(inv.stdout_text.find("1,3,abg,0.222222222222,MAXIMAL") != std::string::npos);
    CHECK(run_cli("enumerate --format xml").exit_code == 2);
}

TEST_CASE("cli renormalizes slightly-off coefficients with a warning") {
    // 5-digit inputs are off by ~7e-7; accepted and renormalized
    const Invocation inv = run_cli("enumerate --coeffs 0.57735,0.57735,0.57735");
    REQUIRE(inv.exit_code == 0);
    const json j = json::parse(inv.stdout_text);
    CHECK(j["sum"].get<double>() == Approx(1.0).margin(1e-12));
    for (const auto& b : j["branches"])
        if (b["class"] == "MAXIMAL")
            CHECK(b["probability"].get<double>() == Approx(2.0 / 9.0).margin(1e-12));
}

TEST_CASE("cli run determinism and schema") {
    const fs::path a = scratch_dir() / "run_a.csv";
    const fs::path b = scratch_dir() / "run_b.csv";
    const std::string common =
        " --trials 2000 --seed 99 --ideal-detection --output ";
    REQUIRE(run_cli("run" + common + "\"" + a.string() + "\"").exit_code == 0);
    REQUIRE(run_cli("run" + common + "\"" + b.string() + "\"").exit_code == 0);
    const std::string ca = read_file(a.string()), cb = read_file(b.string());
    CHECK(ca == cb);
    CHECK(ca.rfind("trial,branch_p,branch_q,k,l,m,n,misread,class,fidelity\n", 0) == 0);

    // the worker cap must not change the bytes
    const fs::path c = scratch_dir() / "run_c.csv";
    const std::string threaded = std::string("ECP_SIM_THREADS=2 \"") + QECP_CLI_PATH + "\" run" +
                                 common + "\"" + c.string() + "\" >/dev/null 2>&1";
    REQUIRE(std::system(threaded.c_str()) == 0);
    CHECK(read_file(c.string()) == ca);

    const json summary = json::parse(read_file(a.string() + ".summary.json"));
    long long total = 0;
    for (const auto& [key, value] : summary["class_counts"].items())
        total += value.get<long long>();
    CHECK(total == 2000);
    CHECK(summary["misread_count"].get<long long>() == 0);

    // trials = 0 -> header-only CSV
    const fs::path z = scratch_dir() / "run_zero.csv";
    REQUIRE(run_cli("run --trials 0 --output \"" + z.string() + "\"").exit_code == 0);
    CHECK(read_file(z.string()) == "trial,branch_p,branch_q,k,l,m,n,misread,class,fidelity\n");
}

TEST_CASE("cli homodyne sweep") {
    const Invocation inv = run_cli(
        "homodyne --alpha-min 50 --alpha-max 60 --alpha-steps 2 "
        "--gammat-min 0 --gammat-max 0 --gammat-steps 1");
    REQUIRE(inv.exit_code == 0);
    std::istringstream in(inv.stdout_text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha,gamma_t,theta,p_suc,p_suc_full,p_x");
    std::getline(in, line);
    auto f50 = split_csv_line(line);
    CHECK(std::stod(f50[5]) == Approx(0.9976).margin(5e-4));
    std::getline(in, line);
    auto f60 = split_csv_line(line);
    CHECK(std::stod(f60[5]) == Approx(0.9997).margin(5e-4));
}

TEST_CASE("cli tables with diff report") {
    const fs::path out = scratch_dir() / "table2.csv";
    const std::string data_dir = std::string(QECP_SOURCE_DIR) + "/data";
    const Invocation inv = run_cli("tables --which 2 --data-dir \"" + data_dir + "\" --output \"" +
                                   out.string() + "\"");
    REQUIRE(inv.exit_code == 0);
    const std::string csv = read_file(out.string());
    CHECK(csv.rfind("branch_p,branch_q,k,l,m,n,correction,class,subpattern,cond_prob\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 82);  // header + 81 outcomes
    const std::string diff = read_file(out.string() + ".diff.txt");
    CHECK(diff.find("listed twice with conflicting corrections") != std::string::npos);
    CHECK(diff.find("DISAGREE") != std::string::npos);

    // table 1 regeneration: 10 branch rows
    const Invocation t1 =
        run_cli("tables --which 1 --data-dir \"" + data_dir + "\"");
    REQUIRE(t1.exit_code == 0);
    CHECK(t1.stdout_text.find("1,3,-1,-1,-1,-1,,MAXIMAL") != std::string::npos);
}

TEST_CASE("cli optics") {
    const Invocation inv = run_cli("optics compose");
    REQUIRE(inv.exit_code == 0);
    const json j = json::parse(inv.stdout_text);
    CHECK(j["equivalent"].get<bool>());
    CHECK(j["residual"].get<double>() < 1e-10);
    CHECK(j["permutation"] == json::array({0, 2, 1}));

    const Invocation fid = run_cli(
        "optics fidelity --eps-min 0 --eps-max 0.1 --eps-steps 2 "
        "--delta-min 0 --delta-max 0.1 --delta-steps 2");
    REQUIRE(fid.exit_code == 0);
    std::istringstream in(fid.stdout_text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "eps,delta,avg_fidelity");
    std::getline(in, line);
    CHECK(std::stod(split_csv_line(line)[2]) == Approx(1.0).margin(1e-9));
}

TEST_CASE("cli known") {
    const Invocation inv = run_cli("known --coeffs 0.8,0.519615242270663,0.3");
    REQUIRE(inv.exit_code == 0);
    const json j = json::parse(inv.stdout_text);
    CHECK(j["success_prob"].get<double>() == Approx(0.27).margin(1e-9));
    CHECK(j["paper_claimed"].get<double>() == Approx(0.03).margin(1e-9));
    CHECK(j["fidelity"].get<double>() == Approx(1.0).margin(1e-12));
    CHECK(run_cli("known --coeffs 0.3,0.519615242270663,0.8").exit_code == 2);
}

TEST_CASE("cli config file with flag override") {
    const fs::path cfg = scratch_dir() / "cfg.json";
    {
        std::ofstream f(cfg);
        f << R"({"trials": 5, "seed": 3, "homodyne": {"ideal_detection": true},)"
          << R"( "coeffs": ["0.57735026918962576","0.57735026918962576","0.57735026918962576"]})";
    }
    const fs::path out = scratch_dir() / "cfg_run.csv";
    // config supplies trials=5; the flag overrides it to 7
    REQUIRE(run_cli("run --config \"" + cfg.string() + "\" --trials 7 --output \"" +
                    out.string() + "\"")
                .exit_code == 0);
    const std::string csv = read_file(out.string());
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);  // header + 7 trials

    const fs::path out5 = scratch_dir() / "cfg_run5.csv";
    REQUIRE(run_cli("run --config \"" + cfg.string() + "\" --output \"" + out5.string() + "\"")
                .exit_code == 0);
    const std::string csv5 = read_file(out5.string());
    CHECK(std::count(csv5.begin(), csv5.end(), '\n') == 6);
}

TEST_CASE("cli coefficient parsing") {
    // complex rectangular and polar forms agree
    const Invocation rect = run_cli("enumerate --coeffs 0.8,0-0.6i,0");
    REQUIRE(rect.exit_code == 0);
    const Invocation polar = run_cli("enumerate --coeffs-polar 0.8:0,0.6:-1.570796326794896558,0:0");
    REQUIRE(polar.exit_code == 0);
    const json ja = json::parse(rect.stdout_text), jb = json::parse(polar.stdout_text);
    REQUIRE(ja["branches"].size() == jb["branches"].size());
    for (size_t i = 0; i < ja["branches"].size(); ++i)
        CHECK(ja["branches"][i]["probability"].get<double>() ==
              Approx(jb["branches"][i]["probability"].get<double>()).margin(1e-12));
}
