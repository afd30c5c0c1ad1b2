#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "monoinv/traffic.hpp"

using namespace monoinv;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("monoinv_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MONOINV_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const fs::path& p, const io::json& j) { std::ofstream(p) << j.dump(2); }

}  // namespace

TEST(LoadSystem, BetaResolutionSelectsDuplicate) {
  const auto first = load_traffic(io::BetaResolution::First);
  const auto second = load_traffic(io::BetaResolution::Second);
  EXPECT_TRUE(first.had_duplicate_turns);
  EXPECT_NE(first.hash, second.hash);
  auto ratio = [](const io::LoadedSystem& l) {
    for (const auto& t : dynamic_cast<const TrafficNetwork&>(*l.system).turns()) {
      if (t.from == 11 && t.to == 5) return t.ratio;
    }
    return -1.0;
  };
  EXPECT_DOUBLE_EQ(ratio(first), 0.5);
  EXPECT_DOUBLE_EQ(ratio(second), 0.3);
  EXPECT_EQ(dynamic_cast<const TrafficNetwork&>(*first.system).turns().size(), 14u);
  // The file's own field is the default.
  EXPECT_EQ(io::load_system(data_path("traffic_network.json")).hash, first.hash);
}

TEST(LoadSystem, HashIsStableAndSensitive) {
  const auto a = load_switched();
  EXPECT_EQ(a.hash, load_switched().hash);
  EXPECT_EQ(a.hash.size(), 16u);
  auto spec = io::read_json(data_path("switched.json"));
  spec["modes"][0]["A"][0][0] = 1.4;
  EXPECT_NE(io::parse_system(spec).hash, a.hash);
  EXPECT_EQ(io::fnv1a_hex(""), "cbf29ce484222325");
}

TEST(LoadSystem, MalformedInputsRaiseInputError) {
  EXPECT_THROW(io::load_system("/nonexistent/file.json"), io::InputError);
  EXPECT_THROW(io::parse_system(io::json{{"type", "pendulum"}}), io::InputError);
  auto spec = io::read_json(data_path("switched.json"));
  spec["modes"][1]["A"][0][1] = -0.1;
  EXPECT_THROW(io::parse_system(spec), io::InputError);
  spec = io::read_json(data_path("switched.json"));
  spec.erase("w_star");
  EXPECT_THROW(io::parse_system(spec), io::InputError);
  auto net = io::read_json(data_path("traffic_network.json"));
  net["links"][1]["tail"] = "f";
  EXPECT_THROW(io::parse_system(net), io::InputError);
  net = io::read_json(data_path("traffic_network.json"));
  net["beta_resolution"] = "third";
  EXPECT_THROW(io::parse_system(net), io::InputError);
}

TEST(Certificate, RoundTrip) {
  const auto t = load_traffic();
  const auto cert = load_cert(t, "cert_traffic.json");
  const auto j = io::certificate_to_json(*t.system, cert, t.hash);
  EXPECT_EQ(j["controls"][0], io::json({"NS", "NS", "NS", "NS", "NS", "NS"}));
  std::string hash;
  const auto back = io::certificate_from_json(*t.system, j, &hash);
  EXPECT_EQ(hash, t.hash);
  EXPECT_EQ(back.controls, cert.controls);
  EXPECT_EQ(back.x_star, cert.x_star);

  const auto c1 = load_switched();
  const auto j1 = io::certificate_to_json(*c1.system, load_cert(c1, "cert_switched.json"), c1.hash);
  EXPECT_EQ(j1["controls"], io::json({1, 2, 2, 1, 2, 2, 2}));
}

TEST(Certificate, RejectsMalformed) {
  const auto c1 = load_switched();
  EXPECT_THROW(io::certificate_from_json(*c1.system, io::json{{"T", 2}, {"controls", {1}}, {"x_star", {{1, 1}}}}),
               io::InputError);
  EXPECT_THROW(io::certificate_from_json(*c1.system, io::json{{"T", 1}, {"controls", {3}}, {"x_star", {{1, 1}}}}),
               io::InputError);
  EXPECT_THROW(io::certificate_from_json(*c1.system, io::json{{"T", 1}, {"controls", {1}}, {"x_star", {{1, 1, 1}}}}),
               io::InputError);
}

TEST(Csv, TrajectoryLayout) {
  const auto c1 = load_switched();
  const auto cert = load_cert(c1, "cert_switched.json");
  Monitors mon;
  mon.safe = c1.safe_set;
  const auto traj = simulate(*c1.system, NonNegVector{10, 32}, OpenLoopPolicy{cert}, Adversary::worst_case(), 2, mon);
  std::ostringstream out;
  io::write_trajectory_csv(out, *c1.system, traj);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "step,phase,x_1,x_2,u,safe,in_omega,in_gamma");
  std::getline(lines, line);
  EXPECT_EQ(line, "0,0,10,32,1,1,,");
  std::getline(lines, line);
  std::getline(lines, line);
  EXPECT_EQ(line.substr(0, 4), "2,2,");
  EXPECT_EQ(line.substr(line.size() - 5), ",,1,,");
}

TEST(Cli, FindSwitched) {
  const auto dir = scratch_dir("find1");
  EXPECT_EQ(run_cli("find --system " + data_path("switched.json") + " --tmax 10 --objective max-l1 --out " +
                    dir.string()),
            0);
  const auto cert = io::read_json(dir / "certificate.json");
  EXPECT_EQ(cert["T"], 7);
  EXPECT_EQ(cert["system_hash"], load_switched().hash);
  EXPECT_TRUE(fs::exists(dir / "rcis.json"));
  const auto summary = io::read_json(dir / "summary.json");
  EXPECT_TRUE(summary["minimal"].get<bool>());
  // The found certificate verifies through the CLI as well.
  EXPECT_EQ(run_cli("verify --system " + data_path("switched.json") + " --cert " + (dir / "certificate.json").string()),
            0);
}

TEST(Cli, FindExitCodesForNegativeAndUnknown) {
  const auto dir = scratch_dir("find2");
  write_json(dir / "unstable.json", io::json::parse(R"({"type": "switched_affine",
    "modes": [{"A": [[2.0, 0.0], [0.0, 2.0]]}], "w_star": [0.1, 0.1], "safe_set": {"bounds": [1.0, 1.0]}})"));
  EXPECT_EQ(run_cli("find --system " + (dir / "unstable.json").string() + " --tmax 4 --out " + dir.string()), 2);
  EXPECT_EQ(run_cli("find --system " + data_path("traffic_network.json") +
                    " --tmin 4 --tmax 4 --objective first-feasible --node-budget 50 --out " + dir.string()),
            3);
  EXPECT_EQ(run_cli("find --system " + data_path("switched.json") + " --tmax 3 --dump-lp --out " + dir.string()), 2);
  EXPECT_TRUE(fs::exists(dir / "model_T3.lp"));
}

TEST(Cli, VerifyExitCodes) {
  const auto dir = scratch_dir("verify");
  EXPECT_EQ(run_cli("verify --system " + data_path("switched.json") + " --cert " + data_path("cert_switched.json")), 0);
  EXPECT_EQ(run_cli("verify --system " + data_path("traffic_network.json") + " --cert " +
                    data_path("cert_traffic.json")),
            0);
  EXPECT_EQ(run_cli("verify --system " + data_path("traffic_network.json") + " --beta-resolution second --cert " +
                    data_path("cert_traffic_second.json")),
            0);
  // Certificate made for the other resolution: hash mismatch is an input error.
  EXPECT_EQ(run_cli("verify --system " + data_path("traffic_network.json") + " --cert " +
                    data_path("cert_traffic_second.json")),
            1);

  auto tampered = io::read_json(data_path("cert_switched.json"));
  tampered["controls"][2] = 1;
  write_json(dir / "tampered.json", tampered);
  EXPECT_EQ(run_cli("verify --system " + data_path("switched.json") + " --cert " + (dir / "tampered.json").string()), 2);

  EXPECT_EQ(run_cli("verify --system " + data_path("switched.json") + " --cert " + (dir / "missing.json").string()), 1);
  EXPECT_EQ(run_cli("find --system " + (dir / "missing.json").string()), 1);
  EXPECT_EQ(run_cli("find --system " + data_path("switched.json") + " --tmax 0"), 1);
}

TEST(Cli, SimulateIsByteDeterministic) {
  const auto a = scratch_dir("sim_a");
  const auto b = scratch_dir("sim_b");
  const std::string common = "simulate --system " + data_path("switched.json") + " --cert " +
                             data_path("cert_switched.json") + " --x0 10,32 --steps 200 --adversary uniform --seed 42";
  EXPECT_EQ(run_cli(common + " --out " + a.string()), 0);
  EXPECT_EQ(run_cli(common + " --out " + b.string()), 0);
  const auto csv = slurp(a / "trajectory.csv");
  EXPECT_EQ(csv, slurp(b / "trajectory.csv"));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "step,phase,x_1,x_2,u,safe,in_omega,in_gamma");
  EXPECT_TRUE(fs::exists(a / "limit_cycle.csv"));
  EXPECT_EQ(run_cli("simulate --system " + data_path("switched.json") + " --cert " + data_path("cert_switched.json") +
                    " --x0 10,abc --out " + a.string()),
            1);
}

TEST(Cli, SimulateTrafficWorstCase) {
  const auto dir = scratch_dir("sim_traffic");
  EXPECT_EQ(run_cli("simulate --system " + data_path("traffic_network.json") + " --cert " +
                    data_path("cert_traffic.json") + " --steps 100 --adversary worst --out " + dir.string()),
            0);
  const auto csv = slurp(dir / "trajectory.csv");
  EXPECT_NE(csv.find("x_12"), std::string::npos);
}
