#include "cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace bsv;
using namespace bsv::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "bsvtool");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> r;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(cell);
    if (!line.empty() && line.back() == ',') r.emplace_back();
    rows.push_back(r);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("bsvtool_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& s) const { return path_ / s; }

private:
  fs::path path_;
};

}  // namespace

TEST(cli, exit_codes) {
  EXPECT_EQ(call({"--help"}).code, kOk);
  EXPECT_EQ(call({"--version"}).code, kOk);
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"witness", "--no-such-flag"}).code, kUsage);
  EXPECT_EQ(call({"witness", "--state", "psi-sideways"}).code, kUsage);
  EXPECT_EQ(call({"witness", "--witness", "W_T9"}).code, kUsage);
  EXPECT_EQ(call({"witness", "--simulate", "--eta", "1.5", "--pulses", "10"}).code, kUsage);
  EXPECT_EQ(call({"measures", "--n0", ""}).code, kUsage);
  EXPECT_EQ(call({"measures", "--n0", "1,x"}).code, kUsage);
  EXPECT_EQ(call({"measures", "--n0", "1", "--gamma", "0.5"}).code, kUsage);
  EXPECT_EQ(call({"truncation", "--epsilon", "0"}).code, kUsage);
  EXPECT_EQ(call({"sweep-eta", "--eta", "0,0.5", "--pulses", "10"}).code, kUsage);
  // Too small a cutoff for this gain: refused rather than truncated silently.
  EXPECT_EQ(call({"witness", "--gamma", "2", "--cutoff", "5"}).code, kNumericRefusal);
  EXPECT_EQ(call({"truncation", "--n0", "100000", "--epsilon", "1e-300"}).code, kNumericRefusal);
}

TEST(cli, exact_witness_rows) {
  const auto r = call({"witness", "--state", "psi-minus", "--gamma", "0.5", "--cutoff", "25"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"witness", "state", "gamma", "cutoff", "var1", "var2", "var3", "s0", "value"}));
  const double n0 = GainParameter(0.5).mean_photons();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double s0 = std::stod(rows[i][7]);
    const double value = std::stod(rows[i][8]);
    EXPECT_NEAR(s0, 4.0 * n0, 1e-9);
    if (rows[i][0] == "W_S") {
      EXPECT_NEAR(value, -2.0 * s0, 1e-9);
      EXPECT_LT(std::abs(std::stod(rows[i][4])), 1e-9);
    } else {
      EXPECT_GT(value, 0.0);
    }
  }
}

TEST(cli, full_precision_output) {
  const auto r = call({"witness", "--state", "psi-minus", "--witness", "W_S", "--gamma", "0.5"});
  ASSERT_EQ(r.code, kOk);
  const auto rows = parse_csv(r.out);
  const std::string& s0 = rows[1][7];
  const double n0 = GainParameter(0.5).mean_photons();
  EXPECT_EQ(std::stod(s0), std::stod(fmt(std::stod(s0))));
  EXPECT_NEAR(std::stod(s0), 4.0 * n0, 4.0 * n0 * 1e-14);
  EXPECT_GE(s0.size(), 15u);
}

TEST(cli, vacuum_is_zero) {
  const auto r = call({"witness", "--state", "vacuum"});
  ASSERT_EQ(r.code, kOk);
  const auto rows = parse_csv(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (std::size_t c = 4; c < 9; ++c) EXPECT_EQ(std::stod(rows[i][c]), 0.0);
}

TEST(cli, measures_table) {
  const auto r = call({"measures", "--n0", "1,10"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"N0", "negativity", "kbar", "fedorov"}));
  EXPECT_NEAR(std::stod(rows[1][2]), 9.0, 1e-9);
  EXPECT_NEAR(std::stod(rows[1][3]), 4.0, 1e-9);

  const auto g = call({"measures", "--gamma", "0.5"});
  ASSERT_EQ(g.code, kOk);
  EXPECT_NEAR(std::stod(parse_csv(g.out)[1][0]), GainParameter(0.5).mean_photons(), 1e-12);
}

TEST(cli, truncation_table) {
  const auto r = call({"truncation", "--n0", "10", "--epsilon", "1e-12,0.999"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_LT(std::stod(rows[1][2]), 0.05);
  EXPECT_NEAR(std::stod(rows[2][2]), 1.0, 1e-3);
}

TEST(cli, crosswitness_shape) {
  const auto r = call({"crosswitness", "--gamma", "0.5", "--cutoff", "20"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"witness", "psi-minus", "psi-plus", "phi-plus", "phi-minus"}));
  int negative = 0;
  for (std::size_t i = 1; i < 5; ++i) {
    ASSERT_EQ(rows[i].size(), 5u);
    for (std::size_t c = 1; c < 5; ++c) negative += std::stod(rows[i][c]) < 0.0;
  }
  EXPECT_EQ(negative, 4);
}

TEST(cli, manifest_lists_outputs) {
  TempDir dir;
  const auto csv = dir / "w.csv";
  const auto r = call({"witness", "--simulate", "--state", "psi-plus", "--gamma", "1", "--pulses", "300", "--pulse-log",
                       "--out", csv.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto manifest = json::parse(slurp(dir / "w.manifest.json"));
  EXPECT_EQ(manifest.at("command"), "witness");
  EXPECT_EQ(manifest.at("seed"), 1);
  EXPECT_EQ(manifest.at("tool_version"), std::string(kVersion));
  EXPECT_TRUE(manifest.at("wall_clock_seconds").is_number());
  const auto outputs = manifest.at("outputs").get<std::vector<std::string>>();
  ASSERT_EQ(outputs.size(), 3u);
  for (const auto& f : outputs) {
    EXPECT_TRUE(fs::exists(f)) << f;
    EXPECT_LE(fs::last_write_time(f), fs::last_write_time(dir / "w.manifest.json"));
  }
  EXPECT_EQ(manifest.at("config").at("gamma"), 1.0);
  EXPECT_EQ(manifest.at("config").at("pulses"), 300);
}

TEST(cli, pulse_log_format) {
  TempDir dir;
  const auto csv = dir / "f.csv";
  ASSERT_EQ(call({"fedorov", "--state", "psi-minus", "--gamma", "0.5", "--pulses", "50", "--bin-width", "1",
                  "--pulse-log", "--out", csv.string()})
                .code,
            kOk);
  std::istringstream in(slurp(dir / "f.pulses.ndjson"));
  std::string line;
  std::uint64_t expect_id = 0;
  while (std::getline(in, line)) {
    const auto j = json::parse(line);
    EXPECT_EQ(j.at("pulse_id").get<std::uint64_t>(), expect_id++);
    EXPECT_EQ(j.at("setting"), "S1");
    ASSERT_EQ(j.at("counts").size(), 4u);
    for (const auto& c : j.at("counts")) EXPECT_GE(c.get<std::int64_t>(), 0);
  }
  EXPECT_EQ(expect_id, 50u);
}

TEST(cli, replay_is_byte_identical) {
  TempDir dir;
  const auto csv = dir / "s.csv";
  ASSERT_EQ(call({"witness", "--simulate", "--state", "phi-plus", "--gamma", "0.8", "--eta", "0.7", "--pulses", "3000",
                  "--seed", "42", "--out", csv.string()})
                .code,
            kOk);
  const std::string ref = slurp(csv);
  for (const char* workers : {"1", "4", "8"}) {
    const auto again = dir / (std::string("r") + workers + ".csv");
    const auto r = call({"replay", (dir / "s.manifest.json").string(), "--workers", workers, "--out", again.string()});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_EQ(slurp(again), ref) << workers;
  }
  EXPECT_EQ(call({"replay", (dir / "missing.json").string()}).code, kUsage);
}

TEST(cli, config_file_under_flags) {
  TempDir dir;
  const auto cfg = dir / "run.toml";
  {
    std::ofstream f(cfg);
    f << "[witness]\ngamma = 0.9\ncutoff = 30\nwitness = \"W_T2\"\n";
  }
  const auto csv = dir / "c.csv";
  const auto r = call({"--config", cfg.string(), "witness", "--gamma", "0.4", "--out", csv.string()});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(slurp(csv));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "W_T2");
  EXPECT_EQ(std::stod(rows[1][2]), 0.4);
  EXPECT_EQ(rows[1][3], "30");
}
