#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "json.hpp"

#ifndef BINCONV_CLI_PATH
#define BINCONV_CLI_PATH "binconv"
#endif

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  CommandResult res;
  std::string cmd = std::string(BINCONV_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), got);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("cli eval") {
  CommandResult lam = run_cli("eval --fn \"binv(I)\" --to 10 --csv");
  CHECK(lam.exit_code == 0);
  CHECK(lines_of(lam.output) ==
        std::vector<std::string>{"1,1", "2,-1", "3,-1", "4,1", "5,-1", "6,1", "7,-1", "8,-1",
                                 "9,1", "10,1"});

  CommandResult d = run_cli("eval --fn delta --to 3 --csv");
  CHECK(d.exit_code == 0);
  CHECK(lines_of(d.output) == std::vector<std::string>{"1,1", "2,0", "3,0"});

  CommandResult two = run_cli("eval --fn \"bconv(I,I)\" --to 8 --csv");
  CHECK(two.exit_code == 0);
  CHECK(lines_of(two.output) == std::vector<std::string>{"1,1", "2,2", "3,2", "4,4", "5,2",
                                                         "6,4", "7,2", "8,8"});

  CommandResult bad = run_cli("eval --fn \"nosuch(I)\" --to 3");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("position") != std::string::npos);
}

TEST_CASE("cli eval json round-trips through a table file") {
  CommandResult json_out = run_cli("eval --fn \"bconv(mu,xi)\" --to 12 --json");
  REQUIRE(json_out.exit_code == 0);
  std::string table_path = "cli_roundtrip_table.csv";
  {
    std::ofstream out(table_path);
    for (const std::string& line : lines_of(json_out.output)) {
      auto row = nlohmann::json::parse(line);
      out << row["n"].get<std::uint64_t>() << "," << row["value"].get<std::string>() << "\n";
    }
  }
  CommandResult back = run_cli("eval --fn table:" + table_path + " --to 12 --json");
  CHECK(back.exit_code == 0);
  CHECK(back.output == json_out.output);
  std::remove(table_path.c_str());
}

TEST_CASE("cli conv and invert") {
  CommandResult conv = run_cli("conv --kind dconv --f I --g I --to 8 --csv");
  CHECK(conv.exit_code == 0);
  CHECK(lines_of(conv.output) == std::vector<std::string>{"1,1", "2,2", "3,2", "4,3", "5,2",
                                                          "6,4", "7,2", "8,4"});
  CommandResult inv = run_cli("invert --mode binomial --fn xi --to 6 --csv");
  CHECK(inv.exit_code == 0);
  CHECK(lines_of(inv.output) ==
        std::vector<std::string>{"1,1", "2,-1", "3,-1", "4,0", "5,-1", "6,1"});
  CommandResult noninv = run_cli("invert --mode binomial --fn mangoldt --to 4");
  CHECK(noninv.exit_code == 2);
}

TEST_CASE("cli check") {
  CommandResult ok = run_cli("check isom --to 60 --samples 3 --json");
  CHECK(ok.exit_code == 0);
  auto j = nlohmann::json::parse(lines_of(ok.output).front());
  CHECK(j["identity"] == "isom");
  CHECK(j["pass"] == true);
  CHECK(j["witness"] == "");

  CommandResult small = run_cli("check mangoldt_ids --n 12");
  CHECK(small.exit_code == 0);

  CommandResult unknown = run_cli("check nosuch");
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.output.find("known identities") != std::string::npos);
}

TEST_CASE("cli series") {
  CommandResult pz = run_cli("series primezeta --s 2 --json");
  REQUIRE(pz.exit_code == 0);
  auto j = nlohmann::json::parse(lines_of(pz.output).front());
  double v = std::stod(j["value"].get<std::string>());
  CHECK(std::abs(v - 0.452247) < 1e-5);
  double eb = std::stod(j["error_bound"].get<std::string>());
  CHECK(eb < 1e-8);

  CommandResult xe = run_cli("series xi_egf --z 0.5 --json");
  REQUIRE(xe.exit_code == 0);
  auto jx = nlohmann::json::parse(lines_of(xe.output).front());
  double xv = std::stod(jx["value"].get<std::string>());
  CHECK(xv > 0.875);
  CHECK(xv <= 1.0);

  CommandResult zt = run_cli("series zetatilde --s 2 --json");
  REQUIRE(zt.exit_code == 0);
  auto jz = nlohmann::json::parse(lines_of(zt.output).front());
  double zv = std::stod(jz["value"].get<std::string>());
  CHECK(std::abs(zv - std::exp(v)) < 1e-9);

  CommandResult dom = run_cli("series primezeta --s 0.5");
  CHECK(dom.exit_code == 2);
  CHECK(dom.output.find("s > 1") != std::string::npos);

  CommandResult badkind = run_cli("series nosuchkind --s 2");
  CHECK(badkind.exit_code == 2);
}

TEST_CASE("cli honors BINCONV_SIEVE_BOUND") {
  CommandResult plain = run_cli("eval --fn xi --to 16 --csv");
  // popen goes through /bin/sh, so an env-assignment prefix works
  CommandResult forced;
  {
    std::string cmd = std::string("BINCONV_SIEVE_BOUND=50000 ") + BINCONV_CLI_PATH +
                      " eval --fn xi --to 16 --csv 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe))
      forced.output.append(buf.data(), got);
    int status = pclose(pipe);
    forced.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  CHECK(forced.exit_code == 0);
  CHECK(forced.output == plain.output);
}

TEST_CASE("cli usage errors") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("eval").exit_code == 2);         // missing --fn
  CHECK(run_cli("frobnicate").exit_code == 2);   // unknown subcommand
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("eval --fn I --to 0").exit_code == 2);
}
