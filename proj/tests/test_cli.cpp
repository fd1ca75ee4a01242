#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quditsqueeze/cli_commands.hpp"
#include "quditsqueeze/config.hpp"
#include "quditsqueeze/errors.hpp"

using namespace qsq;
using nlohmann::json;

namespace {

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

std::vector<std::string> data_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  bool past_header = false;
  while (std::getline(in, line)) {
    if (past_header) out.push_back(line);
    if (!past_header && !line.empty() && line[0] != '#') past_header = true;
  }
  return out;
}

}  // namespace

TEST_CASE("double formatting is shortest-faithful and deterministic") {
  CHECK(format_double(0.1, 9) == "0.1");
  CHECK(format_double(2.5, 9) == "2.5");
  CHECK(format_double(300.0, 9) == "300");
  CHECK(format_double(1.0 / 3.0, 9) == "0.333333333");
  CHECK(format_double(0.0, 9) == "0");
  CHECK(format_double(-4.25, 9) == "-4.25");
  for (double v : {0.1, 1.0 / 3.0, std::exp(-1.0), 1e-12, 123456.789}) {
    CHECK(format_double(v, 9) == format_double(v, 9));
    CHECK(std::stod(format_double(v, 17)) == v);  // faithful at full precision
  }
}

TEST_CASE("config defaults") {
  const RunConfigFile cfg = parse_config(json::object());
  CHECK(cfg.base.f.f() == 4.0);
  CHECK(cfg.base.prep == Prep::SCS);
  CHECK(cfg.base.od == 300.0);
  CHECK(cfg.base.duration == 3.0);
  CHECK(cfg.base.dt == 1e-3);
  CHECK(cfg.base.policy == ThirdStatePolicy::RETAIN);
  CHECK(cfg.base.final_map == FinalMap::SCS_TARGET);
  CHECK(cfg.base.protocol == ProtocolKind::COUNTERTWIST);
  CHECK(cfg.base.decoherence == true);
  CHECK(cfg.base.channel.w == 1.0);
  CHECK(cfg.base.channel.t_coh == 0.97);
  CHECK(cfg.base.channel.chain_rule == "flip");
  CHECK(!cfg.base.flip_override);
  CHECK(!cfg.base.detuning);
  CHECK(cfg.precision == 9);
  CHECK(!cfg.sweep);
}

TEST_CASE("config parsing covers every field") {
  const json doc = {
      {"f", 2.0},
      {"prep", "cat"},
      {"od", 120.0},
      {"duration", 1.5},
      {"dt", 5e-4},
      {"policy", "remove"},
      {"final_map", "yurke"},
      {"alpha", 0.3},
      {"protocol", "qnd"},
      {"decoherence", false},
      {"channel", {{"w", 0.8}, {"t_coh", 0.5}, {"chain_rule", "none"}}},
      {"rates", {{"flip", 0.1}}},
      {"detuning", {{"delta_over_linewidth", 25.0}}},
      {"precision", 12},
      {"sweep", {{"f", {1.0, 4.0}}, {"prep", {"scs", "cat"}}, {"od", {50.0}}}},
  };
  const RunConfigFile cfg = parse_config(doc);
  CHECK(cfg.base.f.twice_f == 4);
  CHECK(cfg.base.prep == Prep::CAT);
  CHECK(cfg.base.od == 120.0);
  CHECK(cfg.base.duration == 1.5);
  CHECK(cfg.base.dt == 5e-4);
  CHECK(cfg.base.policy == ThirdStatePolicy::REMOVE);
  CHECK(cfg.base.final_map == FinalMap::YURKE_TARGET);
  CHECK(cfg.base.alpha == 0.3);
  CHECK(cfg.base.protocol == ProtocolKind::QND);
  CHECK(cfg.base.decoherence == false);
  CHECK(cfg.base.channel.w == 0.8);
  CHECK(cfg.base.channel.t_coh == 0.5);
  CHECK(cfg.base.channel.chain_rule == "none");
  REQUIRE(cfg.base.flip_override.has_value());
  CHECK(*cfg.base.flip_override == 0.1);
  REQUIRE(cfg.base.detuning.has_value());
  CHECK(cfg.base.detuning->delta_over_linewidth == 25.0);
  CHECK(cfg.precision == 12);
  REQUIRE(cfg.sweep.has_value());
  CHECK(cfg.sweep->f.size() == 2);
  CHECK(cfg.sweep->prep.size() == 2);
  CHECK(cfg.sweep->od.size() == 1);
}

TEST_CASE("config errors are semantic, not crashes") {
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  CHECK_THROWS_AS(parse_config({{"prep", "bogus"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"f", "four"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"f", 0.3}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"dt", 0.0}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"decoherence", "yes"}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"precision", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"precision", 18}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"rates", {{"flip", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"channel", {{"t_coh", -0.1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"channel", {{"chain_rule", "maybe"}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config({{"final_map", "yurke"}, {"f", 2.5}}), ConfigError);
}

TEST_CASE("resolved config echo round-trips") {
  const json doc = {{"f", 1.0}, {"prep", "cat"}, {"duration", 0.5},
                    {"rates", {{"flip", 0.05}}}};
  const RunConfigFile cfg = parse_config(doc);
  const json echo = config_to_json(cfg);
  CHECK(echo.at("f") == 1.0);
  CHECK(echo.at("od") == 300.0);  // default filled in
  const RunConfigFile again = parse_config(echo);
  CHECK(config_to_json(again) == echo);
}

TEST_CASE("state serialization round-trips") {
  const SpinState s = prepare_fiducial(Prep::ZERO_X, SpinQuantum(2.0));
  const SpinState back = state_from_json(state_to_json(s), SpinQuantum(2.0));
  CHECK((back.amps - s.amps).norm() == 0.0);
  CHECK_THROWS_AS(state_from_json(state_to_json(s), SpinQuantum(1.0)), ConfigError);
}

TEST_CASE("simulate output is deterministic and carries its metadata") {
  RunConfigFile cfg = parse_config({{"duration", 0.02}});
  std::ostringstream a, b;
  cmd_simulate(cfg, a);
  cmd_simulate(cfg, b);
  CHECK(a.str() == b.str());

  const std::string text = a.str();
  CHECK(text.rfind("# {", 0) == 0);
  CHECK(text.find("zeta_db = -10*log10(zeta)") != std::string::npos);
  CHECK(text.find("t_gamma,zeta,zeta_db,prep,f,od,final_map") != std::string::npos);
  // resolved config is embedded, parseable from the first line
  std::istringstream in(text);
  std::string first;
  std::getline(in, first);
  const json echo = json::parse(first.substr(2));
  CHECK(echo.at("duration") == 0.02);

  // 20 steps + t = 0 sample + 3 header lines
  CHECK(count_lines(text) == 24);
  const auto rows = data_lines(text);
  REQUIRE(rows.size() == 21);
  CHECK(rows[0].rfind("0,1,", 0) == 0);  // t = 0, zeta = 1, 0 dB
  CHECK(rows[0].find(",scs,4,300,scs") != std::string::npos);
}

TEST_CASE("a zero-length run emits exactly the initial sample") {
  RunConfigFile cfg = parse_config({{"duration", 0.0}});
  std::ostringstream out;
  cmd_simulate(cfg, out);
  const auto rows = data_lines(out.str());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == "0,1,-0,scs,4,300,scs");
}

TEST_CASE("sweep grids run in config order, independent of thread count") {
  const json doc = {{"duration", 0.02},
                    {"sweep", {{"f", {1.0, 4.0}}, {"prep", {"scs", "cat"}}}}};
  const RunConfigFile cfg = parse_config(doc);
  std::ostringstream serial, parallel;
  cmd_sweep(cfg, serial, 1);
  cmd_sweep(cfg, parallel, 4);
  CHECK(serial.str() == parallel.str());

  const auto rows = data_lines(serial.str());
  REQUIRE(rows.size() == 4 * 21);
  // blocks in f-major, prep-minor order
  CHECK(rows[0].find(",scs,1,") != std::string::npos);
  CHECK(rows[21].find(",cat,1,") != std::string::npos);
  CHECK(rows[42].find(",scs,4,") != std::string::npos);
  CHECK(rows[63].find(",cat,4,") != std::string::npos);

  // without a sweep block the subcommand refuses
  CHECK_THROWS_AS(cmd_sweep(parse_config({{"duration", 0.02}}), serial, 1),
                  ConfigError);
}

TEST_CASE("sweep drops duplicate axis values with a warning") {
  const json doc = {{"duration", 0.02}, {"sweep", {{"od", {50.0, 50.0, 60.0}}}}};
  std::ostringstream out;
  cmd_sweep(parse_config(doc), out, 1);
  CHECK(data_lines(out.str()).size() == 2 * 21);
}

TEST_CASE("peak table is sorted and guards its sampling density") {
  const json doc = {{"duration", 1.0},
                    {"dt", 1e-3},
                    {"sweep", {{"f", {4.0, 1.0}}, {"prep", {"cat", "scs"}}}}};
  std::ostringstream out;
  cmd_peak(parse_config(doc), out, 2);
  const auto rows = data_lines(out.str());
  REQUIRE(rows.size() == 8);  // 2 f x 2 prep x 2 maps (both f integer)
  CHECK(rows[0].rfind("1,scs,scs,", 0) == 0);
  CHECK(rows[1].rfind("1,scs,yurke,", 0) == 0);
  CHECK(rows[2].rfind("1,cat,scs,", 0) == 0);
  CHECK(rows[4].rfind("4,scs,scs,", 0) == 0);
  CHECK(rows[6].rfind("4,cat,scs,", 0) == 0);

  // half-integer f rows skip the Yurke map
  const json halfdoc = {{"duration", 1.0}, {"sweep", {{"f", {1.5}}}}};
  std::ostringstream half;
  cmd_peak(parse_config(halfdoc), half, 1);
  REQUIRE(data_lines(half.str()).size() == 1);

  const json short_doc = {{"duration", 0.1}, {"dt", 1e-3}, {"sweep", json::object()}};
  std::ostringstream sink;
  CHECK_THROWS_AS(cmd_peak(parse_config(short_doc), sink, 1), ConfigError);

  const json two_od = {{"duration", 1.0},
                       {"sweep", {{"od", {100.0, 300.0}}}}};
  CHECK_THROWS_AS(cmd_peak(parse_config(two_od), sink, 1), ConfigError);
}

TEST_CASE("validation report") {
  std::ostringstream out;
  const int code = cmd_validate(std::nullopt, out);
  CHECK(code == 0);
  const json report = json::parse(out.str());
  CHECK(report.at("all_pass") == true);
  REQUIRE(report.at("checks").is_array());
  CHECK(report.at("checks").size() >= 7);
  for (const auto& c : report.at("checks")) CHECK(c.at("pass") == true);
}

TEST_CASE("validation vets a config file when given one") {
  const std::string good = "/tmp/qsq_cfg_good.json";
  const std::string bad = "/tmp/qsq_cfg_bad.json";
  {
    std::ofstream g(good);
    g << R"({"duration": 0.5})";
    std::ofstream b(bad);
    b << R"({"channel": {"t_coh": 2.0}})";
  }
  std::ostringstream out_good, out_bad;
  CHECK(cmd_validate(good, out_good) == 0);
  CHECK(json::parse(out_good.str()).at("all_pass") == true);

  CHECK(cmd_validate(bad, out_bad) == 1);
  const json report = json::parse(out_bad.str());
  CHECK(report.at("all_pass") == false);
  bool found = false;
  for (const auto& c : report.at("checks"))
    if (c.at("name") == "config_invariants") {
      found = true;
      CHECK(c.at("pass") == false);
    }
  CHECK(found);
}
