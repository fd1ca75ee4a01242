#include "quditsqueeze/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "quditsqueeze/errors.hpp"

namespace qsq {

namespace {

double require_number(const nlohmann::json& j, const std::string& key) {
  if (!j.at(key).is_number())
    throw ConfigError("field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

RunConfigFile parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  RunConfigFile cfg;
  ProtocolConfig& b = cfg.base;
  try {
    if (doc.contains("f")) b.f = SpinQuantum(require_number(doc, "f"));
    if (doc.contains("prep")) b.prep = prep_from_string(doc.at("prep").get<std::string>());
    if (doc.contains("od")) b.od = require_number(doc, "od");
    if (doc.contains("duration")) b.duration = require_number(doc, "duration");
    if (doc.contains("dt")) b.dt = require_number(doc, "dt");
    if (doc.contains("policy"))
      b.policy = policy_from_string(doc.at("policy").get<std::string>());
    if (doc.contains("final_map"))
      b.final_map = final_map_from_string(doc.at("final_map").get<std::string>());
    if (doc.contains("alpha")) b.alpha = require_number(doc, "alpha");
    if (doc.contains("protocol"))
      b.protocol = protocol_from_string(doc.at("protocol").get<std::string>());
    if (doc.contains("decoherence")) b.decoherence = doc.at("decoherence").get<bool>();

    if (doc.contains("channel")) {
      const auto& ch = doc.at("channel");
      if (ch.contains("w")) b.channel.w = require_number(ch, "w");
      if (ch.contains("t_coh")) b.channel.t_coh = require_number(ch, "t_coh");
      if (ch.contains("chain_rule"))
        b.channel.chain_rule = ch.at("chain_rule").get<std::string>();
    }
    if (doc.contains("rates")) {
      const auto& r = doc.at("rates");
      if (r.contains("flip")) b.flip_override = require_number(r, "flip");
    }
    if (doc.contains("detuning")) {
      DetuningMetadata meta;
      meta.delta_over_linewidth =
          require_number(doc.at("detuning"), "delta_over_linewidth");
      b.detuning = meta;
    }
    if (doc.contains("precision")) {
      cfg.precision = doc.at("precision").get<int>();
      if (cfg.precision < 1 || cfg.precision > 17)
        throw ConfigError("precision must lie in [1, 17]");
    }
    if (doc.contains("sweep")) {
      const auto& sw = doc.at("sweep");
      SweepAxes axes;
      if (sw.contains("f"))
        for (const auto& v : sw.at("f")) axes.f.push_back(SpinQuantum(v.get<double>()));
      if (sw.contains("prep"))
        for (const auto& v : sw.at("prep"))
          axes.prep.push_back(prep_from_string(v.get<std::string>()));
      if (sw.contains("od"))
        for (const auto& v : sw.at("od")) axes.od.push_back(v.get<double>());
      cfg.sweep = std::move(axes);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  validate_config(cfg.base);
  return cfg;
}

RunConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

nlohmann::json config_to_json(const RunConfigFile& cfg) {
  const ProtocolConfig& b = cfg.base;
  nlohmann::json doc{
      {"f", b.f.f()},
      {"prep", to_string(b.prep)},
      {"od", b.od},
      {"duration", b.duration},
      {"dt", b.dt},
      {"policy", to_string(b.policy)},
      {"final_map", to_string(b.final_map)},
      {"alpha", b.alpha},
      {"protocol", to_string(b.protocol)},
      {"decoherence", b.decoherence},
      {"channel",
       {{"w", b.channel.w},
        {"t_coh", b.channel.t_coh},
        {"chain_rule", b.channel.chain_rule}}},
      {"precision", cfg.precision},
  };
  if (b.flip_override) doc["rates"] = {{"flip", *b.flip_override}};
  if (b.detuning)
    doc["detuning"] = {{"delta_over_linewidth", b.detuning->delta_over_linewidth}};
  if (cfg.sweep) {
    nlohmann::json sw;
    for (const auto& f : cfg.sweep->f) sw["f"].push_back(f.f());
    for (const auto& p : cfg.sweep->prep) sw["prep"].push_back(to_string(p));
    for (double od : cfg.sweep->od) sw["od"].push_back(od);
    doc["sweep"] = sw;
  }
  return doc;
}

std::string format_double(double value, int precision) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

nlohmann::json state_to_json(const SpinState& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < s.f.dim(); ++i)
    arr.push_back({s.amps(i).real(), s.amps(i).imag()});
  return arr;
}

SpinState state_from_json(const nlohmann::json& doc, SpinQuantum f) {
  if (!doc.is_array() || static_cast<int>(doc.size()) != f.dim())
    throw ConfigError("state array length does not match the spin dimension");
  Eigen::VectorXcd amps(f.dim());
  for (int i = 0; i < f.dim(); ++i)
    amps(i) = complexd(doc.at(i).at(0).get<double>(),
                       doc.at(i).at(1).get<double>());
  return SpinState{f, amps};
}

}  // namespace qsq
