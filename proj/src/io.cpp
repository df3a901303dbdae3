#include "phasekit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "phasekit/errors.hpp"

namespace phasekit {

namespace {

Json complex_pair(std::complex<double> c) { return Json::array({c.real(), c.imag()}); }

std::complex<double> parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("complex value must be [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

template <class T>
T value_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

void to_json(Json& j, const ScaleParam& s) { j = Json{{"a", s.a()}, {"hbar", s.hbar()}}; }

void from_json(const Json& j, ScaleParam& s) {
  s = ScaleParam(value_or(j, "a", 1.0), value_or(j, "hbar", 1.0));
}

void to_json(Json& j, const PhaseIndex& idx) {
  j = Json{{"n", idx.n}, {"X", idx.X}, {"P", idx.P}, {"a", idx.scale.a()},
           {"hbar", idx.scale.hbar()}};
}

void from_json(const Json& j, PhaseIndex& idx) {
  idx.n = value_or(j, "n", 0);
  idx.X = value_or(j, "X", 0.0);
  idx.P = value_or(j, "P", 0.0);
  idx.scale = ScaleParam(value_or(j, "a", 1.0), value_or(j, "hbar", 1.0));
  idx.validate();
}

void to_json(Json& j, const Spectrum& sp) {
  Json amps = Json::array();
  for (const auto& c : sp.amplitudes) amps.push_back(complex_pair(c));
  j = Json{{"base", {{"X", sp.X}, {"P", sp.P}, {"a", sp.scale.a()}, {"hbar", sp.scale.hbar()}}},
           {"amplitudes", std::move(amps)},
           {"tail_bound", sp.tail_bound}};
}

void from_json(const Json& j, Spectrum& sp) {
  const auto& base = j.at("base");
  sp.X = value_or(base, "X", 0.0);
  sp.P = value_or(base, "P", 0.0);
  sp.scale = ScaleParam(value_or(base, "a", 1.0), value_or(base, "hbar", 1.0));
  sp.amplitudes.clear();
  for (const auto& c : j.at("amplitudes")) sp.amplitudes.push_back(parse_complex(c));
  sp.tail_bound = value_or(j, "tail_bound", 0.0);
}

StateSpec state_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const auto type = j.at("type").get<std::string>();
  const double hbar = value_or(j, "hbar", 1.0);
  if (type == "hermite_gaussian") return StateSpec::hermite_gaussian(j.get<PhaseIndex>());
  if (type == "gaussian_packet") {
    return StateSpec::gaussian_packet(value_or(j, "center", 0.0), value_or(j, "width", 1.0),
                                      value_or(j, "momentum", 0.0), hbar);
  }
  if (type == "superposition") {
    std::vector<std::pair<std::complex<double>, StateSpec>> terms;
    for (const auto& t : j.at("terms")) {
      terms.emplace_back(parse_complex(t.at("coefficient")), state_from_json(t.at("state"), base_dir));
    }
    if (value_or(j, "unchecked", false)) return StateSpec::superposition_unchecked(std::move(terms));
    return StateSpec::superposition(std::move(terms));
  }
  if (type == "sampled_grid") {
    if (j.contains("csv")) {
      std::filesystem::path p = j.at("csv").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return read_grid_csv(p, hbar);
    }
    std::vector<double> x = j.at("x").get<std::vector<double>>();
    std::vector<std::complex<double>> v;
    for (const auto& c : j.at("values")) v.push_back(parse_complex(c));
    return StateSpec::sampled_grid(std::move(x), std::move(v), hbar);
  }
  throw InvalidArgument("unknown state type '" + type + "'");
}

Json state_to_json(const StateSpec& s) {
  return std::visit(
      [&](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, HermiteGaussian>) {
          Json j = v.index;
          j["type"] = "hermite_gaussian";
          return j;
        } else if constexpr (std::is_same_v<T, GaussianPacket>) {
          return Json{{"type", "gaussian_packet"}, {"center", v.center}, {"width", v.width},
                      {"momentum", v.momentum}, {"hbar", v.hbar}};
        } else if constexpr (std::is_same_v<T, Superposition>) {
          Json terms = Json::array();
          for (const auto& [c, t] : v.terms) {
            terms.push_back(Json{{"coefficient", complex_pair(c)}, {"state", state_to_json(t)}});
          }
          return Json{{"type", "superposition"}, {"terms", std::move(terms)}};
        } else {
          Json values = Json::array();
          for (const auto& c : v.values()) values.push_back(complex_pair(c));
          return Json{{"type", "sampled_grid"}, {"hbar", v.hbar()}, {"x", v.nodes()},
                      {"values", std::move(values)}};
        }
      },
      s.variant());
}

StateSpec read_grid_csv(const std::filesystem::path& path, double hbar) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open grid CSV '" + path.string() + "'");
  std::vector<double> x;
  std::vector<std::complex<double>> v;
  std::string line;
  int line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    double cols[3];
    if (!(fields >> cols[0] >> cols[1] >> cols[2])) {
      if (!seen_row) {  // header row
        seen_row = true;
        continue;
      }
      throw InvalidArgument(path.string() + ":" + std::to_string(line_no) +
                            ": expected three numeric columns x, re, im");
    }
    seen_row = true;
    x.push_back(cols[0]);
    v.emplace_back(cols[1], cols[2]);
  }
  return StateSpec::sampled_grid(std::move(x), std::move(v), hbar);
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace phasekit
