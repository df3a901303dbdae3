#include <cmath>
#include <fstream>

#include "phasekit/cli.hpp"
#include "phasekit/errors.hpp"

namespace phasekit::cli {

Json default_config() {
  return Json{
      {"hbar", 1.0},
      {"a", 1.0},
      {"quadrature", {{"rel_tol", 1e-10}, {"abs_tol", 1e-12}, {"gh_order", 0}}},
      {"grid", {{"step_divisor_x", 200.0}, {"step_divisor_p", 200.0}, {"extent", 8.0}}},
      {"sampling", {{"step_divisor", 8.0}, {"extent", 6.0}, {"points", 201}}},
      {"truncation", {{"N", 40}}},
      {"tail_tol", 1e-8},
      {"output", {{"dir", "."}}},
      {"verify",
       {{"hermite", 1e-12},
        {"moments", 1e-8},
        {"fourier", 1e-8},
        {"kernel", 1e-9},
        {"orthonormality", 1e-12},
        {"matrix", 1e-13},
        {"eigen", 1e-5},
        {"kernel_eigen", 2e-5},
        {"parseval", 1e-8},
        {"density", 1e-4},
        {"transport", 1e-7},
        {"reconstruct_sum", 1e-7},
        {"reconstruct_XP", 1e-4},
        {"reconstruct_scale", 1e-2}}},
      {"debug", {{"eigen_shift", 0}}},
  };
}

namespace {

bool same_kind(const Json& def, const Json& v) {
  if (def.is_number_integer()) return v.is_number_integer();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_boolean()) return v.is_boolean();
  return false;
}

void set_value(Json& target, const std::string& path, const Json& def, const Json& v) {
  if (!same_kind(def, v)) {
    throw ConfigError("config key '" + path + "' expects a " + def.type_name() + ", got " +
                      v.dump());
  }
  target = def.is_number_float() ? Json(v.get<double>()) : v;
}

void merge(Json& into, const Json& from, const std::string& prefix) {
  if (!from.is_object()) throw ConfigError("config section '" + prefix + "' must be an object");
  for (const auto& [key, value] : from.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!into.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    Json& slot = into[key];
    if (slot.is_object()) {
      merge(slot, value, path);
    } else {
      set_value(slot, path, Json(slot), value);
    }
  }
}

Json parse_override(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return Json(text);
  }
}

void require_positive(const Json& v, const std::string& path) {
  if (!(v.get<double>() > 0.0) || !std::isfinite(v.get<double>())) {
    throw ConfigError("config key '" + path + "' must be positive");
  }
}

}  // namespace

void validate_config(const Json& cfg) {
  require_positive(cfg.at("hbar"), "hbar");
  require_positive(cfg.at("a"), "a");
  require_positive(cfg.at("tail_tol"), "tail_tol");
  for (const char* k : {"rel_tol", "abs_tol"}) {
    require_positive(cfg.at("quadrature").at(k), std::string("quadrature.") + k);
  }
  if (cfg.at("quadrature").at("gh_order").get<int>() < 0) {
    throw ConfigError("quadrature.gh_order must be >= 0 (0 = automatic)");
  }
  for (const auto& [k, v] : cfg.at("grid").items()) require_positive(v, "grid." + k);
  require_positive(cfg.at("sampling").at("step_divisor"), "sampling.step_divisor");
  require_positive(cfg.at("sampling").at("extent"), "sampling.extent");
  for (const auto& [k, v] : cfg.at("verify").items()) require_positive(v, "verify." + k);
  if (cfg.at("sampling").at("points").get<int>() < 2) {
    throw ConfigError("sampling.points must be >= 2");
  }
  if (cfg.at("truncation").at("N").get<int>() < 0) throw ConfigError("truncation.N must be >= 0");
}

Json resolve_config(const std::optional<std::string>& file,
                    const std::vector<std::pair<std::string, std::string>>& overrides) {
  Json cfg = default_config();
  if (file) merge(cfg, read_json_file(*file), "");
  for (const auto& [path, text] : overrides) {
    Json* slot = &cfg;
    std::size_t start = 0;
    while (true) {
      const auto dot = path.find('.', start);
      const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
      if (!slot->is_object() || !slot->contains(key)) {
        throw ConfigError("unknown config key '" + path + "'");
      }
      slot = &(*slot)[key];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (slot->is_object()) throw ConfigError("config key '" + path + "' is a section");
    set_value(*slot, path, Json(*slot), parse_override(text));
  }
  validate_config(cfg);
  return cfg;
}

}  // namespace phasekit::cli
