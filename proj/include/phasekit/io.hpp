#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "phasekit/basis.hpp"
#include "phasekit/scales.hpp"
#include "phasekit/spectrum.hpp"

// JSON and CSV encodings of the library's value types.
namespace phasekit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "phasekit 0.1.0";

// {"a", "hbar"}; b is derived and never written.
void to_json(Json& j, const ScaleParam& s);
void from_json(const Json& j, ScaleParam& s);

// {"n", "X", "P", "a", "hbar"}
void to_json(Json& j, const PhaseIndex& idx);
void from_json(const Json& j, PhaseIndex& idx);

// {"base": {"X", "P", "a", "hbar"}, "amplitudes": [[re, im], ...], "tail_bound": t}
void to_json(Json& j, const Spectrum& sp);
void from_json(const Json& j, Spectrum& sp);

/// {"type": "hermite_gaussian" | "gaussian_packet" | "superposition" | "sampled_grid", ...}.
/// Sampled grids are given inline ("x", "values") or by "csv" path, resolved
/// relative to `base_dir`.
StateSpec state_from_json(const Json& j, const std::filesystem::path& base_dir = {});
Json state_to_json(const StateSpec& s);

/// Three-column CSV (x, Re psi, Im psi); '#' lines and a non-numeric header
/// row are skipped.
StateSpec read_grid_csv(const std::filesystem::path& path, double hbar = 1.0);

/// Fixed 17-significant-digit formatting used by every CSV writer.
std::string format_double(double v);

/// Reads a whole JSON file; throws ConfigError when missing or malformed.
Json read_json_file(const std::filesystem::path& path);

}  // namespace phasekit
