#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "phasekit/errors.hpp"
#include "phasekit/io.hpp"
#include "phasekit/transform.hpp"

using namespace phasekit;
namespace fs = std::filesystem;

TEST_CASE("scale and index round trip") {
  const PhaseIndex idx{4, 0.25, -1.5, ScaleParam(0.8, 1.3)};
  const Json j = idx;
  CHECK(j.dump() == R"({"n":4,"X":0.25,"P":-1.5,"a":0.8,"hbar":1.3})");
  CHECK_FALSE(j.contains("b"));
  CHECK(j.get<PhaseIndex>() == idx);
  const Json js = ScaleParam(2.0);
  CHECK(js.dump() == R"({"a":2.0,"hbar":1.0})");
  CHECK_THROWS_AS(Json::parse(R"({"n":-2})").get<PhaseIndex>(), InvalidArgument);
}

TEST_CASE("spectrum round trip") {
  const auto sp = transform::project_spectrum(StateSpec::gaussian_packet(0.5, 1.0, 0.2), 0.1, 0.0,
                                              ScaleParam(1.0), 6);
  const Json j = sp;
  CHECK(j.at("amplitudes").size() == 7);
  CHECK(j.at("base").at("X") == 0.1);
  const auto back = Json::parse(j.dump()).get<Spectrum>();
  CHECK(back.amplitudes == sp.amplitudes);
  CHECK(back.tail_bound == sp.tail_bound);
  CHECK(back.scale == sp.scale);
}

TEST_CASE("state descriptions") {
  const auto j = Json::parse(R"({
    "type": "superposition",
    "terms": [
      {"coefficient": [0.6, 0], "state": {"type": "hermite_gaussian", "n": 0, "X": 0, "P": 0, "a": 1}},
      {"coefficient": [0, 0.8], "state": {"type": "hermite_gaussian", "n": 1, "X": 0, "P": 0, "a": 1}}
    ]})");
  const auto s = state_from_json(j);
  CHECK(s.norm_squared() == doctest::Approx(1.0));
  const auto again = state_from_json(state_to_json(s));
  CHECK(again(0.4) == s(0.4));

  const auto packet = state_from_json(
      Json::parse(R"({"type": "gaussian_packet", "center": 1, "width": 0.5, "momentum": 2})"));
  CHECK(packet(1.0) == StateSpec::gaussian_packet(1.0, 0.5, 2.0)(1.0));

  const auto grid = state_from_json(Json::parse(
      R"({"type": "sampled_grid", "x": [0, 1, 2, 3, 4], "values": [0, [1, 1], 2, 1, 0]})"));
  CHECK(grid(1.0) == std::complex<double>(1.0, 1.0));

  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"type": "nope"})")), InvalidArgument);
  CHECK_THROWS_AS(state_from_json(Json::parse(R"({"type": "superposition", "terms": [
      {"coefficient": [1, 0], "state": {"type": "gaussian_packet"}},
      {"coefficient": [1, 0], "state": {"type": "gaussian_packet", "center": 1}}]})")),
                  InvalidArgument);
}

TEST_CASE("grid CSV") {
  const fs::path dir = fs::temp_directory_path() / "phasekit_test_io";
  fs::create_directories(dir);
  const auto path = dir / "grid.csv";
  {
    std::ofstream f(path);
    f << "# a comment\nx,re,im\n";
    for (int k = 0; k <= 10; ++k) f << 0.5 * k << "," << k << "," << -k << "\n";
  }
  const auto s = read_grid_csv(path);
  CHECK(s(2.5) == std::complex<double>(5.0, -5.0));
  const auto via_json = state_from_json(Json::parse(R"({"type": "sampled_grid", "csv": "grid.csv"})"), dir);
  CHECK(via_json(1.0) == s(1.0));

  {
    std::ofstream f(path);
    f << "0,1,0\n1,2\n";
  }
  CHECK_THROWS_AS(read_grid_csv(path), InvalidArgument);
  CHECK_THROWS_AS(read_grid_csv(dir / "missing.csv"), InvalidArgument);
  fs::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "0");
  CHECK(format_double(1.0) == "1");
  CHECK(std::stod(format_double(-2.5e-300)) == -2.5e-300);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("json files") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/phasekit.json"), ConfigError);
  const auto p = fs::temp_directory_path() / "phasekit_bad.json";
  {
    std::ofstream f(p);
    f << "{ not json";
  }
  CHECK_THROWS_AS(read_json_file(p), ConfigError);
  fs::remove(p);
}
