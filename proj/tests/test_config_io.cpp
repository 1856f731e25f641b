#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <string>

#include "mfdf/config.hpp"
#include "mfdf/dynamics.hpp"
#include "mfdf/io.hpp"

using namespace mfdf;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string kMbo =
    "equation = mbo\n"
    "dt = 1e-3\n"
    "t_end = 1\n"
    "init = gaussian\n"
    "init.amplitude = 0.1\n"
    "init.sigma = 1\n";

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "mfdf_test_config_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

}  // namespace

TEST_CASE("valid document gets defaults", "[config]") {
  const auto c = parse_config(kMbo);
  CHECK(c.equation == EquationName::mbo);
  CHECK_FALSE(c.delta.has_value());
  CHECK(c.dt == 1e-3);
  CHECK(c.t_end == 1.0);
  CHECK(c.grid_n == 1024);
  CHECK(c.grid_length == 64 * std::numbers::pi);
  CHECK(c.sign == Sign::defocusing);
  CHECK(c.output_every == 100);
  CHECK(c.init.kind == InitSpec::Kind::gaussian);
  CHECK(c.init.amplitude == 0.1);
  CHECK(c.init.sigma == 1.0);
}

TEST_CASE("values, comments and pi multiples", "[config]") {
  const auto c = parse_config(
      "# conservation run\n"
      "equation = gfdf   # general power\n"
      "delta = 2\n"
      "k = 3\n"
      "sign = focusing\n"
      "grid_n = 1000\n"
      "grid_length = 16*pi\n"
      "dt = auto\n"
      "t_end = 0.5\n"
      "snapshot_times = 0, 0.25,0.5\n"
      "seed = 18446744073709551615\n"
      "init = bandlimited\n"
      "init.jmax = 12\n");
  CHECK(c.equation == EquationName::gfdf);
  CHECK(c.delta == 2.0);
  CHECK(c.k == 3);
  CHECK(c.sign == Sign::focusing);
  CHECK(c.grid_n == 1000);
  CHECK(c.grid_length == 16 * std::numbers::pi);
  CHECK_FALSE(c.dt.has_value());
  CHECK(c.snapshot_times == std::vector<double>{0.0, 0.25, 0.5});
  CHECK(c.seed == std::numeric_limits<std::uint64_t>::max());
  CHECK(c.init.jmax == 12);
  CHECK(parse_config("equation = mkdv\nt_end = 1\ninit = sech\ngrid_length = pi\n").grid_length == std::numbers::pi);
}

TEST_CASE("errors name the key and the line", "[config]") {
  CHECK_THROWS_WITH(parse_config("equation = mbo\ndelta = 1\nt_end = 1\ninit = gaussian\n"),
                    ContainsSubstring("line 2: delta:") && ContainsSubstring("mbo"));
  CHECK_THROWS_WITH(parse_config(kMbo + "grid_n = 1001\n"), ContainsSubstring("line 7: grid_n:"));
  CHECK_NOTHROW(parse_config(kMbo + "grid_n = 1000\n"));
  CHECK_THROWS_WITH(parse_config(kMbo + "colour = blue\n"), ContainsSubstring("line 7: colour: unknown key"));
  CHECK_THROWS_WITH(parse_config(kMbo + "t_end = 2\n"), ContainsSubstring("line 7: t_end: repeated key"));
  CHECK_THROWS_WITH(parse_config(kMbo + "grid_length = wide\n"), ContainsSubstring("line 7: grid_length:"));
  CHECK_THROWS_WITH(parse_config(kMbo + "init.width = 2\n"), ContainsSubstring("line 7: init.width: not used"));
  CHECK_THROWS_WITH(parse_config(kMbo + "just words\n"), ContainsSubstring("line 7:"));
  CHECK_THROWS_WITH(parse_config("equation = mfdf\nt_end = 1\ninit = gaussian\n"),
                    ContainsSubstring("delta: required"));
  CHECK_THROWS_WITH(parse_config("equation = mbo\ninit = gaussian\n"), ContainsSubstring("t_end: missing"));
  CHECK_THROWS_WITH(parse_config(kMbo + "snapshot_times = 0.5, 3\n"), ContainsSubstring("line 7: snapshot_times:"));
  CHECK_THROWS_WITH(parse_config(kMbo + "k = 3\n"), ContainsSubstring("line 7: k:"));
  CHECK_THROWS_WITH(parse_config("equation = kdv\nt_end = 1\ninit = gaussian\n"), ContainsSubstring("line 1: equation:"));
  CHECK_THROWS_AS(load_config(scratch("missing.cfg").string() + ".nope"), IoError);
}

TEST_CASE("snapshot roundtrip is bit-exact", "[io]") {
  const auto g = make_grid(64, 3.7);
  std::vector<double> v(64);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::sin(1e3 * static_cast<double>(j)) * 1e-300 * (j % 3 == 0 ? 1e300 : 1);
  v[5] = -0.0;
  v[6] = std::numeric_limits<double>::denorm_min();
  const SimState state{0.125, Field(g, v), 7};
  const EquationSpec eq{DispersionKind::fdf(2.5), 1.0};
  const auto path = scratch("a.fdf");
  write_snapshot(state, eq, path.string());

  const auto s = read_snapshot(path.string());
  CHECK(s.n == 64);
  CHECK(s.length == 3.7);
  CHECK(s.time == 0.125);
  CHECK(s.delta == 2.5);
  REQUIRE(s.values.size() == v.size());
  CHECK(std::memcmp(s.values.data(), v.data(), 8 * v.size()) == 0);
  CHECK(std::signbit(s.values[5]));

  const auto bytes = slurp(path);
  CHECK(bytes.size() == 36 + 8 * 64);
  CHECK(bytes.substr(0, 4) == "FDF1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 64);  // little-endian n

  // Depth-free equations store 0.
  write_snapshot(state, EquationSpec{DispersionKind::bo(), 1.0}, path.string());
  CHECK(read_snapshot(path.string()).delta == 0.0);
}

TEST_CASE("malformed snapshots are rejected", "[io]") {
  const auto path = scratch("bad.fdf");
  dump(path, "FDF");
  CHECK_THROWS_WITH(read_snapshot(path.string()), ContainsSubstring("truncated"));

  const auto g = make_grid(8, 1.0);
  auto bytes = encode_snapshot(make_snapshot({0.0, Field(g), 0}, EquationSpec{DispersionKind::bo(), 1.0}));
  bytes[0] = 'X';
  dump(path, std::string(bytes.begin(), bytes.end()));
  CHECK_THROWS_WITH(read_snapshot(path.string()), ContainsSubstring("magic"));

  bytes[0] = 'F';
  bytes.resize(bytes.size() - 8);
  dump(path, std::string(bytes.begin(), bytes.end()));
  CHECK_THROWS_WITH(read_snapshot(path.string()), ContainsSubstring("n = 8"));

  CHECK_THROWS_AS(read_snapshot(scratch("absent.fdf").string()), IoError);
}

TEST_CASE("diagnostics CSV", "[io]") {
  const auto path = scratch("d.csv");
  write_diagnostics({}, path.string());
  CHECK(slurp(path) == "t,mass,l2,hamiltonian,hs_half,max_abs\n");

  const std::vector<InvariantRecord> zero(1);
  write_diagnostics(zero, path.string());
  CHECK(slurp(path) == "t,mass,l2,hamiltonian,hs_half,max_abs\n0,0,0,0,0,0\n");

  const std::vector<InvariantRecord> recs = {{0.1, 1.0 / 3.0, 2.0, -1e-300, 5e17, 0.5}};
  CHECK(format_record(recs[0]) ==
        "0.10000000000000001,0.33333333333333331,2,-1e-300,5e+17,0.5");
  write_diagnostics(recs, path.string());
  const auto first = slurp(path);
  write_diagnostics(recs, path.string());
  CHECK(slurp(path) == first);

  CHECK_THROWS_AS(write_diagnostics(recs, (scratch("no_such_dir") / "x" / "d.csv").string()), IoError);
}

TEST_CASE("run diagnostics are byte-identical across repeats", "[io][determinism]") {
  auto c = parse_config(
      "equation = mfdf\ndelta = 1\ngrid_n = 256\ngrid_length = 32pi\nt_end = 0.5\noutput_every = 5\n"
      "init = gaussian\ninit.amplitude = 0.3\ninit.sigma = 2\n");
  const auto a = format_diagnostics(run(c).records);
  const auto b = format_diagnostics(run(c).records);
  CHECK(a == b);
}
