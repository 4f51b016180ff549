#include <doctest.h>

#include "nsdiag/field_io.hpp"
#include "nsdiag/generators.hpp"
#include "nsdiag/scaled_quantities.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace nsdiag;

namespace {

constexpr double kPi = std::numbers::pi;

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

} // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("F3B1 header layout is bit-exact") {
  const Grid g(8, 2.5);
  ScalarField f(g);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = static_cast<double>(i);
  const auto path = temp_file("nsdiag_hdr.f3b");
  write_f3b1(path.string(), f);

  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::memcmp(magic, "F3B1", 4) == 0);
  std::uint32_t n = 0;
  is.read(reinterpret_cast<char*>(&n), 4);
  CHECK(n == 8);
  double L = 0;
  is.read(reinterpret_cast<char*>(&L), 8);
  CHECK(L == 2.5);
  double first = -1, second = -1;
  is.read(reinterpret_cast<char*>(&first), 8);
  is.read(reinterpret_cast<char*>(&second), 8);
  CHECK(first == 0.0);  // x-fastest ordering
  CHECK(second == 1.0);
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 8 + sizeof(double) * 8 * 8 * 8);
  std::filesystem::remove(path);
}

TEST_CASE("scalar and vector field round trips") {
  const Grid g(16, 2 * kPi);
  FieldSpec spec;
  spec.kind = FieldKind::taylor_green;
  spec.n = g.n;
  spec.box_length = g.box_length;
  const VectorField v = generate(spec);
  const auto vpath = temp_file("nsdiag_v.f3b");
  write_f3b1(vpath.string(), v);
  const VectorField v2 = read_f3b1_vector(vpath.string());
  CHECK(v2.grid == v.grid);
  for (int c = 0; c < 3; ++c) CHECK(v2[c].values == v[c].values);

  const auto spath = temp_file("nsdiag_s.f3b");
  write_f3b1(spath.string(), v[0]);
  const ScalarField s2 = read_f3b1_scalar(spath.string());
  CHECK(s2.values == v[0].values);
  CHECK_THROWS(read_f3b1_vector(spath.string()));
  CHECK_THROWS(read_f3b1_scalar(vpath.string()));
  std::filesystem::remove(vpath);
  std::filesystem::remove(spath);
}

TEST_CASE("corrupt field files are rejected") {
  const auto path = temp_file("nsdiag_bad.f3b");
  {
    std::ofstream os(path, std::ios::binary);
    os << "not a field file";
  }
  CHECK_THROWS(read_f3b1(path.string()));
  {
    std::ofstream os(path, std::ios::binary);
    os.write("F3B1", 4);
    const std::uint32_t n = 16;
    os.write(reinterpret_cast<const char*>(&n), 4);
    const double L = 1.0;
    os.write(reinterpret_cast<const char*>(&L), 8);
    const double junk = 0.5; // truncated payload
    os.write(reinterpret_cast<const char*>(&junk), 8);
  }
  CHECK_THROWS(read_f3b1(path.string()));
  std::filesystem::remove(path);
}

TEST_CASE("ST31 record round trip with metadata sidecar") {
  SimSpec spec;
  spec.init.kind = FieldKind::taylor_green;
  spec.init.n = 16;
  spec.init.box_length = 2 * kPi;
  spec.dt = 2e-3;
  spec.steps = 10;
  spec.save_every = 5;
  const SpaceTimeRecord rec = simulate(spec);
  const auto path = temp_file("nsdiag_rec.st31");
  write_st31(path.string(), rec);
  CHECK(std::filesystem::exists(path.string() + ".meta.json"));

  const SpaceTimeRecord back = read_st31(path.string());
  REQUIRE(back.snapshots.size() == rec.snapshots.size());
  CHECK(back.viscosity == rec.viscosity);
  CHECK(back.provenance == rec.provenance);
  for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
    CHECK(back.snapshots[i].t == rec.snapshots[i].t);
    for (int c = 0; c < 3; ++c)
      CHECK(back.snapshots[i].v[c].values == rec.snapshots[i].v[c].values);
    CHECK(back.snapshots[i].q.values == rec.snapshots[i].q.values);
  }

  // record loads fine without the sidecar, defaults applied
  std::filesystem::remove(path.string() + ".meta.json");
  const SpaceTimeRecord plain = read_st31(path.string());
  CHECK(plain.viscosity == 1.0);
  CHECK(plain.snapshots.size() == rec.snapshots.size());
  std::filesystem::remove(path);
}

TEST_CASE("ST31 layout: magic, count, then t + velocity + pressure payloads") {
  const Grid g(8, 1.0);
  SpaceTimeRecord rec;
  for (int i = 0; i < 2; ++i) {
    Snapshot s;
    s.t = 0.5 * i;
    s.v = VectorField(g);
    s.q = ScalarField(g);
    rec.snapshots.push_back(std::move(s));
  }
  const auto path = temp_file("nsdiag_layout.st31");
  write_st31(path.string(), rec);
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::memcmp(magic, "ST31", 4) == 0);
  std::uint32_t count = 0;
  is.read(reinterpret_cast<char*>(&count), 4);
  CHECK(count == 2);
  const std::size_t n3 = 8 * 8 * 8;
  const std::size_t field_block = 4 + 4 + 8; // magic + n + L
  const std::size_t per_snap = 8 + (field_block + 3 * n3 * 8) + (field_block + n3 * 8);
  CHECK(std::filesystem::file_size(path) == 8 + 2 * per_snap);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".meta.json");
}

TEST_SUITE_END();
