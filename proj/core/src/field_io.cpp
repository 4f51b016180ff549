#include "nsdiag/field_io.hpp"

#include "nsdiag/scaled_quantities.hpp"
#include "nsdiag/version.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "field formats are little-endian; big-endian hosts are unsupported");

namespace nsdiag {

namespace {

constexpr char kFieldMagic[4] = {'F', '3', 'B', '1'};
constexpr char kRecordMagic[4] = {'S', 'T', '3', '1'};

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

void write_field_payload(std::ostream& os, const Grid& g,
                         const std::vector<const std::vector<double>*>& comps) {
  os.write(kFieldMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(g.n));
  put_f64(os, g.box_length);
  for (const auto* c : comps)
    os.write(reinterpret_cast<const char*>(c->data()),
             static_cast<std::streamsize>(c->size() * sizeof(double)));
}

struct FieldHeader {
  Grid grid;
};

FieldHeader read_field_header(std::istream& is, const std::string& path) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kFieldMagic, 4) != 0)
    throw std::runtime_error(path + ": not an F3B1 field payload");
  const std::uint32_t n = get_u32(is);
  const double L = get_f64(is);
  if (!is) throw std::runtime_error(path + ": truncated F3B1 header");
  return {Grid(static_cast<int>(n), L)};
}

void read_samples(std::istream& is, std::vector<double>& out, const std::string& path) {
  is.read(reinterpret_cast<char*>(out.data()),
          static_cast<std::streamsize>(out.size() * sizeof(double)));
  if (!is) throw std::runtime_error(path + ": truncated F3B1 samples");
}

} // namespace

void write_f3b1(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_field_payload(os, f.grid, {&f.values});
}

void write_f3b1(const std::string& path, const VectorField& v) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_field_payload(os, v.grid, {&v[0].values, &v[1].values, &v[2].values});
}

AnyField read_f3b1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  const auto header = read_field_header(is, path);
  const std::size_t n3 = header.grid.size();

  const auto cur = is.tellg();
  is.seekg(0, std::ios::end);
  const std::size_t remaining = static_cast<std::size_t>(is.tellg() - cur);
  is.seekg(cur);

  if (remaining == n3 * sizeof(double)) {
    ScalarField f(header.grid);
    read_samples(is, f.values, path);
    return f;
  }
  if (remaining == 3 * n3 * sizeof(double)) {
    VectorField v(header.grid);
    for (int c = 0; c < 3; ++c) read_samples(is, v[c].values, path);
    return v;
  }
  throw std::runtime_error(path + ": payload size matches neither 1 nor 3 components");
}

ScalarField read_f3b1_scalar(const std::string& path) {
  auto any = read_f3b1(path);
  if (auto* f = std::get_if<ScalarField>(&any)) return std::move(*f);
  throw std::runtime_error(path + ": expected a scalar field");
}

VectorField read_f3b1_vector(const std::string& path) {
  auto any = read_f3b1(path);
  if (auto* v = std::get_if<VectorField>(&any)) return std::move(*v);
  throw std::runtime_error(path + ": expected a vector field");
}

void write_st31(const std::string& path, const SpaceTimeRecord& rec) {
  if (rec.snapshots.empty()) throw std::invalid_argument("write_st31: empty record");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os.write(kRecordMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(rec.snapshots.size()));
  for (const auto& s : rec.snapshots) {
    put_f64(os, s.t);
    write_field_payload(os, s.v.grid, {&s.v[0].values, &s.v[1].values, &s.v[2].values});
    write_field_payload(os, s.q.grid, {&s.q.values});
  }

  nlohmann::ordered_json meta;
  meta["viscosity"] = rec.viscosity;
  meta["provenance"] = rec.provenance;
  meta["toolkit_version"] = kVersion;
  std::ofstream ms(path + ".meta.json");
  ms << meta.dump(2) << '\n';
}

SpaceTimeRecord read_st31(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kRecordMagic, 4) != 0)
    throw std::runtime_error(path + ": not an ST31 record");
  const std::uint32_t count = get_u32(is);

  SpaceTimeRecord rec;
  rec.snapshots.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Snapshot s;
    s.t = get_f64(is);
    const auto vh = read_field_header(is, path);
    s.v = VectorField(vh.grid);
    for (int c = 0; c < 3; ++c) read_samples(is, s.v[c].values, path);
    const auto qh = read_field_header(is, path);
    if (!(qh.grid == vh.grid)) throw std::runtime_error(path + ": snapshot grid mismatch");
    s.q = ScalarField(qh.grid);
    read_samples(is, s.q.values, path);
    rec.snapshots.push_back(std::move(s));
  }

  const std::string meta_path = path + ".meta.json";
  if (std::filesystem::exists(meta_path)) {
    std::ifstream ms(meta_path);
    nlohmann::json meta = nlohmann::json::parse(ms, nullptr, /*allow_exceptions=*/false);
    if (!meta.is_discarded()) {
      rec.viscosity = meta.value("viscosity", 1.0);
      rec.provenance = meta.value("provenance", std::string{});
    }
  }
  rec.validate();
  return rec;
}

} // namespace nsdiag
