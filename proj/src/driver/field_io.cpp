#include "sinhlab/driver.hpp"

#include "sinhlab/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace sinhlab {

static_assert(std::endian::native == std::endian::little, "field files are written in host byte order");

namespace {

constexpr char kMagic[8] = {'S', 'P', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& in, const std::filesystem::path& p) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(Errc::Io, "truncated field file " + p.string());
  return v;
}

std::filesystem::path with_ext(const std::filesystem::path& stem, const char* ext) {
  return stem.parent_path() / (stem.filename().string() + ext);
}

}  // namespace

void write_field(const GridField& f, const std::filesystem::path& stem, const nlohmann::json& meta, bool csv) {
  if (!f.mesh) throw Error(Errc::InvalidArgument, "field has no mesh");
  if (!stem.parent_path().empty()) std::filesystem::create_directories(stem.parent_path());
  const Mesh& mesh = *f.mesh;
  const auto bin = with_ext(stem, ".bin");
  {
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write " + bin.string());
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(mesh.domain().kind()));
    put<double>(out, mesh.h());
    put<std::uint64_t>(out, static_cast<std::uint64_t>(mesh.size()));
    for (const Vec2& p : mesh.nodes()) {
      put<double>(out, p.x());
      put<double>(out, p.y());
    }
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(sizeof(double) * static_cast<size_t>(f.values.size())));
    if (!out) throw Error(Errc::Io, "write failed for " + bin.string());
  }
  nlohmann::json side = {{"format", "SPFIELD1"},
                         {"domain", to_json(mesh.domain())},
                         {"h", mesh.h()},
                         {"nodes", mesh.size()},
                         {"meta", meta}};
  std::ofstream js(with_ext(stem, ".json"));
  if (!js) throw Error(Errc::Io, "cannot write sidecar for " + stem.string());
  js << side.dump(2) << "\n";
  if (csv) {
    std::ofstream c(with_ext(stem, ".csv"));
    if (!c) throw Error(Errc::Io, "cannot write csv for " + stem.string());
    c << "x,y,value\n";
    char buf[96];
    for (int k = 0; k < mesh.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", mesh.node(k).x(), mesh.node(k).y(), f.values[k]);
      c << buf;
    }
  }
}

FieldFile read_field(const std::filesystem::path& bin) {
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + bin.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic))
    throw Error(Errc::Io, bin.string() + " is not a field file");
  FieldFile f;
  const auto kind = get<std::uint32_t>(in, bin);
  if (kind > static_cast<std::uint32_t>(DomainKind::Rectangle)) throw Error(Errc::Io, "bad domain kind in " + bin.string());
  f.kind = static_cast<DomainKind>(kind);
  f.h = get<double>(in, bin);
  const auto n = get<std::uint64_t>(in, bin);
  f.nodes.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double x = get<double>(in, bin);
    f.nodes.emplace_back(x, get<double>(in, bin));
  }
  f.values.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t k = 0; k < n; ++k) f.values[static_cast<Eigen::Index>(k)] = get<double>(in, bin);
  return f;
}

}  // namespace sinhlab
