#include "t2ploc/point_cloud.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "t2ploc/error.hpp"

namespace t2p {

static_assert(std::endian::native == std::endian::little,
              "point cloud I/O assumes a little-endian host");

namespace {

void check_point(const InstancePoint& pt, const Taxonomy& taxonomy, const std::string& where) {
  if (!pt.p.finite()) throw Error(ErrorCode::Parse, where + ": non-finite coordinate");
  if (!taxonomy.find(pt.semantic)) {
    throw Error(ErrorCode::Taxonomy,
                where + ": semantic id " + std::to_string(pt.semantic) + " is not in the taxonomy");
  }
}

template <typename T>
T read_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

InstancePointCloud parse_binary(std::istream& in, const Taxonomy& taxonomy,
                                const std::string& name) {
  std::array<unsigned char, kCloudHeaderBytes> header{};
  if (!in.read(reinterpret_cast<char*>(header.data()), header.size())) {
    throw Error(ErrorCode::Parse, name + ": truncated header");
  }
  const auto count = read_le<std::uint64_t>(header.data() + 4);

  InstancePointCloud cloud;
  cloud.points.reserve(count);
  std::array<unsigned char, kCloudRecordBytes> rec{};
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::string where = name + " row " + std::to_string(i + 1);
    if (!in.read(reinterpret_cast<char*>(rec.data()), rec.size())) {
      throw Error(ErrorCode::Parse, where + ": truncated record");
    }
    InstancePoint pt;
    pt.p = {read_le<float>(rec.data()), read_le<float>(rec.data() + 4),
            read_le<float>(rec.data() + 8)};
    pt.c = {rec[12], rec[13], rec[14]};
    pt.semantic = read_le<std::uint16_t>(rec.data() + 15);
    pt.instance = read_le<std::uint32_t>(rec.data() + 17);
    check_point(pt, taxonomy, where);
    cloud.points.push_back(pt);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::Parse, name + ": trailing bytes after " + std::to_string(count) + " records");
  }
  return cloud;
}

InstancePointCloud parse_text(std::istream& in, const Taxonomy& taxonomy, const std::string& name) {
  InstancePointCloud cloud;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    const std::string where = name + " row " + std::to_string(lineno);
    std::istringstream row(line);
    std::vector<std::string> cols;
    for (std::string tok; row >> tok;) cols.push_back(tok);
    if (cols.size() != 8) {
      throw Error(ErrorCode::Parse, where + ": expected 8 columns, found " + std::to_string(cols.size()));
    }
    InstancePoint pt;
    try {
      std::size_t used = 0;
      auto num = [&](const std::string& s) {
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
      };
      auto integer = [&](const std::string& s, long long lo, long long hi) {
        const long long v = std::stoll(s, &used);
        if (used != s.size() || v < lo || v > hi) throw std::out_of_range(s);
        return v;
      };
      pt.p = {num(cols[0]), num(cols[1]), num(cols[2])};
      pt.c = {static_cast<std::uint8_t>(integer(cols[3], 0, 255)),
              static_cast<std::uint8_t>(integer(cols[4], 0, 255)),
              static_cast<std::uint8_t>(integer(cols[5], 0, 255))};
      pt.semantic = static_cast<std::uint16_t>(integer(cols[6], 0, 65535));
      pt.instance = static_cast<std::uint32_t>(integer(cols[7], 0, 4294967295LL));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, where + ": malformed value");
    }
    check_point(pt, taxonomy, where);
    cloud.points.push_back(pt);
  }
  return cloud;
}

}  // namespace

InstancePointCloud parse_point_cloud_text(std::istream& in, const Taxonomy& taxonomy) {
  return parse_text(in, taxonomy, "<stream>");
}

InstancePointCloud load_point_cloud(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open point cloud " + path.string(), "cloud");
  char magic[4] = {};
  in.read(magic, 4);
  const bool binary = in.gcount() == 4 && std::memcmp(magic, kCloudMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  return binary ? parse_binary(in, taxonomy, path.filename().string())
                : parse_text(in, taxonomy, path.filename().string());
}

void write_point_cloud(const std::filesystem::path& path, const InstancePointCloud& cloud) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write point cloud " + path.string());
  out.write(kCloudMagic, 4);
  const std::uint64_t count = cloud.points.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  std::array<unsigned char, kCloudRecordBytes> rec{};
  for (const auto& pt : cloud.points) {
    const float xyz[3] = {static_cast<float>(pt.p.x), static_cast<float>(pt.p.y),
                          static_cast<float>(pt.p.z)};
    std::memcpy(rec.data(), xyz, sizeof xyz);
    rec[12] = pt.c.r;
    rec[13] = pt.c.g;
    rec[14] = pt.c.b;
    std::memcpy(rec.data() + 15, &pt.semantic, 2);
    std::memcpy(rec.data() + 17, &pt.instance, 4);
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace t2p
