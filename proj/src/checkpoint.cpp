#include "rknet/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is little-endian; add byte swapping for this platform");

namespace rknet {

namespace {

constexpr char kMagic[4] = {'R', 'K', 'N', 'C'};
constexpr std::uint32_t kVersion = 1;

using nlohmann::json;

json tableau_to_json(const ButcherTableau& t) {
  json a = json::array();
  for (int i = 0; i < t.s; ++i) {
    json row = json::array();
    for (int j = 0; j < t.s; ++j) row.push_back(t.a(i, j));
    a.push_back(row);
  }
  return json{{"s", t.s}, {"A", a}, {"beta", t.beta}, {"c", t.c}};
}

ButcherTableau tableau_from_json(const json& j) {
  const int s = j.at("s").get<int>();
  Matrix a(s, s);
  const json& rows = j.at("A");
  if (static_cast<int>(rows.size()) != s) throw DataError("tableau: A has wrong row count");
  for (int i = 0; i < s; ++i) {
    if (static_cast<int>(rows[i].size()) != s) throw DataError("tableau: A has wrong column count");
    for (int jj = 0; jj < s; ++jj) a(i, jj) = rows[i][jj].get<double>();
  }
  return ButcherTableau::create(std::move(a), j.at("beta").get<Vector>(), j.at("c").get<Vector>());
}

void append(std::vector<double>& payload, const Matrix& m) {
  payload.insert(payload.end(), m.data.begin(), m.data.end());
}
void append(std::vector<double>& payload, const Vector& v) {
  payload.insert(payload.end(), v.begin(), v.end());
}

}  // namespace

void save_model(const ModelParams& m, const std::string& path) {
  json manifest{{"version", kVersion},
                {"arch", m.arch == Arch::standard ? "standard" : "rk"},
                {"width", m.width},
                {"depth", m.depth()},
                {"classes", m.classes()},
                {"step", m.step},
                {"activation", activation_name(m.activation)}};
  if (m.arch == Arch::rk) manifest["tableau"] = tableau_to_json(m.tableau);
  std::ofstream mf(path + ".manifest.json");
  if (!mf) throw DataError("cannot write " + path + ".manifest.json");
  mf << manifest.dump(2) << "\n";

  std::vector<double> payload;
  for (const LayerParams& lp : m.layers) {
    append(payload, lp.k);
    append(payload, lp.b);
  }
  append(payload, m.head.w);
  append(payload, m.head.mu);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out.write(kMagic, 4);
  const std::uint32_t ver = kVersion;
  out.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
  const std::uint64_t count = payload.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(double)));
  if (!out) throw DataError("write failed: " + path);
}

ModelParams load_model(const std::string& path) {
  std::ifstream mf(path + ".manifest.json");
  if (!mf) throw DataError("cannot open " + path + ".manifest.json");
  json manifest = json::parse(mf, nullptr, true);
  if (manifest.at("version").get<std::uint32_t>() != kVersion)
    throw DataError(path + ": unsupported checkpoint version");

  const int width = manifest.at("width").get<int>();
  const int depth = manifest.at("depth").get<int>();
  const int classes = manifest.at("classes").get<int>();

  ModelParams m;
  m.arch = manifest.at("arch").get<std::string>() == "standard" ? Arch::standard : Arch::rk;
  if (m.arch == Arch::rk) m.tableau = tableau_from_json(manifest.at("tableau"));
  m.width = width;
  m.step = manifest.at("step").get<double>();
  m.activation = activation_from_name(manifest.at("activation").get<std::string>());

  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  char magic[4];
  std::uint32_t ver = 0;
  std::uint64_t count = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&ver), sizeof(ver));
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw DataError(path + ": not a checkpoint file");
  if (ver != kVersion) throw DataError(path + ": unsupported checkpoint version");
  const std::uint64_t expected = static_cast<std::uint64_t>(depth) * (width * width + width) +
                                 static_cast<std::uint64_t>(classes) * width + classes;
  if (count != expected) throw DataError(path + ": payload size does not match the manifest");
  std::vector<double> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw DataError(path + ": truncated payload");

  size_t off = 0;
  m.layers.resize(depth);
  for (LayerParams& lp : m.layers) {
    lp.k = Matrix(width, width);
    std::copy_n(payload.begin() + off, lp.k.data.size(), lp.k.data.begin());
    off += lp.k.data.size();
    lp.b.assign(payload.begin() + off, payload.begin() + off + width);
    off += width;
  }
  m.head.w = Matrix(classes, width);
  std::copy_n(payload.begin() + off, m.head.w.data.size(), m.head.w.data.begin());
  off += m.head.w.data.size();
  m.head.mu.assign(payload.begin() + off, payload.begin() + off + classes);
  return m;
}

}  // namespace rknet
