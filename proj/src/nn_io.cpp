#include <cstring>

#include <json.hpp>

#include "chronosr/nn.hpp"

namespace chronosr {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr char kMagic[8] = {'C', 'S', 'R', 'M', 'O', 'D', 'E', 'L'};
constexpr std::uint32_t kFormatVersion = 1;

std::uint32_t crc32(const std::string& data) {
  static std::uint32_t table[256];
  static bool ready = false;
  if (!ready) {
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      table[i] = c;
    }
    ready = true;
  }
  std::uint32_t crc = 0xFFFFFFFFu;
  for (const char ch : data)
    crc = table[(crc ^ static_cast<unsigned char>(ch)) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  put_u64(out, bits);
}

struct Reader {
  const std::string& data;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > data.size()) throw ParseError("model file truncated", pos);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + static_cast<std::size_t>(i)]))
           << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + static_cast<std::size_t>(i)]))
           << (8 * i);
    pos += 8;
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v = 0.0;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string out = data.substr(pos, n);
    pos += n;
    return out;
  }
};

}  // namespace

void save_model(const std::string& path, const ModelParameters& model) {
  model.check();
  std::string buf;
  buf.append(kMagic, sizeof kMagic);
  put_u32(buf, kFormatVersion);

  ordered_json header;
  header["kind"] = std::string(link_kind_name(model.config.kind));
  header["attention"] = model.config.attention;
  header["d_w"] = model.config.d_w;
  header["d_p"] = model.config.d_p;
  header["d_h"] = model.config.d_h;
  header["max_offset"] = model.config.max_offset;
  header["vocab"] = model.vocab;
  const std::string header_text = header.dump();
  put_u32(buf, static_cast<std::uint32_t>(header_text.size()));
  buf += header_text;

  std::uint64_t count = 0;
  for_each_matrix(model.params, [&](const char*, const Matrix&) { ++count; });
  put_u64(buf, count);
  for_each_matrix(model.params, [&](const char* name, const Matrix& m) {
    const std::string n(name);
    put_u32(buf, static_cast<std::uint32_t>(n.size()));
    buf += n;
    put_u64(buf, static_cast<std::uint64_t>(m.rows()));
    put_u64(buf, static_cast<std::uint64_t>(m.cols()));
    for (long c = 0; c < m.cols(); ++c)
      for (long r = 0; r < m.rows(); ++r) put_f64(buf, m(r, c));
  });

  put_u32(buf, crc32(buf));
  write_file(path, buf);
}

ModelParameters load_model(const std::string& path) {
  const std::string data = read_file(path);
  if (data.size() < sizeof kMagic + 8)
    throw ParseError("model file too small: " + path, 0);
  std::uint32_t trailer = 0;  // little-endian, like every integer in the file
  for (int i = 0; i < 4; ++i)
    trailer |= static_cast<std::uint32_t>(
                   static_cast<unsigned char>(data[data.size() - 4 + static_cast<std::size_t>(i)]))
               << (8 * i);
  const std::string body = data.substr(0, data.size() - 4);
  if (crc32(body) != trailer)
    throw ParseError("model file checksum mismatch: " + path, data.size() - 4);

  Reader in{body};
  if (in.bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic))
    throw ParseError("not a model file: " + path, 0);
  const std::uint32_t version = in.u32();
  if (version != kFormatVersion)
    throw ParseError("unsupported model file version " + std::to_string(version),
                     in.pos);

  const std::uint32_t header_len = in.u32();
  ordered_json header;
  try {
    header = ordered_json::parse(in.bytes(header_len));
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad model header: ") + e.what(), in.pos);
  }

  ModelParameters model;
  try {
    model.config.kind = link_kind_from_name(header.at("kind").get<std::string>());
    model.config.attention = header.at("attention").get<bool>();
    model.config.d_w = header.at("d_w").get<int>();
    model.config.d_p = header.at("d_p").get<int>();
    model.config.d_h = header.at("d_h").get<int>();
    model.config.max_offset = header.at("max_offset").get<int>();
    model.vocab = header.at("vocab").get<std::vector<std::string>>();
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad model header: ") + e.what(), 0);
  }
  model.rebuild_index();

  const std::uint64_t count = in.u64();
  std::uint64_t seen = 0;
  for_each_matrix(model.params, [&](const char* name, Matrix& m) {
    if (seen++ >= count) throw ParseError("model file lists too few matrices", in.pos);
    const std::uint32_t name_len = in.u32();
    const std::string stored = in.bytes(name_len);
    if (stored != name)
      throw ParseError("model file matrix order mismatch: expected " +
                           std::string(name) + ", found " + stored,
                       in.pos);
    const std::uint64_t rows = in.u64();
    const std::uint64_t cols = in.u64();
    if (rows > 1u << 24 || cols > 1u << 24)
      throw ParseError("model matrix implausibly large", in.pos);
    m.resize(static_cast<long>(rows), static_cast<long>(cols));
    for (long c = 0; c < m.cols(); ++c)
      for (long r = 0; r < m.rows(); ++r) m(r, c) = in.f64();
  });
  if (seen != count)
    throw ParseError("model file matrix count mismatch", in.pos);
  if (in.pos != body.size())
    throw ParseError("model file has trailing bytes", in.pos);

  model.check();
  return model;
}

}  // namespace chronosr
