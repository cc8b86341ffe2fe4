#include "g3/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "g3/error.hpp"

namespace g3 {

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
constexpr const char* kLayout = "point-major, then a=1..n, then \xce\xbc=1..3";
constexpr const char* kEncoding = "little-endian 64-bit floats, base64";
}  // namespace

std::string base64_encode(const std::vector<unsigned char>& in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < in.size(); i += 3) {
    const unsigned v = (in[i] << 16) | (in[i + 1] << 8) | in[i + 2];
    for (int s = 18; s >= 0; s -= 6) out += kAlphabet[(v >> s) & 63];
  }
  if (i + 1 == in.size()) {
    const unsigned v = in[i] << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == in.size()) {
    const unsigned v = (in[i] << 16) | (in[i + 1] << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
  int lookup[256];
  std::fill(std::begin(lookup), std::end(lookup), -1);
  for (int i = 0; i < 64; ++i) lookup[static_cast<unsigned char>(kAlphabet[i])] = i;
  std::vector<unsigned char> out;
  unsigned acc = 0;
  int bits = 0;
  for (char ch : text) {
    if (ch == '=' || std::isspace(static_cast<unsigned char>(ch))) continue;
    const int v = lookup[static_cast<unsigned char>(ch)];
    if (v < 0) throw Error(ErrorCode::ConfigError, "invalid base64 character");
    acc = (acc << 6) | v;
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<unsigned char>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

std::string serialize_snapshot(const Snapshot& s) {
  const std::size_t expect = static_cast<std::size_t>(s.N) * s.N * s.N * s.n * 3;
  if (s.data.size() != expect) throw Error(ErrorCode::DimensionMismatch, "snapshot data size");
  nlohmann::ordered_json h;
  h["algebra"] = s.algebra;
  h["n"] = s.n;
  h["N"] = s.N;
  h["signature"] = to_string(s.signature);
  h["deriv_mode"] = to_string(s.deriv_mode);
  h["layout"] = kLayout;
  h["encoding"] = kEncoding;
  std::vector<unsigned char> bytes(s.data.size() * 8);
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    std::uint64_t u = std::bit_cast<std::uint64_t>(s.data[i]);
    for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<unsigned char>(u >> (8 * b));
  }
  return h.dump() + "\n" + base64_encode(bytes) + "\n";
}

Snapshot parse_snapshot(const std::string& text) {
  const auto nl = text.find('\n');
  if (nl == std::string::npos) throw Error(ErrorCode::ConfigError, "snapshot without data block");
  Snapshot s;
  try {
    const auto h = nlohmann::json::parse(text.substr(0, nl));
    s.algebra = h.at("algebra").get<std::string>();
    s.n = h.at("n").get<int>();
    s.N = h.at("N").get<int>();
    s.signature = parse_signature(h.at("signature").get<std::string>());
    s.deriv_mode = parse_deriv_mode(h.at("deriv_mode").get<std::string>());
    if (h.at("encoding").get<std::string>() != kEncoding) throw Error(ErrorCode::ConfigError, "unsupported encoding");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("snapshot header: ") + e.what());
  }
  const auto bytes = base64_decode(text.substr(nl + 1));
  if (bytes.size() % 8) throw Error(ErrorCode::ConfigError, "truncated snapshot data");
  s.data.resize(bytes.size() / 8);
  for (std::size_t i = 0; i < s.data.size(); ++i) {
    std::uint64_t u = 0;
    for (int b = 0; b < 8; ++b) u |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
    s.data[i] = std::bit_cast<double>(u);
  }
  if (s.data.size() != static_cast<std::size_t>(s.N) * s.N * s.N * s.n * 3)
    throw Error(ErrorCode::ConfigError, "snapshot data size does not match header");
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& s) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  f << serialize_snapshot(s);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_snapshot(ss.str());
}

}  // namespace g3
