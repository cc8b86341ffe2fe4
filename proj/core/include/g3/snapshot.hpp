#pragma once

#include <string>
#include <vector>

#include "g3/geometry.hpp"

namespace g3 {

// File layout: one line of JSON header, then the base64 data block.
struct Snapshot {
  std::string algebra;
  int n = 0;
  int N = 0;
  Signature signature = Signature::Euclidean;
  DerivMode deriv_mode = DerivMode::Spectral;
  std::vector<double> data;  // point-major, then a, then μ
};

std::string base64_encode(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> base64_decode(const std::string& text);

std::string serialize_snapshot(const Snapshot& s);
Snapshot parse_snapshot(const std::string& text);
void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

}  // namespace g3
