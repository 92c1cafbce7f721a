#pragma once

// Binary portable bitmap (P4).  Foreground (1) is stored as a set bit, rows
// are packed MSB first and padded to whole bytes.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "odms/errors.hpp"
#include "odms/grid.hpp"

namespace odms {

inline void write_pbm(std::ostream& os, const Mask& mask) {
  os << "P4\n" << mask.width() << ' ' << mask.height() << '\n';
  const std::size_t stride = (static_cast<std::size_t>(mask.width()) + 7) / 8;
  std::vector<char> packed(stride);
  for (int r = 0; r < mask.height(); ++r) {
    std::fill(packed.begin(), packed.end(), 0);
    auto row = mask.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c]) packed[c / 8] = static_cast<char>(packed[c / 8] | (0x80 >> (c % 8)));
    os.write(packed.data(), static_cast<std::streamsize>(stride));
  }
}

namespace detail {

// Next header token, skipping whitespace and '#' comments.
inline std::string pbm_token(std::istream& is) {
  std::string tok;
  int ch;
  while ((ch = is.get()) != EOF) {
    if (ch == '#') {
      while ((ch = is.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

inline int pbm_dimension(std::istream& is) {
  const std::string tok = pbm_token(is);
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("pbm: bad dimension '" + tok + "'");
  return std::stoi(tok);
}

}  // namespace detail

inline Mask read_pbm(std::istream& is) {
  if (detail::pbm_token(is) != "P4") throw ValidationError("pbm: not a binary P4 bitmap");
  const int width = detail::pbm_dimension(is);
  const int height = detail::pbm_dimension(is);
  // pbm_token consumed the single whitespace byte after the height

  Mask mask(height, width);
  const std::size_t stride = (static_cast<std::size_t>(width) + 7) / 8;
  std::vector<char> packed(stride);
  for (int r = 0; r < height; ++r) {
    if (!is.read(packed.data(), static_cast<std::streamsize>(stride)))
      throw ValidationError("pbm: truncated raster");
    auto row = mask.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      row[c] = (static_cast<unsigned char>(packed[c / 8]) >> (7 - c % 8)) & 1;
  }
  return mask;
}

inline void save_pbm(const std::filesystem::path& path, const Mask& mask) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_pbm(os, mask);
  if (!os) throw IoError("write failed: " + path.string());
}

inline Mask load_pbm(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  try {
    return read_pbm(is);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace odms
