// Copyright 2026 The sparsedict Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparsedict/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace sparsedict::io {

namespace {

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ": " << what;
  throw ParseError(os.str());
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    const auto nl = text.find('\n');
    fn(line, text.substr(0, nl));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path.string());
}

Matrix parse_csv(std::string_view text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  for_each_line(text, [&](std::size_t line, std::string_view raw) {
    const auto body = trim(raw);
    if (body.empty()) return;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto field = body.substr(start, comma == std::string_view::npos ? body.npos : comma - start);
      double v = 0.0;
      if (!parse_number(field, v) || !std::isfinite(v)) {
        fail(source, line, "field " + std::to_string(row.size() + 1) + " is not a finite number: '" +
                               std::string(trim(field)) + "'");
      }
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(source, line, "row " + std::to_string(rows.size() + 1) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  });
  if (rows.empty()) throw ParseError(source + ": no data rows");
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return M;
}

Matrix read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

std::string format_csv(const Matrix& M) {
  std::string out;
  char buf[64];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out.push_back(',');
      const auto res = std::to_chars(buf, buf + sizeof buf, M(i, j));
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const Matrix& M) { write_file(path, format_csv(M)); }

denoise::GrayImage parse_pgm(std::string_view bytes, const std::string& source) {
  std::size_t pos = 0;
  std::size_t line = 1;
  // Header tokens are separated by whitespace; '#' starts a comment.
  auto next_token = [&]() -> std::string_view {
    while (pos < bytes.size()) {
      const char c = bytes[pos];
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        if (c == '\n') ++line;
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t b = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
           bytes[pos] != '#') {
      ++pos;
    }
    return bytes.substr(b, pos - b);
  };
  auto next_int = [&](const char* what) {
    const auto tok = next_token();
    int v = 0;
    if (!parse_number(tok, v) || v < 0) fail(source, line, std::string("bad ") + what + " '" + std::string(tok) + "'");
    return v;
  };

  const auto magic = next_token();
  if (magic != "P5" && magic != "P2") fail(source, line, "not a P5/P2 PGM file");
  const int width = next_int("width");
  const int height = next_int("height");
  const int maxval = next_int("maxval");
  if (width < 1 || height < 1) fail(source, line, "empty image");
  if (maxval < 1 || maxval > 255) fail(source, line, "only 8-bit PGM (maxval <= 255) is supported");

  Matrix px(height, width);
  if (magic == "P5") {
    if (pos >= bytes.size()) fail(source, line, "missing pixel data");
    ++pos;  // single whitespace byte after maxval
    const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (bytes.size() - pos < need) {
      fail(source, line, "truncated pixel data: " + std::to_string(bytes.size() - pos) + " of " +
                             std::to_string(need) + " bytes");
    }
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        px(i, j) = static_cast<unsigned char>(bytes[pos++]);
      }
    }
  } else {
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        const int v = next_int("pixel");
        if (v > maxval) fail(source, line, "pixel value exceeds maxval");
        px(i, j) = v;
      }
    }
  }
  return denoise::GrayImage(std::move(px));
}

denoise::GrayImage read_pgm(const std::filesystem::path& path) {
  return parse_pgm(read_file(path), path.string());
}

std::string format_pgm(const denoise::GrayImage& img, bool binary) {
  std::ostringstream os;
  os << (binary ? "P5" : "P2") << "\n" << img.width() << " " << img.height() << "\n255\n";
  std::string out = os.str();
  auto level = [](double v) { return static_cast<int>(std::clamp(std::round(v), 0.0, 255.0)); };
  for (Eigen::Index i = 0; i < img.height(); ++i) {
    for (Eigen::Index j = 0; j < img.width(); ++j) {
      const int v = level(img.pixels()(i, j));
      if (binary) {
        out.push_back(static_cast<char>(static_cast<unsigned char>(v)));
      } else {
        out += std::to_string(v);
        out.push_back(j + 1 == img.width() ? '\n' : ' ');
      }
    }
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const denoise::GrayImage& img, bool binary) {
  write_file(path, format_pgm(img, binary));
}

hardness::GraphInstance parse_graph(std::string_view text, const std::string& source) {
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> seen;
  for_each_line(text, [&](std::size_t line, std::string_view raw) {
    const auto body = trim(raw);
    if (body.empty() || body.front() == '#') return;
    if (n < 0) {
      if (!parse_number(body, n) || n < 1) fail(source, line, "first line must be the vertex count");
      return;
    }
    const auto sep = body.find_first_of(" \t,");
    int u = 0;
    int v = 0;
    if (sep == std::string_view::npos || !parse_number(body.substr(0, sep), u) ||
        !parse_number(trim(body.substr(sep + 1)), v)) {
      fail(source, line, "expected an edge 'u v', got '" + std::string(body) + "'");
    }
    if (u < 1 || v < 1 || u > n || v > n) {
      fail(source, line, "endpoint outside [1, " + std::to_string(n) + "]");
    }
    if (u == v) fail(source, line, "self-loop at vertex " + std::to_string(u));
    if (!seen.insert(std::minmax(u, v)).second) fail(source, line, "duplicate edge");
    edges.emplace_back(u, v);
  });
  if (n < 0) throw ParseError(source + ": missing vertex count");
  try {
    return hardness::GraphInstance(n, std::move(edges));
  } catch (const InvalidArgument& e) {
    throw ParseError(source + ": " + e.what());
  }
}

hardness::GraphInstance read_graph(const std::filesystem::path& path) {
  return parse_graph(read_file(path), path.string());
}

}  // namespace sparsedict::io
