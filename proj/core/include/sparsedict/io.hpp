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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sparsedict/denoise.hpp"
#include "sparsedict/hardness.hpp"
#include "sparsedict/types.hpp"

// File formats: headerless numeric CSV (one matrix row per line), 8-bit PGM
// (P5 binary or P2 ASCII), and edge-list graphs ("N" on the first line, then
// one 1-indexed "u v" pair per line).

namespace sparsedict::io {

/// Malformed input. The message names the source and line.
class ParseError : public Error {
 public:
  using Error::Error;
};

Matrix parse_csv(std::string_view text, const std::string& source = "<csv>");
Matrix read_csv(const std::filesystem::path& path);
/// Shortest round-trip decimal form of every entry.
std::string format_csv(const Matrix& M);
void write_csv(const std::filesystem::path& path, const Matrix& M);

denoise::GrayImage parse_pgm(std::string_view bytes, const std::string& source = "<pgm>");
denoise::GrayImage read_pgm(const std::filesystem::path& path);
/// Pixels are rounded and clipped to [0, 255].
std::string format_pgm(const denoise::GrayImage& img, bool binary = true);
void write_pgm(const std::filesystem::path& path, const denoise::GrayImage& img, bool binary = true);

/// Blank lines and lines starting with '#' are skipped.
hardness::GraphInstance parse_graph(std::string_view text, const std::string& source = "<graph>");
hardness::GraphInstance read_graph(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace sparsedict::io
