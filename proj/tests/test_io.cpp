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

#include <gtest/gtest.h>

#include <filesystem>
#include <limits>

#include "sparsedict/io.hpp"
#include "sparsedict/rng.hpp"

namespace sparsedict::io {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "sparsedict_test_io";
  fs::create_directories(dir);
  return dir / name;
}

TEST(Csv, ParsesRowsAndComments) {
  const Matrix M = parse_csv("1,2,3\n4.5, -6 ,7e-3\n");
  ASSERT_EQ(M.rows(), 2);
  ASSERT_EQ(M.cols(), 3);
  EXPECT_EQ(M(1, 0), 4.5);
  EXPECT_EQ(M(1, 1), -6.0);
  EXPECT_EQ(M(1, 2), 7e-3);
}

TEST(Csv, RaggedRowNamesTheLine) {
  try {
    parse_csv("1,2\n3,4\n5\n", "Y.csv");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("Y.csv:3"), std::string::npos) << e.what();
  }
}

TEST(Csv, RejectsGarbageAndNonFinite) {
  EXPECT_THROW(parse_csv("1,abc\n"), ParseError);
  EXPECT_THROW(parse_csv("1,nan\n"), ParseError);
  EXPECT_THROW(parse_csv("1,inf\n"), ParseError);
  EXPECT_THROW(parse_csv(""), ParseError);
}

TEST(Csv, RoundTripIsBitExact) {
  auto rng = SeedTree(51).engine("csv");
  Matrix M = gaussian_matrix(7, 5, rng);
  M(0, 0) = 1e-300;
  M(1, 1) = -0.0;
  M(2, 2) = std::numeric_limits<double>::max();
  const fs::path path = scratch("m.csv");
  write_csv(path, M);
  const Matrix back = read_csv(path);
  ASSERT_EQ(back.rows(), M.rows());
  for (Eigen::Index i = 0; i < M.size(); ++i) EXPECT_EQ(back(i), M(i));
}

TEST(Pgm, BinaryAndAsciiRoundTrip) {
  Matrix px(3, 4);
  px << 0, 1, 2, 3, 100, 128, 254, 255, 7, 8, 9, 10;
  const denoise::GrayImage img(px);
  for (bool binary : {true, false}) {
    const auto back = parse_pgm(format_pgm(img, binary));
    EXPECT_EQ(back.pixels(), px) << (binary ? "P5" : "P2");
  }
  const fs::path path = scratch("img.pgm");
  write_pgm(path, img);
  EXPECT_EQ(read_pgm(path).pixels(), px);
}

TEST(Pgm, ExportRoundsAndClips) {
  Matrix px(1, 4);
  px << -20.0, 3.6, 300.0, 127.4;
  const auto back = parse_pgm(format_pgm(denoise::GrayImage(px)));
  Matrix want(1, 4);
  want << 0, 4, 255, 127;
  EXPECT_EQ(back.pixels(), want);
}

TEST(Pgm, HeaderComments) {
  const auto img = parse_pgm("P2\n# made by hand\n2 1\n255\n10 20\n");
  EXPECT_EQ(img.pixels()(0, 1), 20.0);
}

TEST(Pgm, RejectsBadInput) {
  EXPECT_THROW(parse_pgm("P6\n1 1\n255\n\x01"), ParseError);
  EXPECT_THROW(parse_pgm("P2\n2 2\n255\n1 2 3\n"), ParseError);
  EXPECT_THROW(parse_pgm("P2\n1 1\n65535\n1\n"), ParseError);
  EXPECT_THROW(read_pgm(scratch("missing.pgm")), Error);
}

TEST(Graph, ParsesEdgeList) {
  const auto g = parse_graph("# triangle\n3\n1 2\n\n2 3\n3 1\n");
  EXPECT_EQ(g.vertex_count(), 3);
  EXPECT_EQ(g.edge_count(), 3);
  EXPECT_EQ(g.edges()[2], std::make_pair(1, 3));
}

TEST(Graph, ErrorsNameTheLine) {
  try {
    parse_graph("3\n1 2\n2 2\n", "g.txt");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("g.txt:3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_graph("3\n1 x\n"), ParseError);
  EXPECT_THROW(parse_graph("3\n1 5\n"), ParseError);
  EXPECT_THROW(parse_graph(""), ParseError);
}

}  // namespace
}  // namespace sparsedict::io
