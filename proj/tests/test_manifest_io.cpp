#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "invedit/error.hpp"
#include "invedit/fmt.hpp"
#include "invedit/image_io.hpp"
#include "invedit/manifest.hpp"
#include "invedit/prng.hpp"
#include "invedit/wire.hpp"

using namespace invedit;

namespace {

ImageBuf random_image(int h, int w, int c, std::uint64_t seed) {
  Pcg64 rng(seed);
  Array3 a(h, w, c);
  for (double& x : a.v) x = rng.next_double();
  return ImageBuf(std::move(a));
}

std::string temp_path(const char* name) {
  return std::string("/tmp/invedit_io_") + name;
}

}  // namespace

TEST_CASE("ppm files quantize to 8 bits and then round trip exactly") {
  for (int c : {1, 3}) {
    ImageBuf img = random_image(6, 5, c, 1);
    std::string path = temp_path(c == 1 ? "a.pgm" : "a.ppm");
    write_ppm(path, img);
    ImageBuf back = read_ppm(path);
    REQUIRE(back.height() == 6);
    REQUIRE(back.width() == 5);
    REQUIRE(back.channels() == c);
    for (std::size_t i = 0; i < img.data().size(); ++i) {
      double expect = std::round(img.data().v[i] * 255.0) / 255.0;
      CHECK(back.data().v[i] == doctest::Approx(expect).epsilon(1e-12));
    }

    // Already-quantized data survives unchanged.
    write_ppm(path, back);
    ImageBuf again = read_ppm(path);
    CHECK(again.data().v == back.data().v);
    std::remove(path.c_str());
  }
}

TEST_CASE("ppm headers carry the right magic and tolerate comments") {
  ImageBuf gray = random_image(3, 3, 1, 2);
  ImageBuf rgb = random_image(3, 3, 3, 2);
  std::string pg = temp_path("h.pgm");
  std::string pp = temp_path("h.ppm");
  write_ppm(pg, gray);
  write_ppm(pp, rgb);
  CHECK(wire::read_file(pg).substr(0, 2) == "P5");
  CHECK(wire::read_file(pp).substr(0, 2) == "P6");

  // Hand-built file with interleaved comment lines.
  std::string commented = "P5 # inline comment\n# a full comment line\n2 1\n255\n";
  commented.push_back(static_cast<char>(0));
  commented.push_back(static_cast<char>(255));
  std::string pc = temp_path("c.pgm");
  wire::write_file(pc, commented);
  ImageBuf img = read_ppm(pc);
  CHECK(img.at(0, 0, 0) == 0.0);
  CHECK(img.at(0, 1, 0) == 1.0);

  std::remove(pg.c_str());
  std::remove(pp.c_str());
  std::remove(pc.c_str());
}

TEST_CASE("ppm reader rejects damage") {
  std::string path = temp_path("bad.pgm");

  wire::write_file(path, "P7\n2 2\n255\n0000");
  CHECK_THROWS_AS(read_ppm(path), Error);

  wire::write_file(path, "P5\n2 2\n255\n00");  // short pixel payload
  CHECK_THROWS_AS(read_ppm(path), Error);

  wire::write_file(path, "P5\n2 2\n65535\n0000");
  CHECK_THROWS_AS(read_ppm(path), Error);

  std::remove(path.c_str());
  CHECK_THROWS_AS(read_ppm(path), Error);  // missing file
}

TEST_CASE("f32 image files are lossless at float precision") {
  ImageBuf img = random_image(4, 7, 3, 3);
  std::string path = temp_path("a.f32");
  write_f32_image(path, img);
  ImageBuf back = read_f32_image(path);
  REQUIRE(back.same_shape(img));
  for (std::size_t i = 0; i < img.data().size(); ++i)
    CHECK(back.data().v[i] == static_cast<double>(static_cast<float>(img.data().v[i])));

  // Second generation is byte-identical.
  std::string path2 = temp_path("b.f32");
  write_f32_image(path2, back);
  CHECK(wire::read_file(path) == wire::read_file(path2));
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("f32 reader rejects damage") {
  ImageBuf img = random_image(3, 3, 1, 4);
  std::string path = temp_path("d.f32");
  write_f32_image(path, img);
  std::string bytes = wire::read_file(path);

  wire::write_file(path, bytes.substr(0, bytes.size() - 2));
  CHECK_THROWS_AS(read_f32_image(path), Error);

  std::string bad = bytes;
  bad[0] = 'Q';
  wire::write_file(path, bad);
  CHECK_THROWS_AS(read_f32_image(path), Error);

  wire::write_file(path, bytes + "xx");
  CHECK_THROWS_AS(read_f32_image(path), Error);
  std::remove(path.c_str());
}

TEST_CASE("image io dispatches on the extension") {
  ImageBuf gray = random_image(4, 4, 1, 5);
  std::string pgm = temp_path("d.pgm");
  std::string f32 = temp_path("d2.f32");
  write_image(pgm, gray);
  write_image(f32, gray);
  CHECK(read_image(pgm).channels() == 1);
  CHECK(read_image(f32).data().v == read_f32_image(f32).data().v);
  CHECK_THROWS_AS(write_image(temp_path("d.tiff"), gray), Error);
  CHECK_THROWS_AS(read_image(temp_path("d.tiff")), Error);
  std::remove(pgm.c_str());
  std::remove(f32.c_str());
}

TEST_CASE("alignment manifests parse entries with boxes, landmarks and labels") {
  std::string text =
      "invedit-align 1\n"
      "# two faces in the first image\n"
      "entry imgs/a.ppm\n"
      "box 10 20 110 140\n"
      "box 5 5 40 40\n"
      "landmarks 30 60 50 60 70 62 90 61\n"
      "eyes 0 2 2 4\n"
      "label 1\n"
      "\n"
      "entry imgs/b.ppm\n"
      "box 0 0 64 64\n";
  AlignManifest m = parse_align_manifest(text, "inline");
  REQUIRE(m.entries.size() == 2);
  const AlignEntry& e0 = m.entries[0];
  CHECK(e0.image == "imgs/a.ppm");
  REQUIRE(e0.boxes.size() == 2);
  CHECK(e0.boxes[0].x0 == 10.0);
  CHECK(e0.boxes[0].y1 == 140.0);
  REQUIRE(e0.landmarks.has_value());
  REQUIRE(e0.landmarks->points.size() == 4);
  CHECK(e0.landmarks->points[2].x() == 70.0);
  CHECK(e0.landmarks->eye_left_begin == 0);
  CHECK(e0.landmarks->eye_left_end == 2);
  CHECK(e0.landmarks->eye_right_begin == 2);
  CHECK(e0.landmarks->eye_right_end == 4);
  REQUIRE(e0.label.has_value());
  CHECK(*e0.label == 1);

  const AlignEntry& e1 = m.entries[1];
  CHECK(e1.image == "imgs/b.ppm");
  CHECK(e1.boxes.size() == 1);
  CHECK(!e1.landmarks.has_value());
  CHECK(!e1.label.has_value());
}

TEST_CASE("alignment manifest error paths") {
  CHECK_THROWS_AS(parse_align_manifest("", "t"), Error);
  CHECK_THROWS_AS(parse_align_manifest("invedit-align 2\n", "t"), Error);
  CHECK_THROWS_AS(parse_align_manifest("wrong-header 1\n", "t"), Error);

  // Directives before any entry.
  CHECK_THROWS_AS(parse_align_manifest("invedit-align 1\nbox 0 0 1 1\n", "t"), Error);

  // Duplicate image paths.
  CHECK_THROWS_AS(parse_align_manifest(
                      "invedit-align 1\nentry a.ppm\nentry a.ppm\n", "t"),
                  Error);

  // Odd landmark coordinate count.
  CHECK_THROWS_AS(parse_align_manifest(
                      "invedit-align 1\nentry a.ppm\nlandmarks 1 2 3\n", "t"),
                  Error);

  // Labels outside {0,1}.
  CHECK_THROWS_AS(parse_align_manifest(
                      "invedit-align 1\nentry a.ppm\nlabel 7\n", "t"),
                  Error);

  // Non-numeric coordinates surface the line number.
  try {
    parse_align_manifest("invedit-align 1\nentry a.ppm\nbox 0 zero 1 1\n", "t");
    FAIL("expected BadFormat");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadFormat);
    CHECK(std::string(e.what()).find("t:3") != std::string::npos);
  }
}

TEST_CASE("label manifests") {
  std::string text =
      "invedit-labels 1\n"
      "# path label\n"
      "lat/a.lat1 0\n"
      "lat/b.lat1 1\n";
  auto rows = parse_labels_manifest(text, "inline");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].path == "lat/a.lat1");
  CHECK(rows[0].label == 0);
  CHECK(rows[1].label == 1);

  CHECK_THROWS_AS(parse_labels_manifest("invedit-labels 1\na.lat1 3\n", "t"), Error);
  CHECK_THROWS_AS(parse_labels_manifest("invedit-labels 1\na.lat1\n", "t"), Error);
  CHECK_THROWS_AS(parse_labels_manifest("invedit-pairs 1\na b\n", "t"), Error);
}

TEST_CASE("pair manifests") {
  std::string text =
      "invedit-pairs 1\n"
      "out/x.ppm ref/x.ppm\n"
      "out/y.ppm ref/y.ppm\n";
  auto rows = parse_pairs_manifest(text, "inline");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].a == "out/x.ppm");
  CHECK(rows[1].b == "ref/y.ppm");

  CHECK_THROWS_AS(parse_pairs_manifest("invedit-pairs 1\nonly-one\n", "t"), Error);
  CHECK_THROWS_AS(parse_pairs_manifest("invedit-pairs 1\na b c\n", "t"), Error);
}

TEST_CASE("manifest loaders read from disk and report missing files") {
  std::string path = temp_path("m.txt");
  wire::write_file(path, "invedit-labels 1\nx.lat1 1\n");
  auto rows = load_labels_manifest(path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].label == 1);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_labels_manifest(path), Error);
}

TEST_CASE("g17 formatting round trips doubles exactly") {
  const double values[] = {0.0,
                           -0.0,
                           1.0,
                           -1.0,
                           0.1,
                           1.0 / 3.0,
                           6.02214076e23,
                           -2.2250738585072014e-308,
                           std::numeric_limits<double>::denorm_min(),
                           3.141592653589793};
  for (double v : values) {
    std::string s = fmt_g17(v);
    double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
  }
  CHECK(fmt_g17(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt_g17(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("fixed formatting and csv rows") {
  CHECK(fmt_fixed(1.25, 2) == "1.25");
  CHECK(fmt_fixed(-0.5, 3) == "-0.500");
  CHECK(join_csv({"a", "b", "c"}) == "a,b,c\n");
  CHECK(join_csv({"solo"}) == "solo\n");
}

TEST_CASE("wire reader decodes little-endian primitives and guards bounds") {
  std::string bytes;
  bytes += "GEN1";
  wire::put_u16(bytes, 0x0201);
  wire::put_u32(bytes, 0x04030201u);
  wire::put_u64(bytes, 0x0807060504030201ull);
  wire::put_f32(bytes, 1.5f);

  wire::Reader r(bytes, "unit");
  r.expect_magic("GEN1");
  CHECK(r.get_u16() == 0x0201);
  CHECK(r.get_u32() == 0x04030201u);
  CHECK(r.get_u64() == 0x0807060504030201ull);
  CHECK(r.get_f32() == 1.5f);
  CHECK(r.at_end());
  r.require_end();

  wire::Reader bad(bytes, "unit");
  CHECK_THROWS_AS(bad.expect_magic("LAT1"), Error);

  wire::Reader short_read(bytes, "unit");
  short_read.expect_magic("GEN1");
  short_read.get_u64();
  short_read.get_u64();
  try {
    short_read.get_u64();  // only two bytes remain
    FAIL("expected truncation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadFormat);
    CHECK(std::string(e.what()).find("unit") != std::string::npos);
  }

  wire::Reader leftover(bytes, "unit");
  leftover.expect_magic("GEN1");
  CHECK_THROWS_AS(leftover.require_end(), Error);
}
