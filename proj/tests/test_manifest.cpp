#include <gtest/gtest.h>

#include <cstdlib>
#include <regex>

#include "cpspdc/checksum.hpp"
#include "cpspdc/error.hpp"
#include "cpspdc/manifest.hpp"
#include "test_support.hpp"

using namespace cpspdc;

namespace {

RunManifest sample() {
  RunManifest m;
  m.command_line = {"cpspdc", "period", "--crystal", "PPKTP"};
  m.database_path = "data/crystals.json";
  m.database_sha256 = "00ff";
  m.parameters["crystal"] = "PPKTP";
  m.parameters["lambda0_nm"] = 1550.0;
  m.version = std::string(version());
  m.timestamp = "2024-01-02T03:04:05Z";
  m.outputs = {"out.csv"};
  return m;
}

}  // namespace

TEST(Manifest, SerializeRoundTrip) {
  const RunManifest m = sample();
  const RunManifest back = parse_manifest(serialize_manifest(m));
  EXPECT_EQ(back.command_line, m.command_line);
  EXPECT_EQ(back.database_sha256, m.database_sha256);
  EXPECT_EQ(back.parameters, m.parameters);
  EXPECT_EQ(back.timestamp, m.timestamp);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(serialize_manifest(back), serialize_manifest(m));
}

TEST(Manifest, ParseErrors) {
  EXPECT_THROW(parse_manifest("[1"), ParseError);
  EXPECT_THROW(parse_manifest(R"({"version": "1"})"), ParseError);
}

TEST(Manifest, PathNextToOutput) {
  EXPECT_EQ(manifest_path_for("dir/out.csv"), std::filesystem::path("dir/out.csv.manifest.json"));
}

TEST(Manifest, WriteAndRead) {
  testutil::TempDir dir("manifest");
  const auto p = write_manifest(sample(), dir / "x.csv");
  EXPECT_EQ(p, dir / "x.csv.manifest.json");
  const RunManifest back = parse_manifest(read_file(p));
  EXPECT_EQ(back.outputs, sample().outputs);
  EXPECT_THROW(write_manifest(sample(), "/nonexistent/dir/x.csv"), IoError);
}

TEST(Manifest, TimestampFormatAndOverride) {
  EXPECT_TRUE(std::regex_match(utc_timestamp(), std::regex(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\dZ)")));
  ::setenv("SOURCE_DATE_EPOCH", "86400", 1);
  EXPECT_EQ(utc_timestamp(), "1970-01-02T00:00:00Z");
  ::unsetenv("SOURCE_DATE_EPOCH");
}

TEST(Manifest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}
