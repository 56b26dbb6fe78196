#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "gerd/cli.hpp"
#include "test_support.hpp"

namespace gerd {
namespace {

using namespace gerd::cli;
using testing::TempDir;

const fs::path kConfigs = GERD_CONFIG_DIR;

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured generate_with(const fs::path& config, const fs::path& out_dir, std::vector<std::string> sets = {},
                       std::optional<unsigned> parallelism = std::nullopt) {
  GenerateOptions opts;
  opts.config = config;
  opts.overrides = std::move(sets);
  opts.output_dir = out_dir;
  opts.parallelism = parallelism;
  std::ostringstream out, err;
  const int code = cmd_generate(opts, out, err);
  return {code, out.str(), err.str()};
}

std::string manifest_text(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(CmdGenerate, StaticSceneReportsZeroEvents) {
  TempDir tmp;
  const auto r = generate_with(kConfigs / "static.json", tmp / "ds");
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("total events: 0"), std::string::npos);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(fs::exists(tmp / "ds" / "index.json"));
  EXPECT_TRUE(fs::exists(tmp / "ds" / "rec_00000" / "events.gerd"));
}

TEST(CmdGenerate, RerunGivesIdenticalDigests) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "noise.json", tmp / "a", {"length=16"}, 1).code, kOk);
  ASSERT_EQ(generate_with(kConfigs / "noise.json", tmp / "b", {"length=16"}, 4).code, kOk);
  for (const char* rec : {"rec_00000", "rec_00001", "rec_00002", "rec_00003"}) {
    EXPECT_EQ(manifest_text(tmp / "a" / rec), manifest_text(tmp / "b" / rec)) << rec;
  }
  EXPECT_NE(manifest_text(tmp / "a" / "rec_00000"), manifest_text(tmp / "a" / "rec_00001"));
}

TEST(CmdGenerate, SeedOverrideShiftsSeeds) {
  TempDir tmp;
  GenerateOptions opts;
  opts.config = kConfigs / "noise.json";
  opts.overrides = {"count=1", "length=8"};
  opts.output_dir = tmp / "s";
  opts.seed_base = 3;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_generate(opts, out, err), kOk) << err.str();
  EXPECT_EQ(read_recording(tmp / "s" / "rec_00000").params.seed, 3u);
}

TEST(CmdGenerate, ConfigErrorsExitTwoAndNameTheKey) {
  TempDir tmp;
  auto r = generate_with(kConfigs / "static.json", tmp / "x", {"shpae=circle"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("shpae"), std::string::npos);

  r = generate_with(kConfigs / "static.json", tmp / "x", {"resolution=[4,4]"});
  EXPECT_EQ(r.code, kConfigError);

  r = generate_with(kConfigs / "static.json", tmp / "x", {"shape=hexagon"});
  EXPECT_EQ(r.code, kConfigError);

  r = generate_with(kConfigs / "static.json", tmp / "x", {"noset"});
  EXPECT_EQ(r.code, kConfigError);

  std::ofstream(tmp / "broken.json") << "{ not json";
  r = generate_with(tmp / "broken.json", tmp / "x");
  EXPECT_EQ(r.code, kConfigError);
}

TEST(CmdGenerate, IoErrorsExitThree) {
  TempDir tmp;
  EXPECT_EQ(generate_with(tmp / "nope.json", tmp / "x").code, kIoError);
  std::ofstream(tmp / "file") << "occupied";
  EXPECT_EQ(generate_with(kConfigs / "static.json", tmp / "file" / "sub").code, kIoError);
}

TEST(CmdPreview, AsciiShowsTranslationColumns) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "translate.json", tmp / "ds").code, kOk);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_preview(tmp / "ds" / "rec_00000", 0, PreviewFormat::Ascii, std::nullopt, out, err), kOk);
  // Square [6,10)x[6,10) moves to [7,11): '+' at column 10, '-' at column 6.
  std::istringstream in(out.str());
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ASSERT_EQ(line.size(), 64u);
    std::string expected(64, '.');
    if (row >= 6 && row < 10) {
      expected[10] = '+';
      expected[6] = '-';
    }
    EXPECT_EQ(line, expected) << "row " << row;
    ++row;
  }
  EXPECT_EQ(row, 16);
}

TEST(CmdPreview, EmptyFrameIsAllDots) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "static.json", tmp / "ds").code, kOk);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_preview(tmp / "ds" / "rec_00000", 3, PreviewFormat::Ascii, std::nullopt, out, err), kOk);
  EXPECT_EQ(out.str().find_first_not_of(".\n"), std::string::npos);
}

TEST(CmdPreview, ImageDimensionsAndColors) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "translate.json", tmp / "ds").code, kOk);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_preview(tmp / "ds" / "rec_00000", 0, PreviewFormat::Image, tmp / "f.ppm", out, err), kOk);
  std::ifstream in(tmp / "f.ppm", std::ios::binary);
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  in.get();
  EXPECT_EQ(magic, "P6");
  EXPECT_EQ(w, 64);
  EXPECT_EQ(h, 16);
  EXPECT_EQ(maxval, 255);
  std::vector<unsigned char> px(std::size_t(w) * h * 3);
  in.read(reinterpret_cast<char*>(px.data()), static_cast<std::streamsize>(px.size()));
  ASSERT_TRUE(in);
  const auto pixel = [&](int x, int y) {
    const std::size_t i = (std::size_t(y) * w + x) * 3;
    return std::array<int, 3>{px[i], px[i + 1], px[i + 2]};
  };
  EXPECT_EQ(pixel(10, 7), (std::array<int, 3>{0, 255, 0}));  // positive: green
  EXPECT_EQ(pixel(6, 7), (std::array<int, 3>{255, 0, 0}));   // negative: red
  EXPECT_EQ(pixel(0, 0), (std::array<int, 3>{0, 0, 0}));
}

TEST(CmdPreview, FrameOutOfRange) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "static.json", tmp / "ds").code, kOk);
  std::ostringstream out, err;
  EXPECT_NE(cmd_preview(tmp / "ds" / "rec_00000", 16, PreviewFormat::Ascii, std::nullopt, out, err), kOk);
  EXPECT_NE(err.str().find("out of range"), std::string::npos);
}

TEST(CmdValidate, CleanThenFlippedByte) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "translate.json", tmp / "ds").code, kOk);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_validate(tmp / "ds", out, err), kOk);
  EXPECT_NE(out.str().find("clean"), std::string::npos);

  const fs::path events = tmp / "ds" / "rec_00000" / "events.gerd";
  std::fstream f(events, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(40);
  char c = 0;
  f.get(c);
  f.seekp(40);
  f.put(static_cast<char>(c ^ 0x01));
  f.close();

  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_validate(tmp / "ds", out2, err2), kValidationFailed);
  EXPECT_NE(out2.str().find("digest"), std::string::npos);
}

TEST(CmdStats, PolarityRatios) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "translate.json", tmp / "t").code, kOk);
  ASSERT_EQ(generate_with(kConfigs / "shrink.json", tmp / "s").code, kOk);
  ASSERT_EQ(generate_with(kConfigs / "static.json", tmp / "z").code, kOk);

  const auto t = compute_stats(read_recording(tmp / "t" / "rec_00000"));
  EXPECT_EQ(t.polarity_ratio(), 1.0);
  EXPECT_EQ(t.events, 8u * 32);
  EXPECT_EQ(t.max_per_frame, 8u);
  const auto s = compute_stats(read_recording(tmp / "s" / "rec_00000"));
  EXPECT_EQ(s.positive, 0u);
  EXPECT_GT(s.negative, 0u);
  const auto z = compute_stats(read_recording(tmp / "z" / "rec_00000"));
  EXPECT_EQ(z.events, 0u);
  EXPECT_EQ(z.polarity_ratio(), 0.0);
  EXPECT_EQ(z.mean_per_frame, 0.0);

  std::ostringstream out, err;
  ASSERT_EQ(cmd_stats(tmp / "t", out, err), kOk);
  EXPECT_NE(out.str().find("rec_00000"), std::string::npos);
  EXPECT_NE(out.str().find("1.000"), std::string::npos);
}

TEST(CmdExport, DenseAndPointCloud) {
  TempDir tmp;
  ASSERT_EQ(generate_with(kConfigs / "translate.json", tmp / "ds").code, kOk);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_export(tmp / "ds" / "rec_00000", ExportKind::Dense, tmp / "d.bin", out, err), kOk);
  std::ifstream in(tmp / "d.bin", std::ios::binary);
  const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  EXPECT_EQ(decode_dense(bytes).sum(), 8u * 32);

  ASSERT_EQ(cmd_export(tmp / "ds" / "rec_00000", ExportKind::PointCloud, tmp / "p.csv", out, err), kOk);
  std::ifstream csv(tmp / "p.csv");
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 1 + 8 * 32);
}

// End-to-end through the executable: exit codes are part of the contract.
int run(const std::string& args) {
  const int status = std::system((std::string(GERD_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

TEST(Executable, ExitCodes) {
  TempDir tmp;
  const std::string cfg = (kConfigs / "translate.json").string();
  const std::string ds = (tmp / "ds").string();
  EXPECT_EQ(run("generate --config " + cfg + " --out " + ds + " --set length=8"), 0);
  EXPECT_EQ(run("validate " + ds), 0);
  EXPECT_EQ(run("stats " + ds), 0);
  EXPECT_EQ(run("preview " + ds + "/rec_00000 --frame 2"), 0);
  EXPECT_EQ(run("export " + ds + "/rec_00000 --kind dense --out " + (tmp / "d.bin").string()), 0);
  EXPECT_EQ(run("generate --config " + cfg + " --out " + ds + " --set bogus=1"), 2);
  EXPECT_EQ(run("generate --config " + (tmp / "missing.json").string()), 3);
  std::ofstream(tmp / "ds" / "rec_00000" / "events.gerd", std::ios::app) << "x";
  EXPECT_EQ(run("validate " + ds), 4);
  EXPECT_NE(run("frobnicate"), 0);
}

TEST(Executable, ParallelismFromEnvironment) {
  TempDir tmp;
  const std::string cfg = (kConfigs / "noise.json").string();
  ASSERT_EQ(setenv(kParallelismEnv, "0", 1), 0);
  EXPECT_EQ(generate_with(kConfigs / "static.json", tmp / "a").code, kConfigError);
  ASSERT_EQ(setenv(kParallelismEnv, "3", 1), 0);
  EXPECT_EQ(generate_with(kConfigs / "static.json", tmp / "b").code, kOk);
  unsetenv(kParallelismEnv);
}

}  // namespace
}  // namespace gerd
