#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gerd/cli.hpp"

int main(int argc, char** argv) {
  using namespace gerd::cli;

  CLI::App app{"Synthetic event streams of shapes under controlled affine motion"};
  app.require_subcommand(1);

  GenerateOptions gen;
  std::string gen_out;
  unsigned gen_parallelism = 0;
  std::uint64_t gen_seed = 0;
  auto* generate = app.add_subcommand("generate", "Generate a dataset from a JSON config");
  generate->add_option("--config", gen.config, "Config file")->required();
  generate->add_option("--set", gen.overrides, "Override a config key (key=value), repeatable");
  auto* out_opt = generate->add_option("--out", gen_out, "Output dataset directory");
  auto* par_opt = generate->add_option("--parallelism", gen_parallelism, "Worker threads (default: config, then $GERD_PARALLELISM, then 1)")
                      ->check(CLI::PositiveNumber);
  auto* seed_opt = generate->add_option("--seed", gen_seed, "Seed of the first recording");

  std::string dir;
  std::uint32_t frame = 0;
  std::string format = "ascii";
  std::string image_out;
  auto* preview = app.add_subcommand("preview", "Render one frame as ASCII or a PPM image");
  preview->add_option("dir", dir, "Recording directory")->required();
  preview->add_option("--frame", frame, "Recorded frame index");
  preview->add_option("--format", format, "ascii or image")->check(CLI::IsMember({"ascii", "image"}));
  preview->add_option("--out", image_out, "PPM output path (image format)");

  auto* validate = app.add_subcommand("validate", "Check headers, digests, ordering and bounds");
  validate->add_option("dir", dir, "Recording or dataset directory")->required();

  auto* stats = app.add_subcommand("stats", "Per-recording event statistics");
  stats->add_option("dir", dir, "Recording or dataset directory")->required();

  std::string kind = "pointcloud";
  std::string export_out;
  auto* exporter = app.add_subcommand("export", "Export a recording as dense frames or a point cloud");
  exporter->add_option("dir", dir, "Recording directory")->required();
  exporter->add_option("--kind", kind, "dense or pointcloud")->check(CLI::IsMember({"dense", "pointcloud"}));
  exporter->add_option("--out", export_out, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kUsage);
  }

  if (*generate) {
    if (*out_opt) gen.output_dir = gen_out;
    if (*par_opt) gen.parallelism = gen_parallelism;
    if (*seed_opt) gen.seed_base = gen_seed;
    return cmd_generate(gen, std::cout, std::cerr);
  }
  if (*preview) {
    std::optional<std::filesystem::path> img;
    if (!image_out.empty()) img = image_out;
    return cmd_preview(dir, frame, format == "image" ? PreviewFormat::Image : PreviewFormat::Ascii, img, std::cout,
                       std::cerr);
  }
  if (*validate) return cmd_validate(dir, std::cout, std::cerr);
  if (*stats) return cmd_stats(dir, std::cout, std::cerr);
  if (*exporter) {
    return cmd_export(dir, kind == "dense" ? ExportKind::Dense : ExportKind::PointCloud, export_out, std::cout,
                      std::cerr);
  }
  return kUsage;
}
