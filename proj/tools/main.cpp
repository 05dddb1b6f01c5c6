// invedit: align -> embed -> extract-direction -> correlate -> edit ->
// evaluate pipeline over manifests and files, plus a synthetic end-to-end
// demo. Exit codes: 0 success, 1 total failure, 2 bad arguments.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "invedit/directions.hpp"
#include "invedit/editing.hpp"
#include "invedit/embedding.hpp"
#include "invedit/error.hpp"
#include "invedit/fmt.hpp"
#include "invedit/generator.hpp"
#include "invedit/geometry.hpp"
#include "invedit/image_io.hpp"
#include "invedit/latent.hpp"
#include "invedit/manifest.hpp"
#include "invedit/metrics.hpp"
#include "invedit/prng.hpp"
#include "invedit/wire.hpp"

namespace fs = std::filesystem;
using namespace invedit;

namespace {

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out = ".";
  int jobs = 1;
};

std::string out_path(const GlobalOpts& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

std::string idx3(std::size_t i) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return buf;
}

// CSV cells must stay comma-free; error messages go through this.
std::string sanitize_cell(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& rows) {
  std::string body;
  for (const std::string& r : rows) body += r;
  wire::write_file(path, body);
}

// Synthetic-world options shared by embed and edit. Either a GEN1 file or a
// world seed must be given.
struct GenOpts {
  std::string file;
  std::uint64_t world_seed = 0;
  bool seed_given = false;
  std::string kind = "linear";
  int layers = 4;
  int dim = 16;
  int size = 64;
  int channels = 1;
  int hidden = 32;
};

void add_gen_options(CLI::App* cmd, GenOpts& g) {
  auto* file = cmd->add_option("--generator", g.file, "GEN1 world file");
  auto* seed = cmd->add_option("--world-seed", g.world_seed,
                               "seed for an in-process synthetic world");
  cmd->add_option("--world-kind", g.kind, "linear or mlp")
      ->check(CLI::IsMember({"linear", "mlp"}));
  cmd->add_option("--world-layers", g.layers, "latent layers")->check(CLI::PositiveNumber);
  cmd->add_option("--world-dim", g.dim, "latent dims per layer")->check(CLI::PositiveNumber);
  cmd->add_option("--world-size", g.size, "image side")->check(CLI::PositiveNumber);
  cmd->add_option("--world-channels", g.channels, "1 or 3")->check(CLI::IsMember({1, 3}));
  cmd->add_option("--world-hidden", g.hidden, "mlp hidden width")->check(CLI::PositiveNumber);
  file->excludes(seed);
  seed->excludes(file);
}

struct GenHandle {
  std::optional<SyntheticWorld> world;
  std::shared_ptr<const GeneratorSpec> gen;
};

GenHandle resolve_generator(GenOpts& opts, CLI::App* cmd) {
  GenHandle h;
  opts.seed_given = cmd->count("--world-seed") > 0;
  if (!opts.file.empty()) {
    h.world = SyntheticWorld::load(opts.file);
  } else if (opts.seed_given) {
    WorldConfig wc;
    wc.kind = opts.kind == "mlp" ? WorldKind::mlp : WorldKind::linear;
    wc.layers = opts.layers;
    wc.dim = opts.dim;
    wc.out_size = opts.size;
    wc.channels = opts.channels;
    wc.hidden = opts.hidden;
    wc.seed = opts.world_seed;
    h.world = SyntheticWorld::create(wc);
  } else {
    raise(ErrorCode::MissingTarget, "need --generator or --world-seed");
  }
  h.gen = h.world->generator_ptr();
  return h;
}

int cmd_align(const GlobalOpts& g, const std::string& manifest_path,
              AlignConfig cfg) {
  AlignManifest manifest = load_align_manifest(manifest_path);
  std::vector<std::string> rows;
  rows.push_back(join_csv({"image", "status", "rotation_deg", "output", "reason"}));
  std::size_t ok = 0;
  for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
    const AlignEntry& e = manifest.entries[i];
    try {
      ImageBuf img = read_image(e.image);
      BoundingBox box = select_primary_face(e.boxes);
      if (!e.landmarks)
        raise(ErrorCode::EmptyInput, "no landmarks for " + e.image);
      auto [left, right] = eye_centers(*e.landmarks);
      const double angle = rotation_angle(left, right);
      ImageBuf aligned = align_face(img, box, *e.landmarks, cfg);
      std::string name = "aligned_" + idx3(i) + "_" + stem_of(e.image) + ".ppm";
      write_ppm(out_path(g, name), aligned);
      rows.push_back(join_csv({e.image, "ok", fmt_g17(angle), name, ""}));
      ++ok;
    } catch (const Error& err) {
      rows.push_back(join_csv({e.image, "skipped", "", "", sanitize_cell(err.what())}));
    }
  }
  write_csv(out_path(g, "align_report.csv"), rows);
  std::cout << "aligned " << ok << "/" << manifest.entries.size() << " entries\n";
  std::cout << "report " << out_path(g, "align_report.csv") << "\n";
  return (manifest.entries.empty() || ok > 0) ? 0 : 1;
}

struct EmbedOpts {
  std::vector<std::string> images;
  int iterations = 1000;
  std::string init = "random";
  int mean_samples = 10000;
  double lambda_vgg = 1.0;
  double lambda_mse = 1.0;
  int vgg_size = 0;
  int mse_size = 0;
  int feature_grid = 8;
};

int cmd_embed(const GlobalOpts& g, GenHandle& gh, const EmbedOpts& opts) {
  const GeneratorSpec& gen = *gh.gen;
  PatchFeatures ext(opts.feature_grid, gen.channels());
  std::vector<std::string> rows;
  rows.push_back(join_csv({"image", "status", "latent_file", "best_loss",
                           "best_iteration", "psnr_db", "ssim", "reason"}));
  std::size_t ok = 0;
  for (std::size_t i = 0; i < opts.images.size(); ++i) {
    const std::string& path = opts.images[i];
    try {
      ImageBuf img = read_image(path);
      EmbedConfig cfg;
      cfg.iterations = opts.iterations;
      cfg.weights = LossWeights{opts.lambda_vgg, opts.lambda_mse};
      cfg.vgg_image_size = opts.vgg_size;
      cfg.mse_image_size = opts.mse_size;
      if (opts.init == "random") {
        cfg.init = RandomInit{derive_seed(g.seed, i)};
      } else if (opts.init == "mean") {
        cfg.init = MeanLatentInit{opts.mean_samples, derive_seed(g.seed, i)};
      } else {
        cfg.init = EncoderInit{};
      }
      EmbeddingResult res = embed(img, gen, ext, cfg);

      std::string base = "embed_" + idx3(i) + "_" + stem_of(path);
      std::string lat_name = base + ".lat1";
      save_latent(out_path(g, lat_name), res.w_star);
      std::vector<std::string> loss_rows;
      loss_rows.push_back(join_csv({"iteration", "loss"}));
      for (std::size_t it = 0; it < res.loss_trace.size(); ++it)
        loss_rows.push_back(join_csv({std::to_string(it), fmt_g17(res.loss_trace[it])}));
      write_csv(out_path(g, base + "_loss.csv"), loss_rows);

      ImageBuf target = img;
      if (img.height() != gen.out_size())
        target = area_downsample(img, gen.out_size());
      ImageBuf recon = gen.generate(res.w_star);
      std::string ssim_cell;
      try {
        ssim_cell = fmt_g17(ssim(recon, target));
      } catch (const Error&) {
        ssim_cell = "";  // images below the ssim window size
      }
      rows.push_back(join_csv({path, "ok", lat_name, fmt_g17(res.best_loss),
                               std::to_string(res.best_iteration),
                               fmt_g17(psnr(recon, target)), ssim_cell, ""}));
      ++ok;
    } catch (const Error& err) {
      rows.push_back(
          join_csv({path, "failed", "", "", "", "", "", sanitize_cell(err.what())}));
    }
  }
  write_csv(out_path(g, "embed_summary.csv"), rows);
  std::cout << "embedded " << ok << "/" << opts.images.size() << " images\n";
  std::cout << "summary " << out_path(g, "embed_summary.csv") << "\n";
  return (opts.images.empty() || ok > 0) ? 0 : 1;
}

int cmd_extract_direction(const GlobalOpts& g, const std::string& labels_path,
                          const std::string& name, std::string out_file,
                          LogisticConfig cfg) {
  std::vector<LabeledPath> rows = load_labels_manifest(labels_path);
  LabeledLatentDataset ds;
  for (const LabeledPath& r : rows)
    ds.records.emplace_back(load_latent(r.path), r.label);
  cfg.seed = g.seed;
  LogisticFit fit = train_logistic(ds, cfg);
  AttributeDirection dir = extract_direction(fit.a_raw, fit.b, name);
  dir.train_accuracy = fit.train_accuracy;
  if (out_file.empty()) out_file = out_path(g, name + ".dir1");
  save_direction(out_file, dir);
  std::cout << "train_accuracy " << fmt_g17(fit.train_accuracy) << "\n";
  std::cout << "test_accuracy " << fmt_g17(fit.test_accuracy) << "\n";
  std::cout << "direction " << out_file << "\n";
  return 0;
}

int cmd_correlate(const GlobalOpts& g, const std::vector<std::string>& files) {
  std::vector<AttributeDirection> dirs;
  for (const std::string& f : files) dirs.push_back(load_direction(f));
  RowMatrixXd m = correlation_matrix(dirs);
  std::vector<std::string> rows;
  std::vector<std::string> header{"name"};
  for (const AttributeDirection& d : dirs) header.push_back(sanitize_cell(d.name));
  rows.push_back(join_csv(header));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> cells{sanitize_cell(dirs[static_cast<std::size_t>(i)].name)};
    for (Eigen::Index j = 0; j < m.cols(); ++j) cells.push_back(fmt_g17(m(i, j)));
    rows.push_back(join_csv(cells));
  }
  std::string path = out_path(g, "correlations.csv");
  write_csv(path, rows);
  std::cout << "correlations " << path << "\n";
  return 0;
}

struct EditOpts {
  std::string latent;
  std::string direction;
  std::vector<double> alphas{-5.0, -3.0, 3.0, 5.0};
  std::vector<int> mask_layers;
  bool mask_all = false;
};

int cmd_edit(const GlobalOpts& g, GenHandle& gh, const EditOpts& opts) {
  const GeneratorSpec& gen = *gh.gen;
  LatentCode w = load_latent(opts.latent);
  AttributeDirection dir = load_direction(opts.direction);
  LayerMask mask;
  if (!opts.mask_layers.empty()) {
    mask.included.insert(opts.mask_layers.begin(), opts.mask_layers.end());
  } else if (opts.mask_all) {
    mask = LayerMask::all(w.layers());
  } else {
    mask = LayerMask::default_for(w.layers());
  }
  validate_mask(mask, w.layers());

  for (double a : opts.alphas) {
    if (std::abs(a) > 5.0)
      std::cerr << "warning: alpha " << fmt_g17(a)
                << " outside [-5, 5]; expect artifacts\n";
  }

  const std::string base = "edit_" + stem_of(opts.latent) + "_";
  std::vector<std::string> rows;
  rows.push_back(join_csv({"index", "alpha", "latent_path", "image_path"}));
  for (std::size_t i = 0; i < opts.alphas.size(); ++i) {
    LatentCode edited = edit_latent(w, EditSpec{dir, opts.alphas[i], mask});
    std::string lat_name = base + idx3(i) + ".lat1";
    std::string img_name = base + idx3(i) + ".f32";
    save_latent(out_path(g, lat_name), edited);
    write_f32_image(out_path(g, img_name), gen.generate(edited));
    rows.push_back(
        join_csv({std::to_string(i), fmt_g17(opts.alphas[i]), lat_name, img_name}));
  }
  std::string sweep_path = out_path(g, base + "sweep.csv");
  write_csv(sweep_path, rows);
  std::cout << "sweep " << sweep_path << "\n";
  return 0;
}

struct EvalOpts {
  std::string pairs;
  int perceptual_grid = 8;
  int identity_grid = 4;
};

int cmd_evaluate(const GlobalOpts& g, const EvalOpts& opts) {
  std::vector<PathPair> pairs = load_pairs_manifest(opts.pairs);
  std::vector<std::string> rows;
  rows.push_back(join_csv({"pair_id", "psnr", "ssim", "perceptual", "identity"}));
  std::vector<Eigen::VectorXd> feats_a, feats_b;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      ImageBuf a = read_image(pairs[i].a);
      ImageBuf b = read_image(pairs[i].b);
      std::string psnr_cell = fmt_g17(psnr(a, b));
      auto metric_cell = [&](auto&& fn) -> std::string {
        try {
          return fmt_g17(fn());
        } catch (const Error&) {
          return "";
        }
      };
      std::string ssim_cell = metric_cell([&] { return ssim(a, b); });
      std::string perc_cell = metric_cell([&] {
        PatchFeatures ext(opts.perceptual_grid, a.channels());
        return perceptual_distance(ext, a, b);
      });
      std::string id_cell = metric_cell([&] {
        PatchFeatures ext(opts.identity_grid, a.channels());
        return identity_distance(ext, a, b);
      });
      try {
        PatchFeatures ext(opts.perceptual_grid, a.channels());
        feats_a.push_back(ext.extract(a));
        feats_b.push_back(ext.extract(b));
      } catch (const Error&) {
        // grid does not divide this pair's size; leave it out of the fits
      }
      rows.push_back(join_csv(
          {std::to_string(i), psnr_cell, ssim_cell, perc_cell, id_cell}));
      ++ok;
    } catch (const Error& err) {
      std::cerr << "pair " << i << " failed: " << err.what() << "\n";
      rows.push_back(join_csv({std::to_string(i), "", "", "", ""}));
    }
  }
  std::string frechet_cell;
  if (feats_a.size() >= 2 && feats_b.size() >= 2) {
    try {
      frechet_cell =
          fmt_g17(frechet_distance(fit_gaussian(feats_a), fit_gaussian(feats_b)));
    } catch (const Error& err) {
      std::cerr << "frechet failed: " << err.what() << "\n";
    }
  }
  rows.push_back(join_csv({"frechet", frechet_cell, "", "", ""}));
  std::string path = out_path(g, "metrics.csv");
  write_csv(path, rows);
  std::cout << "metrics " << path << "\n";
  return (pairs.empty() || ok > 0) ? 0 : 1;
}

int cmd_demo(const GlobalOpts& g) {
  std::vector<std::string> summary;
  bool all_pass = true;
  auto check = [&](bool pass, const std::string& line) {
    summary.push_back(std::string(pass ? "[PASS] " : "[FAIL] ") + line);
    all_pass = all_pass && pass;
  };

  // Stage 1: seeded world with a planted direction.
  WorldConfig wc;
  wc.kind = WorldKind::linear;
  wc.seed = derive_seed(g.seed, 0);
  SyntheticWorld world = SyntheticWorld::create(wc);
  world.save(out_path(g, "world.gen1"));
  const GeneratorSpec& gen = world.generator();
  const RowMatrixXd& planted = world.planted_direction();

  // Stage 2: noisy-labeled latents and the extracted attribute direction.
  LabeledLatentDataset ds;
  Pcg64 noise(derive_seed(g.seed, 1));
  for (int i = 0; i < 2000; ++i) {
    LatentCode w = sample_latent(derive_seed(g.seed, 1000 + i), wc.layers, wc.dim);
    double score = (w.values.array() * planted.array()).sum() + 0.1 * noise.next_normal();
    ds.records.emplace_back(std::move(w), score > 0 ? 1 : 0);
  }
  LogisticConfig lcfg;
  lcfg.seed = derive_seed(g.seed, 2);
  LogisticFit fit = train_logistic(ds, lcfg);
  AttributeDirection dir = extract_direction(fit.a_raw, fit.b, "weight");
  dir.train_accuracy = fit.train_accuracy;
  save_direction(out_path(g, "weight.dir1"), dir);
  const double cos_planted = std::abs((dir.a.array() * planted.array()).sum());
  check(cos_planted >= 0.95,
        "direction recovery cos " + fmt_fixed(cos_planted, 4) + " >= 0.95");

  // Stage 3: disentangle against a second, independently labeled attribute.
  LabeledLatentDataset ds2;
  LatentCode qseed = sample_latent(derive_seed(g.seed, 3), wc.layers, wc.dim);
  RowMatrixXd q = qseed.values / qseed.values.norm();
  for (const auto& rec : ds.records) {
    double score = (rec.first.values.array() * q.array()).sum();
    ds2.records.emplace_back(rec.first, score > 0 ? 1 : 0);
  }
  LogisticConfig lcfg2;
  lcfg2.seed = derive_seed(g.seed, 4);
  LogisticFit fit2 = train_logistic(ds2, lcfg2);
  AttributeDirection confound = extract_direction(fit2.a_raw, fit2.b, "confound");
  save_direction(out_path(g, "confound.dir1"), confound);
  AttributeDirection clean = project_subtract(dir, {confound}, true);
  save_direction(out_path(g, "weight_disentangled.dir1"), clean);
  const double residual = std::abs((clean.a.array() * confound.a.array()).sum());
  check(residual <= 1e-10, "disentangled residual <= 1e-10");

  // Stage 4: invert a held-out generated image.
  LatentCode w0 = sample_latent(derive_seed(g.seed, 5), wc.layers, wc.dim);
  ImageBuf target = gen.generate(w0);
  write_f32_image(out_path(g, "target.f32"), target);
  EmbedConfig ecfg;
  ecfg.init = RandomInit{derive_seed(g.seed, 6)};
  PatchFeatures ext(8, wc.channels);
  EmbeddingResult res = embed(target, gen, ext, ecfg);
  save_latent(out_path(g, "embedded.lat1"), res.w_star);
  double trace_min = res.loss_trace[0];
  for (double v : res.loss_trace) trace_min = std::min(trace_min, v);
  check(res.best_loss == trace_min, "best loss equals trace minimum");
  const double re_eval = total_loss(ecfg.weights, ext, gen.generate(res.w_star),
                                    target, wc.out_size / 4, wc.out_size);
  check(std::abs(re_eval - res.best_loss) <= 1e-12,
        "best latent re-evaluates within 1e-12");
  ImageBuf recon = gen.generate(res.w_star);
  write_f32_image(out_path(g, "reconstruction.f32"), recon);
  const double recon_psnr = psnr(recon, target);
  check(recon_psnr >= 40.0,
        "reconstruction psnr " + fmt_fixed(recon_psnr, 2) + " dB >= 40");

  // Stage 5: alpha sweep along the extracted direction.
  const std::vector<double> alphas{-5.0, -3.0, 0.0, 3.0, 5.0};
  std::vector<LatentCode> edited =
      sweep(res.w_star, dir, alphas, LayerMask::all(wc.layers));
  bool monotone = true;
  double prev = 0.0;
  std::vector<std::string> pair_lines{"invedit-pairs 1\n"};
  for (std::size_t i = 0; i < edited.size(); ++i) {
    ImageBuf img = gen.generate(edited[i]);
    std::string name = "sweep_" + idx3(i) + ".f32";
    write_f32_image(out_path(g, name), img);
    const double s = world.statistic(img);
    if (i > 0 && s <= prev) monotone = false;
    prev = s;
    pair_lines.push_back(out_path(g, name) + " " + out_path(g, "target.f32") + "\n");
  }
  check(monotone, "sweep statistic strictly increasing over 5 alphas");

  // Stage 6: metric report for the sweep images against the target.
  std::string pairs_text;
  for (const std::string& l : pair_lines) pairs_text += l;
  wire::write_file(out_path(g, "pairs.txt"), pairs_text);
  EvalOpts eval;
  eval.pairs = out_path(g, "pairs.txt");
  GlobalOpts eval_g = g;
  const int eval_rc = cmd_evaluate(eval_g, eval);
  check(eval_rc == 0, "evaluation pipeline completed");

  std::string text;
  for (const std::string& line : summary) text += line + "\n";
  text += std::string(all_pass ? "demo ok" : "demo failed") + "\n";
  wire::write_file(out_path(g, "demo_summary.txt"), text);
  std::cout << text;
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"StyleGAN-style latent editing pipeline at desk scale"};
  app.set_config("--config");
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "global random seed");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--jobs", g.jobs, "worker count (reserved; execution is serial)")
      ->check(CLI::PositiveNumber);
  app.require_subcommand(1);

  auto* align = app.add_subcommand("align", "align faces listed in a manifest");
  std::string align_manifest;
  AlignConfig align_cfg;
  align_cfg.out_size = 64;
  std::string pad_mode = "reflect";
  align->add_option("--manifest", align_manifest, "alignment manifest")->required();
  align->add_option("--size", align_cfg.out_size, "output side, power of two >= 8");
  align->add_option("--pad", pad_mode, "border policy")
      ->check(CLI::IsMember({"reflect", "replicate", "constant"}));
  align->add_option("--pad-value", align_cfg.pad_value, "constant-pad value");
  align->add_option("--eye-frac", align_cfg.eye_frac, "eye distance fraction");

  auto* embed_cmd = app.add_subcommand("embed", "invert images into latent codes");
  GenOpts embed_gen;
  EmbedOpts embed_opts;
  add_gen_options(embed_cmd, embed_gen);
  embed_cmd->add_option("--images", embed_opts.images, "input images")->required();
  embed_cmd->add_option("--iterations", embed_opts.iterations, "optimizer steps")
      ->check(CLI::PositiveNumber);
  embed_cmd->add_option("--init", embed_opts.init, "random, mean, or encoder")
      ->check(CLI::IsMember({"random", "mean", "encoder"}));
  embed_cmd->add_option("--mean-samples", embed_opts.mean_samples,
                        "samples for the mean init")
      ->check(CLI::PositiveNumber);
  embed_cmd->add_option("--lambda-vgg", embed_opts.lambda_vgg, "feature loss weight");
  embed_cmd->add_option("--lambda-mse", embed_opts.lambda_mse, "pixel loss weight");
  embed_cmd->add_option("--vgg-size", embed_opts.vgg_size,
                        "feature-loss image side (0: out/4)");
  embed_cmd->add_option("--mse-size", embed_opts.mse_size,
                        "pixel-loss image side (0: out)");
  embed_cmd->add_option("--feature-grid", embed_opts.feature_grid,
                        "patch-feature grid")
      ->check(CLI::PositiveNumber);

  auto* extract = app.add_subcommand("extract-direction",
                                     "fit an attribute hyperplane from labels");
  std::string labels_path, dir_name = "attribute", dir_out;
  LogisticConfig log_cfg;
  extract->add_option("--labels", labels_path, "labels manifest")->required();
  extract->add_option("--name", dir_name, "direction name");
  extract->add_option("--out-file", dir_out, "DIR1 output path");
  extract->add_option("--lr", log_cfg.learning_rate, "learning rate");
  extract->add_option("--epochs", log_cfg.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  extract->add_option("--l2", log_cfg.l2, "L2 strength");
  extract->add_option("--split", log_cfg.train_fraction, "train fraction in (0,1)");

  auto* correlate = app.add_subcommand("correlate", "cosine similarity matrix");
  std::vector<std::string> dir_files;
  correlate->add_option("--directions", dir_files, "DIR1 files")
      ->required()
      ->expected(2, -1);

  auto* edit_cmd = app.add_subcommand("edit", "apply direction sweeps to a latent");
  GenOpts edit_gen;
  EditOpts edit_opts;
  add_gen_options(edit_cmd, edit_gen);
  edit_cmd->add_option("--latent", edit_opts.latent, "LAT1 input")->required();
  edit_cmd->add_option("--direction", edit_opts.direction, "DIR1 input")->required();
  edit_cmd->add_option("--alphas", edit_opts.alphas, "edit strengths")
      ->delimiter(',');
  edit_cmd->add_option("--mask", edit_opts.mask_layers, "layer indices to edit")
      ->delimiter(',');
  edit_cmd->add_flag("--mask-all", edit_opts.mask_all, "edit every layer");

  auto* evaluate = app.add_subcommand("evaluate", "image-pair metric report");
  EvalOpts eval_opts;
  evaluate->add_option("--pairs", eval_opts.pairs, "pairs manifest")->required();
  evaluate->add_option("--perceptual-grid", eval_opts.perceptual_grid,
                       "feature grid for perceptual/frechet")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--identity-grid", eval_opts.identity_grid,
                       "feature grid for identity")
      ->check(CLI::PositiveNumber);

  app.add_subcommand("demo", "seeded synthetic end-to-end pipeline run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (align->parsed()) {
      if (pad_mode == "replicate") align_cfg.pad_mode = PadMode::replicate;
      if (pad_mode == "constant") align_cfg.pad_mode = PadMode::constant;
      return cmd_align(g, align_manifest, align_cfg);
    }
    if (embed_cmd->parsed()) {
      GenHandle gh = resolve_generator(embed_gen, embed_cmd);
      return cmd_embed(g, gh, embed_opts);
    }
    if (extract->parsed())
      return cmd_extract_direction(g, labels_path, dir_name, dir_out, log_cfg);
    if (correlate->parsed()) return cmd_correlate(g, dir_files);
    if (edit_cmd->parsed()) {
      GenHandle gh = resolve_generator(edit_gen, edit_cmd);
      return cmd_edit(g, gh, edit_opts);
    }
    if (evaluate->parsed()) return cmd_evaluate(g, eval_opts);
    return cmd_demo(g);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
