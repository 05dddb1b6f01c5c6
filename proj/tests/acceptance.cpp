// End-to-end acceptance checks for the whole pipeline. Each criterion prints
// one [PASS]/[FAIL] line; the process exits 0 only if every criterion holds.
// argv[1] is the path to the invedit binary, used by the last two criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "invedit/directions.hpp"
#include "invedit/editing.hpp"
#include "invedit/embedding.hpp"
#include "invedit/error.hpp"
#include "invedit/generator.hpp"
#include "invedit/latent.hpp"
#include "invedit/metrics.hpp"
#include "invedit/prng.hpp"
#include "invedit/wire.hpp"

using namespace invedit;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Pixel features mapped to [-1, 1]; lets constant black and white images have
// exactly antipodal unit embeddings.
class CenteredPixelFeatures final : public FeatureExtractor {
 public:
  explicit CenteredPixelFeatures(int count) : count_(count) {}
  int feature_count() const override { return count_; }
  Eigen::VectorXd extract(const ImageBuf& img) const override {
    Eigen::VectorXd f(count_);
    for (int i = 0; i < count_; ++i) f[i] = 2.0 * img.data().v[static_cast<std::size_t>(i)] - 1.0;
    return f;
  }
  Array3 vjp(const ImageBuf& img, const Eigen::VectorXd&) const override {
    return Array3(img.height(), img.width(), img.channels());
  }

 private:
  int count_;
};

RowMatrixXd loss_grad_latent(const GeneratorSpec& gen,
                             const FeatureExtractor& ext, const LatentCode& w,
                             const ImageBuf& target, int vgg, int mse) {
  ImageBuf img = gen.generate(w);
  Array3 pixel_grad(img.height(), img.width(), img.channels());
  total_loss_grad(LossWeights{}, ext, img, target, vgg, mse, &pixel_grad);
  return gen.vjp(w, pixel_grad);
}

void criterion_gradient_parity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int point = 0;
  for (int kind = 0; kind < 2; ++kind) {
    for (int i = 0; i < 5; ++i, ++point) {
      WorldConfig wc;
      wc.kind = kind == 0 ? WorldKind::linear : WorldKind::mlp;
      wc.layers = 2;
      wc.dim = 8;
      wc.out_size = 16;
      wc.hidden = 16;
      wc.seed = 300 + static_cast<std::uint64_t>(point);
      SyntheticWorld world = SyntheticWorld::create(wc);
      const GeneratorSpec& gen = world.generator();
      PatchFeatures ext(4, 1);
      ImageBuf target = gen.generate(sample_latent(400 + static_cast<std::uint64_t>(point), 2, 8));
      LatentCode w = sample_latent(500 + static_cast<std::uint64_t>(point), 2, 8);

      RowMatrixXd analytic = loss_grad_latent(gen, ext, w, target, 4, 16);
      const double h = 1e-5;
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 8; ++c) {
          LatentCode wp = w, wm = w;
          wp.values(r, c) += h;
          wm.values(r, c) -= h;
          const double fp = total_loss(LossWeights{}, ext, gen.generate(wp), target, 4, 16);
          const double fm = total_loss(LossWeights{}, ext, gen.generate(wm), target, 4, 16);
          const double fd = (fp - fm) / (2.0 * h);
          worst = std::max(worst,
                           std::abs(analytic(r, c) - fd) / std::max(1.0, std::abs(fd)));
        }
      }
    }
  }
  const double dt = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "max relative gradient error %.3g over 10 points (limit 1e-4), %.2f s (limit 10)",
                worst, dt);
  report(worst <= 1e-4 && dt < 10.0, "gradient parity", buf);
}

// Shared with the trace-contract criterion below.
struct InversionRun {
  SyntheticWorld world;
  ImageBuf target;
  EmbeddingResult result;
  double runtime = 0.0;
};

InversionRun run_convex_inversion() {
  const auto t0 = std::chrono::steady_clock::now();
  WorldConfig wc;  // linear, 4x16 latent, 64x64 output
  wc.seed = 2026;
  SyntheticWorld world = SyntheticWorld::create(wc);
  ImageBuf target = world.generator().generate(sample_latent(8101, wc.layers, wc.dim));
  EmbedConfig cfg;
  cfg.init = RandomInit{8102};
  PatchFeatures ext(8, 1);
  EmbeddingResult res = embed(target, world.generator(), ext, cfg);
  return InversionRun{std::move(world), std::move(target), std::move(res),
                      seconds_since(t0)};
}

void criterion_convex_inversion(const InversionRun& run) {
  ImageBuf recon = run.world.generator().generate(run.result.w_star);
  const double mse = pixel_mse(recon, run.target);
  const double db = psnr(recon, run.target);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "64x64 linear, 1000 iterations: pixel mse %.3g (limit 1e-4), psnr %.1f dB (floor 40), %.2f s (limit 30)",
                mse, db, run.runtime);
  report(mse <= 1e-4 && db >= 40.0 && run.runtime < 30.0,
         "convex inversion recovery", buf);
}

void criterion_trace_contract(const InversionRun& run) {
  bool ok = true;
  std::string detail;

  auto check_run = [&](const SyntheticWorld& world, const ImageBuf& target,
                       const EmbeddingResult& res, const FeatureExtractor& ext) {
    const double trace_min = *std::min_element(res.loss_trace.begin(), res.loss_trace.end());
    if (res.best_loss != trace_min) {
      ok = false;
      detail = "best_loss differs from the trace minimum";
      return;
    }
    const int n = world.generator().out_size();
    const double re_eval = total_loss(LossWeights{}, ext,
                                      world.generator().generate(res.w_star),
                                      target, n / 4, n);
    if (std::abs(re_eval - res.best_loss) > 1e-12) {
      ok = false;
      detail = "re-evaluated best latent off by more than 1e-12";
    }
  };

  PatchFeatures ext64(8, 1);
  check_run(run.world, run.target, run.result, ext64);

  // Same contract on a short nonconvex run.
  WorldConfig wc;
  wc.kind = WorldKind::mlp;
  wc.out_size = 16;
  wc.seed = 8201;
  SyntheticWorld world = SyntheticWorld::create(wc);
  ImageBuf target = world.generator().generate(sample_latent(8202, wc.layers, wc.dim));
  EmbedConfig cfg;
  cfg.iterations = 50;
  cfg.init = RandomInit{8203};
  PatchFeatures ext16(4, 1);
  EmbeddingResult res = embed(target, world.generator(), ext16, cfg);
  check_run(world, target, res, ext16);

  if (ok) detail = "best_loss equals min(loss_trace); re-evaluation within 1e-12 on both runs";
  report(ok, "optimizer trace contract", detail);
}

void criterion_init_ordering() {
  WorldConfig wc;
  wc.out_size = 16;
  wc.seed = 8301;
  SyntheticWorld world = SyntheticWorld::create(wc);
  const GeneratorSpec& gen = world.generator();
  PatchFeatures ext(4, 1);
  double sum_rand = 0.0, sum_enc = 0.0;
  for (int i = 0; i < 20; ++i) {
    ImageBuf target = gen.generate(sample_latent(derive_seed(8302, static_cast<std::uint64_t>(i)), wc.layers, wc.dim));
    LatentCode w_rand = init_latent(RandomInit{derive_seed(8303, static_cast<std::uint64_t>(i))}, gen, &target);
    LatentCode w_enc = init_latent(EncoderInit{}, gen, &target);
    sum_rand += total_loss(LossWeights{}, ext, gen.generate(w_rand), target, 4, 16);
    sum_enc += total_loss(LossWeights{}, ext, gen.generate(w_enc), target, 4, 16);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mean initial loss over 20 trials: encoder %.4g vs random %.4g",
                sum_enc / 20.0, sum_rand / 20.0);
  report(sum_enc < sum_rand, "encoder init ordering", buf);
}

void criterion_direction_recovery() {
  const int layers = 4, dim = 16;
  LatentCode d0 = sample_latent(8401, layers, dim);
  RowMatrixXd planted = d0.values / d0.values.norm();

  LabeledLatentDataset ds;
  Pcg64 noise(8402);
  for (int i = 0; i < 2000; ++i) {
    LatentCode w = sample_latent(derive_seed(8403, static_cast<std::uint64_t>(i)), layers, dim);
    const double score = (w.values.array() * planted.array()).sum() + 0.1 * noise.next_normal();
    ds.records.emplace_back(std::move(w), score > 0 ? 1 : 0);
  }
  LogisticConfig cfg;
  cfg.seed = 8404;
  LogisticFit fit = train_logistic(ds, cfg);
  AttributeDirection dir = extract_direction(fit.a_raw, fit.b, "planted");
  const double cos = std::abs((dir.a.array() * planted.array()).sum());

  LabeledLatentDataset shuffled = ds;
  Pcg64 coin(8405);
  for (auto& rec : shuffled.records) rec.second = (coin.next_u64() & 1) ? 1 : 0;
  shuffled.records[0].second = 0;  // both classes stay populated
  shuffled.records[1].second = 1;
  LogisticFit null_fit = train_logistic(shuffled, cfg);

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "2000 noisy labels: |cos| %.4f (floor 0.95), shuffled-control accuracy %.3f (0.5 +/- 0.1)",
                cos, null_fit.test_accuracy);
  report(cos >= 0.95 && std::abs(null_fit.test_accuracy - 0.5) <= 0.1,
         "planted direction recovery", buf);
}

void criterion_projection_subtraction() {
  const int layers = 2, dim = 8;
  auto unit = [&](std::uint64_t seed) {
    LatentCode w = sample_latent(seed, layers, dim);
    AttributeDirection d;
    d.a = w.values / w.values.norm();
    d.name = "x";
    return d;
  };
  AttributeDirection target = unit(8501);
  AttributeDirection x0 = unit(8502);
  AttributeDirection x1 = x0, x2 = x0;  // deliberately clustered set
  x1.a = (x0.a + 0.6 * unit(8503).a).normalized();
  x2.a = (x0.a - 0.4 * unit(8504).a).normalized();

  AttributeDirection clean = project_subtract(target, {x0, x1, x2}, true);
  double worst = 0.0;
  for (const AttributeDirection* x : {&x0, &x1, &x2})
    worst = std::max(worst, std::abs((clean.a.array() * x->a.array()).sum()));

  bool parallel_raises = false;
  try {
    project_subtract(x0, {x0}, true);
  } catch (const Error& e) {
    parallel_raises = e.code() == ErrorCode::DegenerateResult;
  }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "iterated residual %.3g (limit 1e-10); parallel input %s DegenerateResult",
                worst, parallel_raises ? "raises" : "MISSES");
  report(worst <= 1e-10 && parallel_raises, "projection subtraction", buf);
}

void criterion_editing_algebra() {
  const int layers = 4, dim = 16;
  LatentCode w = sample_latent(8601, layers, dim);
  AttributeDirection d;
  LatentCode draw = sample_latent(8602, layers, dim);
  d.a = draw.values / draw.values.norm();
  d.name = "probe";
  bool ok = true;
  std::string why = "alpha-0 bit-exact; composition within 1e-12; masked rows bit-identical; full-mask logit shift equals alpha";

  LayerMask full = LayerMask::all(layers);
  LatentCode zero = edit_latent(w, EditSpec{d, 0.0, full});
  if (std::memcmp(zero.values.data(), w.values.data(), sizeof(double) * layers * dim) != 0) {
    ok = false;
    why = "alpha=0 changed latent bits";
  }

  LatentCode two_step = edit_latent(edit_latent(w, EditSpec{d, 1.25, full}),
                                    EditSpec{d, 2.5, full});
  LatentCode one_step = edit_latent(w, EditSpec{d, 3.75, full});
  if ((two_step.values - one_step.values).cwiseAbs().maxCoeff() > 1e-12) {
    ok = false;
    why = "composed edits differ from the summed edit";
  }

  LayerMask partial = LayerMask::first(2);
  LatentCode masked = edit_latent(w, EditSpec{d, 2.0, partial});
  for (int r = 2; r < layers; ++r) {
    if (std::memcmp(masked.values.row(r).data(), w.values.row(r).data(),
                    sizeof(double) * dim) != 0) {
      ok = false;
      why = "edit touched rows outside the mask";
    }
  }

  for (double alpha : {-5.0, -1.0, 0.5, 3.0}) {
    LatentCode moved = edit_latent(w, EditSpec{d, alpha, full});
    const double shift = ((moved.values - w.values).array() * d.a.array()).sum();
    if (std::abs(shift - alpha) > 1e-12) {
      ok = false;
      why = "full-mask shift along the direction is not alpha";
    }
  }
  report(ok, "editing algebra", why);
}

void criterion_semantic_monotonicity() {
  WorldConfig wc;  // default 64x64 scale
  wc.kind = WorldKind::mlp;
  wc.seed = 8701;
  SyntheticWorld world = SyntheticWorld::create(wc);
  AttributeDirection d;
  d.a = world.planted_direction();
  d.name = "planted";
  const std::vector<double> alphas{-5.0, -3.0, 0.0, 3.0, 5.0};
  LayerMask full = LayerMask::all(wc.layers);
  bool ok = true;
  for (int trial = 0; trial < 10 && ok; ++trial) {
    LatentCode w = sample_latent(derive_seed(8702, static_cast<std::uint64_t>(trial)), wc.layers, wc.dim);
    double prev = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      const double s = world.statistic(
          world.generator().generate(edit_latent(w, EditSpec{d, alphas[i], full})));
      if (i > 0 && s <= prev) ok = false;
      prev = s;
    }
  }
  report(ok, "semantic monotonicity",
         ok ? "planted statistic strictly increasing over {-5,-3,0,3,5} for 10 held-out latents"
            : "statistic not strictly increasing along the planted direction");
}

void criterion_metric_oracles() {
  bool ok = true;
  std::string why = "psnr 20 dB at mse 0.01; ssim(a,a)=1; 1-D frechet closed forms; antipodal identity 4";

  Array3 a3(16, 16, 1), b3(16, 16, 1);
  for (double& v : a3.v) v = 0.5;
  for (double& v : b3.v) v = 0.6;
  ImageBuf a(std::move(a3)), b(std::move(b3));
  if (std::abs(psnr(a, b) - 20.0) > 1e-12) {
    ok = false;
    why = "psnr at mse 0.01 is not 20 dB";
  }

  Pcg64 rng(8801);
  Array3 r3(16, 16, 1);
  for (double& v : r3.v) v = rng.next_double();
  ImageBuf r(std::move(r3));
  if (ssim(r, r) != 1.0) {
    ok = false;
    why = "ssim of an image with itself is not exactly 1";
  }

  auto fit1 = [](double mu, double var) {
    GaussianFit f;
    f.mu = Eigen::VectorXd::Constant(1, mu);
    f.sigma = Eigen::MatrixXd::Constant(1, 1, var);
    return f;
  };
  if (std::abs(frechet_distance(fit1(0, 1), fit1(1, 1)) - 1.0) > 1e-8 ||
      std::abs(frechet_distance(fit1(0, 1), fit1(0, 4)) - 1.0) > 1e-8) {
    ok = false;
    why = "1-D frechet closed forms violated";
  }

  Array3 black3(4, 4, 1), white3(4, 4, 1);
  for (double& v : white3.v) v = 1.0;
  ImageBuf black(std::move(black3)), white(std::move(white3));
  CenteredPixelFeatures pix(16);
  if (std::abs(identity_distance(pix, black, white) - 4.0) > 1e-12) {
    ok = false;
    why = "antipodal embeddings are not at identity distance 4";
  }
  report(ok, "metric oracles", why);
}

int run_cli(const std::string& bin, const std::string& args) {
  std::string cmd = bin + " " + args + " >/dev/null 2>/dev/null";
  int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

void criterion_determinism(const std::string& bin, int demo_rc_a, int demo_rc_b,
                           const std::string& dir_a, const std::string& dir_b) {
  bool ok = demo_rc_a == 0 && demo_rc_b == 0;
  std::string why = "two seeded demo runs wrote byte-identical LAT1/DIR1/GEN1 files and CSVs; save/load round-trips bit-exact";
  if (!ok) why = "demo run failed";

  for (const char* f :
       {"world.gen1", "embedded.lat1", "weight.dir1", "weight_disentangled.dir1",
        "confound.dir1", "metrics.csv", "demo_summary.txt"}) {
    if (!ok) break;
    if (wire::read_file(dir_a + "/" + f) != wire::read_file(dir_b + "/" + f)) {
      ok = false;
      why = std::string("demo reruns differ in ") + f;
    }
  }

  if (ok) {
    // Load each format back and re-save; the bytes must match.
    const std::string tmp = dir_a + "/roundtrip";
    fs::create_directories(tmp);
    SyntheticWorld w = SyntheticWorld::load(dir_a + "/world.gen1");
    w.save(tmp + "/world.gen1");
    save_latent(tmp + "/embedded.lat1", load_latent(dir_a + "/embedded.lat1"));
    save_direction(tmp + "/weight.dir1", load_direction(dir_a + "/weight.dir1"));
    for (const char* f : {"world.gen1", "embedded.lat1", "weight.dir1"}) {
      if (wire::read_file(dir_a + "/" + f) != wire::read_file(tmp + "/" + f)) {
        ok = false;
        why = std::string("save/load round trip changed ") + f;
      }
    }
  }
  report(ok, "determinism and round-trip", why);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string bin = argc > 1 ? argv[1] : "";

  criterion_gradient_parity();
  InversionRun inversion = run_convex_inversion();
  criterion_convex_inversion(inversion);
  criterion_trace_contract(inversion);
  criterion_init_ordering();
  criterion_direction_recovery();
  criterion_projection_subtraction();
  criterion_editing_algebra();
  criterion_semantic_monotonicity();
  criterion_metric_oracles();

  if (bin.empty()) {
    report(false, "determinism and round-trip", "no CLI binary path given");
    report(false, "end-to-end demo", "no CLI binary path given");
  } else {
    const std::string root = "/tmp/invedit_acceptance";
    fs::remove_all(root);
    const std::string dir_a = root + "/demo_a", dir_b = root + "/demo_b";
    fs::create_directories(dir_a);
    fs::create_directories(dir_b);
    const auto t0 = std::chrono::steady_clock::now();
    const int rc_a = run_cli(bin, "demo --out " + dir_a);
    const double demo_time = seconds_since(t0);
    const int rc_b = run_cli(bin, "demo --out " + dir_b);
    criterion_determinism(bin, rc_a, rc_b, dir_a, dir_b);
    char buf[120];
    std::snprintf(buf, sizeof buf, "exit %d in %.2f s (limit 120)", rc_a, demo_time);
    report(rc_a == 0 && demo_time < 120.0, "end-to-end demo", buf);
  }

  std::printf("acceptance: %d/11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
