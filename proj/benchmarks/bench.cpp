// Microbenchmarks for the hot paths: generator forward/backward, one
// optimization step, the image metrics, logistic training, and warping.

#include <benchmark/benchmark.h>

#include <vector>

#include "invedit/directions.hpp"
#include "invedit/embedding.hpp"
#include "invedit/generator.hpp"
#include "invedit/geometry.hpp"
#include "invedit/metrics.hpp"
#include "invedit/prng.hpp"

using namespace invedit;

namespace {

SyntheticWorld make_world(WorldKind kind) {
  WorldConfig cfg;  // default 4x16 latent, 64x64 output
  cfg.kind = kind;
  cfg.seed = 1;
  return SyntheticWorld::create(cfg);
}

ImageBuf random_image(int n, std::uint64_t seed) {
  Pcg64 rng(seed);
  Array3 a(n, n, 1);
  for (double& v : a.v) v = rng.next_double();
  return ImageBuf(std::move(a));
}

void BM_GenerateLinear(benchmark::State& state) {
  SyntheticWorld world = make_world(WorldKind::linear);
  LatentCode w = sample_latent(2, 4, 16);
  for (auto _ : state) benchmark::DoNotOptimize(world.generator().generate(w));
}
BENCHMARK(BM_GenerateLinear);

void BM_GenerateMlp(benchmark::State& state) {
  SyntheticWorld world = make_world(WorldKind::mlp);
  LatentCode w = sample_latent(2, 4, 16);
  for (auto _ : state) benchmark::DoNotOptimize(world.generator().generate(w));
}
BENCHMARK(BM_GenerateMlp);

void BM_VjpLinear(benchmark::State& state) {
  SyntheticWorld world = make_world(WorldKind::linear);
  LatentCode w = sample_latent(2, 4, 16);
  Array3 up(64, 64, 1);
  Pcg64 rng(3);
  for (double& v : up.v) v = rng.next_normal();
  for (auto _ : state) benchmark::DoNotOptimize(world.generator().vjp(w, up));
}
BENCHMARK(BM_VjpLinear);

void BM_VjpMlp(benchmark::State& state) {
  SyntheticWorld world = make_world(WorldKind::mlp);
  LatentCode w = sample_latent(2, 4, 16);
  Array3 up(64, 64, 1);
  Pcg64 rng(3);
  for (double& v : up.v) v = rng.next_normal();
  for (auto _ : state) benchmark::DoNotOptimize(world.generator().vjp(w, up));
}
BENCHMARK(BM_VjpMlp);

// One full optimizer iteration: forward, loss gradient, backward, update.
void BM_EmbedStep(benchmark::State& state) {
  SyntheticWorld world = make_world(WorldKind::linear);
  const GeneratorSpec& gen = world.generator();
  PatchFeatures ext(8, 1);
  ImageBuf target = gen.generate(sample_latent(4, 4, 16));
  LatentCode w = sample_latent(5, 4, 16);
  AdamState adam = AdamState::fresh(4, 16);
  for (auto _ : state) {
    ImageBuf img = gen.generate(w);
    Array3 pixel_grad(64, 64, 1);
    total_loss_grad(LossWeights{}, ext, img, target, 16, 64, &pixel_grad);
    RowMatrixXd grad = gen.vjp(w, pixel_grad);
    adam_step(w, grad, adam);
    benchmark::DoNotOptimize(w.values.data());
  }
}
BENCHMARK(BM_EmbedStep);

void BM_Ssim64(benchmark::State& state) {
  ImageBuf a = random_image(64, 6), b = random_image(64, 7);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim64);

void BM_Frechet(benchmark::State& state) {
  Pcg64 rng(8);
  std::vector<Eigen::VectorXd> xs, ys;
  for (int i = 0; i < 64; ++i) {
    Eigen::VectorXd x(16), y(16);
    for (int j = 0; j < 16; ++j) {
      x[j] = rng.next_normal();
      y[j] = 0.5 * rng.next_normal() + 0.1;
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  GaussianFit fa = fit_gaussian(xs), fb = fit_gaussian(ys);
  for (auto _ : state) benchmark::DoNotOptimize(frechet_distance(fa, fb));
}
BENCHMARK(BM_Frechet);

void BM_LogisticEpoch(benchmark::State& state) {
  LatentCode d0 = sample_latent(9, 4, 16);
  RowMatrixXd planted = d0.values / d0.values.norm();
  LabeledLatentDataset ds;
  for (int i = 0; i < 2000; ++i) {
    LatentCode w = sample_latent(derive_seed(10, static_cast<std::uint64_t>(i)), 4, 16);
    int label = (w.values.array() * planted.array()).sum() > 0 ? 1 : 0;
    ds.records.emplace_back(std::move(w), label);
  }
  LogisticConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_logistic(ds, cfg));
}
BENCHMARK(BM_LogisticEpoch);

void BM_ApplyAffine64(benchmark::State& state) {
  ImageBuf img = random_image(64, 11);
  AffineTransform t = derotation_transform(Point2(32.0, 32.0), 30.0, 1.1);
  AlignConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(apply_affine(img, t, 64, 64, cfg));
}
BENCHMARK(BM_ApplyAffine64);

}  // namespace

BENCHMARK_MAIN();
