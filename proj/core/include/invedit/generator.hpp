#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "invedit/image.hpp"
#include "invedit/latent.hpp"

namespace invedit {

// Deterministic differentiable generator contract. generate() must be
// referentially transparent; vjp() returns the exact gradient of
// <upstream, generate(w)> with respect to w.
class GeneratorSpec {
public:
  virtual ~GeneratorSpec() = default;
  virtual std::pair<int, int> latent_shape() const = 0;  // (layers, dim)
  virtual int out_size() const = 0;
  virtual int channels() const = 0;
  virtual ImageBuf generate(const LatentCode& w) const = 0;
  virtual RowMatrixXd vjp(const LatentCode& w, const Array3& upstream) const = 0;
};

// Deterministic feature map contract; vjp() is the exact gradient of
// <upstream, extract(img)> with respect to the pixels.
class FeatureExtractor {
public:
  virtual ~FeatureExtractor() = default;
  virtual int feature_count() const = 0;
  virtual Eigen::VectorXd extract(const ImageBuf& img) const = 0;
  virtual Array3 vjp(const ImageBuf& img, const Eigen::VectorXd& upstream) const = 0;
};

// Per-cell, per-channel means over a g x g grid. Feature index is
// (cell_y * g + cell_x) * channels + channel; the vjp spreads each upstream
// entry uniformly over its cell.
class PatchFeatures final : public FeatureExtractor {
public:
  PatchFeatures(int grid, int channels);
  int grid() const { return grid_; }
  int feature_count() const override { return grid_ * grid_ * channels_; }
  Eigen::VectorXd extract(const ImageBuf& img) const override;
  Array3 vjp(const ImageBuf& img, const Eigen::VectorXd& upstream) const override;

private:
  int grid_;
  int channels_;
};

// pixels = clamp01(sigmoid(A * flatten(w) + c)); A has full column rank.
class LinearGenerator final : public GeneratorSpec {
public:
  LinearGenerator(Eigen::MatrixXd weight, Eigen::VectorXd bias, int layers,
                  int dim, int out_size, int channels);

  std::pair<int, int> latent_shape() const override { return {layers_, dim_}; }
  int out_size() const override { return out_size_; }
  int channels() const override { return channels_; }
  ImageBuf generate(const LatentCode& w) const override;
  RowMatrixXd vjp(const LatentCode& w, const Array3& upstream) const override;

  const Eigen::MatrixXd& weight() const { return weight_; }
  const Eigen::VectorXd& bias() const { return bias_; }

private:
  Eigen::MatrixXd weight_;  // (out_size^2 * channels) x (layers * dim)
  Eigen::VectorXd bias_;
  int layers_, dim_, out_size_, channels_;
};

// Two-layer network: sigmoid(W2 * tanh(W1 * x + b1) + b2 + bypass .* <d, x>).
// W1's rows are orthogonal to the planted direction d and the bypass gain is
// non-negative (0.5 on the central quarter), so the planted statistic is
// strictly monotone along d for every latent.
class MlpGenerator final : public GeneratorSpec {
public:
  MlpGenerator(Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::MatrixXd w2,
               Eigen::VectorXd b2, Eigen::VectorXd bypass_gain,
               Eigen::VectorXd planted_flat, int layers, int dim, int out_size,
               int channels);

  std::pair<int, int> latent_shape() const override { return {layers_, dim_}; }
  int out_size() const override { return out_size_; }
  int channels() const override { return channels_; }
  ImageBuf generate(const LatentCode& w) const override;
  RowMatrixXd vjp(const LatentCode& w, const Array3& upstream) const override;

  const Eigen::MatrixXd& hidden_weight() const { return w1_; }
  const Eigen::VectorXd& hidden_bias() const { return b1_; }
  const Eigen::MatrixXd& out_weight() const { return w2_; }
  const Eigen::VectorXd& out_bias() const { return b2_; }
  const Eigen::VectorXd& bypass_gain() const { return bypass_; }

private:
  Eigen::MatrixXd w1_;       // hidden x (layers * dim)
  Eigen::VectorXd b1_;
  Eigen::MatrixXd w2_;       // pixels x hidden
  Eigen::VectorXd b2_;
  Eigen::VectorXd bypass_;   // pixels
  Eigen::VectorXd planted_;  // layers * dim, unit norm
  int layers_, dim_, out_size_, channels_;
};

enum class WorldKind : std::uint8_t { linear = 0, mlp = 1 };

struct WorldConfig {
  WorldKind kind = WorldKind::linear;
  int layers = 4;
  int dim = 16;
  int out_size = 64;
  int channels = 1;
  int hidden = 32;  // mlp only
  std::uint64_t seed = 0;
};

// Seeded synthetic world: a generator with a planted unit direction d such
// that the scalar statistic (mean intensity of the central quarter) is
// strictly increasing along d. All parameters derive from config.seed via
// one Pcg64 stream; identical configs produce bit-identical worlds.
class SyntheticWorld {
public:
  static SyntheticWorld create(const WorldConfig& cfg);

  const WorldConfig& config() const { return cfg_; }
  const GeneratorSpec& generator() const;
  std::shared_ptr<const GeneratorSpec> generator_ptr() const;
  const LinearGenerator* linear() const { return lin_.get(); }
  const RowMatrixXd& planted_direction() const { return planted_; }
  double statistic(const ImageBuf& img) const { return mean_central_quarter(img); }

  // GEN1 file: magic "GEN1", u16 version=1, u8 kind, u8 channels, u32 L,
  // u32 D, u32 out_size, u32 hidden, u64 seed, then f32 LE dumps: planted
  // direction (row-major), and the generator parameters in declaration order.
  void save(const std::string& path) const;
  static SyntheticWorld load(const std::string& path);

private:
  SyntheticWorld() = default;

  WorldConfig cfg_;
  RowMatrixXd planted_;
  std::shared_ptr<LinearGenerator> lin_;
  std::shared_ptr<MlpGenerator> mlp_;
};

}  // namespace invedit
