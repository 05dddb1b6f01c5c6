#include "invedit/generator.hpp"

#include <cmath>

#include "invedit/error.hpp"
#include "invedit/prng.hpp"
#include "invedit/wire.hpp"

namespace invedit {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Eigen::Map<const Eigen::VectorXd> flat(const LatentCode& w) {
  return {w.values.data(), w.values.size()};
}

void check_latent_shape(const LatentCode& w, int layers, int dim) {
  if (w.layers() != layers || w.dim() != dim)
    raise(ErrorCode::ShapeMismatch, "latent shape does not match generator");
}

void check_upstream_shape(const Array3& u, int n, int channels) {
  if (u.h != n || u.w != n || u.c != channels)
    raise(ErrorCode::ShapeMismatch, "upstream shape does not match generator output");
}

RowMatrixXd to_layered(const Eigen::VectorXd& g, int layers, int dim) {
  RowMatrixXd out(layers, dim);
  Eigen::Map<Eigen::VectorXd>(out.data(), out.size()) = g;
  return out;
}

ImageBuf image_from_logits(const Eigen::VectorXd& logits, int n, int channels) {
  Array3 a(n, n, channels);
  for (Eigen::Index i = 0; i < logits.size(); ++i) a.v[i] = sigmoid(logits[i]);
  // sigmoid already lands in [0,1]; construction clamps only fp boundary hits
  return ImageBuf(std::move(a));
}

Eigen::VectorXd sigmoid_grad_times(const Array3& upstream, const Eigen::VectorXd& logits) {
  Eigen::VectorXd t(logits.size());
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double s = sigmoid(logits[i]);
    t[i] = upstream.v[i] * s * (1.0 - s);
  }
  return t;
}

bool central_quarter_pixel(int p, int n, int channels) {
  const int pixel = p / channels;
  const int y = pixel / n, x = pixel % n;
  const int lo = n / 4, hi = n / 4 + n / 2;
  return y >= lo && y < hi && x >= lo && x < hi;
}

}  // namespace

// ---------------------------------------------------------------- patches

PatchFeatures::PatchFeatures(int grid, int channels) : grid_(grid), channels_(channels) {
  if (grid < 1) raise(ErrorCode::BadGrid, "grid must be >= 1");
  if (channels != 1 && channels != 3)
    raise(ErrorCode::ShapeMismatch, "channels must be 1 or 3");
}

Eigen::VectorXd PatchFeatures::extract(const ImageBuf& img) const {
  const int n = img.height();
  if (img.width() != n || img.channels() != channels_)
    raise(ErrorCode::ShapeMismatch, "image shape does not match extractor");
  if (n % grid_ != 0) raise(ErrorCode::BadGrid, "grid must divide image size");
  const int cell = n / grid_;
  const double inv = 1.0 / (static_cast<double>(cell) * cell);

  Eigen::VectorXd f(feature_count());
  for (int gy = 0; gy < grid_; ++gy)
    for (int gx = 0; gx < grid_; ++gx)
      for (int ch = 0; ch < channels_; ++ch) {
        double s = 0.0;
        for (int dy = 0; dy < cell; ++dy)
          for (int dx = 0; dx < cell; ++dx)
            s += img.at(gy * cell + dy, gx * cell + dx, ch);
        f[(gy * grid_ + gx) * channels_ + ch] = s * inv;
      }
  return f;
}

Array3 PatchFeatures::vjp(const ImageBuf& img, const Eigen::VectorXd& upstream) const {
  const int n = img.height();
  if (img.width() != n || img.channels() != channels_)
    raise(ErrorCode::ShapeMismatch, "image shape does not match extractor");
  if (n % grid_ != 0) raise(ErrorCode::BadGrid, "grid must divide image size");
  if (upstream.size() != feature_count())
    raise(ErrorCode::ShapeMismatch, "upstream length does not match feature count");
  const int cell = n / grid_;
  const double inv = 1.0 / (static_cast<double>(cell) * cell);

  Array3 g(n, n, channels_);
  for (int gy = 0; gy < grid_; ++gy)
    for (int gx = 0; gx < grid_; ++gx)
      for (int ch = 0; ch < channels_; ++ch) {
        const double v = upstream[(gy * grid_ + gx) * channels_ + ch] * inv;
        for (int dy = 0; dy < cell; ++dy)
          for (int dx = 0; dx < cell; ++dx) g.at(gy * cell + dy, gx * cell + dx, ch) = v;
      }
  return g;
}

// ----------------------------------------------------------------- linear

LinearGenerator::LinearGenerator(Eigen::MatrixXd weight, Eigen::VectorXd bias,
                                 int layers, int dim, int out_size, int channels)
    : weight_(std::move(weight)), bias_(std::move(bias)), layers_(layers),
      dim_(dim), out_size_(out_size), channels_(channels) {
  const Eigen::Index pixels =
      static_cast<Eigen::Index>(out_size) * out_size * channels;
  if (weight_.rows() != pixels || weight_.cols() != Eigen::Index(layers) * dim ||
      bias_.size() != pixels)
    raise(ErrorCode::ShapeMismatch, "linear generator parameter shapes inconsistent");
}

ImageBuf LinearGenerator::generate(const LatentCode& w) const {
  check_latent_shape(w, layers_, dim_);
  const Eigen::VectorXd logits = weight_ * flat(w) + bias_;
  return image_from_logits(logits, out_size_, channels_);
}

RowMatrixXd LinearGenerator::vjp(const LatentCode& w, const Array3& upstream) const {
  check_latent_shape(w, layers_, dim_);
  check_upstream_shape(upstream, out_size_, channels_);
  const Eigen::VectorXd logits = weight_ * flat(w) + bias_;
  const Eigen::VectorXd t = sigmoid_grad_times(upstream, logits);
  return to_layered(weight_.transpose() * t, layers_, dim_);
}

// -------------------------------------------------------------------- mlp

MlpGenerator::MlpGenerator(Eigen::MatrixXd w1, Eigen::VectorXd b1,
                           Eigen::MatrixXd w2, Eigen::VectorXd b2,
                           Eigen::VectorXd bypass_gain, Eigen::VectorXd planted_flat,
                           int layers, int dim, int out_size, int channels)
    : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(std::move(b2)),
      bypass_(std::move(bypass_gain)), planted_(std::move(planted_flat)),
      layers_(layers), dim_(dim), out_size_(out_size), channels_(channels) {
  const Eigen::Index pixels =
      static_cast<Eigen::Index>(out_size) * out_size * channels;
  const Eigen::Index k = static_cast<Eigen::Index>(layers) * dim;
  if (w1_.cols() != k || b1_.size() != w1_.rows() || w2_.rows() != pixels ||
      w2_.cols() != w1_.rows() || b2_.size() != pixels || bypass_.size() != pixels ||
      planted_.size() != k)
    raise(ErrorCode::ShapeMismatch, "mlp generator parameter shapes inconsistent");
}

ImageBuf MlpGenerator::generate(const LatentCode& w) const {
  check_latent_shape(w, layers_, dim_);
  const Eigen::VectorXd x = flat(w);
  const Eigen::VectorXd h = (w1_ * x + b1_).array().tanh();
  const Eigen::VectorXd logits = w2_ * h + b2_ + bypass_ * planted_.dot(x);
  return image_from_logits(logits, out_size_, channels_);
}

RowMatrixXd MlpGenerator::vjp(const LatentCode& w, const Array3& upstream) const {
  check_latent_shape(w, layers_, dim_);
  check_upstream_shape(upstream, out_size_, channels_);
  const Eigen::VectorXd x = flat(w);
  const Eigen::VectorXd h = (w1_ * x + b1_).array().tanh();
  const Eigen::VectorXd logits = w2_ * h + b2_ + bypass_ * planted_.dot(x);
  const Eigen::VectorXd g2 = sigmoid_grad_times(upstream, logits);
  const Eigen::VectorXd gh =
      (w2_.transpose() * g2).cwiseProduct((1.0 - h.array().square()).matrix());
  const Eigen::VectorXd gx = w1_.transpose() * gh + planted_ * bypass_.dot(g2);
  return to_layered(gx, layers_, dim_);
}

// ------------------------------------------------------------------ world

SyntheticWorld SyntheticWorld::create(const WorldConfig& cfg) {
  if (cfg.layers < 1 || cfg.dim < 1 || cfg.out_size < 4 ||
      (cfg.channels != 1 && cfg.channels != 3) ||
      (cfg.kind == WorldKind::mlp && cfg.hidden < 1))
    raise(ErrorCode::ShapeMismatch, "bad world config");

  const int k = cfg.layers * cfg.dim;
  const int pixels = cfg.out_size * cfg.out_size * cfg.channels;
  Pcg64 rng(cfg.seed);

  // Draw order: planted direction, then generator parameters.
  Eigen::VectorXd d(k);
  for (int i = 0; i < k; ++i) d[i] = rng.next_normal();
  d.normalize();

  SyntheticWorld world;
  world.cfg_ = cfg;
  world.planted_ = to_layered(d, cfg.layers, cfg.dim);

  const double margin = 0.5;  // planted slope on central-quarter logits

  if (cfg.kind == WorldKind::linear) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    Eigen::MatrixXd a(pixels, k);
    for (int i = 0; i < pixels; ++i)
      for (int j = 0; j < k; ++j) a(i, j) = rng.next_normal() * scale;
    for (int i = 0; i < pixels; ++i)
      if (central_quarter_pixel(i, cfg.out_size, cfg.channels))
        a.row(i) += (margin - a.row(i).dot(d)) * d.transpose();
    Eigen::VectorXd c(pixels);
    for (int i = 0; i < pixels; ++i) c[i] = 0.25 * rng.next_normal();
    world.lin_ = std::make_shared<LinearGenerator>(std::move(a), std::move(c),
                                                   cfg.layers, cfg.dim,
                                                   cfg.out_size, cfg.channels);
  } else {
    const double s1 = 1.0 / std::sqrt(static_cast<double>(k));
    Eigen::MatrixXd w1(cfg.hidden, k);
    for (int i = 0; i < cfg.hidden; ++i)
      for (int j = 0; j < k; ++j) w1(i, j) = rng.next_normal() * s1;
    for (int i = 0; i < cfg.hidden; ++i)
      w1.row(i) -= w1.row(i).dot(d) * d.transpose();  // rows orthogonal to d
    Eigen::VectorXd b1(cfg.hidden);
    for (int i = 0; i < cfg.hidden; ++i) b1[i] = 0.1 * rng.next_normal();
    const double s2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden));
    Eigen::MatrixXd w2(pixels, cfg.hidden);
    for (int i = 0; i < pixels; ++i)
      for (int j = 0; j < cfg.hidden; ++j) w2(i, j) = rng.next_normal() * s2;
    Eigen::VectorXd b2(pixels);
    for (int i = 0; i < pixels; ++i) b2[i] = 0.25 * rng.next_normal();
    Eigen::VectorXd bypass = Eigen::VectorXd::Zero(pixels);
    for (int i = 0; i < pixels; ++i)
      if (central_quarter_pixel(i, cfg.out_size, cfg.channels)) bypass[i] = margin;
    world.mlp_ = std::make_shared<MlpGenerator>(
        std::move(w1), std::move(b1), std::move(w2), std::move(b2),
        std::move(bypass), d, cfg.layers, cfg.dim, cfg.out_size, cfg.channels);
  }
  return world;
}

const GeneratorSpec& SyntheticWorld::generator() const {
  if (lin_) return *lin_;
  return *mlp_;
}

std::shared_ptr<const GeneratorSpec> SyntheticWorld::generator_ptr() const {
  if (lin_) return lin_;
  return mlp_;
}

namespace {

void put_matrix(std::string& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      wire::put_f32(out, static_cast<float>(m(i, j)));
}

void put_vector(std::string& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    wire::put_f32(out, static_cast<float>(v[i]));
}

Eigen::MatrixXd get_matrix(wire::Reader& r, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = r.get_f32();
  return m;
}

Eigen::VectorXd get_vector(wire::Reader& r, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = r.get_f32();
  return v;
}

}  // namespace

void SyntheticWorld::save(const std::string& path) const {
  std::string out;
  out += "GEN1";
  wire::put_u16(out, 1);
  out.push_back(static_cast<char>(cfg_.kind));
  out.push_back(static_cast<char>(cfg_.channels));
  wire::put_u32(out, static_cast<std::uint32_t>(cfg_.layers));
  wire::put_u32(out, static_cast<std::uint32_t>(cfg_.dim));
  wire::put_u32(out, static_cast<std::uint32_t>(cfg_.out_size));
  wire::put_u32(out, static_cast<std::uint32_t>(cfg_.kind == WorldKind::mlp ? cfg_.hidden : 0));
  wire::put_u64(out, cfg_.seed);
  put_matrix(out, planted_);
  if (lin_) {
    put_matrix(out, lin_->weight());
    put_vector(out, lin_->bias());
  } else {
    put_matrix(out, mlp_->hidden_weight());
    put_vector(out, mlp_->hidden_bias());
    put_matrix(out, mlp_->out_weight());
    put_vector(out, mlp_->out_bias());
    put_vector(out, mlp_->bypass_gain());
  }
  wire::write_file(path, out);
}

SyntheticWorld SyntheticWorld::load(const std::string& path) {
  const std::string bytes = wire::read_file(path);
  wire::Reader r(bytes, path);
  r.expect_magic("GEN1");
  if (r.get_u16() != 1) raise(ErrorCode::BadFormat, path + ": unsupported GEN1 version");
  WorldConfig cfg;
  const std::uint8_t kind = r.get_u8();
  if (kind > 1) raise(ErrorCode::BadFormat, path + ": unknown generator kind");
  cfg.kind = static_cast<WorldKind>(kind);
  cfg.channels = r.get_u8();
  cfg.layers = static_cast<int>(r.get_u32());
  cfg.dim = static_cast<int>(r.get_u32());
  cfg.out_size = static_cast<int>(r.get_u32());
  cfg.hidden = static_cast<int>(r.get_u32());
  cfg.seed = r.get_u64();
  if (cfg.layers < 1 || cfg.dim < 1 || cfg.out_size < 4 ||
      (cfg.channels != 1 && cfg.channels != 3))
    raise(ErrorCode::BadFormat, path + ": bad GEN1 dimensions");

  const Eigen::Index k = static_cast<Eigen::Index>(cfg.layers) * cfg.dim;
  const Eigen::Index pixels =
      static_cast<Eigen::Index>(cfg.out_size) * cfg.out_size * cfg.channels;

  SyntheticWorld world;
  world.cfg_ = cfg;
  const Eigen::MatrixXd planted = get_matrix(r, cfg.layers, cfg.dim);
  world.planted_ = planted;
  const Eigen::Map<const Eigen::VectorXd> d(world.planted_.data(), k);
  if (std::abs(d.norm() - 1.0) > 1e-4)
    raise(ErrorCode::BadFormat, path + ": planted direction not unit norm");

  if (cfg.kind == WorldKind::linear) {
    Eigen::MatrixXd a = get_matrix(r, pixels, k);
    Eigen::VectorXd c = get_vector(r, pixels);
    world.lin_ = std::make_shared<LinearGenerator>(std::move(a), std::move(c),
                                                   cfg.layers, cfg.dim,
                                                   cfg.out_size, cfg.channels);
  } else {
    if (cfg.hidden < 1) raise(ErrorCode::BadFormat, path + ": bad hidden size");
    Eigen::MatrixXd w1 = get_matrix(r, cfg.hidden, k);
    Eigen::VectorXd b1 = get_vector(r, cfg.hidden);
    Eigen::MatrixXd w2 = get_matrix(r, pixels, cfg.hidden);
    Eigen::VectorXd b2 = get_vector(r, pixels);
    Eigen::VectorXd bypass = get_vector(r, pixels);
    world.mlp_ = std::make_shared<MlpGenerator>(
        std::move(w1), std::move(b1), std::move(w2), std::move(b2),
        std::move(bypass), Eigen::VectorXd(d), cfg.layers, cfg.dim, cfg.out_size,
        cfg.channels);
  }
  r.require_end();
  return world;
}

}  // namespace invedit
