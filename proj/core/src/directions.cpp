#include "invedit/directions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

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

double dot_flat(const RowMatrixXd& a, const RowMatrixXd& b) {
  return (a.array() * b.array()).sum();
}

double accuracy(const RowMatrixXd& a, double b,
                const std::vector<const std::pair<LatentCode, int>*>& recs) {
  if (recs.empty()) return 0.0;
  int hits = 0;
  for (const auto* r : recs) {
    const int pred = sigmoid(dot_flat(a, r->first.values) + b) > 0.5 ? 1 : 0;
    hits += pred == r->second;
  }
  return static_cast<double>(hits) / static_cast<double>(recs.size());
}

}  // namespace

LogisticFit train_logistic(const LabeledLatentDataset& ds,
                           const LogisticConfig& cfg) {
  const int n = static_cast<int>(ds.records.size());
  if (n < 2) raise(ErrorCode::TooFewSamples, "need at least 2 labeled codes");
  if (cfg.epochs < 1) raise(ErrorCode::TooSmall, "epochs must be >= 1");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0))
    raise(ErrorCode::TooSmall, "train fraction must lie in (0,1)");

  bool seen[2] = {false, false};
  for (const auto& r : ds.records) {
    if (r.second != 0 && r.second != 1)
      raise(ErrorCode::BadFormat, "labels must be 0 or 1");
    if (!r.first.values.allFinite())
      raise(ErrorCode::NonFiniteValue, "latent code has non-finite entries");
    if (!ds.records.front().first.same_shape(r.first))
      raise(ErrorCode::ShapeMismatch, "latent codes differ in shape");
    seen[r.second] = true;
  }
  if (!seen[0] || !seen[1])
    raise(ErrorCode::SingleClassDataset, "both labels must be present");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Pcg64 rng(cfg.seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  const int n_train = std::clamp(
      static_cast<int>(std::floor(cfg.train_fraction * n)), 1, n - 1);

  std::vector<const std::pair<LatentCode, int>*> train, test;
  for (int i = 0; i < n; ++i)
    (i < n_train ? train : test).push_back(&ds.records[order[i]]);

  const int layers = ds.records.front().first.layers();
  const int dim = ds.records.front().first.dim();
  RowMatrixXd a = RowMatrixXd::Zero(layers, dim);
  double b = 0.0;
  RowMatrixXd grad_a(layers, dim);
  const double inv = 1.0 / static_cast<double>(train.size());

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    grad_a.setZero();
    double grad_b = 0.0;
    for (const auto* r : train) {
      const double p = sigmoid(dot_flat(a, r->first.values) + b);
      const double e = p - r->second;
      grad_a += e * r->first.values;
      grad_b += e;
    }
    grad_a = inv * grad_a + cfg.l2 * a;
    grad_b *= inv;
    a -= cfg.learning_rate * grad_a;
    b -= cfg.learning_rate * grad_b;
  }

  LogisticFit fit;
  fit.a_raw = a;
  fit.b = b;
  fit.train_accuracy = accuracy(a, b, train);
  fit.test_accuracy = accuracy(a, b, test);
  return fit;
}

AttributeDirection extract_direction(const RowMatrixXd& a_raw, double b,
                                     const std::string& name) {
  if (!a_raw.allFinite()) raise(ErrorCode::NonFiniteValue, "direction has non-finite entries");
  const double norm = std::sqrt((a_raw.array() * a_raw.array()).sum());
  if (norm <= 0.0) raise(ErrorCode::ZeroVector, "cannot normalize a zero direction");
  AttributeDirection dir;
  dir.a = a_raw / norm;
  dir.b = b / norm;
  dir.name = name;
  return dir;
}

double classify(const AttributeDirection& dir, const LatentCode& w) {
  if (dir.layers() != w.layers() || dir.dim() != w.dim())
    raise(ErrorCode::ShapeMismatch, "direction/latent shape mismatch");
  return sigmoid(dot_flat(dir.a, w.values) + dir.b);
}

double cosine_similarity(const AttributeDirection& d1,
                         const AttributeDirection& d2) {
  if (d1.layers() != d2.layers() || d1.dim() != d2.dim())
    raise(ErrorCode::ShapeMismatch, "directions differ in shape");
  const double n1 = std::sqrt(dot_flat(d1.a, d1.a));
  const double n2 = std::sqrt(dot_flat(d2.a, d2.a));
  if (n1 <= 0.0 || n2 <= 0.0) raise(ErrorCode::ZeroVector, "zero direction");
  return std::clamp(dot_flat(d1.a, d2.a) / (n1 * n2), -1.0, 1.0);
}

RowMatrixXd correlation_matrix(const std::vector<AttributeDirection>& dirs) {
  if (dirs.size() < 2) raise(ErrorCode::TooFewSamples, "need at least 2 directions");
  const int k = static_cast<int>(dirs.size());
  RowMatrixXd m(k, k);
  for (int i = 0; i < k; ++i) {
    m(i, i) = 1.0;
    for (int j = i + 1; j < k; ++j) {
      const double c = cosine_similarity(dirs[i], dirs[j]);
      m(i, j) = c;
      m(j, i) = c;
    }
  }
  return m;
}

AttributeDirection project_subtract(const AttributeDirection& a,
                                    const std::vector<AttributeDirection>& xs,
                                    bool iterate) {
  RowMatrixXd v = a.a;
  for (const auto& x : xs)
    if (x.layers() != a.layers() || x.dim() != a.dim())
      raise(ErrorCode::ShapeMismatch, "directions differ in shape");

  // Sequential sweeps converge geometrically; clustered direction sets can
  // need many passes, so the cap is generous. The tolerance is measured
  // against the shrinking residual so it still holds after renormalization.
  const double tol = 1e-10;
  const int max_passes = iterate ? 100000 : 1;
  for (int pass = 0; pass < max_passes; ++pass) {
    for (const auto& x : xs) {
      const double xx = dot_flat(x.a, x.a);
      if (xx <= 0.0) raise(ErrorCode::ZeroVector, "zero direction in subtraction list");
      v -= (dot_flat(v, x.a) / xx) * x.a;
    }
    if (!iterate) break;
    const double vnorm = std::sqrt(dot_flat(v, v));
    if (vnorm < 1e-9) break;
    double worst = 0.0;
    for (const auto& x : xs) worst = std::max(worst, std::abs(dot_flat(v, x.a)));
    if (worst <= 0.5 * tol * vnorm) break;
  }

  const double norm = std::sqrt(dot_flat(v, v));
  if (norm < 1e-9)
    raise(ErrorCode::DegenerateResult, "direction lies in the span of the subtracted set");
  AttributeDirection out;
  out.a = v / norm;
  out.b = 0.0;
  out.name = a.name;
  return out;
}

std::string encode_direction(const AttributeDirection& dir) {
  if (dir.name.size() > 0xffff) raise(ErrorCode::BadFormat, "direction name too long");
  std::string out;
  out += "DIR1";
  wire::put_u16(out, 1);
  wire::put_u32(out, static_cast<std::uint32_t>(dir.layers()));
  wire::put_u32(out, static_cast<std::uint32_t>(dir.dim()));
  for (int i = 0; i < dir.layers(); ++i)
    for (int j = 0; j < dir.dim(); ++j)
      wire::put_f32(out, static_cast<float>(dir.a(i, j)));
  wire::put_f32(out, static_cast<float>(dir.b));
  wire::put_u16(out, static_cast<std::uint16_t>(dir.name.size()));
  out += dir.name;
  return out;
}

AttributeDirection decode_direction(const std::string& bytes,
                                    const std::string& context) {
  wire::Reader r(bytes, context);
  r.expect_magic("DIR1");
  if (r.get_u16() != 1) raise(ErrorCode::BadFormat, context + ": unsupported DIR1 version");
  const std::uint32_t layers = r.get_u32();
  const std::uint32_t dim = r.get_u32();
  if (layers == 0 || dim == 0 || layers > (1u << 20) || dim > (1u << 20))
    raise(ErrorCode::BadFormat, context + ": bad DIR1 shape");
  AttributeDirection dir;
  dir.a.resize(layers, dim);
  for (std::uint32_t i = 0; i < layers; ++i)
    for (std::uint32_t j = 0; j < dim; ++j) dir.a(i, j) = r.get_f32();
  dir.b = r.get_f32();
  const std::uint16_t len = r.get_u16();
  dir.name = r.get_bytes(len);
  r.require_end();
  // f32 storage wiggles the norm slightly; values are kept verbatim so a
  // load/save cycle is byte-exact.
  const double norm = std::sqrt((dir.a.array() * dir.a.array()).sum());
  if (std::abs(norm - 1.0) > 1e-4)
    raise(ErrorCode::BadFormat, context + ": direction not unit norm");
  return dir;
}

void save_direction(const std::string& path, const AttributeDirection& dir) {
  wire::write_file(path, encode_direction(dir));
}

AttributeDirection load_direction(const std::string& path) {
  return decode_direction(wire::read_file(path), path);
}

}  // namespace invedit
