#include "invedit/editing.hpp"

#include <cmath>

#include "invedit/error.hpp"

namespace invedit {

LayerMask LayerMask::all(int layers) { return first(layers); }

LayerMask LayerMask::first(int count) {
  LayerMask m;
  for (int i = 0; i < count; ++i) m.included.insert(i);
  return m;
}

LayerMask LayerMask::default_for(int layers) {
  if (layers < 1) raise(ErrorCode::TooSmall, "layer count must be >= 1");
  const int count = (8 * layers + 17) / 18;
  return first(count);
}

void validate_mask(const LayerMask& mask, int layers) {
  if (mask.included.empty()) raise(ErrorCode::EmptyInput, "layer mask is empty");
  for (int l : mask.included)
    if (l < 0 || l >= layers)
      raise(ErrorCode::BadIndexRange, "layer mask index out of range");
}

LatentCode edit_latent(const LatentCode& w, const EditSpec& spec) {
  if (spec.direction.layers() != w.layers() || spec.direction.dim() != w.dim())
    raise(ErrorCode::ShapeMismatch, "direction/latent shape mismatch");
  if (!std::isfinite(spec.alpha)) raise(ErrorCode::NonFiniteValue, "alpha must be finite");
  validate_mask(spec.mask, w.layers());
  LatentCode out = w;
  // alpha 0 must leave every bit alone, including negative zeros
  if (spec.alpha == 0.0) return out;
  for (int l : spec.mask.included)
    out.values.row(l) += spec.alpha * spec.direction.a.row(l);
  return out;
}

std::vector<LatentCode> sweep(const LatentCode& w, const AttributeDirection& dir,
                              const std::vector<double>& alphas,
                              const LayerMask& mask) {
  if (alphas.empty()) raise(ErrorCode::EmptyInput, "alpha list is empty");
  std::vector<LatentCode> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) out.push_back(edit_latent(w, {dir, alpha, mask}));
  return out;
}

LatentCode multi_edit(const LatentCode& w, const std::vector<EditSpec>& specs) {
  LatentCode out = w;
  for (const auto& s : specs) out = edit_latent(out, s);
  return out;
}

}  // namespace invedit
