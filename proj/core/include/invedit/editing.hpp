#pragma once

#include <set>
#include <vector>

#include "invedit/directions.hpp"
#include "invedit/latent.hpp"

namespace invedit {

// Layers the edit touches. The conventional choice on an 18-layer code is the
// first 8; default_for scales that ratio to other depths.
struct LayerMask {
  std::set<int> included;

  static LayerMask all(int layers);
  static LayerMask first(int count);
  // ceil(8 * layers / 18) leading layers; exactly {0..7} at layers=18.
  static LayerMask default_for(int layers);

  bool contains(int layer) const { return included.count(layer) != 0; }
};

void validate_mask(const LayerMask& mask, int layers);

struct EditSpec {
  AttributeDirection direction;
  double alpha = 0.0;
  LayerMask mask;
};

// w + alpha * a on masked rows; unmasked rows pass through untouched.
LatentCode edit_latent(const LatentCode& w, const EditSpec& spec);

std::vector<LatentCode> sweep(const LatentCode& w, const AttributeDirection& dir,
                              const std::vector<double>& alphas,
                              const LayerMask& mask);

// Left fold of edit_latent over specs. Empty list returns w.
LatentCode multi_edit(const LatentCode& w, const std::vector<EditSpec>& specs);

}  // namespace invedit
