#pragma once

#include <optional>
#include <string>
#include <vector>

#include "invedit/geometry.hpp"

namespace invedit {

// Line-oriented manifests. '#' starts a comment, blank lines are skipped,
// tokens are whitespace-separated (so paths must not contain spaces).
//
// Alignment manifest, header "invedit-align 1":
//   entry <image-path>
//   box <x0> <y0> <x1> <y1>            zero or more per entry
//   landmarks <x> <y> <x> <y> ...      coordinate pairs, one line
//   eyes <l0> <l1> <r0> <r1>           half-open landmark index ranges
//   label <0|1>
//
// Label manifest, header "invedit-labels 1": one "<path> <0|1>" per line.
// Pair manifest, header "invedit-pairs 1": one "<path-a> <path-b>" per line.

struct AlignEntry {
  std::string image;
  std::vector<BoundingBox> boxes;
  std::optional<LandmarkSet> landmarks;
  std::optional<int> label;
};

struct AlignManifest {
  std::vector<AlignEntry> entries;
};

AlignManifest parse_align_manifest(const std::string& text,
                                   const std::string& context);
AlignManifest load_align_manifest(const std::string& path);

struct LabeledPath {
  std::string path;
  int label = 0;
};

std::vector<LabeledPath> parse_labels_manifest(const std::string& text,
                                               const std::string& context);
std::vector<LabeledPath> load_labels_manifest(const std::string& path);

struct PathPair {
  std::string a;
  std::string b;
};

std::vector<PathPair> parse_pairs_manifest(const std::string& text,
                                           const std::string& context);
std::vector<PathPair> load_pairs_manifest(const std::string& path);

}  // namespace invedit
