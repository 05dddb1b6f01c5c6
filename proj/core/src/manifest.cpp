#include "invedit/manifest.hpp"

#include <set>
#include <sstream>

#include "invedit/error.hpp"
#include "invedit/wire.hpp"

namespace invedit {

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    std::istringstream ls(raw);
    Line line;
    line.number = number;
    std::string tok;
    while (ls >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void bad(const std::string& context, int line, const std::string& what) {
  raise(ErrorCode::BadFormat,
        context + ":" + std::to_string(line) + ": " + what);
}

double parse_num(const std::string& context, int line, const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    bad(context, line, "expected a number, got '" + tok + "'");
  }
}

int parse_int(const std::string& context, int line, const std::string& tok) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    bad(context, line, "expected an integer, got '" + tok + "'");
  }
}

void expect_header(const std::vector<Line>& lines, const std::string& context,
                   const std::string& kind) {
  if (lines.empty() || lines.front().tokens.size() != 2 ||
      lines.front().tokens[0] != kind || lines.front().tokens[1] != "1")
    raise(ErrorCode::BadFormat, context + ": expected header '" + kind + " 1'");
}

}  // namespace

AlignManifest parse_align_manifest(const std::string& text,
                                   const std::string& context) {
  const auto lines = tokenize(text);
  expect_header(lines, context, "invedit-align");

  AlignManifest m;
  std::set<std::string> seen;
  AlignEntry* cur = nullptr;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const std::string& key = l.tokens[0];
    if (key == "entry") {
      if (l.tokens.size() != 2) bad(context, l.number, "entry takes one path");
      if (!seen.insert(l.tokens[1]).second)
        bad(context, l.number, "duplicate image path '" + l.tokens[1] + "'");
      m.entries.push_back({});
      cur = &m.entries.back();
      cur->image = l.tokens[1];
      continue;
    }
    if (!cur) bad(context, l.number, "'" + key + "' before any entry");
    if (key == "box") {
      if (l.tokens.size() != 5) bad(context, l.number, "box takes 4 numbers");
      BoundingBox b;
      b.x0 = parse_num(context, l.number, l.tokens[1]);
      b.y0 = parse_num(context, l.number, l.tokens[2]);
      b.x1 = parse_num(context, l.number, l.tokens[3]);
      b.y1 = parse_num(context, l.number, l.tokens[4]);
      if (!(b.x0 < b.x1 && b.y0 < b.y1)) bad(context, l.number, "box must have positive extent");
      cur->boxes.push_back(b);
    } else if (key == "landmarks") {
      if (l.tokens.size() < 3 || l.tokens.size() % 2 == 0)
        bad(context, l.number, "landmarks takes coordinate pairs");
      LandmarkSet lm;
      if (cur->landmarks) lm = *cur->landmarks;  // keep an earlier eyes line
      lm.points.clear();
      for (std::size_t t = 1; t + 1 < l.tokens.size(); t += 2)
        lm.points.emplace_back(parse_num(context, l.number, l.tokens[t]),
                               parse_num(context, l.number, l.tokens[t + 1]));
      cur->landmarks = lm;
    } else if (key == "eyes") {
      if (l.tokens.size() != 5) bad(context, l.number, "eyes takes 4 indices");
      LandmarkSet lm = cur->landmarks.value_or(LandmarkSet{});
      lm.eye_left_begin = parse_int(context, l.number, l.tokens[1]);
      lm.eye_left_end = parse_int(context, l.number, l.tokens[2]);
      lm.eye_right_begin = parse_int(context, l.number, l.tokens[3]);
      lm.eye_right_end = parse_int(context, l.number, l.tokens[4]);
      cur->landmarks = lm;
    } else if (key == "label") {
      if (l.tokens.size() != 2) bad(context, l.number, "label takes one value");
      const int v = parse_int(context, l.number, l.tokens[1]);
      if (v != 0 && v != 1) bad(context, l.number, "label must be 0 or 1");
      cur->label = v;
    } else {
      bad(context, l.number, "unknown key '" + key + "'");
    }
  }
  return m;
}

AlignManifest load_align_manifest(const std::string& path) {
  return parse_align_manifest(wire::read_file(path), path);
}

std::vector<LabeledPath> parse_labels_manifest(const std::string& text,
                                               const std::string& context) {
  const auto lines = tokenize(text);
  expect_header(lines, context, "invedit-labels");
  std::vector<LabeledPath> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != 2) bad(context, l.number, "expected '<path> <label>'");
    const int v = parse_int(context, l.number, l.tokens[1]);
    if (v != 0 && v != 1) bad(context, l.number, "label must be 0 or 1");
    out.push_back({l.tokens[0], v});
  }
  return out;
}

std::vector<LabeledPath> load_labels_manifest(const std::string& path) {
  return parse_labels_manifest(wire::read_file(path), path);
}

std::vector<PathPair> parse_pairs_manifest(const std::string& text,
                                           const std::string& context) {
  const auto lines = tokenize(text);
  expect_header(lines, context, "invedit-pairs");
  std::vector<PathPair> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != 2) bad(context, l.number, "expected '<path-a> <path-b>'");
    out.push_back({l.tokens[0], l.tokens[1]});
  }
  return out;
}

std::vector<PathPair> load_pairs_manifest(const std::string& path) {
  return parse_pairs_manifest(wire::read_file(path), path);
}

}  // namespace invedit
