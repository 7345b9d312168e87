#include "novelty/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "novelty/errors.hpp"

namespace novelty {
namespace {

using nlohmann::json;

constexpr const char* kFormatName = "novelty-forest";

json rect_to_json(const Hyperrectangle& r) {
  json out = json::array();
  for (const Interval& iv : r.intervals()) out.push_back({iv.lo, iv.hi});
  return out;
}

json point_to_json(const DataPoint& p) {
  json out = json::array();
  for (double x : p.coords()) out.push_back(x);
  return out;
}

const char* leaf_kind_name(LeafKind k) {
  switch (k) {
    case LeafKind::kIsolated: return "isolated";
    case LeafKind::kDuplicate: return "duplicate";
    case LeafKind::kTruncated: return "truncated";
  }
  return "isolated";
}

json node_to_json(const OriginalNode& node) {
  json out;
  out["rect"] = rect_to_json(node.rect);
  out["count"] = node.count;
  if (node.is_leaf()) {
    out["leaf"] = leaf_kind_name(node.leaf_kind);
    json points = json::array();
    for (const DataPoint& p : node.leaf_points) points.push_back(point_to_json(p));
    out["points"] = std::move(points);
  } else {
    out["split"] = {{"dim", node.rule->dim}, {"threshold", node.rule->threshold}};
    out["left"] = node_to_json(*node.left);
    out["right"] = node_to_json(*node.right);
  }
  return out;
}

json node_to_json(const HstNode& node) {
  json out;
  out["rect"] = rect_to_json(node.rect);
  out["count"] = node.sample_count;
  if (node.is_leaf()) {
    out["truncated"] = node.truncated;
  } else {
    out["split_dim"] = *node.split_dim;
    out["left"] = node_to_json(*node.left);
    out["right"] = node_to_json(*node.right);
  }
  return out;
}

// ---- loading -------------------------------------------------------------

[[noreturn]] void malformed(const std::string& what) {
  throw FormatError("malformed model: " + what);
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    malformed(std::string("missing field '") + key + "'");
  }
  return obj.at(key);
}

Hyperrectangle rect_from_json(const json& j, Closure closure,
                              std::size_t n_dims) {
  if (!j.is_array() || j.size() != n_dims) malformed("rect dimension");
  std::vector<Interval> intervals;
  for (const json& iv : j) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() ||
        !iv[1].is_number()) {
      malformed("rect interval");
    }
    intervals.emplace_back(iv[0].get<double>(), iv[1].get<double>(), closure);
  }
  return Hyperrectangle(std::move(intervals));
}

DataPoint point_from_json(const json& j, std::size_t n_dims) {
  if (!j.is_array() || j.size() != n_dims) malformed("leaf point dimension");
  std::vector<double> coords;
  for (const json& x : j) {
    if (!x.is_number()) malformed("leaf point coordinate");
    coords.push_back(x.get<double>());
  }
  return DataPoint(std::move(coords));
}

std::size_t size_field(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (!v.is_number_unsigned()) malformed(std::string("field '") + key + "'");
  return v.get<std::size_t>();
}

std::unique_ptr<OriginalNode> original_from_json(const json& j,
                                                 std::size_t n_dims) {
  auto node = std::make_unique<OriginalNode>();
  node->rect = rect_from_json(field(j, "rect"), Closure::kClosedBoth, n_dims);
  node->count = size_field(j, "count");
  if (j.contains("split")) {
    const json& split = j.at("split");
    const std::size_t dim = size_field(split, "dim");
    if (dim >= n_dims) malformed("split dimension out of range");
    const json& thr = field(split, "threshold");
    if (!thr.is_number()) malformed("split threshold");
    node->rule = SplitRule{dim, thr.get<double>()};
    node->left = original_from_json(field(j, "left"), n_dims);
    node->right = original_from_json(field(j, "right"), n_dims);
    if (node->left->count + node->right->count != node->count) {
      malformed("child counts do not add up");
    }
  } else {
    const std::string kind = field(j, "leaf").get<std::string>();
    if (kind == "isolated") node->leaf_kind = LeafKind::kIsolated;
    else if (kind == "duplicate") node->leaf_kind = LeafKind::kDuplicate;
    else if (kind == "truncated") node->leaf_kind = LeafKind::kTruncated;
    else malformed("unknown leaf kind '" + kind + "'");
    for (const json& p : field(j, "points")) {
      node->leaf_points.push_back(point_from_json(p, n_dims));
    }
    if (node->leaf_points.size() != node->count) {
      malformed("leaf point list does not match its count");
    }
  }
  return node;
}

std::unique_ptr<HstNode> hst_from_json(const json& j, std::size_t n_dims) {
  auto node = std::make_unique<HstNode>();
  node->rect = rect_from_json(field(j, "rect"), Closure::kHalfOpenRight, n_dims);
  node->sample_count = size_field(j, "count");
  if (j.contains("split_dim")) {
    const std::size_t dim = size_field(j, "split_dim");
    if (dim >= n_dims) malformed("split dimension out of range");
    node->split_dim = dim;
    node->left = hst_from_json(field(j, "left"), n_dims);
    node->right = hst_from_json(field(j, "right"), n_dims);
    if (!can_midpoint_split(node->rect, dim)) malformed("unsplittable cell");
    const auto [l, r] = midpoint_split(node->rect, dim);
    if (!(l == node->left->rect) || !(r == node->right->rect)) {
      malformed("children are not the midpoint halves of their parent");
    }
    if (node->left->sample_count + node->right->sample_count !=
        node->sample_count) {
      malformed("child counts do not add up");
    }
  } else {
    const json& t = field(j, "truncated");
    if (!t.is_boolean()) malformed("field 'truncated'");
    node->truncated = t.get<bool>();
  }
  return node;
}

std::optional<std::size_t> optional_size(const json& obj, const char* key) {
  const json& v = field(obj, key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number_unsigned()) malformed(std::string("field '") + key + "'");
  return v.get<std::size_t>();
}

}  // namespace

std::string model_to_json(const Forest& forest) {
  const ForestConfig& cfg = forest.config;
  json doc;
  doc["format"] = kFormatName;
  doc["format_version"] = kModelFormatVersion;
  doc["algorithm"] = to_string(cfg.algorithm);
  doc["seed_mixing"] = kSeedMixingName;

  json config;
  config["n_trees"] = cfg.n_trees;
  // A string keeps all 64 bits intact for readers that parse numbers as
  // doubles.
  config["seed"] = std::to_string(cfg.seed);
  config["subsample_size"] =
      cfg.subsample_size ? json(*cfg.subsample_size) : json(nullptr);
  config["max_depth"] = cfg.max_depth ? json(*cfg.max_depth) : json(nullptr);
  if (const auto* e = std::get_if<ExplicitRoot>(&cfg.root_rect_policy)) {
    config["root_rect_policy"] = {{"kind", "explicit"},
                                  {"rect", rect_to_json(e->rect)}};
  } else {
    config["root_rect_policy"] = {
        {"kind", "padded"},
        {"pad_fraction", std::get<PaddedRoot>(cfg.root_rect_policy).pad_fraction}};
  }
  doc["config"] = std::move(config);

  doc["training"] = {{"n_dims", forest.n_dims},
                     {"train_size", forest.train_size},
                     {"created_at", forest.created_at}};
  doc["root_rect"] =
      forest.root_rect ? rect_to_json(*forest.root_rect) : json(nullptr);

  json trees = json::array();
  for (const Tree& tree : forest.trees) {
    std::visit([&](const auto& t) { trees.push_back(node_to_json(t.root())); },
               tree);
  }
  doc["trees"] = std::move(trees);
  return doc.dump(1) + "\n";
}

void save_model(const Forest& forest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << model_to_json(forest);
  if (!out) throw FormatError("failed writing " + path.string());
}

Forest model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (field(doc, "format") != kFormatName) malformed("unexpected format name");
    const json& version = field(doc, "format_version");
    if (!version.is_number_integer() ||
        version.get<int>() != kModelFormatVersion) {
      throw FormatError("unsupported model format_version " + version.dump() +
                        " (this build reads version " +
                        std::to_string(kModelFormatVersion) + ")");
    }

    Forest forest;
    ForestConfig& cfg = forest.config;
    cfg.algorithm = parse_algorithm(field(doc, "algorithm").get<std::string>());
    const json& config = field(doc, "config");
    cfg.n_trees = size_field(config, "n_trees");
    cfg.seed = std::stoull(field(config, "seed").get<std::string>());
    cfg.subsample_size = optional_size(config, "subsample_size");
    cfg.max_depth = optional_size(config, "max_depth");

    const json& training = field(doc, "training");
    forest.n_dims = size_field(training, "n_dims");
    forest.train_size = size_field(training, "train_size");
    forest.created_at = field(training, "created_at").get<std::string>();
    if (forest.n_dims == 0) malformed("n_dims must be positive");

    const json& policy = field(config, "root_rect_policy");
    const std::string kind = field(policy, "kind").get<std::string>();
    if (kind == "explicit") {
      cfg.root_rect_policy = ExplicitRoot{rect_from_json(
          field(policy, "rect"), Closure::kHalfOpenRight, forest.n_dims)};
    } else if (kind == "padded") {
      cfg.root_rect_policy =
          PaddedRoot{field(policy, "pad_fraction").get<double>()};
    } else {
      malformed("unknown root_rect_policy kind '" + kind + "'");
    }

    const json& root = field(doc, "root_rect");
    if (!root.is_null()) {
      forest.root_rect =
          rect_from_json(root, Closure::kHalfOpenRight, forest.n_dims);
    }
    if (cfg.algorithm == Algorithm::kHst && !forest.root_rect) {
      malformed("HST model without root_rect");
    }

    const json& trees = field(doc, "trees");
    if (!trees.is_array() || trees.size() != cfg.n_trees) {
      malformed("tree count does not match n_trees");
    }
    const std::size_t per_tree = cfg.subsample_size.value_or(forest.train_size);
    for (const json& t : trees) {
      if (size_field(t, "count") != per_tree) {
        malformed("tree sample count does not match the configuration");
      }
      if (cfg.algorithm == Algorithm::kOriginal) {
        forest.trees.emplace_back(std::in_place_type<OriginalTree>,
                                  original_from_json(t, forest.n_dims),
                                  forest.n_dims, forest.train_size);
      } else {
        auto node = hst_from_json(t, forest.n_dims);
        if (!(node->rect == *forest.root_rect)) {
          malformed("tree root differs from the forest root_rect");
        }
        forest.trees.emplace_back(std::in_place_type<HalfSpaceTree>,
                                  std::move(node), forest.n_dims,
                                  forest.train_size);
      }
    }
    return forest;
  } catch (const FormatError&) {
    throw;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  } catch (const Error& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  }
}

Forest load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace novelty
