#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "novelty/forest.hpp"

namespace novelty {

inline constexpr int kModelFormatVersion = 1;

// JSON model document:
//   format            "novelty-forest"
//   format_version    1
//   algorithm         "original" | "hst"
//   seed_mixing       kSeedMixingName
//   config            {n_trees, seed (decimal string), subsample_size,
//                      max_depth, root_rect_policy}
//   training          {n_dims, train_size, created_at}
//   root_rect         [[lo, hi], ...] or null
//   trees             nested node records
// Original nodes carry {rect, count} plus either split {dim, threshold} with
// left/right, or leaf kind and points. HST nodes carry {rect, count} plus
// either split_dim with left/right, or truncated.
std::string model_to_json(const Forest& forest);
void save_model(const Forest& forest, const std::filesystem::path& path);

// Throws FormatError on a version mismatch or a malformed document.
Forest model_from_json(const std::string& text);
Forest load_model(const std::filesystem::path& path);

}  // namespace novelty
