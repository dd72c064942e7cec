#pragma once

#include <string>

#include "rknet/network.hpp"

namespace rknet {

/// Model persistence: `<path>` holds a versioned binary header followed by
/// the little-endian 64-bit float payload (per layer K row-major then b,
/// then W row-major, then mu); `<path>.manifest.json` carries the shapes,
/// tableau and activation needed to rebuild the model.
void save_model(const ModelParams& m, const std::string& path);
ModelParams load_model(const std::string& path);

}  // namespace rknet
