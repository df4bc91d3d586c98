//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_NEURAL_CHECKPOINT_HPP_
#define MOLRL_NEURAL_CHECKPOINT_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "molrl/neural/model.hpp"
#include "molrl/tokens.hpp"

namespace molrl {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelParams<float> params;
  Vocabulary vocab;
};

/// Layout: magic "MRLCKPT\0", u32 version, u32 vocab/embed/hidden/layers,
/// u32-length-prefixed vocabulary text, u32 array count, then per array a
/// u32-length-prefixed name, u32 rows, u32 cols and rows*cols float32 in
/// row-major order. All integers and floats little-endian.
std::string checkpoint_bytes(const ModelParams<float> &params,
                             const Vocabulary &vocab);
Checkpoint parse_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path &path,
                     const ModelParams<float> &params,
                     const Vocabulary &vocab);
Checkpoint load_checkpoint(const std::filesystem::path &path);

}  // namespace molrl

#endif  // MOLRL_NEURAL_CHECKPOINT_HPP_
