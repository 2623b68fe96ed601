// SPDX-License-Identifier: Apache-2.0
//
// Binary network checkpoint:
//   "SRISQNET" magic, u32 version, network dimensions, then per tensor its name,
//   rank, dims and little-endian float64 values; a trailing FNV-1a 64 checksum
//   covers every preceding byte.

#pragma once

#include "starris/nn/network.hpp"

#include <iosfwd>
#include <string>

namespace starris::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string encode_checkpoint(const NetworkSpec& spec, const ParamSet& params);
// Throws FormatError on bad magic, version, truncation or checksum mismatch.
void decode_checkpoint(const std::string& bytes, NetworkSpec& spec, ParamSet& params);

void save_checkpoint(const std::string& path, const QNetwork& net);
QNetwork load_checkpoint(const std::string& path);

}  // namespace starris::nn
