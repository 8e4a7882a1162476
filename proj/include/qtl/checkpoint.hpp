#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qtl/model.hpp"

namespace qtl {

// Binary layout, all integers and doubles little-endian:
//   "QTLSIM1"                          7-byte magic (carries the format version)
//   u8 mode                            0 dressed circuit, 1 pure VQC
//   u8 embedding                       0 angle, 1 dense angle, 2 amplitude
//   u8 rotation axis                   0 X, 1 Y, 2 Z
//   u8 angle-embedding axis            0 X, 1 Y
//   u32 input_dim, n_qubits, depth, n_classes
//   5 x { u64 count, count x f64 }     pre W, pre b, qparams, post W, post b
// Absent layers are written with count 0.

inline constexpr std::string_view kCheckpointMagic = "QTLSIM1";

std::string encode_checkpoint(const HybridModel& model);

/// Throws FormatError on bad magic, truncation, trailing bytes or shape mismatch.
HybridModel decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const HybridModel& model);
HybridModel load_checkpoint(const std::filesystem::path& path);

}  // namespace qtl
