// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_OPERATOR_IO_HPP
#define PARTFLUX_OPERATOR_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include "partflux/surrogate.hpp"

namespace partflux
{

//
// Binary operator files, little-endian throughout:
//
//   "DMDF" | u32 version | u32 kind (1 factored, 2 dense) | u32 n_gamma, N_FS, k, K, N |
//   f64 mu1, mu2 | f64 eps | column-major f64 payload (P then Q, or A) | u64 FNV-1a
//
// The checksum covers every byte before it.
//
inline constexpr std::uint32_t kOperatorFormatVersion = 1;

std::uint64_t Fnv1a64(std::string_view bytes);

std::string SerializeOperator(const DmdFluxOperator &op);
DmdFluxOperator DeserializeOperator(std::string_view bytes);

void SaveOperator(const DmdFluxOperator &op, const std::filesystem::path &path);
DmdFluxOperator LoadOperator(const std::filesystem::path &path);

}  // namespace partflux

#endif  // PARTFLUX_OPERATOR_IO_HPP
