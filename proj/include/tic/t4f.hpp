#pragma once

#include <cstdint>
#include <string>

#include "tic/tensor.hpp"

namespace tic {

// T4F: raw tensor exchange format.
//   8-byte magic "T4F\0v001", 1 byte dtype (0 = f32, 1 = f64),
//   4 little-endian u32 dims (B, C, H, W), then B*C*H*W little-endian values.
enum class Dtype : std::uint8_t { F32 = 0, F64 = 1 };

Dtype t4f_probe_dtype(const std::string& path);

void write_t4f(const std::string& path, const Tensor4<float>& t);
void write_t4f(const std::string& path, const Tensor4<double>& t);

// Reads a T4F file, converting the stored element type to T if they differ.
template <typename T>
Tensor4<T> read_t4f(const std::string& path);

}  // namespace tic
