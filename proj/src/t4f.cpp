#include "tic/t4f.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace tic {

static_assert(std::endian::native == std::endian::little,
              "T4F I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'T', '4', 'F', '\0', 'v', '0', '0', '1'};

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

template <typename T>
void write_t4f_impl(const std::string& path, const Tensor4<T>& t, Dtype dtype) {
  if (t.empty()) throw IoError("write_t4f: refusing to write empty tensor to " + path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_t4f: cannot open " + path);
  out.write(kMagic, 8);
  std::uint8_t d = std::uint8_t(dtype);
  out.write(reinterpret_cast<const char*>(&d), 1);
  write_u32(out, std::uint32_t(t.b));
  write_u32(out, std::uint32_t(t.c));
  write_u32(out, std::uint32_t(t.h));
  write_u32(out, std::uint32_t(t.w));
  out.write(reinterpret_cast<const char*>(t.data.data()),
            std::streamsize(t.data.size() * sizeof(T)));
  if (!out) throw IoError("write_t4f: short write to " + path);
}

struct T4fHeader {
  Dtype dtype;
  int b, c, h, w;
};

T4fHeader read_header(std::ifstream& in, const std::string& path) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("read_t4f: bad magic in " + path);
  std::uint8_t d = 0;
  in.read(reinterpret_cast<char*>(&d), 1);
  if (d > 1) throw IoError("read_t4f: unknown dtype byte in " + path);
  T4fHeader hd;
  hd.dtype = Dtype(d);
  hd.b = int(read_u32(in));
  hd.c = int(read_u32(in));
  hd.h = int(read_u32(in));
  hd.w = int(read_u32(in));
  if (!in) throw IoError("read_t4f: truncated header in " + path);
  if (hd.b < 1 || hd.c < 1 || hd.h < 1 || hd.w < 1)
    throw IoError("read_t4f: zero dimension in " + path);
  return hd;
}

template <typename Stored, typename T>
Tensor4<T> read_values(std::ifstream& in, const T4fHeader& hd, const std::string& path) {
  Tensor4<Stored> raw(hd.b, hd.c, hd.h, hd.w);
  in.read(reinterpret_cast<char*>(raw.data.data()),
          std::streamsize(raw.data.size() * sizeof(Stored)));
  if (!in) throw IoError("read_t4f: truncated payload in " + path);
  if constexpr (std::is_same_v<Stored, T>) {
    return raw;
  } else {
    return raw.template cast<T>();
  }
}

}  // namespace

Dtype t4f_probe_dtype(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("t4f_probe_dtype: cannot open " + path);
  return read_header(in, path).dtype;
}

void write_t4f(const std::string& path, const Tensor4<float>& t) {
  write_t4f_impl(path, t, Dtype::F32);
}

void write_t4f(const std::string& path, const Tensor4<double>& t) {
  write_t4f_impl(path, t, Dtype::F64);
}

template <typename T>
Tensor4<T> read_t4f(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_t4f: cannot open " + path);
  T4fHeader hd = read_header(in, path);
  if (hd.dtype == Dtype::F32) return read_values<float, T>(in, hd, path);
  return read_values<double, T>(in, hd, path);
}

template Tensor4<float> read_t4f<float>(const std::string&);
template Tensor4<double> read_t4f<double>(const std::string&);

}  // namespace tic
