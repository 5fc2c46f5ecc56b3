#include "streambench/tensor.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace streambench {

namespace {

constexpr char kMagic[4] = {'T', '4', 'D', 'S'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "tensor io assumes a little-endian host");

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError("tensor data truncated");
  return value;
}

}  // namespace

void write_tensor(std::ostream& out, const Tensor4& tensor) {
  out.write(kMagic, 4);
  write_raw(out, kVersion);
  write_raw(out, std::uint32_t{4});
  for (int d : tensor.dims()) {
    write_raw(out, static_cast<std::uint64_t>(d));
  }
  out.write(reinterpret_cast<const char*>(tensor.data().data()),
            static_cast<std::streamsize>(tensor.size() * sizeof(double)));
}

Tensor4 read_tensor(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("not a tensor block (bad magic)");
  }
  const auto version = read_raw<std::uint32_t>(in);
  if (version != kVersion) {
    throw ParseError("unsupported tensor version " + std::to_string(version));
  }
  const auto rank = read_raw<std::uint32_t>(in);
  if (rank != 4) {
    throw ParseError("expected rank-4 tensor, got rank " +
                     std::to_string(rank));
  }
  std::uint64_t dims[4];
  for (auto& d : dims) d = read_raw<std::uint64_t>(in);
  Tensor4 tensor(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                 static_cast<int>(dims[2]), static_cast<int>(dims[3]));
  in.read(reinterpret_cast<char*>(tensor.data().data()),
          static_cast<std::streamsize>(tensor.size() * sizeof(double)));
  if (!in) throw ParseError("tensor data truncated");
  return tensor;
}

void save_tensor(const Tensor4& tensor, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for write");
  write_tensor(out, tensor);
  if (!out) throw ParseError("write failed for '" + path.string() + "'");
}

Tensor4 load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return read_tensor(in);
  } catch (const ParseError& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

}  // namespace streambench
