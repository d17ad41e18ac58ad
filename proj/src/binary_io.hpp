#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>

#include "aesthrec/error.hpp"

namespace aesthrec::detail {

template <typename T>
T byteswap_if_big(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    std::reverse(bytes.begin(), bytes.end());
    std::memcpy(&value, bytes.data(), sizeof(T));
  }
  return value;
}

// Little-endian writer over an ostream that counts bytes.
class LeWriter {
 public:
  explicit LeWriter(std::ostream& out) : out_(out) {}

  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    value = byteswap_if_big(value);
    out_.write(reinterpret_cast<const char*>(&value), sizeof(T));
    written_ += sizeof(T);
  }

  void put_bytes(const char* data, std::size_t n) {
    out_.write(data, static_cast<std::streamsize>(n));
    written_ += n;
  }

  void put_floats(const float* data, std::size_t n) {
    if constexpr (std::endian::native == std::endian::little) {
      put_bytes(reinterpret_cast<const char*>(data), n * sizeof(float));
    } else {
      for (std::size_t i = 0; i < n; ++i) put(data[i]);
    }
  }

  // u16 length prefix then UTF-8 bytes.
  void put_id(const std::string& id) {
    if (id.size() > 0xFFFF) {
      throw Error(ErrorCode::kInvalidArgument, "id longer than 65535 bytes");
    }
    put(static_cast<std::uint16_t>(id.size()));
    put_bytes(id.data(), id.size());
  }

  std::size_t written() const noexcept { return written_; }
  bool ok() const { return static_cast<bool>(out_); }

 private:
  std::ostream& out_;
  std::size_t written_ = 0;
};

// Little-endian reader; short reads raise FormatError(kTruncated).
class LeReader {
 public:
  explicit LeReader(std::istream& in) : in_(in) {}

  template <typename T>
  T get(const char* what) {
    T value;
    read_exact(reinterpret_cast<char*>(&value), sizeof(T), what);
    return byteswap_if_big(value);
  }

  void read_exact(char* dst, std::size_t n, const char* what) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw FormatError(FormatErrorKind::kTruncated,
                        std::string("stream ended while reading ") + what);
    }
  }

  void get_floats(float* dst, std::size_t n, const char* what) {
    read_exact(reinterpret_cast<char*>(dst), n * sizeof(float), what);
    if constexpr (std::endian::native == std::endian::big) {
      for (std::size_t i = 0; i < n; ++i) dst[i] = byteswap_if_big(dst[i]);
    }
  }

  std::string get_id() {
    const auto len = get<std::uint16_t>("id length");
    std::string id(len, '\0');
    read_exact(id.data(), len, "id bytes");
    return id;
  }

  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  std::istream& in_;
};

}  // namespace aesthrec::detail
