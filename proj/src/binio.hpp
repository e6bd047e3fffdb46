#pragma once

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "swarmdet/datagen.hpp"

static_assert(std::endian::native == std::endian::little,
              "container serialization assumes a little-endian host");

namespace swarmdet::binio {

template <typename T>
void put(std::string& buf, T v) {
  char raw[sizeof(T)];
  std::memcpy(raw, &v, sizeof(T));
  buf.append(raw, sizeof(T));
}

class Reader {
 public:
  Reader(std::ifstream& in, const char* what) : in_(in), what_(what) {}

  template <typename T>
  T get() {
    T v;
    if (!in_.read(reinterpret_cast<char*>(&v), sizeof(T))) {
      throw format_error(std::string(what_) + ": truncated file");
    }
    return v;
  }

  void get_bytes(void* dst, std::size_t size) {
    if (!in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(size))) {
      throw format_error(std::string(what_) + ": truncated file");
    }
  }

  bool at_eof() { return in_.peek() == std::ifstream::traits_type::eof(); }

 private:
  std::ifstream& in_;
  const char* what_;
};

}  // namespace swarmdet::binio
