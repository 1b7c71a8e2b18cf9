#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bullyrank {

// Little-endian binary artifact I/O. Every serialized model starts with a
// 4-byte magic and a u32 format version.
class BinWriter {
 public:
  explicit BinWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
  }

  void magic(const char m[4]) { out_.write(m, 4); }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }

  void f64s(const std::vector<double>& v) {
    u64(v.size());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(double));
  }

  void u32s(const std::vector<std::uint32_t>& v) {
    u64(v.size());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(std::uint32_t));
  }

  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }

 private:
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  std::ofstream out_;
};

class BinReader {
 public:
  explicit BinReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw std::runtime_error("cannot open for reading: " + path);
  }

  void expect_magic(const char m[4]) {
    char got[4];
    raw(got, 4);
    if (std::string(got, 4) != std::string(m, 4))
      throw std::runtime_error(path_ + ": bad magic, not a " + std::string(m, 4) + " file");
  }

  std::uint32_t u32() { std::uint32_t v; raw(&v, sizeof v); return v; }
  std::uint64_t u64() { std::uint64_t v; raw(&v, sizeof v); return v; }
  double f64() { double v; raw(&v, sizeof v); return v; }

  std::vector<double> f64s() {
    std::vector<double> v(checked_len());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(double));
    return v;
  }

  std::vector<std::uint32_t> u32s() {
    std::vector<std::uint32_t> v(checked_len());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(std::uint32_t));
    return v;
  }

  std::string str() {
    std::string s(checked_len(), '\0');
    if (!s.empty()) raw(s.data(), s.size());
    return s;
  }

 private:
  std::size_t checked_len() {
    std::uint64_t n = u64();
    if (n > (1ull << 32)) throw std::runtime_error(path_ + ": corrupt length field");
    return static_cast<std::size_t>(n);
  }
  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!in_) throw std::runtime_error(path_ + ": truncated file");
  }
  std::ifstream in_;
  std::string path_;
};

}  // namespace bullyrank
