#pragma once

// Line-oriented key/value text shared by instance and solution files.
//
//   # <magic> <version>
//   key value
//   key [d1 d2 ...] v0 v1 ...        (row-major, product(d) values)
//
// Numbers are written in shortest round-trip form.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace edgeharden::textfile {

std::string format_number(double v);

class Writer {
 public:
  Writer(std::string_view magic, int version);

  void scalar(std::string_view key, double v);
  void scalar(std::string_view key, std::int64_t v);
  void scalar(std::string_view key, std::string_view v);
  void array(std::string_view key, const std::vector<std::size_t>& dims,
             const std::vector<double>& values);
  void array(std::string_view key, const std::vector<std::size_t>& dims,
             const std::vector<std::int64_t>& values);

  const std::string& str() const noexcept { return out_; }

 private:
  void dims(const std::vector<std::size_t>& d);
  std::string out_;
};

struct Record {
  int line = 0;
  std::vector<std::size_t> dims;  // empty for scalars
  std::vector<std::string> tokens;
};

class Reader {
 public:
  /// Throws ParseError on a malformed header or record.
  Reader(const std::string& text, std::string_view magic);

  int version() const noexcept { return version_; }
  bool has(const std::string& key) const { return records_.count(key) != 0; }

  double scalar(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::string word(const std::string& key) const;
  std::vector<double> array(const std::string& key, const std::vector<std::size_t>& dims) const;
  std::vector<std::int64_t> int_array(const std::string& key,
                                      const std::vector<std::size_t>& dims) const;

  /// Keys present in the file but never requested; call after reading.
  std::vector<std::string> unused_keys() const;

 private:
  const Record& get(const std::string& key) const;

  std::map<std::string, Record> records_;
  mutable std::map<std::string, bool> used_;
  int version_ = 0;
  int last_line_ = 0;
};

}  // namespace edgeharden::textfile
