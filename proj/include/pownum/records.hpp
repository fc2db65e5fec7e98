#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace pownum::cli {

/// Quality values render with exactly four decimals everywhere.
struct Quality {
  double value = 0.0;
};

using Value = std::variant<int64_t, uint64_t, mpz_class, std::string, Quality>;

/// One emitted finding: a kind tag plus ordered named fields. Integers render
/// in full decimal, never scientific notation.
struct Record {
  std::string kind;
  std::vector<std::pair<std::string, Value>> fields;

  Record& add(std::string name, Value v) {
    fields.emplace_back(std::move(name), std::move(v));
    return *this;
  }
};

std::string render_value(const Value& v);

/// key=value pairs on one line, kind first.
std::string to_kv_line(const Record& r);

/// One JSON object per line; integers that may exceed 2^53 are strings.
std::string to_json_line(const Record& r);

enum class Format { Table, Records, Json };

/// Ordered writer for one command's records. Table mode prints the header
/// before the first row (suppressed when resuming mid-stream).
class Sink {
 public:
  Sink(std::ostream& out, Format format, std::vector<std::string> columns,
       bool color, bool suppress_header);

  void emit(const Record& r);
  void flush();
  uint64_t emitted() const { return emitted_; }
  uint64_t undecided() const { return undecided_; }

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
  bool color_;
  bool header_pending_;
  uint64_t emitted_ = 0;
  uint64_t undecided_ = 0;
};

}  // namespace pownum::cli
