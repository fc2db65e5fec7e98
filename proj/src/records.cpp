#include "pownum/records.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace pownum::cli {

namespace {

std::string format_quality(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", q);
  return buf;
}

}  // namespace

std::string render_value(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, int64_t>)
          return std::to_string(x);
        else if constexpr (std::is_same_v<T, uint64_t>)
          return std::to_string(x);
        else if constexpr (std::is_same_v<T, mpz_class>)
          return x.get_str();
        else if constexpr (std::is_same_v<T, std::string>)
          return x;
        else
          return format_quality(x.value);
      },
      v);
}

std::string to_kv_line(const Record& r) {
  std::string line = "kind=" + r.kind;
  for (const auto& [name, value] : r.fields) {
    line += ' ';
    line += name;
    line += '=';
    line += render_value(value);
  }
  return line;
}

std::string to_json_line(const Record& r) {
  nlohmann::ordered_json j;
  j["kind"] = r.kind;
  for (const auto& [name, value] : r.fields) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, int64_t>) {
            j[name] = x;
          } else if constexpr (std::is_same_v<T, uint64_t>) {
            j[name] = x;
          } else if constexpr (std::is_same_v<T, mpz_class>) {
            // Preserved exactly: big integers travel as decimal strings.
            j[name] = x.get_str();
          } else if constexpr (std::is_same_v<T, std::string>) {
            j[name] = x;
          } else {
            j[name] = std::stod(format_quality(x.value));
          }
        },
        value);
  }
  return j.dump();
}

Sink::Sink(std::ostream& out, Format format, std::vector<std::string> columns,
           bool color, bool suppress_header)
    : out_(out),
      format_(format),
      columns_(std::move(columns)),
      color_(color),
      header_pending_(format == Format::Table) {
  if (suppress_header) header_pending_ = false;
}

void Sink::emit(const Record& r) {
  ++emitted_;
  for (const auto& [name, value] : r.fields) {
    if (name == "status" && std::holds_alternative<std::string>(value) &&
        std::get<std::string>(value) == "undecided")
      ++undecided_;
  }
  switch (format_) {
    case Format::Records:
      out_ << to_kv_line(r) << '\n';
      return;
    case Format::Json:
      out_ << to_json_line(r) << '\n';
      return;
    case Format::Table:
      break;
  }
  auto width = [](const std::string& name) { return std::max<size_t>(name.size(), 6); };
  if (header_pending_) {
    header_pending_ = false;
    if (color_) out_ << "\033[1m";
    for (size_t i = 0; i < columns_.size(); ++i) {
      if (i) out_ << "  ";
      out_ << columns_[i];
      for (size_t pad = columns_[i].size(); pad < width(columns_[i]); ++pad) out_ << ' ';
    }
    if (color_) out_ << "\033[0m";
    out_ << '\n';
  }
  for (size_t i = 0; i < columns_.size(); ++i) {
    if (i) out_ << "  ";
    std::string cell = "-";
    for (const auto& [name, value] : r.fields) {
      if (name == columns_[i]) {
        cell = render_value(value);
        break;
      }
    }
    out_ << cell;
    if (i + 1 < columns_.size())
      for (size_t pad = cell.size(); pad < width(columns_[i]); ++pad) out_ << ' ';
  }
  out_ << '\n';
}

void Sink::flush() { out_.flush(); }

}  // namespace pownum::cli
