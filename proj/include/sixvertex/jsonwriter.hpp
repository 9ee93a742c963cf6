#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "sixvertex/types.hpp"

namespace sixvertex {

/// 17 significant digits, lowercase scientific; the fixed formatting keeps
/// report bytes reproducible for a given seed.
inline std::string format_double_17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

/// Minimal streaming JSON writer with pinned float formatting.
class JsonWriter {
 public:
  JsonWriter& beginObject() {
    comma();
    out_ += '{';
    stack_.push_back(true);
    return *this;
  }
  JsonWriter& endObject() {
    out_ += '}';
    stack_.pop_back();
    return *this;
  }
  JsonWriter& beginArray() {
    comma();
    out_ += '[';
    stack_.push_back(true);
    return *this;
  }
  JsonWriter& endArray() {
    out_ += ']';
    stack_.pop_back();
    return *this;
  }
  JsonWriter& key(std::string_view k) {
    comma();
    quote(k);
    out_ += ':';
    pendingValue_ = true;
    return *this;
  }
  JsonWriter& string(std::string_view s) {
    comma();
    quote(s);
    return *this;
  }
  JsonWriter& number(double v) {
    comma();
    out_ += format_double_17(v);
    return *this;
  }
  JsonWriter& integer(std::int64_t v) {
    comma();
    out_ += std::to_string(v);
    return *this;
  }
  JsonWriter& boolean(bool v) {
    comma();
    out_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& null() {
    comma();
    out_ += "null";
    return *this;
  }
  JsonWriter& complexPair(Complex z) {
    beginArray();
    number(z.real());
    number(z.imag());
    return endArray();
  }

  const std::string& str() const { return out_; }

 private:
  void comma() {
    if (pendingValue_) {
      pendingValue_ = false;
      return;
    }
    if (!stack_.empty()) {
      if (!stack_.back())
        out_ += ',';
      else
        stack_.back() = false;
    }
  }
  void quote(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += c;
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> stack_;  // true while the container is still empty
  bool pendingValue_ = false;
};

}  // namespace sixvertex
