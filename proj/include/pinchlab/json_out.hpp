#pragma once

#include <cstdio>
#include <string>
#include <vector>

// Minimal JSON writer for the report files: keys keep insertion order and
// every number is printed with 17 significant digits, so reports round-trip
// exactly and identical runs produce byte-identical output.

namespace pinchlab {

class JsonWriter {
 public:
  JsonWriter& begin_object() {
    sep();
    buf_ += '{';
    stack_.push_back(kFirstInObject);
    return *this;
  }
  JsonWriter& end_object() {
    buf_ += '}';
    stack_.pop_back();
    return *this;
  }
  JsonWriter& begin_array() {
    sep();
    buf_ += '[';
    stack_.push_back(kFirstInArray);
    return *this;
  }
  JsonWriter& end_array() {
    buf_ += ']';
    stack_.pop_back();
    return *this;
  }
  JsonWriter& key(const std::string& k) {
    sep();
    write_string(k);
    buf_ += ':';
    pending_value_ = true;
    return *this;
  }
  JsonWriter& value(double v) {
    sep();
    char tmp[40];
    std::snprintf(tmp, sizeof tmp, "%.17g", v);
    buf_ += tmp;
    return *this;
  }
  JsonWriter& value(long v) {
    sep();
    buf_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(long long v) {
    sep();
    buf_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(int v) { return value(static_cast<long>(v)); }
  JsonWriter& value(unsigned long long v) {
    sep();
    buf_ += std::to_string(v);
    return *this;
  }
  JsonWriter& value(bool v) {
    sep();
    buf_ += v ? "true" : "false";
    return *this;
  }
  JsonWriter& value(const std::string& v) {
    sep();
    write_string(v);
    return *this;
  }
  JsonWriter& value(const char* v) { return value(std::string(v)); }
  JsonWriter& value(const std::vector<double>& v) {
    begin_array();
    for (double x : v) value(x);
    end_array();
    return *this;
  }

  const std::string& str() const { return buf_; }

 private:
  enum State { kFirstInObject, kInObject, kFirstInArray, kInArray };

  void sep() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (stack_.empty()) return;
    State& s = stack_.back();
    if (s == kInObject || s == kInArray) buf_ += ',';
    if (s == kFirstInObject) s = kInObject;
    if (s == kFirstInArray) s = kInArray;
  }

  void write_string(const std::string& s) {
    buf_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': buf_ += "\\\""; break;
        case '\\': buf_ += "\\\\"; break;
        case '\n': buf_ += "\\n"; break;
        case '\t': buf_ += "\\t"; break;
        default: buf_ += c;
      }
    }
    buf_ += '"';
  }

  std::string buf_;
  std::vector<State> stack_;
  bool pending_value_ = false;
};

}  // namespace pinchlab
