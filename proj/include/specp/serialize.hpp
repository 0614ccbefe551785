#pragma once

#include "specp/certificates.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace specp {

// Locale-independent float formatting, 17 significant digits by default so
// doubles round-trip exactly.
inline std::string fmt_double(double x, int precision = 17) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string json_number(double x) {
  if (!std::isfinite(x)) return "null";
  return fmt_double(x, 17);
}

// Fixed field order: id, label, paper_anchor, preconditions, lhs, rhs,
// slack, status.
inline std::string certificates_to_json(const std::vector<BoundCertificate>& certs) {
  std::string out = "[";
  bool first_cert = true;
  for (const auto& c : certs) {
    if (!first_cert) out += ",";
    first_cert = false;
    out += "\n  {\"id\": \"" + json_escape(c.id) + "\"";
    out += ", \"label\": \"" + json_escape(c.label) + "\"";
    out += ", \"paper_anchor\": \"" + json_escape(c.paper_anchor) + "\"";
    out += ", \"preconditions\": [";
    bool first_pre = true;
    for (const auto& p : c.preconditions) {
      if (!first_pre) out += ", ";
      first_pre = false;
      out += "{\"name\": \"" + json_escape(p.name) + "\", \"lhs\": " + json_number(p.lhs) +
             ", \"rhs\": " + json_number(p.rhs) + ", \"satisfied\": " + (p.satisfied ? "true" : "false") + "}";
    }
    out += "]";
    out += ", \"lhs\": " + json_number(c.lhs);
    out += ", \"rhs\": " + json_number(c.rhs);
    out += ", \"slack\": " + json_number(c.slack);
    out += std::string(", \"status\": \"") + to_string(c.status) + "\"}";
  }
  out += "\n]\n";
  return out;
}

// FNV-1a digest used to make output files self-describing.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  static const char* hex = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = hex[h & 0xF];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf);
}

}  // namespace specp
