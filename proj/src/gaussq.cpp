#include "crnf/gaussq.hpp"

#include <cctype>
#include <ostream>

namespace crnf {

std::string rat_str(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();  // mpq_class construction does not reduce on its own
  return c.get_str();
}

mpq_class rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("rational: empty string");
  // mpq_class's string constructor accepts whitespace and partial garbage in
  // some corner cases; be strict instead.
  std::size_t slash = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '/') {
      if (slash != std::string::npos) throw std::invalid_argument("rational: two slashes");
      slash = i;
    } else if (c == '-' || c == '+') {
      if (i != 0 && i != slash + 1) throw std::invalid_argument("rational: stray sign");
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("rational: bad character in \"" + s + "\"");
    }
  }
  if (slash == 0 || slash == s.size() - 1)
    throw std::invalid_argument("rational: malformed \"" + s + "\"");
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("rational: unparsable \"" + s + "\"");
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("rational: zero denominator");
  q.canonicalize();
  return q;
}

GaussQ GaussQ::parse(const std::string& re, const std::string& im) {
  return GaussQ(rat_parse(re), rat_parse(im));
}

GaussQ GaussQ::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  GaussQ acc(1);
  GaussQ base = *this;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::string GaussQ::str() const {
  if (is_zero()) return "0";
  std::string out;
  if (sgn(re_) != 0) out += rat_str(re_);
  if (sgn(im_) != 0) {
    if (!out.empty() && sgn(im_) > 0) out += "+";
    if (im_ == -1)
      out += "-";
    else if (im_ != 1)
      out += rat_str(im_);
    out += "i";
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const GaussQ& q) { return os << q.str(); }

}  // namespace crnf
