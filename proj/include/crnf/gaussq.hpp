#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace crnf {

// Exact complex rational number a + b*i with a, b in Q.
//
// Components are always kept in canonical GMP form: fully reduced, positive
// denominator.  All arithmetic is exact; division by zero throws.
class GaussQ {
 public:
  GaussQ() : re_(0), im_(0) {}
  GaussQ(long n) : re_(n), im_(0) {}
  GaussQ(const mpq_class& re) : re_(re), im_(0) { canon(); }
  GaussQ(const mpq_class& re, const mpq_class& im) : re_(re), im_(im) { canon(); }
  GaussQ(long num, long den) : re_(num, den), im_(0) {
    if (den == 0) throw std::domain_error("GaussQ: zero denominator");
    canon();
  }

  static GaussQ i() { return GaussQ(mpq_class(0), mpq_class(1)); }
  // Parses "p/q" or "p" for each component.
  static GaussQ parse(const std::string& re, const std::string& im);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussQ conj() const { return GaussQ(re_, -im_); }
  // re^2 + im^2, i.e. z * conj(z) as a rational.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussQ operator-() const { return GaussQ(-re_, -im_); }

  GaussQ& operator+=(const GaussQ& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussQ& operator-=(const GaussQ& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussQ& operator*=(const GaussQ& o) {
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }
  GaussQ& operator/=(const GaussQ& o) {
    if (o.is_zero()) throw std::domain_error("GaussQ: division by zero");
    mpq_class n = o.norm();
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
    mpq_class i = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
  }

  friend GaussQ operator+(GaussQ a, const GaussQ& b) { return a += b; }
  friend GaussQ operator-(GaussQ a, const GaussQ& b) { return a -= b; }
  friend GaussQ operator*(GaussQ a, const GaussQ& b) { return a *= b; }
  friend GaussQ operator/(GaussQ a, const GaussQ& b) { return a /= b; }

  friend bool operator==(const GaussQ& a, const GaussQ& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussQ& a, const GaussQ& b) { return !(a == b); }

  GaussQ inverse() const {
    if (is_zero()) throw std::domain_error("GaussQ: inverse of zero");
    mpq_class n = norm();
    return GaussQ(re_ / n, -im_ / n);
  }

  // Exact integer power (negative exponents invert first).
  GaussQ pow(long e) const;

  // Human-readable "a+bi" style rendering; exact components.
  std::string str() const;

  friend std::ostream& operator<<(std::ostream& os, const GaussQ& q);

 private:
  void canon() {
    re_.canonicalize();
    im_.canonicalize();
  }

  mpq_class re_, im_;
};

// Canonical "p/q" (or "p" when the denominator is 1) rendering of a rational.
std::string rat_str(const mpq_class& q);
// Parses "p/q" or "p"; rejects junk and zero denominators.
mpq_class rat_parse(const std::string& s);

}  // namespace crnf
