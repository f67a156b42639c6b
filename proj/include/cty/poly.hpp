#pragma once

// Exact multivariate arithmetic over Z with GMP coefficients.
//
// Polynomials live in a fixed variable universe and store dense exponent
// vectors, terms sorted in descending graded-lex order (var 0 most
// significant).  Rational functions are kept reduced by a recursive
// subresultant GCD.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cty/error.hpp"

namespace cty {

class VarSet {
 public:
  explicit VarSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view n) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

VarSetPtr make_vars(std::vector<std::string> names);

class Polynomial {
 public:
  using Exp = std::uint16_t;

  Polynomial() = default;
  explicit Polynomial(VarSetPtr vars);

  static Polynomial constant(VarSetPtr vars, const mpz_class& c);
  static Polynomial variable(VarSetPtr vars, std::size_t i, unsigned power = 1);
  static Polynomial variable(VarSetPtr vars, std::string_view name);
  // Builds from arbitrary (exponents, coefficient) pairs; combines and sorts.
  static Polynomial from_terms(VarSetPtr vars,
                               std::vector<std::pair<std::vector<Exp>, mpz_class>> terms);
  static Polynomial parse(VarSetPtr vars, std::string_view text);

  const VarSetPtr& vars() const { return vars_; }
  std::size_t nvars() const { return nv_; }
  std::size_t size() const { return coefs_.size(); }
  const Exp* exps(std::size_t i) const { return exps_.data() + i * nv_; }
  const mpz_class& coef(std::size_t i) const { return coefs_[i]; }
  std::uint32_t tdeg(std::size_t i) const { return tdeg_[i]; }

  bool is_zero() const { return coefs_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  bool is_monomial() const { return coefs_.size() == 1; }
  bool nonnegative() const;
  const mpz_class& leading_coef() const { return coefs_.front(); }

  unsigned degree(std::size_t var) const;
  std::vector<Exp> min_exponents() const;
  std::vector<bool> support() const;
  mpz_class content() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial scaled(const mpz_class& c) const;
  Polynomial div_scalar_exact(const mpz_class& c) const;
  Polynomial mul_monomial(const std::vector<Exp>& e) const;
  Polynomial div_monomial_exact(const std::vector<Exp>& e) const;
  Polynomial pow(unsigned k) const;

  // Exact division; nullopt when d does not divide *this.
  std::optional<Polynomial> divide(const Polynomial& d) const;
  Polynomial divide_exact(const Polynomial& d) const;

  std::string to_string() const;

  // Used by the GCD: coefficients with respect to one variable.
  std::map<unsigned, Polynomial> coefficients_in(std::size_t var) const;

 private:
  friend class PolyBuilder;
  VarSetPtr vars_;
  std::size_t nv_ = 0;
  std::vector<Exp> exps_;
  std::vector<mpz_class> coefs_;
  std::vector<std::uint32_t> tdeg_;

  void check_same(const Polynomial& o) const;
  void push_term(const Exp* e, std::uint32_t td, const mpz_class& c);
  static Polynomial add_sub(const Polynomial& a, const Polynomial& b, bool sub);
};

// Greatest common divisor, normalized to a positive leading coefficient.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(VarSetPtr vars);
  RationalFunction(const Polynomial& num);  // NOLINT: implicit lift is intended
  RationalFunction(const Polynomial& num, const Polynomial& den);

  static RationalFunction constant(VarSetPtr vars, const mpz_class& c);
  static RationalFunction variable(VarSetPtr vars, std::string_view name);
  static RationalFunction parse(VarSetPtr vars, std::string_view text);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  const VarSetPtr& vars() const { return num_.vars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }
  std::size_t size() const { return num_.size() + den_.size(); }

  RationalFunction inverse() const;
  RationalFunction pow(int k) const;

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);
  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Polynomial num_;
  Polynomial den_;
  void normalize_sign();
  void reduce();
};

enum class ArithOp { Add, Mul, Div };

RationalFunction arith(ArithOp op, const RationalFunction& f, const RationalFunction& g);

// Unbound variables pass through unchanged.
RationalFunction substitute(const RationalFunction& f,
                            const std::map<std::string, RationalFunction>& bindings);

// True iff the reduced denominator is a monomial in `vars` times a polynomial
// free of `vars`.
bool is_laurent(const RationalFunction& f, const std::vector<std::string>& vars);

// A subtraction-free rational function.  The stored numerator/denominator
// pair always has nonnegative coefficients; it is the reduced fraction when
// reduction keeps nonnegativity, otherwise the unreduced witness.
class SemifieldElement {
 public:
  SemifieldElement() = default;
  static SemifieldElement one(VarSetPtr vars);
  static SemifieldElement generator(VarSetPtr vars, std::string_view name);
  static SemifieldElement from_witness(const Polynomial& num, const Polynomial& den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  RationalFunction value() const { return RationalFunction(num_, den_); }
  bool is_one() const { return num_ == den_; }
  std::size_t size() const { return num_.size() + den_.size(); }

  SemifieldElement inverse() const { return from_raw(den_, num_); }
  SemifieldElement pow(int k) const;
  friend SemifieldElement operator+(const SemifieldElement& a, const SemifieldElement& b);
  friend SemifieldElement operator*(const SemifieldElement& a, const SemifieldElement& b);
  friend SemifieldElement operator/(const SemifieldElement& a, const SemifieldElement& b);
  // Field equality in Q(y) by cross-multiplication.
  friend bool operator==(const SemifieldElement& a, const SemifieldElement& b);

  std::string to_string() const { return value().to_string(); }

 private:
  Polynomial num_;
  Polynomial den_;
  static SemifieldElement from_raw(Polynomial num, Polynomial den);
};

}  // namespace cty
