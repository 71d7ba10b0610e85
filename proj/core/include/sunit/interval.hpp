#ifndef SUNIT_INTERVAL_HPP
#define SUNIT_INTERVAL_HPP

#include <mpfr.h>

#include <string>

#include "sunit/arith.hpp"

namespace sunit {

struct PrecisionExhausted : SunitError {
    explicit PrecisionExhausted(const std::string& w) : SunitError(w) {}
};

// Closed real interval [lo, hi] with outward-rounded endpoints.
// Every operation encloses the exact image of the operands.
class RInt {
  public:
    RInt();                       // [0, 0] at default precision
    explicit RInt(long prec);     // [0, 0]
    RInt(const RInt&);
    RInt(RInt&&) noexcept;
    RInt& operator=(const RInt&);
    RInt& operator=(RInt&&) noexcept;
    ~RInt();

    static RInt exact(const mpz_class& v, long prec);
    static RInt exact(const mpq_class& v, long prec);
    static RInt exact(long v, long prec);
    static RInt interval(const mpq_class& lo, const mpq_class& hi, long prec);
    static RInt pi(long prec);
    static RInt log_of(const mpz_class& n, long prec); // n > 0

    long prec() const { return prec_; }

    RInt operator+(const RInt&) const;
    RInt operator-(const RInt&) const;
    RInt operator*(const RInt&) const;
    RInt operator/(const RInt&) const; // divisor must exclude 0
    RInt operator-() const;

    RInt add_q(const mpq_class&) const;
    RInt mul_q(const mpq_class&) const;
    RInt mul_z(const mpz_class&) const;

    RInt log() const;   // requires lo > 0
    RInt exp() const;
    RInt sqrt() const;  // requires lo >= 0
    RInt abs() const;
    RInt sq() const;   // tight square: never dips below 0
    RInt pow_ui(unsigned long e) const;
    RInt max_with(const RInt&) const;
    RInt min_with(const RInt&) const;

    bool contains_zero() const;
    bool is_positive() const;      // lo > 0
    bool is_negative() const;      // hi < 0
    bool certainly_gt(const RInt&) const;  // lo > other.hi
    bool certainly_lt(const RInt&) const;
    bool certainly_ge_q(const mpq_class&) const;
    bool certainly_le_q(const mpq_class&) const;

    double lo_d() const;
    double hi_d() const;
    double mid_d() const;
    double width_d() const;
    mpq_class lo_q() const;
    mpq_class hi_q() const;

    // nearest integer certified from the enclosure: width must be < 1/4 and
    // the interval must not straddle a half-integer boundary
    bool nearest_int(mpz_class& out) const;

    std::string str() const;

    mpfr_t lo, hi;

  private:
    long prec_;
};

// Axis-aligned complex rectangle.
struct CInt {
    RInt re, im;

    CInt() = default;
    CInt(RInt r, RInt i) : re(std::move(r)), im(std::move(i)) {}

    CInt operator+(const CInt&) const;
    CInt operator-(const CInt&) const;
    CInt operator*(const CInt&) const;
    CInt operator-() const;

    RInt abs() const;
    RInt sq() const;   // tight square: never dips below 0      // |z|, certified enclosure
    RInt abs_sq() const;   // |z|^2
    RInt log_abs() const;  // log|z|, rectangle must exclude 0
    // principal argument; rectangle must exclude 0 and the branch cut
    // (throws PrecisionExhausted if it straddles the negative real axis)
    RInt arg() const;

    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
};

// evaluate an integer/rational-coefficient polynomial at a point
RInt eval_poly(const std::vector<mpq_class>& coeffs, const RInt& x);
CInt eval_poly(const std::vector<mpq_class>& coeffs, const CInt& x);

} // namespace sunit

#endif
