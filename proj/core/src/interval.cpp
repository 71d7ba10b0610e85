#include "sunit/interval.hpp"

#include <sstream>

namespace sunit {

namespace {
constexpr long kDefaultPrec = 96;
}

RInt::RInt() : RInt(kDefaultPrec) {}

RInt::RInt(long prec) : prec_(prec) {
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    mpfr_set_zero(lo, 1);
    mpfr_set_zero(hi, 1);
}

RInt::RInt(const RInt& o) : prec_(o.prec_) {
    mpfr_init2(lo, prec_);
    mpfr_init2(hi, prec_);
    mpfr_set(lo, o.lo, MPFR_RNDD);
    mpfr_set(hi, o.hi, MPFR_RNDU);
}

RInt::RInt(RInt&& o) noexcept : prec_(o.prec_) {
    lo[0] = o.lo[0];
    hi[0] = o.hi[0];
    mpfr_init2(o.lo, 2);
    mpfr_init2(o.hi, 2);
}

RInt& RInt::operator=(const RInt& o) {
    if (this == &o) return *this;
    mpfr_set_prec(lo, o.prec_);
    mpfr_set_prec(hi, o.prec_);
    prec_ = o.prec_;
    mpfr_set(lo, o.lo, MPFR_RNDD);
    mpfr_set(hi, o.hi, MPFR_RNDU);
    return *this;
}

RInt& RInt::operator=(RInt&& o) noexcept {
    mpfr_swap(lo, o.lo);
    mpfr_swap(hi, o.hi);
    std::swap(prec_, o.prec_);
    return *this;
}

RInt::~RInt() {
    mpfr_clear(lo);
    mpfr_clear(hi);
}

RInt RInt::exact(const mpz_class& v, long prec) {
    RInt r(prec);
    mpfr_set_z(r.lo, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(r.hi, v.get_mpz_t(), MPFR_RNDU);
    return r;
}

RInt RInt::exact(const mpq_class& v, long prec) {
    RInt r(prec);
    mpfr_set_q(r.lo, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi, v.get_mpq_t(), MPFR_RNDU);
    return r;
}

RInt RInt::exact(long v, long prec) {
    RInt r(prec);
    mpfr_set_si(r.lo, v, MPFR_RNDD);
    mpfr_set_si(r.hi, v, MPFR_RNDU);
    return r;
}

RInt RInt::interval(const mpq_class& lo, const mpq_class& hi, long prec) {
    RInt r(prec);
    mpfr_set_q(r.lo, lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi, hi.get_mpq_t(), MPFR_RNDU);
    return r;
}

RInt RInt::pi(long prec) {
    RInt r(prec);
    mpfr_const_pi(r.lo, MPFR_RNDD);
    mpfr_const_pi(r.hi, MPFR_RNDU);
    return r;
}

RInt RInt::log_of(const mpz_class& n, long prec) {
    return RInt::exact(n, prec).log();
}

RInt RInt::operator+(const RInt& o) const {
    RInt r(std::max(prec_, o.prec_));
    mpfr_add(r.lo, lo, o.lo, MPFR_RNDD);
    mpfr_add(r.hi, hi, o.hi, MPFR_RNDU);
    return r;
}

RInt RInt::operator-(const RInt& o) const {
    RInt r(std::max(prec_, o.prec_));
    mpfr_sub(r.lo, lo, o.hi, MPFR_RNDD);
    mpfr_sub(r.hi, hi, o.lo, MPFR_RNDU);
    return r;
}

RInt RInt::operator-() const {
    RInt r(prec_);
    mpfr_neg(r.lo, hi, MPFR_RNDD);
    mpfr_neg(r.hi, lo, MPFR_RNDU);
    return r;
}

RInt RInt::operator*(const RInt& o) const {
    RInt r(std::max(prec_, o.prec_));
    mpfr_t c[4];
    for (auto& x : c) mpfr_init2(x, r.prec_);
    mpfr_mul(c[0], lo, o.lo, MPFR_RNDD);
    mpfr_mul(c[1], lo, o.hi, MPFR_RNDD);
    mpfr_mul(c[2], hi, o.lo, MPFR_RNDD);
    mpfr_mul(c[3], hi, o.hi, MPFR_RNDD);
    mpfr_min(r.lo, c[0], c[1], MPFR_RNDD);
    mpfr_min(r.lo, r.lo, c[2], MPFR_RNDD);
    mpfr_min(r.lo, r.lo, c[3], MPFR_RNDD);
    mpfr_mul(c[0], lo, o.lo, MPFR_RNDU);
    mpfr_mul(c[1], lo, o.hi, MPFR_RNDU);
    mpfr_mul(c[2], hi, o.lo, MPFR_RNDU);
    mpfr_mul(c[3], hi, o.hi, MPFR_RNDU);
    mpfr_max(r.hi, c[0], c[1], MPFR_RNDU);
    mpfr_max(r.hi, r.hi, c[2], MPFR_RNDU);
    mpfr_max(r.hi, r.hi, c[3], MPFR_RNDU);
    for (auto& x : c) mpfr_clear(x);
    return r;
}

RInt RInt::operator/(const RInt& o) const {
    if (o.contains_zero()) throw PrecisionExhausted("interval division by enclosure of 0");
    RInt r(std::max(prec_, o.prec_));
    mpfr_t c[4];
    for (auto& x : c) mpfr_init2(x, r.prec_);
    mpfr_div(c[0], lo, o.lo, MPFR_RNDD);
    mpfr_div(c[1], lo, o.hi, MPFR_RNDD);
    mpfr_div(c[2], hi, o.lo, MPFR_RNDD);
    mpfr_div(c[3], hi, o.hi, MPFR_RNDD);
    mpfr_min(r.lo, c[0], c[1], MPFR_RNDD);
    mpfr_min(r.lo, r.lo, c[2], MPFR_RNDD);
    mpfr_min(r.lo, r.lo, c[3], MPFR_RNDD);
    mpfr_div(c[0], lo, o.lo, MPFR_RNDU);
    mpfr_div(c[1], lo, o.hi, MPFR_RNDU);
    mpfr_div(c[2], hi, o.lo, MPFR_RNDU);
    mpfr_div(c[3], hi, o.hi, MPFR_RNDU);
    mpfr_max(r.hi, c[0], c[1], MPFR_RNDU);
    mpfr_max(r.hi, r.hi, c[2], MPFR_RNDU);
    mpfr_max(r.hi, r.hi, c[3], MPFR_RNDU);
    for (auto& x : c) mpfr_clear(x);
    return r;
}

RInt RInt::add_q(const mpq_class& q) const { return *this + RInt::exact(q, prec_); }
RInt RInt::mul_q(const mpq_class& q) const { return *this * RInt::exact(q, prec_); }
RInt RInt::mul_z(const mpz_class& z) const { return *this * RInt::exact(z, prec_); }

RInt RInt::log() const {
    if (mpfr_sgn(lo) <= 0) throw PrecisionExhausted("log of enclosure touching (-inf, 0]");
    RInt r(prec_);
    mpfr_log(r.lo, lo, MPFR_RNDD);
    mpfr_log(r.hi, hi, MPFR_RNDU);
    return r;
}

RInt RInt::exp() const {
    RInt r(prec_);
    mpfr_exp(r.lo, lo, MPFR_RNDD);
    mpfr_exp(r.hi, hi, MPFR_RNDU);
    return r;
}

RInt RInt::sqrt() const {
    if (mpfr_sgn(lo) < 0) throw PrecisionExhausted("sqrt of enclosure touching negatives");
    RInt r(prec_);
    mpfr_sqrt(r.lo, lo, MPFR_RNDD);
    mpfr_sqrt(r.hi, hi, MPFR_RNDU);
    return r;
}

RInt RInt::abs() const {
    RInt r(prec_);
    if (mpfr_sgn(lo) >= 0) return *this;
    if (mpfr_sgn(hi) <= 0) return -*this;
    mpfr_set_zero(r.lo, 1);
    mpfr_neg(r.hi, lo, MPFR_RNDU);
    mpfr_max(r.hi, r.hi, hi, MPFR_RNDU);
    return r;
}

RInt RInt::sq() const {
    RInt a = abs();
    RInt r(prec_);
    mpfr_mul(r.lo, a.lo, a.lo, MPFR_RNDD);
    mpfr_mul(r.hi, a.hi, a.hi, MPFR_RNDU);
    return r;
}

RInt RInt::pow_ui(unsigned long e) const {
    RInt r = RInt::exact(1, prec_);
    RInt b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

RInt RInt::max_with(const RInt& o) const {
    RInt r(std::max(prec_, o.prec_));
    mpfr_max(r.lo, lo, o.lo, MPFR_RNDD);
    mpfr_max(r.hi, hi, o.hi, MPFR_RNDU);
    return r;
}

RInt RInt::min_with(const RInt& o) const {
    RInt r(std::max(prec_, o.prec_));
    mpfr_min(r.lo, lo, o.lo, MPFR_RNDD);
    mpfr_min(r.hi, hi, o.hi, MPFR_RNDU);
    return r;
}

bool RInt::contains_zero() const { return mpfr_sgn(lo) <= 0 && mpfr_sgn(hi) >= 0; }
bool RInt::is_positive() const { return mpfr_sgn(lo) > 0; }
bool RInt::is_negative() const { return mpfr_sgn(hi) < 0; }
bool RInt::certainly_gt(const RInt& o) const { return mpfr_cmp(lo, o.hi) > 0; }
bool RInt::certainly_lt(const RInt& o) const { return mpfr_cmp(hi, o.lo) < 0; }

bool RInt::certainly_ge_q(const mpq_class& q) const {
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDU);
    bool r = mpfr_cmp(lo, t) >= 0;
    mpfr_clear(t);
    return r;
}

bool RInt::certainly_le_q(const mpq_class& q) const {
    mpfr_t t;
    mpfr_init2(t, prec_);
    mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDD);
    bool r = mpfr_cmp(hi, t) <= 0;
    mpfr_clear(t);
    return r;
}

double RInt::lo_d() const { return mpfr_get_d(lo, MPFR_RNDD); }
double RInt::hi_d() const { return mpfr_get_d(hi, MPFR_RNDU); }
double RInt::mid_d() const { return (lo_d() + hi_d()) / 2; }
double RInt::width_d() const { return hi_d() - lo_d(); }

mpq_class RInt::lo_q() const {
    if (!mpfr_number_p(lo)) throw SunitError("lo_q of non-finite endpoint");
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), lo);
    return q;
}

mpq_class RInt::hi_q() const {
    if (!mpfr_number_p(hi)) throw SunitError("hi_q of non-finite endpoint");
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), hi);
    return q;
}

bool RInt::nearest_int(mpz_class& out) const {
    mpq_class a = lo_q(), b = hi_q();
    if (b - a >= mpq_class(1, 4)) return false;
    // an enclosure straddling a half-integer rounds to two different values
    mpz_class ra = round_mpq(a), rb = round_mpq(b);
    if (ra != rb) return false;
    out = ra;
    return true;
}

std::string RInt::str() const {
    std::ostringstream os;
    os << "[" << lo_d() << ", " << hi_d() << "]";
    return os.str();
}

// ---- complex rectangles ----

CInt CInt::operator+(const CInt& o) const { return {re + o.re, im + o.im}; }
CInt CInt::operator-(const CInt& o) const { return {re - o.re, im - o.im}; }
CInt CInt::operator-() const { return {-re, -im}; }

CInt CInt::operator*(const CInt& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
}

RInt CInt::abs_sq() const { return re * re + im * im; }

RInt CInt::abs() const {
    RInt s = abs_sq();
    // the square can round slightly below 0 for rectangles touching the origin
    if (mpfr_sgn(s.lo) < 0) mpfr_set_zero(s.lo, 1);
    return s.sqrt();
}

RInt CInt::log_abs() const {
    RInt a = abs();
    if (!a.is_positive()) throw PrecisionExhausted("log_abs: rectangle may contain 0");
    return a.log();
}

namespace {

// atan2 over a rectangle strictly inside one open half-plane split by the y-axis
// sign; corners give the extremes when the rectangle avoids both axes
RInt atan2_box(const RInt& y, const RInt& x) {
    long prec = std::max(y.prec(), x.prec());
    RInt r(prec);
    mpfr_t v;
    mpfr_init2(v, prec);
    bool first = true;
    const mpfr_srcptr ys[2] = {y.lo, y.hi};
    const mpfr_srcptr xs[2] = {x.lo, x.hi};
    for (auto yy : ys)
        for (auto xx : xs) {
            mpfr_atan2(v, yy, xx, MPFR_RNDD);
            if (first || mpfr_cmp(v, r.lo) < 0) mpfr_set(r.lo, v, MPFR_RNDD);
            mpfr_atan2(v, yy, xx, MPFR_RNDU);
            if (first || mpfr_cmp(v, r.hi) > 0) mpfr_set(r.hi, v, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(v);
    return r;
}

} // namespace

RInt CInt::arg() const {
    if (contains_zero()) throw PrecisionExhausted("arg: rectangle may contain 0");
    // a rectangle meeting the closed negative real axis crosses the branch cut
    if (!re.is_positive() && im.contains_zero())
        throw PrecisionExhausted("arg: rectangle straddles the branch cut");
    // away from the cut and origin, atan2 attains its extremes at corners
    return atan2_box(im, re);
}

RInt eval_poly(const std::vector<mpq_class>& c, const RInt& x) {
    RInt r = RInt::exact(0L, x.prec());
    for (size_t i = c.size(); i-- > 0;) r = r * x + RInt::exact(c[i], x.prec());
    return r;
}

CInt eval_poly(const std::vector<mpq_class>& c, const CInt& x) {
    long prec = x.re.prec();
    CInt r(RInt::exact(0L, prec), RInt::exact(0L, prec));
    for (size_t i = c.size(); i-- > 0;) {
        r = r * x;
        r.re = r.re.add_q(c[i]);
    }
    return r;
}

} // namespace sunit
