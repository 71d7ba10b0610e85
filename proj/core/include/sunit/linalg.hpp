#ifndef SUNIT_LINALG_HPP
#define SUNIT_LINALG_HPP

#include <optional>
#include <vector>

#include "sunit/interval.hpp"

namespace sunit {

using QVec = std::vector<mpq_class>;
using QMat = std::vector<std::vector<mpq_class>>; // row major
using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<std::vector<mpz_class>>;

QMat q_identity(size_t n);
QMat q_mul(const QMat& a, const QMat& b);
QVec q_mul_vec(const QMat& a, const QVec& v);
mpq_class q_det(QMat a);
size_t q_rank(QMat a);
std::optional<QMat> q_inverse(const QMat& a);
// solve a x = b; nullopt if inconsistent or a singular (least solution via
// Gaussian elimination with full pivot on the square case)
std::optional<QVec> q_solve(QMat a, QVec b);
// basis of the right kernel of a (rows = vectors)
std::vector<QVec> q_kernel(QMat a);

ZMat z_identity(size_t n);
ZMat z_mul(const ZMat& a, const ZMat& b);

// Column-style Hermite normal form of an n x m integer matrix (columns are
// generators). Returns H (n x r, r = rank, pivot structure lower triangular
// by row) and optionally U with A*U = [H | 0], U unimodular m x m.
ZMat hnf_columns(const ZMat& a, ZMat* u = nullptr);

// basis for { v in Z^m : a v = 0 }, vectors as columns of the result
ZMat z_kernel(const ZMat& a);

// interval linear algebra: determinant enclosure and inverse enclosure by
// Gaussian elimination; inverse fails (nullopt) if a pivot enclosure hits 0
RInt ri_det(std::vector<std::vector<RInt>> a);
std::optional<std::vector<std::vector<RInt>>> ri_inverse(std::vector<std::vector<RInt>> a);

} // namespace sunit

#endif
