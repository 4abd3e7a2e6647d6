#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "exact.hpp"

namespace cotspaces {

// Dense matrix over Q. Rank is computed by fraction-free (Bareiss)
// elimination on a denominator-cleared integer copy and re-computed after
// a seeded row/column shuffle; the two must agree or the call throws.
// Kernel bases come from a deterministic reduced row echelon form and are
// verified against the matrix before being returned.
class RationalMatrix {
  public:
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::size_t rank() const {
        std::vector<std::vector<Integer>> m = cleared();
        std::size_t direct = bareiss_rank(m);

        std::vector<std::vector<Integer>> p = cleared();
        std::mt19937_64 rng(0x517cc1b727220a95ULL ^ (rows_ * 0x9e3779b9ULL + cols_));
        std::shuffle(p.begin(), p.end(), rng);
        std::vector<std::size_t> perm(cols_);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (auto& row : p) {
            std::vector<Integer> q(cols_);
            for (std::size_t j = 0; j < cols_; ++j) q[j] = row[perm[j]];
            row = std::move(q);
        }
        std::size_t shuffled = bareiss_rank(p);
        if (direct != shuffled)
            throw std::logic_error("rank: fraction-free elimination disagrees with permuted path");
        return direct;
    }

    // Basis of { c : M c = 0 }, one vector per free column of the RREF,
    // in column order. Every vector is checked against M exactly.
    std::vector<std::vector<Rational>> kernel_basis() const {
        auto [rref, pivot_of_col] = reduced_echelon();
        std::size_t rank_rref = 0;
        for (std::size_t j = 0; j < cols_; ++j)
            if (pivot_of_col[j] >= 0) ++rank_rref;
        if (rank_rref != rank())
            throw std::logic_error("kernel_basis: echelon rank disagrees with Bareiss rank");

        std::vector<std::vector<Rational>> basis;
        for (std::size_t f = 0; f < cols_; ++f) {
            if (pivot_of_col[f] >= 0) continue;
            std::vector<Rational> v(cols_);
            v[f] = 1;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (pivot_of_col[j] >= 0)
                    v[j] = -rref[static_cast<std::size_t>(pivot_of_col[j])][f];
            }
            for (std::size_t i = 0; i < rows_; ++i) {
                Rational acc(0);
                for (std::size_t j = 0; j < cols_; ++j) acc += at(i, j) * v[j];
                if (acc != 0) throw std::logic_error("kernel_basis: verification failed");
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<Rational> a_;

    // Row-wise denominator clearing; row scaling leaves rank and right
    // kernel untouched.
    std::vector<std::vector<Integer>> cleared() const {
        std::vector<std::vector<Integer>> m(rows_, std::vector<Integer>(cols_));
        for (std::size_t i = 0; i < rows_; ++i) {
            Integer l(1);
            for (std::size_t j = 0; j < cols_; ++j) {
                Integer d(denominator(at(i, j)));
                Integer g;
                mpz_gcd(g.backend().data(), l.backend().data(), d.backend().data());
                l = l / g * d;
            }
            for (std::size_t j = 0; j < cols_; ++j) {
                Rational v = at(i, j) * Rational(l);
                if (denominator(v) != 1) throw std::logic_error("cleared: residual denominator");
                m[i][j] = Integer(numerator(v));
            }
        }
        return m;
    }

    static std::size_t bareiss_rank(std::vector<std::vector<Integer>>& m) {
        if (m.empty()) return 0;
        const std::size_t rows = m.size(), cols = m[0].size();
        std::size_t r = 0;
        Integer prev(1);
        for (std::size_t col = 0; col < cols && r < rows; ++col) {
            std::size_t p = r;
            while (p < rows && m[p][col] == 0) ++p;
            if (p == rows) continue;
            std::swap(m[p], m[r]);
            const Integer piv = m[r][col];
            for (std::size_t i = r + 1; i < rows; ++i) {
                for (std::size_t j = col + 1; j < cols; ++j) {
                    Integer num = m[i][j] * piv - m[i][col] * m[r][j];
                    Integer q, rem;
                    mpz_tdiv_qr(q.backend().data(), rem.backend().data(), num.backend().data(),
                                prev.backend().data());
                    if (rem != 0) throw std::logic_error("bareiss: inexact division");
                    m[i][j] = std::move(q);
                }
                m[i][col] = 0;
            }
            prev = piv;
            ++r;
        }
        return r;
    }

    // Deterministic RREF over Q; returns the reduced rows and, per column,
    // the pivot row owning it (-1 for free columns).
    std::pair<std::vector<std::vector<Rational>>, std::vector<long>> reduced_echelon() const {
        std::vector<std::vector<Rational>> m(rows_, std::vector<Rational>(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m[i][j] = at(i, j);
        std::vector<long> pivot_of_col(cols_, -1);
        std::size_t r = 0;
        for (std::size_t col = 0; col < cols_ && r < rows_; ++col) {
            std::size_t p = r;
            while (p < rows_ && m[p][col] == 0) ++p;
            if (p == rows_) continue;
            std::swap(m[p], m[r]);
            Rational inv = m[r][col];
            for (std::size_t j = col; j < cols_; ++j) m[r][j] /= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || m[i][col] == 0) continue;
                Rational f = m[i][col];
                for (std::size_t j = col; j < cols_; ++j) m[i][j] -= f * m[r][j];
            }
            pivot_of_col[col] = static_cast<long>(r);
            ++r;
        }
        return {std::move(m), std::move(pivot_of_col)};
    }
};

}  // namespace cotspaces
